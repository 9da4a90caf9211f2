// Acceptance suite: one PASS/FAIL line per criterion, with wall time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using namespace porodim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const double kBernoulliDim = 0.811278124459132864;  // H(1/4)/log 2
const double kY = 0.263762615825973334;             // root of 3(y + y^2) = 1

Outcome boundary_identity() {
  double worst = 0.0;
  for (unsigned d = 1; d <= 3; ++d) {
    for (unsigned k = 1; k <= 3; ++k) worst = std::max(worst, std::abs(solve_s(d, k, eps_max(d, k)) - d));
  }
  return {worst < 1e-9, fmt("max |s - d| = %.3g", worst)};
}

Outcome binary_entropy_match() {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double e = 0.5 * i / 100.0;
    worst = std::max(worst, std::abs(solve_s(1, 1, e) - binary_entropy_bits(e)));
  }
  return {worst < 1e-9, fmt("max error %.3g over 101 points", worst)};
}

Outcome closed_forms() {
  const double a = std::abs(t_dk(2, 1, 0.0) - (2.0 - std::log2(3.0)));
  const double b = std::abs(t_dk(2, 2, 0.0) - (2.0 - std::log2(1.0 / kY)));
  return {a < 1e-9 && b < 1e-6, fmt("t(2,1,0) error %.3g, t(2,2,0) error %.3g", a, b)};
}

Outcome small_eps_floor() {
  double margin = INFINITY;
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned k = 1; k <= 6; ++k) margin = std::min(margin, t_dk(d, k, 0.0) / t_small_eps_floor(d, k));
  }
  return {margin > 1.0, fmt("min t / floor = %.4f", margin)};
}

Outcome monotonicity() {
  double margin = INFINITY;
  for (auto [d, k] : {std::pair{1u, 1u}, {1u, 2u}, {2u, 1u}, {2u, 2u}}) {
    const double top = eps_max(d, k);
    double prev = solve_s(d, k, 0.0);
    for (int i = 1; i < 100; ++i) {
      const double s = solve_s(d, k, top * i / 99.0);
      margin = std::min(margin, s - prev);
      prev = s;
    }
  }
  return {margin > 1e-10, fmt("min increment %.3g", margin)};
}

Outcome oracle_agreement() {
  cli::OracleOptions o;
  double brute_gap = 0.0;
  double cand_gap = 0.0;
  double p_gap = 0.0;
  double decay_gap = 0.0;
  for (const auto& r : cli::oracle_battery(o)) {
    brute_gap = std::max(brute_gap, std::abs(r.brute.value - r.solver));
    cand_gap = std::max(cand_gap, std::abs(r.candidate.value - r.solver));
    if (r.eps < std::ldexp(1.0, -static_cast<int>(r.k))) {
      p_gap = std::max(p_gap, std::abs(r.brute.argmax.p - r.eps) - r.eps / o.grid);
    }
    const auto& q = r.brute.argmax.q;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
      decay_gap = std::max(decay_gap, std::abs(q[i + 1] / q[i] - std::exp2(-r.brute.value)));
    }
  }
  const bool pass = brute_gap < 2e-3 && cand_gap < 1e-6 && p_gap <= 1e-12 && decay_gap < 5e-2;
  return {pass, fmt("brute gap %.3g, candidate gap %.3g", brute_gap, cand_gap) +
                    fmt(", p excess %.3g, decay gap %.3g", p_gap, decay_gap)};
}

Outcome drop_table() {
  std::ostringstream out;
  cli::run_solve({}, out);
  std::vector<std::vector<double>> t(2);
  std::stringstream ss(out.str());
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
    t.at(static_cast<std::size_t>(cells[1]) - 1).push_back(cells[5]);
  }
  bool ok = t[0].size() == 101 && t[1].size() == 101;
  for (const auto& curve : t) {
    for (std::size_t i = 1; ok && i < curve.size(); ++i) ok = curve[i] < curve[i - 1];
  }
  ok = ok && std::abs(t[0].front() - (2.0 - std::log2(3.0))) < 1e-9 && std::abs(t[1].front() - (2.0 - std::log2(1.0 / kY))) < 1e-6 &&
       std::abs(t[0].back()) < 1e-9 && std::abs(t[1].back()) < 1e-9;
  return {ok, fmt("%g + %g rows, endpoints and strict decrease checked", double(t[0].size()), double(t[1].size()))};
}

Outcome estimator_consistency() {
  const unsigned depth = 10000;
  const TreeMeasure tree(bernoulli_measure({0.25, 0.75}), UniformDyadic{}, depth);
  const auto e = estimate_packing_dim(tree, depth, 100, 0);
  int good = 0;
  for (const auto& p : e.paths) good += std::abs(p.resH) < 0.01;
  const double err = std::abs(e.value - kBernoulliDim);
  return {err < 0.02 && good >= 95, fmt("estimate error %.4f, %g/100 paths with |res_H| < 0.01", err, good)};
}

struct CascadeSpec {
  GeneratorSpec spec;
  unsigned k;
  double eps;
};

Outcome bound_verification() {
  const std::vector<CascadeSpec> battery{
      {{1, BernoulliGenerator{{0.25, 0.75}}, 1}, 1, 0.3},
      {{1, BernoulliGenerator{{0.4, 0.6}}, 2}, 2, 0.1},
      {{1, MixtureGenerator{{{{0.5, 0.5}, 0.5}, {{0.2, 0.8}, 0.5}}}, 3}, 1, 0.2},
      {{1, DirichletGenerator{{1.0, 1.0}}, 4}, 1, 0.1},
      {{1, DirichletGenerator{{0.3, 0.3}}, 5}, 2, 0.05},
      {{1, UniformGenerator{}, 6}, 1, 0.2},
      {{2, UniformGenerator{}, 7}, 1, 0.1},
      {{2, DirichletGenerator{{0.5, 0.5, 0.5, 0.5}}, 8}, 1, 0.1},
      {{2, DirichletGenerator{{1.0, 1.0, 1.0, 1.0}}, 9}, 2, 0.02},
      {{2, BernoulliGenerator{{0.1, 0.2, 0.3, 0.4}}, 10}, 1, 0.15},
  };
  int passed = 0;
  double worst = -INFINITY;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    cli::SimulateOptions o;
    o.config.d = battery[i].spec.d;
    o.config.measure = make_measure(battery[i].spec);
    o.k = battery[i].k;
    o.eps = battery[i].eps;
    o.depth = 2000;
    o.paths = 20;
    o.seed = 100 + i;
    const auto s = cli::simulate(o);
    passed += s.pass;
    worst = std::max(worst, s.dim_estimate - s.bound);
  }
  return {passed == 10, fmt("%g/10 specs within bound, max(dim - bound) = %.4f", passed, worst)};
}

Outcome translation() {
  TranslationParams p;
  p.trials = 100;
  p.depth = 12;
  p.seed = 0;
  const auto rep = translation_experiment(middle_half_cantor(), p);
  return {rep.mean >= 0.4 && rep.min >= 0.25, fmt("mean fraction %.4f, min %.4f", rep.mean, rep.min)};
}

Outcome converse() {
  double grid_gap = 0.0;
  for (double eps : {0.0, 0.1, 0.25, 0.37, 0.5}) {
    grid_gap = std::max(grid_gap, std::abs(hmin_grid_minimum(1, eps, 1e-3) - hmin_and_converse(1, eps, 0.0).hmin));
  }
  for (double eps : {0.0, 0.05, 0.125, 0.2, 0.25}) {
    grid_gap = std::max(grid_gap, std::abs(hmin_grid_minimum(2, eps, 1e-3) - hmin_and_converse(2, eps, 0.0).hmin));
  }
  bool exact = true;
  for (unsigned d = 1; d <= 4; ++d) {
    exact = exact && hmin_and_converse(d, std::ldexp(1.0, -static_cast<int>(d)), 0.0).hmin == d * kLn2;
  }
  double final_gap = 0.0;
  for (unsigned d = 1; d <= 2; ++d) {
    const double top = std::ldexp(1.0, -static_cast<int>(d));
    double gap = INFINITY;
    for (int j = 1; j <= 30; ++j) {
      const double h = std::ldexp(1.0, -j);
      gap = d - hmin_and_converse(d, top * (1.0 - h), h).lower_bound;
    }
    final_gap = std::max(final_gap, gap);
  }
  return {grid_gap < 1e-6 && exact && final_gap < 1e-3,
          fmt("grid gap %.3g, final refining gap %.3g", grid_gap, final_gap) + (exact ? ", exact at 2^-d" : ", not exact")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "boundary identity s(d,k,2^-kd) = d", 1, boundary_identity},
      {2, "binary entropy closed form for d=k=1", 1, binary_entropy_match},
      {3, "closed forms at eps=0", 1, closed_forms},
      {4, "small-eps lower bound on t", 1, small_eps_floor},
      {5, "strict monotonicity of s", 60, monotonicity},
      {6, "brute-force oracle agreement", 120, oracle_agreement},
      {7, "dimension-drop table", 1, drop_table},
      {8, "estimator consistency on Bernoulli(1/4,3/4)", 30, estimator_consistency},
      {9, "dimension bound on cascade battery", 300, bound_verification},
      {10, "translation Monte Carlo on middle-half Cantor", 60, translation},
      {11, "converse entropy bound", 60, converse},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_seconds;
    failures += !pass;
    std::printf("%s criterion %d: %s (%s; %.2f s, limit %g s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
