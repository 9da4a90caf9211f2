#pragma once

// Command implementations behind the porodim CLI. Each command writes one
// CSV document to a stream and reports whether its pass criterion held.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "porodim/bounds.hpp"
#include "porodim/csv.hpp"
#include "porodim/dimension.hpp"
#include "porodim/error.hpp"
#include "porodim/measure.hpp"
#include "porodim/oracle.hpp"
#include "porodim/porosity.hpp"

namespace porodim::cli {

// ---------------------------------------------------------------------------
// Generator configuration

struct MeasureConfig {
  std::string type = "uniform";
  unsigned d = 1;
  std::uint64_t seed = 0;
  std::optional<unsigned> depth;
  MeasurePtr measure;
  std::string source;  // file path, or "builtin"
};

namespace detail {

inline std::vector<double> read_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ParameterError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParameterError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parses {"d", "generator": {"type", "weights" | "mixture" | "concentration"},
/// "seed", "depth"}.
inline MeasureConfig parse_measure_config(const std::string& text, const std::string& source = "inline") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("malformed config " + source + ": " + e.what());
  }
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  MeasureConfig c;
  c.source = source;
  try {
    if (!j.contains("d")) throw ParameterError("config is missing \"d\"");
    const auto d = j.at("d").get<long long>();
    if (d < 1 || d > 6) throw ParameterError("config d must be in 1..6");
    c.d = static_cast<unsigned>(d);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("depth")) {
      const auto depth = j.at("depth").get<long long>();
      if (depth < 1) throw ParameterError("config depth must be positive");
      c.depth = static_cast<unsigned>(depth);
    }
    const auto& g = j.contains("generator") ? j.at("generator") : nlohmann::json::object({{"type", "uniform"}});
    if (!g.is_object() || !g.contains("type")) throw ParameterError("generator needs a \"type\"");
    c.type = g.at("type").get<std::string>();

    GeneratorSpec spec{c.d, UniformGenerator{}, c.seed};
    if (c.type == "uniform") {
    } else if (c.type == "bernoulli") {
      spec.generator = BernoulliGenerator{detail::read_vector(g.at("weights"), "weights")};
    } else if (c.type == "mixture") {
      MixtureGenerator m;
      if (!g.contains("mixture") || !g.at("mixture").is_array()) {
        throw ParameterError("mixture generator needs a \"mixture\" array");
      }
      for (const auto& comp : g.at("mixture")) {
        m.components.push_back(
            {detail::read_vector(comp.at("weights"), "mixture weights"), comp.at("probability").get<double>()});
      }
      spec.generator = std::move(m);
    } else if (c.type == "dirichlet") {
      spec.generator = DirichletGenerator{detail::read_vector(g.at("concentration"), "concentration")};
    } else if (c.type == "cantor") {
      if (c.d != 1) throw ParameterError("cantor generator requires d = 1");
      c.measure = middle_half_cantor();
      return c;
    } else {
      throw ParameterError("unknown generator type \"" + c.type +
                           "\" (expected uniform, bernoulli, mixture, dirichlet or cantor)");
    }
    c.measure = make_measure(spec);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("malformed config " + source + ": " + e.what());
  }
  return c;
}

inline MeasureConfig load_measure_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_measure_config(buf.str(), path);
}

inline MeasureConfig uniform_config(unsigned d) {
  MeasureConfig c;
  c.d = d;
  c.measure = uniform_measure(d);
  c.source = "builtin";
  return c;
}

inline MeasureConfig cantor_config() {
  MeasureConfig c;
  c.type = "cantor";
  c.measure = middle_half_cantor();
  c.source = "builtin";
  return c;
}

// ---------------------------------------------------------------------------
// Commands

struct SolveOptions {
  unsigned d = 2;
  std::vector<unsigned> ks{1, 2};
  unsigned points = 101;
};

/// Dimension-drop table: t_{d,k}(eps) against eps_scaled = eps 2^{kd} on [0,1].
inline bool run_solve(const SolveOptions& o, std::ostream& out) {
  if (o.points < 2) throw ParameterError("points must be >= 2");
  if (o.ks.empty()) throw ParameterError("at least one k is required");
  std::string ks;
  for (auto k : o.ks) ks += (ks.empty() ? "" : ";") + std::to_string(k);
  CsvWriter w(out, "solve", {{"d", std::to_string(o.d)}, {"k", ks}, {"points", std::to_string(o.points)}},
              {"d", "k", "eps", "eps_scaled", "s", "t"});
  for (unsigned k : o.ks) {
    for (unsigned i = 0; i < o.points; ++i) {
      const double scaled = static_cast<double>(i) / (o.points - 1);
      const double eps = scaled * eps_max(o.d, k);
      const double s = solve_s(o.d, k, eps);
      w.row() << o.d << k << eps << scaled << s << static_cast<double>(o.d) - s;
    }
  }
  return true;
}

struct SimulateOptions {
  MeasureConfig config;
  unsigned k = 1;
  double eps = 0.0;
  unsigned depth = 1000;
  std::size_t paths = 20;
  std::uint64_t seed = 0;
  double slack = 0.05;
  unsigned jobs = 1;
};

struct SimulateSummary {
  double dim_estimate = 0.0;
  double dim_mean = 0.0;
  double dim_p95 = 0.0;
  double eta_hat = 0.0;
  double t = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline TreeMeasure simulate_tree(const SimulateOptions& o) {
  if (!o.config.measure) throw ParameterError("simulate needs a measure");
  if (o.k == 0) throw ParameterError("k must be >= 1");
  return TreeMeasure(o.config.measure, PorousSplit{o.k, o.eps, HoleSelection::MinMassLexicographic}, o.depth);
}

/// dim_estimate is the largest terminal D_n over the paths, eta_hat the
/// smallest terminal eta_n, and the bound d - eta_hat t_{d,k}(eps).
inline SimulateSummary simulate(const SimulateOptions& o) {
  const unsigned d = o.config.d;
  const double t = t_dk(d, o.k, o.eps);
  const auto tree = simulate_tree(o);
  const auto est = estimate_packing_dim(tree, o.depth, o.paths, o.seed, o.jobs);
  SimulateSummary s;
  s.dim_estimate = est.value;
  s.dim_mean = est.mean;
  s.dim_p95 = est.p95;
  s.eta_hat = 1.0;
  for (const auto& p : est.paths) s.eta_hat = std::min(s.eta_hat, p.eta);
  s.t = t;
  s.bound = static_cast<double>(d) - s.eta_hat * t;
  s.pass = s.dim_estimate <= s.bound + o.slack;
  return s;
}

inline CsvWriter::Metadata simulate_metadata(const SimulateOptions& o) {
  return {{"config", o.config.source},
          {"generator", o.config.type},
          {"d", std::to_string(o.config.d)},
          {"measure_seed", std::to_string(o.config.seed)},
          {"k", std::to_string(o.k)},
          {"eps", format_number(o.eps)},
          {"depth", std::to_string(o.depth)},
          {"paths", std::to_string(o.paths)},
          {"seed", std::to_string(o.seed)},
          {"slack", format_number(o.slack)}};
}

inline bool run_simulate(const SimulateOptions& o, std::ostream& out, std::ostream* trajectory_out = nullptr) {
  const auto s = simulate(o);
  CsvWriter w(out, "simulate", simulate_metadata(o),
              {"d", "k", "eps", "depth", "paths", "dim_estimate", "dim_mean", "dim_p95", "eta_hat", "t", "bound",
               "slack", "pass"});
  w.row() << o.config.d << o.k << o.eps << o.depth << o.paths << s.dim_estimate << s.dim_mean << s.dim_p95
          << s.eta_hat << s.t << s.bound << o.slack << s.pass;
  if (trajectory_out) {
    CsvWriter tw(*trajectory_out, "simulate-trajectory", simulate_metadata(o),
                 {"path", "n", "I", "L", "H", "lambda", "Mbar", "Dn", "resH", "resL", "porous"});
    const auto tree = simulate_tree(o);
    for (std::size_t i = 0; i < o.paths; ++i) {
      const auto traj = path_trajectory(tree, sample_path(tree, path_seed(o.seed, i), o.depth));
      for (const auto& st : traj.steps) {
        tw.row() << i << st.n << st.I << st.L << st.H << st.lambda << st.Mbar << st.Dn << st.resH << st.resL
                 << st.porous;
      }
    }
  }
  return s.pass;
}

struct OracleOptions {
  std::vector<std::pair<unsigned, unsigned>> dk{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  std::optional<double> eps;  // default: {0, 2^-kd / 2, 2^-kd}
  unsigned grid = 200;
  unsigned jobs = 1;
};

struct OracleRow {
  unsigned d = 1;
  unsigned k = 1;
  double eps = 0.0;
  OracleResult brute;
  CandidateResult candidate;
  double solver = 0.0;
};

inline std::string format_argmax(const ReducedPoint& x) {
  std::string s = "q=";
  for (std::size_t i = 0; i < x.q.size(); ++i) s += (i ? "|" : "") + format_number(x.q[i]);
  return s + ";p=" + format_number(x.p);
}

inline std::vector<OracleRow> oracle_battery(const OracleOptions& o) {
  std::vector<OracleRow> rows;
  for (auto [d, k] : o.dk) {
    const double top = eps_max(d, k);
    const std::vector<double> eps = o.eps ? std::vector<double>{*o.eps} : std::vector<double>{0.0, top / 2, top};
    for (double e : eps) {
      OracleRow r{d, k, e, maximize_bruteforce(d, k, e, o.grid, o.jobs), fixed_point_candidate(d, k, e),
                  solve_s(d, k, e)};
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

/// Passes when every brute-force value is within 2e-3 and every candidate
/// within 1e-6 of the solver.
inline bool run_oracle(const OracleOptions& o, std::ostream& out) {
  std::string dk;
  for (auto [d, k] : o.dk) dk += (dk.empty() ? "" : ";") + std::to_string(d) + "/" + std::to_string(k);
  CsvWriter w(out, "oracle",
              {{"dk", dk}, {"eps", o.eps ? format_number(*o.eps) : "battery"}, {"grid", std::to_string(o.grid)}},
              {"d", "k", "eps", "value_bruteforce", "value_candidate", "value_solver", "gap", "argmax"});
  bool pass = true;
  for (const auto& r : oracle_battery(o)) {
    const double gap = std::abs(r.brute.value - r.solver);
    pass = pass && gap < 2e-3 && std::abs(r.candidate.value - r.solver) < 1e-6;
    w.row() << r.d << r.k << r.eps << r.brute.value << r.candidate.value << r.solver << gap
            << format_argmax(r.brute.argmax);
  }
  return pass;
}

struct TranslateOptions {
  MeasureConfig config = cantor_config();
  TranslationParams params;
};

inline bool run_translate(const TranslateOptions& o, std::ostream& out) {
  const auto rep = translation_experiment(o.config.measure, o.params);
  const auto& p = o.params;
  CsvWriter w(out, "translate",
              {{"config", o.config.source},
               {"generator", o.config.type},
               {"d", std::to_string(o.config.d)},
               {"measure_seed", std::to_string(o.config.seed)},
               {"r", format_number(rep.r)},
               {"alpha", format_number(p.alpha)},
               {"eps", format_number(p.eps)},
               {"trials", std::to_string(p.trials)},
               {"depth", std::to_string(p.depth)},
               {"seed", std::to_string(p.seed)},
               {"eta", format_number(p.eta_target)},
               {"target", format_number(rep.target)},
               {"mean_fraction", format_number(rep.mean)},
               {"min_fraction", format_number(rep.min)},
               {"pass", rep.pass ? "true" : "false"}},
              {"trial", "t", "fraction", "k", "eps", "depth"});
  for (std::size_t i = 0; i < rep.trials.size(); ++i) {
    std::string t;
    for (std::size_t j = 0; j < rep.trials[i].t.size(); ++j) t += (j ? ";" : "") + format_number(rep.trials[i].t[j]);
    w.row() << i << t << rep.trials[i].fraction << rep.k << p.eps << p.depth;
  }
  return rep.pass;
}

struct HminOptions {
  unsigned d = 1;
  std::optional<double> eps;  // default: 11 points on [0, 2^-d]
  double eta = 0.0;
  unsigned points = 11;
};

inline bool run_hmin(const HminOptions& o, std::ostream& out) {
  if (o.points < 2) throw ParameterError("points must be >= 2");
  CsvWriter w(out, "hmin",
              {{"d", std::to_string(o.d)}, {"eta", format_number(o.eta)}, {"eps", o.eps ? format_number(*o.eps) : "grid"},
               {"points", std::to_string(o.points)}},
              {"eps", "hmin", "lower_bound"});
  std::vector<double> eps;
  if (o.eps) {
    eps.push_back(*o.eps);
  } else {
    const double top = std::ldexp(1.0, -static_cast<int>(o.d));
    for (unsigned i = 0; i < o.points; ++i) eps.push_back(top * i / (o.points - 1));
  }
  for (double e : eps) {
    const auto b = hmin_and_converse(o.d, e, o.eta);
    w.row() << e << b.hmin << b.lower_bound;
  }
  return true;
}

}  // namespace porodim::cli
