#pragma once

// Brute-force check of the maximal entropy-to-Lyapunov ratio on porous
// cubes: the raw quotient over the (2^d - 1)k + 1 porous-split children, its
// level-averaged reduction, a grid search with local polish, and the
// fixed-point candidate q_i = A 2^{-M i}, p = eps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "porodim/error.hpp"
#include "porodim/numeric.hpp"
#include "porodim/parallel.hpp"

namespace porodim {

inline constexpr double kOracleSumTolerance = 1e-9;

/// Offspring masses of a porous split in split order: per level j = 1..k the
/// 2^d - 1 non-hole cells, the hole last.
struct RawVector {
  unsigned d = 1;
  unsigned k = 1;
  std::vector<double> p;

  [[nodiscard]] std::size_t size() const noexcept { return (arity() - 1) * k + 1; }
  [[nodiscard]] std::size_t arity() const noexcept { return std::size_t{1} << d; }

  /// Relative side lengths of the cells.
  [[nodiscard]] std::vector<double> alphas() const {
    std::vector<double> a;
    a.reserve(size());
    for (unsigned j = 1; j <= k; ++j) {
      for (std::size_t c = 0; c + 1 < arity(); ++c) a.push_back(std::ldexp(1.0, -static_cast<int>(j)));
    }
    a.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    return a;
  }
};

inline void validate(const RawVector& v) {
  if (v.d == 0 || v.d > 6) throw ParameterError("d must be in 1..6");
  if (v.k == 0) throw ParameterError("k must be >= 1");
  if (v.p.size() != v.size()) {
    throw ParameterError("raw vector needs (2^d - 1)k + 1 = " + std::to_string(v.size()) + " entries");
  }
  double total = 0.0;
  for (double x : v.p) {
    if (!(x >= 0.0)) throw ParameterError("raw vector entries must be >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > kOracleSumTolerance) throw ParameterError("raw vector must sum to 1");
}

/// sum p_i log(1/p_i) / sum p_i log(1/alpha_i).
inline double raw_objective(const RawVector& v) {
  validate(v);
  const auto a = v.alphas();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < v.p.size(); ++i) {
    num += psi(v.p[i]);
    den += v.p[i] * -std::log(a[i]);
  }
  if (!(den > 0.0)) throw ParameterError("raw objective has a zero denominator");
  return num / den;
}

/// Replaces the non-hole masses of each level by their average.
inline RawVector reduce_within_levels(const RawVector& v) {
  validate(v);
  RawVector out = v;
  const std::size_t L = v.arity() - 1;
  for (unsigned j = 0; j < v.k; ++j) {
    const auto first = v.p.begin() + static_cast<std::ptrdiff_t>(j * L);
    if (std::all_of(first, first + static_cast<std::ptrdiff_t>(L), [&](double x) { return x == *first; })) continue;
    double avg = 0.0;
    for (std::size_t c = 0; c < L; ++c) avg += v.p[j * L + c];
    avg /= static_cast<double>(L);
    for (std::size_t c = 0; c < L; ++c) out.p[j * L + c] = avg;
  }
  return out;
}

/// Per-cell level masses q_1..q_k and hole mass p with L sum q + p = 1.
struct ReducedPoint {
  std::vector<double> q;
  double p = 0.0;
};

/// (L sum psi(q_i) + psi(p)) / (L sum q_i i log 2 + p k log 2).
inline double reduced_objective(unsigned d, const ReducedPoint& x) {
  const double L = std::ldexp(1.0, static_cast<int>(d)) - 1.0;
  const double k = static_cast<double>(x.q.size());
  double num = psi(x.p);
  double den = x.p * k;
  for (std::size_t i = 0; i < x.q.size(); ++i) {
    num += L * psi(x.q[i]);
    den += L * x.q[i] * static_cast<double>(i + 1);
  }
  return num / (den * kLn2);
}

/// Expands a reduced point to the full raw vector.
inline RawVector expand(unsigned d, const ReducedPoint& x) {
  RawVector v{d, static_cast<unsigned>(x.q.size()), {}};
  for (double q : x.q) v.p.insert(v.p.end(), v.arity() - 1, q);
  v.p.push_back(x.p);
  return v;
}

struct OracleResult {
  double value = 0.0;
  ReducedPoint argmax;
  std::size_t evaluations = 0;
};

namespace detail {

/// Point with hole mass p and level shares w (sum w = 1).
inline ReducedPoint reduced_from_shares(unsigned d, double p, const std::vector<double>& w) {
  const double L = std::ldexp(1.0, static_cast<int>(d)) - 1.0;
  ReducedPoint x{std::vector<double>(w.size()), p};
  for (std::size_t i = 0; i < w.size(); ++i) x.q[i] = (1.0 - p) * w[i] / L;
  return x;
}

inline std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  double acc = 1.0;
  for (std::size_t i = 1; i <= r; ++i) acc = acc * static_cast<double>(n - r + i) / static_cast<double>(i);
  return acc > 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(std::llround(acc));
}

/// Coordinate-wise golden-section ascent on the shares and the hole mass.
inline double polish(unsigned d, double eps, double& p, std::vector<double>& w, double tol) {
  auto value = [&] { return reduced_objective(d, reduced_from_shares(d, p, w)); };
  double best = value();
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double before = best;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const double lo = -w[i];
      const double hi = w[i + 1];
      const double wi = w[i];
      const double wj = w[i + 1];
      auto f = [&](double delta) {
        w[i] = wi + delta;
        w[i + 1] = wj - delta;
        return value();
      };
      const double delta = golden_section_max(f, lo, hi, tol);
      const double cand = f(delta);
      if (cand > best) {
        best = cand;
      } else {
        w[i] = wi;
        w[i + 1] = wj;
      }
    }
    if (eps > 0.0) {
      const double p0 = p;
      auto f = [&](double t) {
        p = t;
        return value();
      };
      const double t = golden_section_max(f, 0.0, eps, tol);
      const double cand = f(t);
      if (cand > best) {
        best = cand;
      } else {
        p = p0;
      }
    }
    if (best - before <= 1e-15) break;
  }
  return best;
}

}  // namespace detail

inline constexpr std::size_t kOracleMaxEvaluations = 200'000'000;

/// Maximizes the reduced objective over p in {eps j / grid} and level shares
/// on the simplex grid with denominator `grid`, then polishes the best point.
/// Ties keep the first point in enumeration order.
inline OracleResult maximize_bruteforce(unsigned d, unsigned k, double eps, unsigned grid, unsigned jobs = 1) {
  if (d == 0 || d > 2) throw ParameterError("brute force supports d in 1..2");
  if (k == 0 || k > 3) throw ParameterError("brute force supports k in 1..3");
  if (grid == 0) throw ParameterError("grid must be positive");
  if (!(eps >= 0.0 && eps < 1.0)) throw ParameterError("eps must lie in [0,1)");
  const std::size_t p_points = eps > 0.0 ? grid + 1 : 1;
  const std::size_t w_points = detail::binomial(grid + k - 1, k - 1);
  if (w_points == std::numeric_limits<std::size_t>::max() ||
      static_cast<double>(p_points) * static_cast<double>(w_points) > static_cast<double>(kOracleMaxEvaluations)) {
    throw ParameterError("grid too fine: more than " + std::to_string(kOracleMaxEvaluations) + " evaluations");
  }

  struct Best {
    double value = -1.0;
    std::vector<unsigned> shares;
  };
  std::vector<Best> slices(p_points);
  parallel_for(p_points, jobs, [&](std::size_t j) {
    const double p = eps > 0.0 ? eps * static_cast<double>(j) / grid : 0.0;
    Best& best = slices[j];
    std::vector<unsigned> c(k, 0);
    c[0] = grid;
    std::vector<double> w(k);
    // Compositions of `grid` into k parts, lexicographically decreasing in c[0].
    while (true) {
      for (unsigned i = 0; i < k; ++i) w[i] = static_cast<double>(c[i]) / grid;
      const double v = reduced_objective(d, detail::reduced_from_shares(d, p, w));
      if (v > best.value) {
        best.value = v;
        best.shares = c;
      }
      // Next composition: move one unit from the last nonzero part before the tail.
      int i = static_cast<int>(k) - 2;
      while (i >= 0 && c[i] == 0) --i;
      if (i < 0) break;
      --c[i];
      const unsigned tail = c[k - 1];
      c[k - 1] = 0;
      c[i + 1] = tail + 1;
    }
  });

  std::size_t best_j = 0;
  for (std::size_t j = 1; j < p_points; ++j) {
    if (slices[j].value > slices[best_j].value) best_j = j;
  }
  OracleResult out;
  out.evaluations = p_points * w_points;
  double p = eps > 0.0 ? eps * static_cast<double>(best_j) / grid : 0.0;
  std::vector<double> w(k);
  for (unsigned i = 0; i < k; ++i) w[i] = static_cast<double>(slices[best_j].shares[i]) / grid;
  out.value = std::max(slices[best_j].value, detail::polish(d, eps, p, w, 1e-10));
  out.argmax = detail::reduced_from_shares(d, p, w);
  return out;
}

struct CandidateResult {
  ReducedPoint point;
  double value = 0.0;
  std::size_t iterations = 0;
};

inline constexpr double kFixedPointTolerance = 1e-12;
inline constexpr std::size_t kFixedPointMaxIterations = 10'000;

/// Iterates M -> g_eps(A 2^{-M}, ..., A 2^{-kM}) with A fixed by
/// L sum q_i = 1 - eps. For fixed p the Gibbs point q_i proportional to
/// 2^{-M i} maximizes H - M lambda, so the values increase monotonically to
/// the maximum.
inline CandidateResult fixed_point_candidate(unsigned d, unsigned k, double eps) {
  if (d == 0 || d > 16) throw ParameterError("d must be in 1..16");
  if (k == 0 || k > 64) throw ParameterError("k must be in 1..64");
  const double top = std::ldexp(1.0, -static_cast<int>(k));
  if (!(eps >= 0.0 && eps <= top)) throw ParameterError("eps must lie in [0, 2^-k]");
  const double L = std::ldexp(1.0, static_cast<int>(d)) - 1.0;
  auto point_for = [&](double M) {
    ReducedPoint x{std::vector<double>(k), eps};
    const double y = std::exp2(-M);
    double term = 1.0;
    double sum = 0.0;
    for (unsigned i = 0; i < k; ++i) {
      term *= y;
      x.q[i] = term;
      sum += term;
    }
    const double A = (1.0 - eps) / (L * sum);
    for (double& q : x.q) q *= A;
    return x;
  };
  CandidateResult out;
  double M = 0.0;
  for (out.iterations = 1; out.iterations <= kFixedPointMaxIterations; ++out.iterations) {
    out.point = point_for(M);
    const double next = reduced_objective(d, out.point);
    if (std::abs(next - M) <= kFixedPointTolerance) {
      out.point = point_for(next);
      out.value = reduced_objective(d, out.point);
      return out;
    }
    M = next;
  }
  throw ConvergenceError("fixed-point iteration did not converge for d=" + std::to_string(d) +
                         " k=" + std::to_string(k) + " eps=" + std::to_string(eps));
}

/// Minimum entropy (nats) over probability vectors on 2^d entries, all at
/// least eps, with entries on the grid of spacing `step`. Only entries that
/// are grid multiples take part, so eps should be one too.
inline double hmin_grid_minimum(unsigned d, double eps, double step) {
  if (d == 0 || d > 2) throw ParameterError("grid minimization supports d in 1..2");
  if (!(step > 0.0 && step <= 0.5)) throw ParameterError("step must lie in (0, 1/2]");
  const auto n = static_cast<std::int64_t>(std::llround(1.0 / step));
  if (std::abs(static_cast<double>(n) * step - 1.0) > 1e-12) throw ParameterError("1/step must be an integer");
  const auto lo = static_cast<std::int64_t>(std::ceil(eps * static_cast<double>(n) - 1e-9));
  std::vector<double> table(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) table[static_cast<std::size_t>(i)] = psi(static_cast<double>(i) / n);
  auto h = [&](std::int64_t i) { return table[static_cast<std::size_t>(i)]; };
  double best = std::numeric_limits<double>::infinity();
  if (d == 1) {
    for (std::int64_t a = lo; a <= n - lo; ++a) best = std::min(best, h(a) + h(n - a));
  } else {
    for (std::int64_t a = lo; a <= n - 3 * lo; ++a) {
      for (std::int64_t b = lo; a + b <= n - 2 * lo; ++b) {
        const double hab = h(a) + h(b);
        for (std::int64_t c = lo; a + b + c <= n - lo; ++c) best = std::min(best, hab + h(c) + h(n - a - b - c));
      }
    }
  }
  if (!std::isfinite(best)) throw ParameterError("no grid vector satisfies the lower bound");
  return best;
}

}  // namespace porodim
