#pragma once

// Dyadic porosity: eps-holes among the depth-k descendants of a cube, the
// por_2 depth, porous-scale statistics along a point, a one-sided Euclidean
// porosity estimate, and the random-translation transfer experiment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "porodim/dyadic.hpp"
#include "porodim/error.hpp"
#include "porodim/measure.hpp"
#include "porodim/parallel.hpp"
#include "porodim/rng.hpp"

namespace porodim {

/// Default search cap for por_2; deeper holes are reported as "none".
inline constexpr unsigned kPor2Cap = 8;

struct PorosityParams {
  unsigned k = 1;
  double eps = 0.0;
  double alpha = 0.25;  // only used by the Euclidean estimator

  /// eps above 2^-kd makes every Lebesgue-like cube porous; allowed but
  /// flagged.
  [[nodiscard]] bool eps_exceeds_dyadic_range(unsigned d) const noexcept {
    return eps > std::ldexp(1.0, -static_cast<int>(k * d));
  }
};

inline void validate(const PorosityParams& p) {
  if (p.k == 0) throw ParameterError("k must be >= 1");
  if (!(p.eps >= 0.0 && p.eps < 1.0)) throw ParameterError("eps must lie in [0,1)");
  if (!(p.alpha > 0.0 && p.alpha <= 0.5)) throw ParameterError("alpha must lie in (0,1/2]");
}

struct PorousVerdict {
  bool porous = false;
  std::vector<Digit> hole;  // digits below Q of the selected hole
  double hole_ratio = 1.0;  // mu(R)/mu(Q) of the lightest depth-k cell
  std::optional<CubeAddress> hole_address;
};

/// Q is porous when some R in D_k(Q) has mu(R) <= eps mu(Q). The hole is the
/// lightest such R, ties to the lexicographically smallest address.
inline PorousVerdict classify_porous(const DyadicMeasure& m, const Node& q, unsigned k, double eps) {
  const Descendant lightest = lightest_descendant(m, q, k);
  PorousVerdict v;
  v.hole_ratio = lightest.ratio;
  v.porous = lightest.ratio <= eps;
  if (v.porous) {
    v.hole = lightest.digits;
    if (q.cube && q.cube->level + k <= m.max_address_depth()) v.hole_address = descend(*q.cube, v.hole);
  }
  return v;
}

inline PorousVerdict classify_porous(const TreeMeasure& tree, const Node& q, unsigned k, double eps) {
  if (q.level + k > tree.depth() * tree.max_jump()) {
    throw DepthError("classification needs " + std::to_string(k) + " realized levels below level " +
                     std::to_string(q.level));
  }
  return classify_porous(tree.measure(), q, k, eps);
}

/// Least k <= cap with min_{R in D_k(Q)} mu(R)/mu(Q) <= eps; nullopt when no
/// such k exists up to the cap.
inline std::optional<unsigned> por2_depth(const DyadicMeasure& m, const Node& q, double eps, unsigned cap = kPor2Cap) {
  std::vector<Descendant> frontier{Descendant{{}, 1.0, q}};
  for (unsigned j = 1; j <= cap; ++j) {
    expand(m, frontier);
    double lightest = frontier.front().ratio;
    for (const auto& c : frontier) lightest = std::min(lightest, c.ratio);
    if (lightest <= eps) return j;
  }
  return std::nullopt;
}

inline std::optional<unsigned> por2_depth(const DyadicMeasure& m, const Lineage& x, std::size_t n, double eps,
                                          unsigned cap = kPor2Cap) {
  if (n >= x.nodes.size()) throw DepthError("lineage does not reach the requested level");
  return por2_depth(m, x.nodes[n], eps, cap);
}

/// Porous-scale bookkeeping along one point.
///
/// The dyadic part covers every scale i in [n_max]: whether D_i(x) is porous,
/// its por_2 value (capped), and the running fraction of porous scales. The
/// R* part follows the same point through the tree built by porous splits:
/// after n steps, N[n] steps were non-porous, the point sits at dyadic level
/// M[n], and eta[n] = 1 - N[n]/M[n].
struct ScaleReport {
  unsigned k = 1;
  double eps = 0.0;

  std::vector<bool> dyadic_porous;
  std::vector<std::optional<unsigned>> por2;
  std::vector<double> dyadic_fraction;  // entry n-1 is the fraction over [n]

  std::vector<bool> step_porous;
  std::vector<unsigned> jump;  // dyadic levels descended at each step
  std::vector<std::size_t> N;  // size steps + 1
  std::vector<std::size_t> M;
  std::vector<double> eta;

  [[nodiscard]] std::size_t steps() const noexcept { return step_porous.size(); }
  [[nodiscard]] std::size_t porous_steps(std::size_t n) const noexcept { return n - N[n]; }
};

inline ScaleReport porous_fraction_trajectory(const DyadicMeasure& m, const Lineage& x, unsigned k, double eps,
                                              std::size_t n_max, unsigned por2_cap = 0) {
  if (k == 0) throw ParameterError("k must be >= 1");
  if (n_max > x.levels()) throw DepthError("lineage shorter than n_max");
  const unsigned cap = std::max(k, por2_cap);
  ScaleReport r;
  r.k = k;
  r.eps = eps;
  r.dyadic_porous.reserve(n_max);
  r.por2.reserve(n_max);
  r.dyadic_fraction.reserve(n_max);
  std::size_t porous_count = 0;
  for (std::size_t i = 0; i < n_max; ++i) {
    const auto depth = por2_depth(m, x.nodes[i], eps, cap);
    const bool porous = depth && *depth <= k;
    r.por2.push_back(depth);
    r.dyadic_porous.push_back(porous);
    porous_count += porous ? 1 : 0;
    r.dyadic_fraction.push_back(static_cast<double>(porous_count) / static_cast<double>(i + 1));
  }

  r.N.push_back(0);
  r.M.push_back(0);
  r.eta.push_back(0.0);
  std::size_t level = 0;
  while (level < n_max) {
    const bool porous = r.dyadic_porous[level];
    unsigned jump = 1;
    if (porous) {
      // Follow the hole path until the point leaves it or reaches the hole.
      const auto verdict = classify_porous(m, x.nodes[level], k, eps);
      jump = 0;
      bool left = false;
      while (jump < k && !left) {
        if (level + jump >= x.levels()) return r;
        left = x.digits[level + jump] != verdict.hole[jump];
        ++jump;
      }
    }
    if (level + jump > x.levels()) break;
    level += jump;
    r.step_porous.push_back(porous);
    r.jump.push_back(jump);
    r.N.push_back(r.N.back() + (porous ? 0 : 1));
    r.M.push_back(level);
    r.eta.push_back(1.0 - static_cast<double>(r.N.back()) / static_cast<double>(level));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Euclidean porosity

/// Certified lower bound on por(mu, x, r, eps).
///
/// Works on the grid of side h = 2^-L with h <= r / resolution. Any cube made
/// of grid cells that lies inside the closed ball B(x, r) and carries mass at
/// most eps times the mass of the cells inside the ball holds an inscribed
/// ball of radius side/2 with at most an eps fraction of mu(B(x, r)). The
/// largest such cube gives alpha = side / (2 r). Returns 0 when no hole is
/// found or the ball's inner mass is zero.
inline double euclid_por_lower_bound(const DyadicMeasure& m, std::span<const double> x, double r, double eps,
                                     unsigned resolution) {
  const unsigned d = m.dim();
  if (x.size() != d) throw ParameterError("point dimension does not match measure");
  if (!(r > 0.0)) throw ParameterError("radius must be positive");
  if (resolution == 0) throw ParameterError("resolution must be positive");
  const int grid = std::max(0, static_cast<int>(std::ceil(std::log2(static_cast<double>(resolution) / r) - 1e-12)));
  if (static_cast<unsigned>(grid) > m.max_address_depth()) {
    throw DepthError("resolution exceeds the realized depth");
  }
  const unsigned L = static_cast<unsigned>(grid);
  const double h = std::ldexp(1.0, -grid);
  const std::int64_t extent = std::int64_t{1} << L;

  std::vector<std::int64_t> lo(d), n(d);
  std::size_t cells = 1;
  for (unsigned i = 0; i < d; ++i) {
    lo[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x[i] - r) / h)), 0, extent);
    const auto hi = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil((x[i] + r) / h)), 0, extent);
    n[i] = std::max<std::int64_t>(0, hi - lo[i]);
    cells *= static_cast<std::size_t>(n[i]);
  }
  if (cells == 0) return 0.0;

  // Summed-area table with one padding slot per axis.
  std::vector<std::size_t> stride(d);
  std::size_t padded = 1;
  for (unsigned i = 0; i < d; ++i) {
    stride[i] = padded;
    padded *= static_cast<std::size_t>(n[i] + 1);
  }
  std::vector<double> table(padded, 0.0);
  std::vector<std::int64_t> idx(d, 0);
  auto offset = [&](const std::vector<std::int64_t>& p) {
    std::size_t o = 0;
    for (unsigned i = 0; i < d; ++i) o += static_cast<std::size_t>(p[i]) * stride[i];
    return o;
  };
  auto inside_ball = [&](const std::vector<std::int64_t>& a, std::int64_t side) {
    double far = 0.0;
    for (unsigned i = 0; i < d; ++i) {
      const double lo_edge = static_cast<double>(lo[i] + a[i]) * h - x[i];
      const double hi_edge = static_cast<double>(lo[i] + a[i] + side) * h - x[i];
      const double e = std::max(std::abs(lo_edge), std::abs(hi_edge));
      far += e * e;
    }
    return far <= r * r * (1.0 + 1e-12);
  };

  double inner = 0.0;
  for (std::size_t flat = 0; flat < cells; ++flat) {
    std::size_t rest = flat;
    CubeAddress cell{L, std::vector<std::uint64_t>(d)};
    std::vector<std::int64_t> p(d);
    for (unsigned i = 0; i < d; ++i) {
      idx[i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(n[i]));
      rest /= static_cast<std::size_t>(n[i]);
      cell.coords[i] = static_cast<std::uint64_t>(lo[i] + idx[i]);
      p[i] = idx[i] + 1;
    }
    const double w = mass(m, cell);
    table[offset(p)] = w;
    if (inside_ball(idx, 1)) inner += w;
  }
  if (!(inner > 0.0)) return 0.0;
  // Prefix sums axis by axis.
  for (unsigned axis = 0; axis < d; ++axis) {
    for (std::size_t o = 0; o < padded; ++o) {
      const std::size_t coord = (o / stride[axis]) % static_cast<std::size_t>(n[axis] + 1);
      if (coord > 0) table[o] += table[o - stride[axis]];
    }
  }
  auto box_sum = [&](const std::vector<std::int64_t>& a, std::int64_t side) {
    double total = 0.0;
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
      std::size_t o = 0;
      int sign = 1;
      for (unsigned i = 0; i < d; ++i) {
        const bool upper = (corner >> i) & 1u;
        o += static_cast<std::size_t>(a[i] + (upper ? side : 0)) * stride[i];
        if (!upper) sign = -sign;
      }
      total += sign * table[o];
    }
    return total;
  };

  const std::int64_t max_side = *std::min_element(n.begin(), n.end());
  for (std::int64_t side = max_side; side >= 1; --side) {
    std::vector<std::int64_t> span(d);
    std::size_t positions = 1;
    for (unsigned i = 0; i < d; ++i) {
      span[i] = n[i] - side + 1;
      positions *= static_cast<std::size_t>(span[i]);
    }
    for (std::size_t flat = 0; flat < positions; ++flat) {
      std::size_t rest = flat;
      for (unsigned i = 0; i < d; ++i) {
        idx[i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(span[i]));
        rest /= static_cast<std::size_t>(span[i]);
      }
      if (!inside_ball(idx, side)) continue;
      if (box_sum(idx, side) <= eps * inner) return static_cast<double>(side) * h / (2.0 * r);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Random translation

/// k = ceil(|log2(alpha r / sqrt d)|): every ball of radius alpha r 2^-i
/// contains a dyadic cube of level i + k.
inline unsigned translation_hole_depth(unsigned d, double alpha, double r) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ParameterError("alpha must lie in (0,1/2]");
  if (!(r > 0.0 && r < 0.5)) throw ParameterError("r must lie in (0,1/2)");
  const double v = std::abs(std::log2(alpha * r / std::sqrt(static_cast<double>(d))));
  const double nearest = std::round(v);
  return static_cast<unsigned>(std::abs(v - nearest) < 1e-12 ? nearest : std::ceil(v));
}

struct TranslationParams {
  unsigned ratio_exponent = 2;  // r = 2^-ratio_exponent
  double alpha = 0.25;
  double eps = 0.0;
  std::size_t trials = 100;
  unsigned depth = 12;
  std::uint64_t seed = 0;
  double eta_target = 1.0;
  double tolerance = 0.1;
  unsigned jobs = 1;
};

struct TranslationTrial {
  std::vector<double> t;
  double fraction = 0.0;
};

struct TranslationReport {
  unsigned k = 0;
  double r = 0.25;
  double target = 0.0;  // (1 - 2r)^d eta_target
  std::vector<TranslationTrial> trials;
  double mean = 0.0;
  double min = 0.0;
  bool pass = false;  // mean >= target - tolerance
};

/// For grid translations t in [0,1/2)^d, pushes mu (first rescaled into
/// [0,1/2)^d) forward by x -> r x + t, samples a typical point of the image
/// and records the fraction of scales i in [depth - k] with por_2 <= k.
inline TranslationReport translation_experiment(const MeasurePtr& mu, const TranslationParams& p) {
  const unsigned d = mu->dim();
  if (p.ratio_exponent < 2) throw ParameterError("r must be a power of 2 strictly below 1/2");
  if (p.trials == 0) throw ParameterError("trials must be positive");
  if (!(p.eps >= 0.0 && p.eps < 1.0)) throw ParameterError("eps must lie in [0,1)");
  TranslationReport rep;
  rep.r = std::ldexp(1.0, -static_cast<int>(p.ratio_exponent));
  rep.k = translation_hole_depth(d, p.alpha, rep.r);
  if (p.depth <= rep.k) throw DepthError("depth too small to resolve k levels");
  if (p.depth > mu->max_address_depth()) throw DepthError("depth exceeds address depth");
  rep.target = std::pow(1.0 - 2.0 * rep.r, static_cast<double>(d)) * p.eta_target;
  rep.trials.resize(p.trials);
  const std::size_t scales = p.depth - rep.k;

  parallel_for(p.trials, p.jobs, [&](std::size_t trial) {
    CounterRng rng(derive_seed(p.seed, trial));
    Homothety h;
    h.ratio_exponent = p.ratio_exponent + 1;  // includes the rescale into [0,1/2)^d
    h.grid_level = p.depth;
    h.translation.resize(d);
    const std::uint64_t half = std::uint64_t{1} << (p.depth - 1);
    for (auto& c : h.translation) c = rng() % half;
    auto image = std::make_shared<HomothetyMeasure>(mu, h);
    const TreeMeasure tree(image, UniformDyadic{}, p.depth);
    const auto path = sample_path(tree, rng.split(1).key(), scales);
    std::size_t porous = 0;
    for (std::size_t i = 0; i < scales; ++i) {
      const auto depth = por2_depth(*image, path.lineage.nodes[i], p.eps, rep.k);
      if (depth && *depth <= rep.k) ++porous;
    }
    auto& out = rep.trials[trial];
    out.t.resize(d);
    for (unsigned i = 0; i < d; ++i) out.t[i] = h.t(i);
    out.fraction = static_cast<double>(porous) / static_cast<double>(scales);
  });

  double total = 0.0;
  rep.min = 1.0;
  for (const auto& t : rep.trials) {
    total += t.fraction;
    rep.min = std::min(rep.min, t.fraction);
  }
  rep.mean = total / static_cast<double>(rep.trials.size());
  rep.pass = rep.mean >= rep.target - p.tolerance;
  return rep;
}

}  // namespace porodim
