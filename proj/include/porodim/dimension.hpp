#pragma once

// Entropy and Lyapunov exponents of tree nodes, trajectory statistics along
// mu-random paths, the entropy-average packing-dimension estimator and the
// converse bound for measures that are rarely porous.
//
// Entropies are in nats. Dimension quotients use log(1/l) >= 0 in the
// denominator, so every quotient is nonnegative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "porodim/dyadic.hpp"
#include "porodim/error.hpp"
#include "porodim/measure.hpp"
#include "porodim/numeric.hpp"
#include "porodim/parallel.hpp"
#include "porodim/rng.hpp"

namespace porodim {

struct NodeStats {
  double H = 0.0;       // entropy of mu^Q
  double lambda = 0.0;  // sum mu^Q(R) log(l(Q)/l(R))
  double ratio = 0.0;   // H / lambda, 0 when H = 0
};

/// Stats for a split given by relative child depths (in dyadic levels).
inline NodeStats node_stats(std::span<const unsigned> child_depths, std::span<const double> weights) {
  if (child_depths.size() != weights.size()) {
    throw ParameterError("partition has " + std::to_string(child_depths.size()) + " children but the distribution has " +
                         std::to_string(weights.size()) + " entries");
  }
  NodeStats s;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s.H += psi(weights[i]);
    s.lambda += weights[i] * child_depths[i] * kLn2;
  }
  s.ratio = s.H > 0.0 ? s.H / s.lambda : 0.0;
  return s;
}

inline NodeStats node_stats(const CubePartition& partition, const OffspringDistribution& dist) {
  std::vector<unsigned> depths;
  depths.reserve(partition.children.size());
  for (const auto& c : partition.children) {
    if (!contains(partition.parent, c) || c.level == partition.parent.level) {
      throw ParameterError("partition child " + to_string(c) + " is not a proper descendant of the parent");
    }
    depths.push_back(c.level - partition.parent.level);
  }
  return node_stats(depths, dist.weights);
}

inline NodeStats node_stats(const Split& split) {
  std::vector<unsigned> depths;
  depths.reserve(split.cells.size());
  for (const auto& c : split.cells) depths.push_back(c.depth());
  return node_stats(depths, split.weights);
}

// ---------------------------------------------------------------------------
// Trajectories

/// One step R_{n-1} -> R_n along a sampled point.
struct TrajectoryStep {
  std::size_t n = 0;
  double I = 0.0;       // -log mu^{R_{n-1}}(R_n)
  double L = 0.0;       // log(l(R_{n-1}) / l(R_n))
  double H = 0.0;       // H(R_{n-1})
  double lambda = 0.0;  // lambda(R_{n-1})
  double Mbar = 0.0;    // equals L for dyadic trees
  double Dn = 0.0;      // sum H / sum Mbar over steps 1..n
  double resH = 0.0;    // (sum I - sum H) / n
  double resL = 0.0;    // (sum L - sum lambda) / n
  bool porous = false;
};

struct PathTrajectory {
  std::vector<TrajectoryStep> steps;
  double sum_H = 0.0;
  double sum_lambda = 0.0;
  double sum_Mbar = 0.0;
  double sum_I = 0.0;
  double sum_L = 0.0;
  double H_P = 0.0;     // entropy summed over porous steps
  double Mbar_P = 0.0;  // Mbar summed over porous steps
  std::size_t non_porous = 0;  // N_n
  std::size_t level = 0;       // M_n, the dyadic level of R_n

  [[nodiscard]] double terminal_D() const noexcept { return steps.empty() ? 0.0 : steps.back().Dn; }
  /// eta_n = 1 - N_n / M_n.
  [[nodiscard]] double eta() const noexcept {
    return level == 0 ? 0.0 : 1.0 - static_cast<double>(non_porous) / static_cast<double>(level);
  }
};

/// Walks the sampled path through the splits of `tree` and records entropy,
/// Lyapunov and information terms at every step. Porosity of a step is the
/// tree's own porous/uniform decision.
inline PathTrajectory path_trajectory(const TreeMeasure& tree, const SampledPath& path) {
  const auto& x = path.lineage;
  PathTrajectory out;
  out.steps.reserve(path.steps());
  CompensatedSum sH, sLambda, sI, sL, sHP, sMP;
  for (std::size_t n = 1; n <= path.steps(); ++n) {
    const std::size_t from = path.rstar_levels[n - 1];
    const std::size_t to = path.rstar_levels[n];
    const Split split = tree.split(x.nodes[from]);
    const NodeStats stats = node_stats(split);

    std::size_t pick = split.cells.size();
    for (std::size_t c = 0; c < split.cells.size(); ++c) {
      const auto& digits = split.cells[c].digits;
      if (digits.size() == to - from && std::equal(digits.begin(), digits.end(), x.digits.begin() + from)) {
        pick = c;
        break;
      }
    }
    if (pick == split.cells.size()) throw MalformedMeasure("sampled path does not follow the tree's split");
    const double w = split.weights[pick];
    if (!(w > 0.0)) throw MalformedMeasure("sampled path enters a zero-mass cell");

    TrajectoryStep st;
    st.n = n;
    st.I = -std::log(w);
    st.L = static_cast<double>(to - from) * kLn2;
    st.H = stats.H;
    st.lambda = stats.lambda;
    st.Mbar = st.L;
    st.porous = split.porous;

    sH += st.H;
    sLambda += st.lambda;
    sI += st.I;
    sL += st.L;
    if (st.porous) {
      sHP += st.H;
      sMP += st.Mbar;
    } else {
      ++out.non_porous;
    }
    out.level = to;
    const double dn = static_cast<double>(n);
    st.Dn = sH.value() / (static_cast<double>(to) * kLn2);
    st.resH = (sI.value() - sH.value()) / dn;
    st.resL = (sL.value() - sLambda.value()) / dn;
    out.steps.push_back(st);
  }
  out.sum_H = sH.value();
  out.sum_lambda = sLambda.value();
  out.sum_I = sI.value();
  out.sum_L = sL.value();
  out.sum_Mbar = out.sum_L;
  out.H_P = sHP.value();
  out.Mbar_P = sMP.value();
  return out;
}

// ---------------------------------------------------------------------------
// Estimator

/// Terminal statistics of one sampled path.
struct PathSummary {
  double D = 0.0;
  double eta = 0.0;
  double resH = 0.0;
  double resL = 0.0;
  double H_P = 0.0;
  double Mbar_P = 0.0;
  std::size_t level = 0;
};

inline PathSummary summarize(const PathTrajectory& t) {
  PathSummary s;
  s.D = t.terminal_D();
  s.eta = t.eta();
  if (!t.steps.empty()) {
    s.resH = t.steps.back().resH;
    s.resL = t.steps.back().resL;
  }
  s.H_P = t.H_P;
  s.Mbar_P = t.Mbar_P;
  s.level = t.level;
  return s;
}

/// Seed of path `i` in a batch drawn with `seed`.
inline std::uint64_t path_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, i); }

/// Sampled terminal D_n values of a tree measure.
///
/// `value` is the maximum over paths, a finite-sample surrogate for the
/// mu-essential supremum of the upper local dimensions. Sampling can only
/// miss large values, so it tends to underestimate dim_P.
struct DimensionEstimate {
  double value = 0.0;
  double mean = 0.0;
  double p95 = 0.0;
  std::vector<PathSummary> paths;
  unsigned depth = 0;
};

inline DimensionEstimate estimate_packing_dim(const TreeMeasure& tree, unsigned depth, std::size_t paths,
                                              std::uint64_t seed, unsigned jobs = 1) {
  if (paths == 0) throw ParameterError("paths must be positive");
  if (depth == 0 || depth > tree.depth()) throw DepthError("depth must lie in 1..tree depth");
  DimensionEstimate est;
  est.depth = depth;
  est.paths.resize(paths);
  parallel_for(paths, jobs, [&](std::size_t i) {
    const auto path = sample_path(tree, path_seed(seed, i), depth);
    est.paths[i] = summarize(path_trajectory(tree, path));
  });
  std::vector<double> values;
  values.reserve(paths);
  CompensatedSum total;
  for (const auto& p : est.paths) {
    values.push_back(p.D);
    total += p.D;
  }
  std::sort(values.begin(), values.end());
  est.value = values.back();
  est.mean = total.value() / static_cast<double>(paths);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(paths)));
  est.p95 = values[std::max<std::size_t>(rank, 1) - 1];
  return est;
}

// ---------------------------------------------------------------------------
// Converse bound

struct ConverseBound {
  double hmin = 0.0;         // nats
  double lower_bound = 0.0;  // (1 - eta) hmin / log 2
};

/// Smallest entropy of a probability vector on 2^d entries that are all at
/// least eps, attained at (1 - (2^d - 1) eps, eps, ..., eps).
inline ConverseBound hmin_and_converse(unsigned d, double eps, double eta) {
  if (d == 0 || d > 16) throw ParameterError("d must be in 1..16");
  const double top = std::ldexp(1.0, -static_cast<int>(d));
  if (!(eps >= 0.0 && eps <= top)) throw ParameterError("eps must lie in [0, 2^-d] = [0, " + std::to_string(top) + "]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
  const double L = std::ldexp(1.0, static_cast<int>(d)) - 1.0;
  ConverseBound b;
  // At eps = 2^-d the vector is exactly uniform.
  b.hmin = eps == top ? d * kLn2 : psi(1.0 - L * eps) + L * psi(eps);
  b.lower_bound = (1.0 - eta) * b.hmin / kLn2;
  return b;
}

}  // namespace porodim
