#pragma once

// Tree measures on [0,1)^d. A DyadicMeasure assigns to every dyadic cube a
// conditional distribution over its 2^d children; the values are a pure
// function of the node, so arbitrarily deep trees are realized lazily and
// identically on every thread. A TreeMeasure pairs a dyadic measure with a
// partition rule and yields the (possibly non-uniform) tree R* together with
// the conditional masses mu^Q(R) = mu(R)/mu(Q) on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "porodim/dyadic.hpp"
#include "porodim/error.hpp"
#include "porodim/rng.hpp"

namespace porodim {

inline constexpr double kWeightTolerance = 1e-12;

/// Conditional distribution over the children of one node.
struct OffspringDistribution {
  std::vector<double> weights;
};

inline void validate(const OffspringDistribution& dist) {
  double total = 0.0;
  for (double w : dist.weights) {
    if (!(w >= 0.0) || w > 1.0) throw ParameterError("offspring weight outside [0,1]");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw ParameterError("offspring weights sum to " + std::to_string(total) + ", not 1");
  }
}

// ---------------------------------------------------------------------------
// Nodes and lineages

/// A dyadic cube as seen by a measure. `key` identifies the lineage and seeds
/// per-node randomness; `state` is the automaton state for finite-state
/// measures; `cube` is tracked while the level fits the address width.
struct Node {
  std::uint32_t level = 0;
  std::uint64_t key = 0;
  std::uint32_t state = 0;
  std::optional<CubeAddress> cube;
};

/// Nodes D_0(x), D_1(x), ... of a point x, with digits[i] leading from
/// nodes[i] to nodes[i + 1].
struct Lineage {
  std::vector<Node> nodes;
  std::vector<Digit> digits;

  [[nodiscard]] std::size_t levels() const noexcept { return digits.size(); }
};

// ---------------------------------------------------------------------------
// Dyadic measures

class DyadicMeasure {
 public:
  explicit DyadicMeasure(unsigned d, unsigned max_address_depth = kDefaultMaxDepth)
      : d_(d), max_address_depth_(std::min(max_address_depth, kHardMaxDepth)) {
    if (d == 0 || d > 6) throw ParameterError("dimension must be in 1..6");
  }
  virtual ~DyadicMeasure() = default;

  [[nodiscard]] unsigned dim() const noexcept { return d_; }
  [[nodiscard]] unsigned max_address_depth() const noexcept { return max_address_depth_; }

  /// Conditional weights of the 2^d dyadic children of `node`. A node of zero
  /// mass may return all zeros.
  [[nodiscard]] virtual std::vector<double> offspring(const Node& node) const = 0;

  /// Automaton state of child `c`; stateless measures keep 0.
  [[nodiscard]] virtual std::uint32_t child_state(const Node&, Digit) const { return 0; }

  /// Whether offspring() reads node.cube (so nodes past the address depth are
  /// unusable).
  [[nodiscard]] virtual bool needs_address() const { return false; }

  [[nodiscard]] Node root() const { return Node{0, 0, 0, CubeAddress::root(d_)}; }

  [[nodiscard]] Node child(const Node& node, Digit c) const {
    Node out;
    out.level = node.level + 1;
    out.key = derive_seed(node.key, c);
    out.state = child_state(node, c);
    if (node.cube && out.level <= max_address_depth_) {
      out.cube = child_of(*node.cube, c, max_address_depth_);
    } else if (needs_address()) {
      throw DepthError("level " + std::to_string(out.level) + " exceeds the address depth " +
                       std::to_string(max_address_depth_) + " required by this measure");
    }
    return out;
  }

  [[nodiscard]] Node descend(Node node, const std::vector<Digit>& digits) const {
    for (Digit c : digits) node = child(node, c);
    return node;
  }

 private:
  unsigned d_;
  unsigned max_address_depth_;
};

using MeasurePtr = std::shared_ptr<const DyadicMeasure>;

// Generator specifications --------------------------------------------------

struct UniformGenerator {};
struct BernoulliGenerator {
  std::vector<double> weights;
};
struct MixtureComponent {
  std::vector<double> weights;
  double probability = 0.0;
};
struct MixtureGenerator {
  std::vector<MixtureComponent> components;
};
struct DirichletGenerator {
  std::vector<double> concentration;
};

using Generator = std::variant<UniformGenerator, BernoulliGenerator, MixtureGenerator, DirichletGenerator>;

struct GeneratorSpec {
  unsigned d = 1;
  Generator generator = UniformGenerator{};
  std::uint64_t seed = 0;
};

inline void validate(const GeneratorSpec& spec) {
  if (spec.d == 0 || spec.d > 6) throw ParameterError("d must be in 1..6");
  const std::size_t n = arity(spec.d);
  auto check_vector = [n](const std::vector<double>& w, const char* what) {
    if (w.size() != n) {
      throw ParameterError(std::string(what) + " must have 2^d = " + std::to_string(n) + " entries");
    }
    validate(OffspringDistribution{w});
  };
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, BernoulliGenerator>) {
          check_vector(g.weights, "bernoulli weights");
        } else if constexpr (std::is_same_v<G, MixtureGenerator>) {
          if (g.components.empty()) throw ParameterError("mixture has no components");
          double total = 0.0;
          for (const auto& c : g.components) {
            check_vector(c.weights, "mixture weights");
            if (!(c.probability >= 0.0)) throw ParameterError("mixture probability must be >= 0");
            total += c.probability;
          }
          if (std::abs(total - 1.0) > kWeightTolerance) throw ParameterError("mixture probabilities must sum to 1");
        } else if constexpr (std::is_same_v<G, DirichletGenerator>) {
          if (g.concentration.size() != n) throw ParameterError("dirichlet concentration must have 2^d entries");
          for (double a : g.concentration) {
            if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("dirichlet concentration must be > 0");
          }
        }
      },
      spec.generator);
}

/// Random (or deterministic) multiplicative cascade: each node independently
/// draws its offspring vector from the generator, keyed by (seed, node).
class CascadeMeasure final : public DyadicMeasure {
 public:
  explicit CascadeMeasure(GeneratorSpec spec, unsigned max_address_depth = kDefaultMaxDepth)
      : DyadicMeasure(spec.d, max_address_depth), spec_(std::move(spec)) {
    validate(spec_);
  }

  [[nodiscard]] const GeneratorSpec& spec() const noexcept { return spec_; }

  [[nodiscard]] std::vector<double> offspring(const Node& node) const override {
    const std::size_t n = arity(dim());
    return std::visit(
        [&](const auto& g) -> std::vector<double> {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, UniformGenerator>) {
            return std::vector<double>(n, 1.0 / static_cast<double>(n));
          } else if constexpr (std::is_same_v<G, BernoulliGenerator>) {
            return g.weights;
          } else if constexpr (std::is_same_v<G, MixtureGenerator>) {
            CounterRng rng(derive_seed(spec_.seed, node.key));
            const double u = rng.uniform();
            double acc = 0.0;
            for (const auto& c : g.components) {
              acc += c.probability;
              if (u < acc) return c.weights;
            }
            return g.components.back().weights;
          } else {
            return sample_dirichlet(g.concentration, derive_seed(spec_.seed, node.key));
          }
        },
        spec_.generator);
  }

 private:
  static std::vector<double> sample_dirichlet(const std::vector<double>& alpha, std::uint64_t key) {
    CounterRng rng(key);
    std::vector<double> out(alpha.size());
    for (int attempt = 0; attempt < 64; ++attempt) {
      double total = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        std::gamma_distribution<double> gamma(alpha[i], 1.0);
        out[i] = gamma(rng);
        total += out[i];
      }
      if (total > 0.0) {
        for (double& v : out) v /= total;
        return out;
      }
    }
    throw MalformedMeasure("dirichlet sample underflowed to the zero vector");
  }

  GeneratorSpec spec_;
};

/// Finite-state measure: node weights depend only on the automaton state,
/// and each child moves to a state fixed by (state, digit). Covers
/// self-similar measures such as the middle-half Cantor measure.
class AutomatonMeasure final : public DyadicMeasure {
 public:
  struct State {
    std::vector<double> weights;
    std::vector<std::uint32_t> next;
  };

  AutomatonMeasure(unsigned d, std::vector<State> states, unsigned max_address_depth = kDefaultMaxDepth)
      : DyadicMeasure(d, max_address_depth), states_(std::move(states)) {
    if (states_.empty()) throw ParameterError("automaton needs at least one state");
    for (const auto& s : states_) {
      if (s.weights.size() != arity(d) || s.next.size() != arity(d)) {
        throw ParameterError("automaton state must list 2^d weights and successors");
      }
      validate(OffspringDistribution{s.weights});
      for (auto t : s.next) {
        if (t >= states_.size()) throw ParameterError("automaton successor out of range");
      }
    }
  }

  [[nodiscard]] std::vector<double> offspring(const Node& node) const override {
    return states_.at(node.state).weights;
  }
  [[nodiscard]] std::uint32_t child_state(const Node& node, Digit c) const override {
    return states_.at(node.state).next.at(c);
  }

 private:
  std::vector<State> states_;
};

inline MeasurePtr make_measure(const GeneratorSpec& spec, unsigned max_address_depth = kDefaultMaxDepth) {
  return std::make_shared<CascadeMeasure>(spec, max_address_depth);
}

inline MeasurePtr uniform_measure(unsigned d) { return make_measure(GeneratorSpec{d, UniformGenerator{}, 0}); }

inline MeasurePtr bernoulli_measure(std::vector<double> weights) {
  unsigned d = 0;
  while (arity(d) < weights.size()) ++d;
  return make_measure(GeneratorSpec{d, BernoulliGenerator{std::move(weights)}, 0});
}

/// Point mass at the origin: all weight on child 0 at every node.
inline MeasurePtr point_mass_at_origin(unsigned d) {
  std::vector<double> w(arity(d), 0.0);
  w[0] = 1.0;
  return make_measure(GeneratorSpec{d, BernoulliGenerator{std::move(w)}, 0});
}

/// Self-similar measure on [0,1/4) U [3/4,1) with half the mass on each piece.
inline MeasurePtr middle_half_cantor() {
  // state 0: block start; states 1 and 2: inside the left / right half.
  std::vector<AutomatonMeasure::State> s{
      {{0.5, 0.5}, {1, 2}},
      {{1.0, 0.0}, {0, 0}},
      {{0.0, 1.0}, {0, 0}},
  };
  return std::make_shared<AutomatonMeasure>(1, std::move(s));
}

// ---------------------------------------------------------------------------
// Masses

/// Walks from the root to `address`, returning the node and log mass
/// (-infinity for zero mass). Stops early at zero mass.
struct Located {
  Node node;
  double log_mass = 0.0;
  bool reached = false;
};

inline Located locate(const DyadicMeasure& m, const CubeAddress& address) {
  if (address.dim() != m.dim()) throw ParameterError("address dimension does not match measure");
  validate(address, m.max_address_depth());
  Located out{m.root(), 0.0, address.level == 0};
  const auto digits = digits_between(CubeAddress::root(m.dim()), address);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto w = m.offspring(out.node);
    const double wi = w.at(digits[i]);
    if (wi <= 0.0) {
      out.log_mass = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_mass += std::log(wi);
    out.node = m.child(out.node, digits[i]);
  }
  out.reached = true;
  return out;
}

/// mu(Q) as the product of conditional weights along the lineage.
inline double mass(const DyadicMeasure& m, const CubeAddress& address) {
  return std::exp(locate(m, address).log_mass);
}

inline double log_mass(const DyadicMeasure& m, const CubeAddress& address) { return locate(m, address).log_mass; }

// ---------------------------------------------------------------------------
// Homothety pushforward

/// x -> r x + t with r = 2^-ratio_exponent and t on the grid 2^-grid_level.
struct Homothety {
  unsigned ratio_exponent = 2;
  unsigned grid_level = 0;
  std::vector<std::uint64_t> translation;  // in units of 2^-grid_level

  [[nodiscard]] double ratio() const noexcept { return std::ldexp(1.0, -static_cast<int>(ratio_exponent)); }
  [[nodiscard]] double t(std::size_t i) const noexcept {
    return std::ldexp(static_cast<double>(translation[i]), -static_cast<int>(grid_level));
  }
};

inline void validate(const Homothety& h, unsigned d) {
  if (h.ratio_exponent < 2) throw ParameterError("homothety ratio must be a power of 2 strictly below 1/2");
  if (h.translation.size() != d) throw ParameterError("translation has wrong dimension");
  if (h.grid_level == 0 || h.grid_level > kDefaultMaxDepth) throw ParameterError("translation grid level out of range");
  const std::uint64_t half = std::uint64_t{1} << (h.grid_level - 1);
  for (auto c : h.translation) {
    if (c >= half) throw ParameterError("translation must lie in [0,1/2)^d");
  }
}

/// The pushforward r mu + t expressed on the standard dyadic frame. Masses of
/// frame cubes are masses of their (dyadic-rational) preimage boxes under mu.
class HomothetyMeasure final : public DyadicMeasure {
 public:
  HomothetyMeasure(MeasurePtr base, Homothety h)
      : DyadicMeasure(base->dim(), base->max_address_depth()), base_(std::move(base)), h_(std::move(h)) {
    validate(h_, dim());
  }

  [[nodiscard]] bool needs_address() const override { return true; }
  [[nodiscard]] const Homothety& homothety() const noexcept { return h_; }

  [[nodiscard]] std::vector<double> offspring(const Node& node) const override {
    if (!node.cube) throw DepthError("homothety pushforward needs node addresses");
    const double parent = image_mass(*node.cube);
    std::vector<double> w(arity(dim()), 0.0);
    if (parent <= 0.0) return w;
    for (unsigned c = 0; c < w.size(); ++c) {
      w[c] = image_mass(child_of(*node.cube, static_cast<Digit>(c), max_address_depth())) / parent;
    }
    return w;
  }

  /// (r mu + t)(Q) = mu(r^-1 (Q - t)).
  [[nodiscard]] double image_mass(const CubeAddress& q) const {
    const unsigned j = h_.ratio_exponent;
    const unsigned level = std::max({q.level, h_.grid_level, j});
    const unsigned base_level = level - j;
    if (base_level > base_->max_address_depth()) throw DepthError("preimage finer than base address depth");
    // Preimage box in units of 2^-base_level: [q*2^(level-n) - t*2^(level-D), + 2^(level-n)).
    const std::int64_t extent = std::int64_t{1} << base_level;
    std::vector<std::int64_t> lo(dim()), hi(dim());
    for (unsigned i = 0; i < dim(); ++i) {
      const auto start = static_cast<std::int64_t>(q.coords[i] << (level - q.level)) -
                         static_cast<std::int64_t>(h_.translation[i] << (level - h_.grid_level));
      lo[i] = std::clamp<std::int64_t>(start, 0, extent);
      hi[i] = std::clamp<std::int64_t>(start + (std::int64_t{1} << (level - q.level)), 0, extent);
      if (lo[i] >= hi[i]) return 0.0;
    }
    return box_mass(base_->root(), base_level, lo, hi);
  }

 private:
  double box_mass(const Node& node, unsigned base_level, const std::vector<std::int64_t>& lo,
                  const std::vector<std::int64_t>& hi) const {
    const auto& a = *node.cube;
    const unsigned shift = base_level - a.level;
    bool inside = true;
    for (unsigned i = 0; i < dim(); ++i) {
      const auto start = static_cast<std::int64_t>(a.coords[i]) << shift;
      const auto end = start + (std::int64_t{1} << shift);
      if (end <= lo[i] || start >= hi[i]) return 0.0;
      if (start < lo[i] || end > hi[i]) inside = false;
    }
    if (inside) return 1.0;
    const auto w = base_->offspring(node);
    double total = 0.0;
    for (unsigned c = 0; c < w.size(); ++c) {
      if (w[c] > 0.0) total += w[c] * box_mass(base_->child(node, static_cast<Digit>(c)), base_level, lo, hi);
    }
    return total;
  }

  MeasurePtr base_;
  Homothety h_;
};

// ---------------------------------------------------------------------------
// Descendant search

/// One cell of D_j(Q) with its mass relative to Q.
struct Descendant {
  std::vector<Digit> digits;
  double ratio = 1.0;
  std::optional<Node> node;  // absent below zero-mass cells
};

/// Relative coordinates of a descendant cell inside its ancestor.
inline std::vector<std::uint64_t> relative_coords(const std::vector<Digit>& digits, unsigned d) {
  std::vector<std::uint64_t> c(d, 0);
  for (Digit g : digits) {
    for (unsigned i = 0; i < d; ++i) c[i] = 2 * c[i] + ((g >> i) & 1u);
  }
  return c;
}

/// Replaces `frontier` (cells of D_j(Q)) by the cells of D_{j+1}(Q).
inline void expand(const DyadicMeasure& m, std::vector<Descendant>& frontier) {
  const unsigned n = arity(m.dim());
  std::vector<Descendant> next;
  next.reserve(frontier.size() * n);
  for (auto& cell : frontier) {
    std::vector<double> w;
    if (cell.node && cell.ratio > 0.0) w = m.offspring(*cell.node);
    for (unsigned c = 0; c < n; ++c) {
      Descendant child{cell.digits, 0.0, std::nullopt};
      child.digits.push_back(static_cast<Digit>(c));
      if (!w.empty() && w[c] > 0.0) {
        child.ratio = cell.ratio * w[c];
        child.node = m.child(*cell.node, static_cast<Digit>(c));
      }
      next.push_back(std::move(child));
    }
  }
  frontier = std::move(next);
}

/// Minimum relative mass over a level, ties broken by lexicographic address.
inline const Descendant& smallest(const std::vector<Descendant>& level, unsigned d) {
  const Descendant* best = &level.front();
  for (const auto& cell : level) {
    if (cell.ratio < best->ratio ||
        (cell.ratio == best->ratio && relative_coords(cell.digits, d) < relative_coords(best->digits, d))) {
      best = &cell;
    }
  }
  return *best;
}

/// The lightest cell of D_k(Q) relative to Q.
inline Descendant lightest_descendant(const DyadicMeasure& m, const Node& q, unsigned k) {
  if (k == 0) throw ParameterError("hole depth k must be >= 1");
  std::vector<Descendant> frontier{Descendant{{}, 1.0, q}};
  for (unsigned j = 0; j < k; ++j) expand(m, frontier);
  return smallest(frontier, m.dim());
}

// ---------------------------------------------------------------------------
// Tree measures over R*

/// How a node of R* splits, with the conditional weights mu^Q on its cells.
struct Split {
  std::vector<Cell> cells;
  std::vector<double> weights;
  bool porous = false;
  std::vector<Digit> hole;  // empty unless porous
};

/// A measure together with the partition rule that grows R*. `depth` bounds
/// the number of R* generations a caller may walk.
class TreeMeasure {
 public:
  TreeMeasure(MeasurePtr measure, PartitionRule rule, unsigned depth)
      : measure_(std::move(measure)), rule_(rule), depth_(depth) {
    if (!measure_) throw ParameterError("tree measure needs a measure");
    if (depth_ == 0) throw ParameterError("depth must be positive");
    if (const auto* p = std::get_if<PorousSplit>(&rule_)) {
      if (p->k == 0) throw ParameterError("porous split needs k >= 1");
      if (!(p->eps >= 0.0 && p->eps < 1.0)) throw ParameterError("eps must lie in [0,1)");
    }
    if (measure_->needs_address() && depth_ * max_jump() > measure_->max_address_depth()) {
      throw DepthError("requested depth exceeds the address depth this measure supports");
    }
  }

  [[nodiscard]] const DyadicMeasure& measure() const noexcept { return *measure_; }
  [[nodiscard]] const MeasurePtr& measure_ptr() const noexcept { return measure_; }
  [[nodiscard]] const PartitionRule& rule() const noexcept { return rule_; }
  [[nodiscard]] unsigned depth() const noexcept { return depth_; }
  [[nodiscard]] unsigned dim() const noexcept { return measure_->dim(); }

  /// Largest dyadic level jump of one R* generation.
  [[nodiscard]] unsigned max_jump() const noexcept {
    const auto* p = std::get_if<PorousSplit>(&rule_);
    return p ? p->k : 1;
  }

  /// R(Q) and mu^Q. Porous nodes (some depth-k cell of relative mass <= eps)
  /// split around the selected hole; all others split uniformly.
  [[nodiscard]] Split split(const Node& q) const {
    const unsigned d = dim();
    const auto* rule = std::get_if<PorousSplit>(&rule_);
    if (rule) {
      const Descendant hole = lightest_descendant(*measure_, q, rule->k);
      if (hole.ratio <= rule->eps) return porous_split_at(q, hole.digits);
    }
    return Split{uniform_cells(d), measure_->offspring(q), false, {}};
  }

 private:
  [[nodiscard]] Split porous_split_at(const Node& q, const std::vector<Digit>& hole) const {
    const unsigned d = dim();
    Split s{porous_split_cells(d, hole), {}, true, hole};
    s.weights.reserve(s.cells.size());
    Node along = q;
    double ratio = 1.0;
    for (std::size_t j = 0; j < hole.size(); ++j) {
      const auto w = ratio > 0.0 ? measure_->offspring(along) : std::vector<double>(arity(d), 0.0);
      for (unsigned c = 0; c < arity(d); ++c) {
        if (c != hole[j]) s.weights.push_back(ratio * w[c]);
      }
      ratio *= w[hole[j]];
      if (ratio > 0.0 && j + 1 < hole.size()) along = measure_->child(along, hole[j]);
    }
    s.weights.push_back(ratio);
    return s;
  }

  MeasurePtr measure_;
  PartitionRule rule_;
  unsigned depth_;
};

inline TreeMeasure build_tree_measure(const GeneratorSpec& spec, PartitionRule rule, unsigned depth) {
  return TreeMeasure(make_measure(spec), rule, depth);
}

/// Mass of a cube; past the realized depth only zero-mass lineages resolve.
inline double mass(const TreeMeasure& tree, const CubeAddress& address) {
  const auto loc = locate(tree.measure(), address);
  const unsigned realized = tree.depth() * tree.max_jump();
  if (address.level > realized && loc.reached) {
    throw DepthError("cube " + to_string(address) + " lies below the realized depth " + std::to_string(realized));
  }
  return std::exp(loc.log_mass);
}

/// mu pushed forward by x -> r x + t, as a uniform-rule tree to `depth`.
inline TreeMeasure apply_homothety(const TreeMeasure& tree, const Homothety& h, unsigned depth) {
  auto image = std::make_shared<HomothetyMeasure>(tree.measure_ptr(), h);
  return TreeMeasure(std::move(image), UniformDyadic{}, depth);
}

// ---------------------------------------------------------------------------
// Path sampling

/// A mu-random point: its dyadic lineage plus the levels at which the R*
/// lineage R_0, R_1, ... sits along it.
struct SampledPath {
  Lineage lineage;
  std::vector<std::size_t> rstar_levels;

  [[nodiscard]] std::size_t steps() const noexcept { return rstar_levels.empty() ? 0 : rstar_levels.size() - 1; }
  [[nodiscard]] const Node& rstar_node(std::size_t i) const { return lineage.nodes.at(rstar_levels.at(i)); }
};

/// Draws the lineage R_0, ..., R_steps with R_{i+1} chosen with probability
/// mu^{R_i}(R_{i+1}); reproducible from `seed`.
inline SampledPath sample_path(const TreeMeasure& tree, std::uint64_t seed, std::size_t steps) {
  if (steps > tree.depth()) throw DepthError("path longer than the realized tree depth");
  const auto& m = tree.measure();
  SampledPath path;
  path.lineage.nodes.reserve(steps * tree.max_jump() + 1);
  path.lineage.digits.reserve(steps * tree.max_jump());
  path.lineage.nodes.push_back(m.root());
  path.rstar_levels.reserve(steps + 1);
  path.rstar_levels.push_back(0);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < steps; ++i) {
    const Split s = tree.split(path.lineage.nodes.back());
    double total = 0.0;
    for (double w : s.weights) total += w;
    if (!(total > 0.0)) throw MalformedMeasure("all-zero offspring vector on a visited node");
    const double u = rng.uniform() * total;
    std::size_t pick = s.weights.size();
    double acc = 0.0;
    for (std::size_t c = 0; c < s.weights.size(); ++c) {
      if (s.weights[c] <= 0.0) continue;
      acc += s.weights[c];
      pick = c;
      if (u < acc) break;
    }
    for (Digit g : s.cells[pick].digits) {
      path.lineage.nodes.push_back(m.child(path.lineage.nodes.back(), g));
      path.lineage.digits.push_back(g);
    }
    path.rstar_levels.push_back(path.lineage.levels());
  }
  return path;
}

inline SampledPath sample_path(const TreeMeasure& tree, std::uint64_t seed) {
  return sample_path(tree, seed, tree.depth());
}

/// Lineage of the point with the given dyadic digits.
inline Lineage lineage_from_digits(const DyadicMeasure& m, const std::vector<Digit>& digits) {
  Lineage l;
  l.nodes.reserve(digits.size() + 1);
  l.nodes.push_back(m.root());
  for (Digit g : digits) {
    if (g >= arity(m.dim())) throw ParameterError("digit out of range");
    l.nodes.push_back(m.child(l.nodes.back(), g));
    l.digits.push_back(g);
  }
  return l;
}

}  // namespace porodim
