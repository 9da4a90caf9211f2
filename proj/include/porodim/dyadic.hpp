#pragma once

// Dyadic cube addressing and the two partition operators used to grow trees:
// the uniform split into 2^d children and the porous split around a hole.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "porodim/error.hpp"

namespace porodim {

/// Default bound on address depth; coordinates are stored in 64-bit words.
inline constexpr unsigned kDefaultMaxDepth = 60;
/// Largest depth a CubeAddress can ever carry.
inline constexpr unsigned kHardMaxDepth = 62;

using Digit = std::uint8_t;

/// Child index convention: bit i of a digit is the offset along axis i.
inline constexpr unsigned arity(unsigned d) noexcept { return 1u << d; }

/// A dyadic cube prod_i [c_i 2^-level, (c_i + 1) 2^-level).
struct CubeAddress {
  unsigned level = 0;
  std::vector<std::uint64_t> coords;

  static CubeAddress root(unsigned d) { return CubeAddress{0, std::vector<std::uint64_t>(d, 0)}; }

  [[nodiscard]] unsigned dim() const noexcept { return static_cast<unsigned>(coords.size()); }

  /// Side length 2^-level.
  [[nodiscard]] double side() const noexcept { return std::ldexp(1.0, -static_cast<int>(level)); }

  friend bool operator==(const CubeAddress&, const CubeAddress&) = default;
  /// Orders by level, then lexicographically by coordinates.
  friend auto operator<=>(const CubeAddress& a, const CubeAddress& b) {
    if (auto c = a.level <=> b.level; c != 0) return c;
    return a.coords <=> b.coords;
  }
};

/// Throws ParameterError unless every coordinate is below 2^level and the
/// level is within `max_depth`.
inline void validate(const CubeAddress& a, unsigned max_depth = kDefaultMaxDepth) {
  if (a.dim() == 0) throw ParameterError("cube address has dimension 0");
  if (a.level > std::min(max_depth, kHardMaxDepth)) {
    throw DepthError("cube level " + std::to_string(a.level) + " exceeds maximum depth " +
                     std::to_string(std::min(max_depth, kHardMaxDepth)));
  }
  const std::uint64_t bound = std::uint64_t{1} << a.level;
  for (auto c : a.coords) {
    if (c >= bound) throw ParameterError("cube coordinate out of range for its level");
  }
}

/// "level:c0,c1,...,c{d-1}"
inline std::string to_string(const CubeAddress& a) {
  std::string s = std::to_string(a.level) + ':';
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a.coords[i]);
  }
  return s;
}

inline CubeAddress child_of(const CubeAddress& a, Digit c, unsigned max_depth = kDefaultMaxDepth) {
  if (c >= arity(a.dim())) throw ParameterError("child digit out of range");
  if (a.level + 1 > std::min(max_depth, kHardMaxDepth)) {
    throw DepthError("subdividing level " + std::to_string(a.level) + " exceeds maximum depth " +
                     std::to_string(std::min(max_depth, kHardMaxDepth)));
  }
  CubeAddress out{a.level + 1, a.coords};
  for (unsigned i = 0; i < out.dim(); ++i) out.coords[i] = 2 * out.coords[i] + ((c >> i) & 1u);
  return out;
}

inline CubeAddress descend(CubeAddress a, const std::vector<Digit>& digits,
                           unsigned max_depth = kDefaultMaxDepth) {
  for (Digit c : digits) a = child_of(a, c, max_depth);
  return a;
}

/// True when `inner` is `outer` or one of its descendants.
inline bool contains(const CubeAddress& outer, const CubeAddress& inner) {
  if (inner.dim() != outer.dim() || inner.level < outer.level) return false;
  const unsigned shift = inner.level - outer.level;
  for (unsigned i = 0; i < outer.dim(); ++i) {
    if ((inner.coords[i] >> shift) != outer.coords[i]) return false;
  }
  return true;
}

/// Digits leading from `outer` down to its descendant `inner`.
inline std::vector<Digit> digits_between(const CubeAddress& outer, const CubeAddress& inner) {
  if (!contains(outer, inner)) throw ParameterError("address is not a descendant");
  std::vector<Digit> out;
  for (unsigned depth = outer.level + 1; depth <= inner.level; ++depth) {
    const unsigned shift = inner.level - depth;
    Digit c = 0;
    for (unsigned i = 0; i < inner.dim(); ++i) c |= static_cast<Digit>(((inner.coords[i] >> shift) & 1u) << i);
    out.push_back(c);
  }
  return out;
}

/// A descendant cell described relative to its parent by the digit path.
struct Cell {
  std::vector<Digit> digits;
  [[nodiscard]] unsigned depth() const noexcept { return static_cast<unsigned>(digits.size()); }
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline std::vector<Cell> uniform_cells(unsigned d) {
  std::vector<Cell> out;
  out.reserve(arity(d));
  for (unsigned c = 0; c < arity(d); ++c) out.push_back(Cell{{static_cast<Digit>(c)}});
  return out;
}

/// Cells of the porous split around the hole reached by `hole` digits: for
/// each depth j = 1..k the 2^d - 1 depth-j cubes that avoid the hole (in
/// digit order), then the hole itself last.
inline std::vector<Cell> porous_split_cells(unsigned d, const std::vector<Digit>& hole) {
  if (hole.empty()) throw ParameterError("porous split needs a hole at depth k >= 1");
  std::vector<Cell> out;
  out.reserve((arity(d) - 1) * hole.size() + 1);
  std::vector<Digit> prefix;
  for (Digit h : hole) {
    if (h >= arity(d)) throw ParameterError("hole digit out of range");
    for (unsigned c = 0; c < arity(d); ++c) {
      if (c == h) continue;
      Cell cell{prefix};
      cell.digits.push_back(static_cast<Digit>(c));
      out.push_back(std::move(cell));
    }
    prefix.push_back(h);
  }
  out.push_back(Cell{hole});
  return out;
}

/// Expected child count of a porous split with hole depth k.
inline constexpr std::size_t porous_child_count(unsigned d, unsigned k) noexcept {
  return static_cast<std::size_t>(arity(d) - 1) * k + 1;
}

struct CubePartition {
  CubeAddress parent;
  std::vector<CubeAddress> children;
};

inline CubePartition realize(const CubeAddress& parent, const std::vector<Cell>& cells,
                             unsigned max_depth = kDefaultMaxDepth) {
  CubePartition p{parent, {}};
  p.children.reserve(cells.size());
  for (const auto& cell : cells) p.children.push_back(descend(parent, cell.digits, max_depth));
  return p;
}

inline CubePartition subdivide_uniform(const CubeAddress& parent, unsigned max_depth = kDefaultMaxDepth) {
  validate(parent, max_depth);
  return realize(parent, uniform_cells(parent.dim()), max_depth);
}

inline CubePartition porous_split(const CubeAddress& parent, const CubeAddress& hole, unsigned k,
                                  unsigned max_depth = kDefaultMaxDepth) {
  validate(parent, max_depth);
  validate(hole, max_depth);
  if (k == 0) throw ParameterError("porous split needs k >= 1");
  if (!contains(parent, hole) || hole.level != parent.level + k) {
    throw ParameterError("hole " + to_string(hole) + " is not a depth-" + std::to_string(k) +
                         " descendant of " + to_string(parent));
  }
  return realize(parent, porous_split_cells(parent.dim(), digits_between(parent, hole)), max_depth);
}

/// Exact checks on a partition: children are dyadic descendants, pairwise
/// disjoint, and their volumes add up to the parent's.
inline bool is_exact_partition(const CubePartition& p) {
  if (p.children.empty()) return false;
  unsigned deepest = p.parent.level;
  for (const auto& c : p.children) {
    if (!contains(p.parent, c) || c.level == p.parent.level) return false;
    deepest = std::max(deepest, c.level);
  }
  const unsigned d = p.parent.dim();
  const unsigned span = (deepest - p.parent.level) * d;
  if (span > 63) throw ParameterError("partition too deep for exact volume check");
  // Volumes in units of the finest child's volume.
  std::uint64_t total = 0;
  for (const auto& c : p.children) total += std::uint64_t{1} << ((deepest - c.level) * d);
  if (total != (std::uint64_t{1} << span)) return false;
  // Dyadic cubes are either nested or disjoint.
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    for (std::size_t j = i + 1; j < p.children.size(); ++j) {
      if (contains(p.children[i], p.children[j]) || contains(p.children[j], p.children[i])) return false;
    }
  }
  return true;
}

/// Smallest and largest child-to-parent side ratio.
struct Regularity {
  double min_ratio = 1.0;
  double max_ratio = 0.0;
  [[nodiscard]] bool is_regular(double delta) const noexcept {
    return delta <= min_ratio && max_ratio <= 1.0 - delta;
  }
};

inline Regularity regularity(const CubePartition& p) {
  Regularity r;
  for (const auto& c : p.children) {
    const double ratio = std::ldexp(1.0, -static_cast<int>(c.level - p.parent.level));
    r.min_ratio = std::min(r.min_ratio, ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  return r;
}

/// Partition rules for growing a tree of cubes.
struct UniformDyadic {
  friend bool operator==(const UniformDyadic&, const UniformDyadic&) = default;
};

enum class HoleSelection {
  /// Smallest relative mass; ties go to the lexicographically smallest address.
  MinMassLexicographic,
};

struct PorousSplit {
  unsigned k = 1;
  double eps = 0.0;
  HoleSelection selection = HoleSelection::MinMassLexicographic;
  friend bool operator==(const PorousSplit&, const PorousSplit&) = default;
};

using PartitionRule = std::variant<UniformDyadic, PorousSplit>;

/// How one node of a realized tree was split: empty hole means uniform.
struct SplitRecord {
  std::vector<Digit> hole;
};

/// Address of the cube reached by following `path_digits` (indices into each
/// node's child list) through the splits recorded in `history`.
inline CubeAddress cube_at(unsigned d, const std::vector<std::size_t>& path_digits,
                           const std::vector<SplitRecord>& history, unsigned max_depth = kDefaultMaxDepth) {
  if (path_digits.size() > history.size()) throw ParameterError("path longer than its split history");
  CubeAddress a = CubeAddress::root(d);
  for (std::size_t i = 0; i < path_digits.size(); ++i) {
    const auto cells = history[i].hole.empty() ? uniform_cells(d) : porous_split_cells(d, history[i].hole);
    if (path_digits[i] >= cells.size()) {
      throw ParameterError("digit " + std::to_string(path_digits[i]) + " out of range for a node with " +
                           std::to_string(cells.size()) + " children");
    }
    a = descend(a, cells[path_digits[i]].digits, max_depth);
  }
  return a;
}

}  // namespace porodim
