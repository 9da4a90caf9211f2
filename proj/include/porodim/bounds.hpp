#pragma once

// The dimension-drop function for weakly mean porous measures.
//
// For a porous cube split around a depth-k hole of relative mass at most eps,
// s_{d,k}(eps) is the largest possible ratio H/lambda, characterized as the
// root of
//
//   (1 - eps) log((2^d - 1) sum_{i=1..k} 2^{-s i} / (1 - eps)) + eps log(1/eps)
//       = s eps log(2^k).
//
// t_{d,k} = d - s_{d,k} is the dimension lost per porous scale.

#include <cmath>
#include <cstddef>
#include <string>

#include "porodim/error.hpp"
#include "porodim/numeric.hpp"

namespace porodim {

inline constexpr double kSolveTolerance = 1e-12;
inline constexpr std::size_t kSolveMaxIterations = 200;

/// Upper end 2^-kd of the admissible eps range.
inline double eps_max(unsigned d, unsigned k) { return std::ldexp(1.0, -static_cast<int>(d * k)); }

namespace detail {

inline void check_dk(unsigned d, unsigned k) {
  require(d >= 1 && d <= 16, "d must be in 1..16");
  require(k >= 1 && k <= 64, "k must be in 1..64");
  require(d * k <= 1000, "2^-kd underflows");
}

/// sum_{i=1..k} 2^{-s i}
inline double geometric_sum(double s, unsigned k) {
  const double y = std::exp2(-s);
  double total = 0.0;
  double term = 1.0;
  for (unsigned i = 1; i <= k; ++i) {
    term *= y;
    total += term;
  }
  return total;
}

}  // namespace detail

/// Left minus right side of the defining equation. Strictly decreasing in s.
inline double s_equation(unsigned d, unsigned k, double eps, double s) {
  const double L = std::ldexp(1.0, static_cast<int>(d)) - 1.0;
  const double inner = L * detail::geometric_sum(s, k);
  if (eps == 0.0) return inner - 1.0;  // reduced form, same sign and root
  return (1.0 - eps) * std::log(inner / (1.0 - eps)) + psi(eps) - s * eps * k * kLn2;
}

/// s_{d,k}(eps): the unique root in [0, d], by bisection.
inline double solve_s(unsigned d, unsigned k, double eps) {
  detail::check_dk(d, k);
  const double top = eps_max(d, k);
  if (!(eps >= 0.0 && eps <= top)) {
    throw ParameterError("eps must lie in [0, 2^-kd] = [0, " + std::to_string(top) + "]");
  }
  const double dd = static_cast<double>(d);
  // F(d) is exactly zero at eps = 2^-kd; rounding may leave it a hair positive.
  if (s_equation(d, k, eps, dd) >= 0.0) return dd;
  auto f = [&](double s) { return s_equation(d, k, eps, s); };
  return bisect_decreasing(f, 0.0, dd, kSolveTolerance, kSolveMaxIterations).root;
}

/// t_{d,k}(eps) = d - s_{d,k}(eps).
inline double t_dk(unsigned d, unsigned k, double eps) { return static_cast<double>(d) - solve_s(d, k, eps); }

/// The lower bound on t_{d,k}(eps) for small eps: (2 / (5 log 2)) 2^-kd.
inline double t_small_eps_floor(unsigned d, unsigned k) { return 2.0 / (5.0 * kLn2) * eps_max(d, k); }

/// Hole depth for Euclidean porosity alpha after the r = 1/4 random
/// translation: k = ceil(log2(4 sqrt(d) / alpha)).
inline unsigned k_of_alpha(unsigned d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ParameterError("alpha must lie in (0, 1/2]");
  if (d == 0) throw ParameterError("d must be >= 1");
  const double v = std::log2(4.0 * std::sqrt(static_cast<double>(d)) / alpha);
  const double nearest = std::round(v);
  return static_cast<unsigned>(std::abs(v - nearest) < 1e-12 ? nearest : std::ceil(v));
}

/// t_{d,alpha}(eps) = 2^-d t_{d,k(alpha)}(eps).
inline double t_dalpha(unsigned d, double alpha, double eps) {
  return std::ldexp(t_dk(d, k_of_alpha(d, alpha), eps), -static_cast<int>(d));
}

/// c_d = 2 / (5 log 2 * 2^{4d} * d^{d/2}).
inline double c_const(unsigned d) {
  if (d == 0) throw ParameterError("d must be >= 1");
  const double dd = static_cast<double>(d);
  return 2.0 / (5.0 * kLn2 * std::exp2(4.0 * dd) * std::pow(dd, dd / 2.0));
}

/// d - eta t_{d,k}(eps) for dyadic mean (k, eta, eps)-porous measures.
inline double dyadic_dimension_bound(unsigned d, unsigned k, double eta, double eps) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
  return static_cast<double>(d) - eta * t_dk(d, k, eps);
}

/// d - eta t_{d,alpha}(eps) for mean (alpha, eta, eps)-porous measures.
inline double euclidean_dimension_bound(unsigned d, double alpha, double eta, double eps) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
  return static_cast<double>(d) - eta * t_dalpha(d, alpha, eps);
}

/// d - c_d eta alpha^d for mean (alpha, eta)-porous measures.
inline double mean_porous_dimension_bound(unsigned d, double alpha, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ParameterError("alpha must lie in (0, 1/2]");
  return static_cast<double>(d) - c_const(d) * eta * std::pow(alpha, static_cast<double>(d));
}

/// Everything reported for one (d, alpha) pair.
struct AlphaBounds {
  unsigned k = 0;
  double c_d = 0.0;
  /// 2^-kd >= 2^-3d d^-d/2 alpha^d, which makes c_d alpha^d <= 2^-d t floor.
  bool consistency_holds = false;
  double consistency_lhs = 0.0;
  double consistency_rhs = 0.0;
  /// eps below which t_{d,alpha} > 0 as stated (2^-2d d^-d/2 alpha^d) and as
  /// provable from the dyadic theorem (2^-d k(alpha)). They can disagree.
  double stated_positivity_threshold = 0.0;
  double provable_positivity_threshold = 0.0;
};

inline AlphaBounds alpha_bounds(unsigned d, double alpha) {
  AlphaBounds b;
  b.k = k_of_alpha(d, alpha);
  b.c_d = c_const(d);
  const double dd = static_cast<double>(d);
  b.consistency_lhs = eps_max(d, b.k);
  b.consistency_rhs = std::exp2(-3.0 * dd) * std::pow(dd, -dd / 2.0) * std::pow(alpha, dd);
  b.consistency_holds = b.consistency_lhs >= b.consistency_rhs;
  b.stated_positivity_threshold = std::exp2(-2.0 * dd) * std::pow(dd, -dd / 2.0) * std::pow(alpha, dd);
  b.provable_positivity_threshold = eps_max(d, b.k);
  return b;
}

}  // namespace porodim
