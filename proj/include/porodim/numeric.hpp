#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

namespace porodim {

inline constexpr double kLn2 = std::numbers::ln2;

/// Entropy function t log(1/t) with the 0 log 0 = 0 convention.
inline double psi(double t) noexcept { return t > 0.0 ? -t * std::log(t) : 0.0; }

/// Shannon entropy (nats) of a probability vector.
inline double entropy(std::span<const double> p) noexcept {
  double h = 0.0;
  for (double v : p) h += psi(v);
  return h;
}

/// Binary entropy in bits.
inline double binary_entropy_bits(double e) noexcept { return (psi(e) + psi(1.0 - e)) / kLn2; }

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Result of a bracketed root search.
struct RootResult {
  double root = 0.0;
  std::size_t iterations = 0;
};

/// Bisection for a function that is positive at `lo` and non-positive at
/// `hi` (decreasing sign change). Stops once the bracket is no wider than
/// `tol`, cannot be split further in floating point, or after `max_iter`
/// halvings.
template <class F>
RootResult bisect_decreasing(F&& f, double lo, double hi, double tol, std::size_t max_iter) {
  RootResult out;
  for (; out.iterations < max_iter; ++out.iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol) {
      ++out.iterations;
      break;
    }
  }
  out.root = lo + 0.5 * (hi - lo);
  return out;
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
template <class F>
double golden_section_max(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace porodim
