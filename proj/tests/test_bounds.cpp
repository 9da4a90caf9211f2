#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "porodim/bounds.hpp"

using namespace porodim;
namespace ov = porodim::oracle_values;

TEST(SolveS, EpsZeroClosedForms) {
  EXPECT_NEAR(solve_s(2, 1, 0.0), std::log2(3.0), 1e-11);
  EXPECT_NEAR(solve_s(2, 2, 0.0), ov::s_2_2_0, 1e-11);
  EXPECT_NEAR(solve_s(1, 1, 0.0), 0.0, 1e-11);
  for (unsigned d = 1; d <= 3; ++d) {
    for (unsigned k = 1; k <= 3; ++k) {
      const double s = solve_s(d, k, 0.0);
      double sum = 0.0;
      for (unsigned i = 1; i <= k; ++i) sum += std::exp2(-s * i);
      EXPECT_NEAR((std::exp2(d) - 1.0) * sum, 1.0, 1e-9) << d << "," << k;
    }
  }
}

TEST(SolveS, UpperEndpointIsD) {
  for (unsigned d = 1; d <= 3; ++d) {
    for (unsigned k = 1; k <= 3; ++k) {
      EXPECT_NEAR(solve_s(d, k, eps_max(d, k)), double(d), 1e-9);
      EXPECT_NEAR(t_dk(d, k, eps_max(d, k)), 0.0, 1e-9);
    }
  }
}

TEST(SolveS, BinaryEntropyForD1K1) {
  EXPECT_NEAR(solve_s(1, 1, 0.3), ov::s_1_1_03, 1e-11);
  for (int i = 0; i <= 100; ++i) {
    const double e = 0.5 * i / 100.0;
    EXPECT_NEAR(solve_s(1, 1, e), binary_entropy_bits(e), 1e-9) << e;
  }
}

TEST(SolveS, Battery) {
  for (const auto& b : ov::battery) {
    const double top = eps_max(b.d, b.k);
    EXPECT_NEAR(solve_s(b.d, b.k, 0.0), b.s[0], 1e-10);
    EXPECT_NEAR(solve_s(b.d, b.k, top / 2), b.s[1], 1e-10);
    EXPECT_NEAR(solve_s(b.d, b.k, top), b.s[2], 1e-10);
  }
}

TEST(SolveS, StrictlyIncreasingOnGrid) {
  for (unsigned d = 1; d <= 3; ++d) {
    for (unsigned k = 1; k <= 3; ++k) {
      const double top = eps_max(d, k);
      double previous = solve_s(d, k, 0.0);
      for (int i = 1; i < 100; ++i) {
        const double s = solve_s(d, k, top * i / 99.0);
        EXPECT_GT(s - previous, 1e-10) << d << "," << k << " at " << i;
        previous = s;
      }
    }
  }
}

TEST(SolveS, RefinementShrinksJumps) {
  // Halving the grid step should shrink the largest jump; near eps = 0 the
  // curve behaves like eps log(1/eps), so the ratio is at most about 1/2.
  for (unsigned d = 1; d <= 2; ++d) {
    for (unsigned k = 1; k <= 2; ++k) {
      const double top = eps_max(d, k);
      auto max_jump = [&](int n) {
        double worst = 0.0;
        double prev = solve_s(d, k, 0.0);
        for (int i = 1; i <= n; ++i) {
          const double s = solve_s(d, k, top * i / n);
          worst = std::max(worst, s - prev);
          prev = s;
        }
        return worst;
      };
      double coarse = max_jump(64);
      for (int n = 128; n <= 1024; n *= 2) {
        const double fine = max_jump(n);
        EXPECT_LT(fine, 0.6 * coarse) << d << "," << k << " n=" << n;
        coarse = fine;
      }
    }
  }
}

TEST(SolveS, RejectsOutOfRangeEps) {
  EXPECT_THROW(solve_s(2, 1, -1e-9), ParameterError);
  EXPECT_THROW(solve_s(2, 1, 0.25 + 1e-9), ParameterError);
  EXPECT_THROW(solve_s(0, 1, 0.0), ParameterError);
  EXPECT_THROW(solve_s(1, 0, 0.0), ParameterError);
  EXPECT_THROW(solve_s(1, 1, std::nan("")), ParameterError);
}

TEST(Tdk, ClosedForms) {
  EXPECT_NEAR(t_dk(2, 1, 0.0), ov::t_2_1_0, 1e-9);
  EXPECT_NEAR(t_dk(2, 1, 0.0), 2.0 - std::log2(3.0), 1e-9);
  EXPECT_NEAR(t_dk(2, 2, 0.0), ov::t_2_2_0, 1e-9);
  const double y = (-1.0 + std::sqrt(7.0 / 3.0)) / 2.0;
  EXPECT_NEAR(y, ov::y_d2k2, 1e-15);
  EXPECT_NEAR(t_dk(2, 2, 0.0), 2.0 - std::log2(1.0 / y), 1e-9);
}

TEST(Tdk, ExceedsSmallEpsFloor) {
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned k = 1; k <= 6; ++k) EXPECT_GT(t_dk(d, k, 0.0), t_small_eps_floor(d, k)) << d << "," << k;
  }
}

TEST(Tdk, PositiveBelowUpperEnd) {
  for (unsigned d = 1; d <= 3; ++d) {
    for (unsigned k = 1; k <= 3; ++k) {
      const double top = eps_max(d, k);
      for (double f : {0.0, 0.25, 0.5, 0.9, 0.999}) EXPECT_GT(t_dk(d, k, f * top), 0.0);
    }
  }
}

TEST(KOfAlpha, Examples) {
  EXPECT_EQ(k_of_alpha(2, 0.25), 5u);
  EXPECT_EQ(k_of_alpha(1, 0.5), 3u);
  EXPECT_EQ(k_of_alpha(1, 0.25), 4u);
  EXPECT_EQ(k_of_alpha(4, 0.5), 4u);  // log2(16) exactly
  EXPECT_THROW(k_of_alpha(1, 0.0), ParameterError);
  EXPECT_THROW(k_of_alpha(1, 0.51), ParameterError);
  EXPECT_THROW(k_of_alpha(0, 0.25), ParameterError);
}

TEST(TdAlpha, IsScaledTdk) {
  EXPECT_DOUBLE_EQ(t_dalpha(2, 0.25, 0.0), 0.25 * t_dk(2, 5, 0.0));
  EXPECT_NEAR(t_dalpha(2, 0.25, 0.0), ov::t_dalpha_2_025_0, 1e-12);
}

TEST(Constants, CdAndBounds) {
  EXPECT_NEAR(c_const(2), ov::c_2, 1e-15);
  EXPECT_NEAR(dyadic_dimension_bound(2, 1, 1.0, 0.0), std::log2(3.0), 1e-9);
  EXPECT_NEAR(dyadic_dimension_bound(1, 1, 1.0, 0.3), ov::s_1_1_03, 1e-9);
  EXPECT_DOUBLE_EQ(dyadic_dimension_bound(2, 1, 0.0, 0.0), 2.0);
  EXPECT_NEAR(euclidean_dimension_bound(2, 0.25, 1.0, 0.0), 2.0 - ov::t_dalpha_2_025_0, 1e-12);
  EXPECT_NEAR(mean_porous_dimension_bound(2, 0.25, 1.0), 2.0 - ov::c_2 / 16.0, 1e-15);
  EXPECT_THROW(dyadic_dimension_bound(2, 1, 1.5, 0.0), ParameterError);
}

TEST(Constants, MeanPorousBoundIsWeakerThanEuclidean) {
  // c_d alpha^d <= t_{d,alpha}(0) on a grid of alpha.
  for (unsigned d = 1; d <= 3; ++d) {
    for (double alpha : {0.5, 0.3, 0.25, 0.1, 0.05}) {
      EXPECT_LE(c_const(d) * std::pow(alpha, d), t_dalpha(d, alpha, 0.0)) << d << "," << alpha;
      const auto b = alpha_bounds(d, alpha);
      EXPECT_TRUE(b.consistency_holds) << d << "," << alpha;
    }
  }
}

TEST(Constants, PositivityThresholdsAreBothReported) {
  const auto b = alpha_bounds(2, 0.25);
  EXPECT_EQ(b.k, 5u);
  EXPECT_DOUBLE_EQ(b.provable_positivity_threshold, std::ldexp(1.0, -10));
  EXPECT_DOUBLE_EQ(b.stated_positivity_threshold, std::ldexp(1.0, -4) * 0.5 * 0.0625);
  EXPECT_LT(b.provable_positivity_threshold, b.stated_positivity_threshold);
}
