#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle_values.hpp"
#include "porodim/bounds.hpp"
#include "porodim/dimension.hpp"
#include "porodim/oracle.hpp"

using namespace porodim;
namespace ov = porodim::oracle_values;

TEST(NodeStats, UniformChildren) {
  for (unsigned d = 1; d <= 3; ++d) {
    const auto p = subdivide_uniform(CubeAddress::root(d));
    const auto s = node_stats(p, OffspringDistribution{std::vector<double>(arity(d), 1.0 / arity(d))});
    EXPECT_NEAR(s.H, d * kLn2, 1e-15);
    EXPECT_NEAR(s.lambda, kLn2, 1e-15);
    EXPECT_NEAR(s.ratio, double(d), 1e-14);
  }
}

TEST(NodeStats, PointMass) {
  const auto p = subdivide_uniform(CubeAddress::root(2));
  const auto s = node_stats(p, OffspringDistribution{{0.0, 1.0, 0.0, 0.0}});
  EXPECT_EQ(s.H, 0.0);
  EXPECT_EQ(s.ratio, 0.0);
  EXPECT_NEAR(s.lambda, kLn2, 1e-15);
}

TEST(NodeStats, PorousSplitWithGeometricLevels) {
  const auto root = CubeAddress::root(2);
  const auto split = porous_split(root, descend(root, {0, 0}), 2);
  const double y = ov::y_d2k2;
  std::vector<double> w{y, y, y, y * y, y * y, y * y, 0.0};
  const auto s = node_stats(split, OffspringDistribution{w});
  EXPECT_NEAR(s.ratio, ov::s_2_2_0, 1e-9);
  EXPECT_NEAR(s.ratio, solve_s(2, 2, 0.0), 1e-9);
}

TEST(NodeStats, MismatchedLengthsAreRejected) {
  const auto p = subdivide_uniform(CubeAddress::root(1));
  EXPECT_THROW(node_stats(p, OffspringDistribution{{1.0}}), ParameterError);
}

TEST(NodeStats, RatioIsDOnlyForVolumeWeights) {
  // 0 <= ratio <= d, with equality exactly at relative volumes.
  CounterRng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned d = 1 + trial % 3;
    const unsigned k = 1 + (trial / 3) % 3;
    const auto root = CubeAddress::root(d);
    std::vector<Digit> hole(k);
    for (auto& h : hole) h = static_cast<Digit>(rng() % arity(d));
    const auto split = trial % 2 ? porous_split(root, descend(root, hole), k) : subdivide_uniform(root);
    std::vector<double> w(split.children.size());
    double total = 0.0;
    for (auto& v : w) total += (v = -std::log(1.0 - rng.uniform()));
    for (auto& v : w) v /= total;
    const auto s = node_stats(split, OffspringDistribution{w});
    EXPECT_GE(s.ratio, 0.0);
    EXPECT_LT(s.ratio, d - 1e-9);
    // Relative volumes reach d.
    std::vector<double> vol;
    for (const auto& c : split.children) vol.push_back(std::ldexp(1.0, -static_cast<int>(d * c.level)));
    EXPECT_NEAR(node_stats(split, OffspringDistribution{vol}).ratio, double(d), 1e-9);
  }
}

TEST(Trajectory, UniformHasFullDimension) {
  for (unsigned d = 1; d <= 2; ++d) {
    const TreeMeasure tree(uniform_measure(d), UniformDyadic{}, 100);
    const auto t = path_trajectory(tree, sample_path(tree, 4));
    ASSERT_EQ(t.steps.size(), 100u);
    for (const auto& st : t.steps) {
      EXPECT_NEAR(st.Dn, double(d), 1e-12);
      EXPECT_EQ(st.Mbar, kLn2);
      EXPECT_EQ(st.lambda, kLn2);
      EXPECT_NEAR(st.resH, 0.0, 1e-12);
      EXPECT_NEAR(st.resL, 0.0, 1e-12);
      EXPECT_FALSE(st.porous);
    }
  }
}

TEST(Trajectory, PointMassHasZeroDimension) {
  const TreeMeasure tree(point_mass_at_origin(1), UniformDyadic{}, 100);
  const auto t = path_trajectory(tree, sample_path(tree, 0));
  EXPECT_EQ(t.sum_H, 0.0);
  for (const auto& st : t.steps) {
    EXPECT_EQ(st.Dn, 0.0);
    EXPECT_EQ(st.I, 0.0);
  }
}

TEST(Trajectory, BernoulliConvergesToEntropyDimension) {
  const TreeMeasure tree(bernoulli_measure({0.25, 0.75}), UniformDyadic{}, 10000);
  const auto t = path_trajectory(tree, sample_path(tree, 12));
  EXPECT_NEAR(t.terminal_D(), ov::bernoulli_dim, 0.02);
  EXPECT_LT(std::abs(t.steps.back().resH), 0.02);
  EXPECT_NEAR(t.steps.back().resL, 0.0, 1e-12);
}

TEST(Trajectory, StepInvariantsWithPorousSplits) {
  const auto mu = make_measure(GeneratorSpec{2, DirichletGenerator{{0.4, 0.4, 0.4, 0.4}}, 8});
  const unsigned k = 2;
  const TreeMeasure tree(mu, PorousSplit{k, 0.02}, 800);
  const auto path = sample_path(tree, 1);
  const auto t = path_trajectory(tree, path);
  std::size_t porous = 0;
  double HP = 0.0;
  double MP = 0.0;
  for (const auto& st : t.steps) {
    EXPECT_GE(st.I, 0.0);
    EXPECT_EQ(st.Mbar, st.L);
    const double levels = st.L / kLn2;
    EXPECT_NEAR(levels, std::round(levels), 1e-12);
    EXPECT_GE(levels, 1.0 - 1e-12);
    EXPECT_LE(levels, k + 1e-12);
    EXPECT_GE(st.Dn, 0.0);
    EXPECT_LE(st.Dn, 2.0);
    if (st.porous) {
      ++porous;
      HP += st.H;
      MP += st.Mbar;
      EXPECT_LE(st.H / st.lambda, solve_s(2, k, 0.02) + 1e-9);
    } else {
      EXPECT_EQ(st.L, kLn2);
    }
  }
  EXPECT_GT(porous, 0u);
  EXPECT_NEAR(t.H_P, HP, 1e-9);
  EXPECT_NEAR(t.Mbar_P, MP, 1e-9);
  EXPECT_EQ(t.level, path.lineage.levels());
  EXPECT_EQ(t.non_porous, t.steps.size() - porous);
  EXPECT_NEAR(t.eta(), 1.0 - double(t.non_porous) / double(t.level), 1e-15);
  // The bookkeeping bound D_n <= d(1 - eta_n) + eta_n H_P / Mbar_P holds exactly.
  const double eta = t.eta();
  EXPECT_LE(t.terminal_D(), 2.0 * (1.0 - eta) + eta * t.H_P / t.Mbar_P + 1e-12);
}

TEST(Trajectory, MartingaleResidualsShrink) {
  // |res(n)| < 5 n^{-1/2} sigma at n in {1e3, 1e4} across a seed battery.
  const auto mixture = GeneratorSpec{1, MixtureGenerator{{{{0.5, 0.5}, 0.5}, {{0.2, 0.8}, 0.5}}}, 3};
  const auto dirichlet = GeneratorSpec{2, DirichletGenerator{{1.0, 1.0, 1.0, 1.0}}, 3};
  for (const auto& spec : {mixture, dirichlet}) {
    const TreeMeasure tree(make_measure(spec), PorousSplit{1, 0.1}, 10000);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = path_trajectory(tree, sample_path(tree, seed));
      // sigma estimated from the information and length increments.
      double mI = 0, mI2 = 0, mL = 0, mL2 = 0;
      for (const auto& st : t.steps) {
        mI += st.I - st.H;
        mI2 += (st.I - st.H) * (st.I - st.H);
        mL += st.L - st.lambda;
        mL2 += (st.L - st.lambda) * (st.L - st.lambda);
      }
      const double n = double(t.steps.size());
      const double sI = std::sqrt(mI2 / n - (mI / n) * (mI / n));
      const double sL = std::sqrt(mL2 / n - (mL / n) * (mL / n));
      for (std::size_t at : {1000u, 10000u}) {
        const auto& st = t.steps[at - 1];
        EXPECT_LT(std::abs(st.resH), 5.0 * sI / std::sqrt(double(at)) + 1e-12);
        EXPECT_LT(std::abs(st.resL), 5.0 * sL / std::sqrt(double(at)) + 1e-12);
      }
    }
  }
}

TEST(Estimator, ExactOnUniformAndPointMass) {
  for (unsigned depth : {1u, 7u, 50u}) {
    const TreeMeasure u(uniform_measure(2), UniformDyadic{}, depth);
    const auto e = estimate_packing_dim(u, depth, 5, 1);
    EXPECT_NEAR(e.value, 2.0, 1e-12);
    EXPECT_NEAR(e.mean, 2.0, 1e-12);
    const TreeMeasure p(point_mass_at_origin(2), PorousSplit{1, 0.0}, depth);
    const auto z = estimate_packing_dim(p, depth, 5, 1);
    EXPECT_EQ(z.value, 0.0);
  }
}

TEST(Estimator, BernoulliDimension) {
  const TreeMeasure tree(bernoulli_measure({0.25, 0.75}), UniformDyadic{}, 10000);
  const auto e = estimate_packing_dim(tree, 10000, 20, 5);
  EXPECT_NEAR(e.value, ov::bernoulli_dim, 0.02);
  EXPECT_NEAR(e.mean, ov::bernoulli_dim, 0.02);
  EXPECT_EQ(e.paths.size(), 20u);
  EXPECT_LE(e.p95, e.value);
  EXPECT_GE(e.p95, e.mean - 1e-12);
}

TEST(Estimator, ScheduleIndependent) {
  const auto mu = make_measure(GeneratorSpec{2, DirichletGenerator{{0.5, 0.5, 0.5, 0.5}}, 6});
  const TreeMeasure tree(mu, PorousSplit{2, 0.01}, 300);
  const auto a = estimate_packing_dim(tree, 300, 12, 9, 1);
  const auto b = estimate_packing_dim(tree, 300, 12, 9, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.mean, b.mean);
  for (std::size_t i = 0; i < a.paths.size(); ++i) EXPECT_EQ(a.paths[i].D, b.paths[i].D);
}

TEST(Estimator, Errors) {
  const TreeMeasure tree(uniform_measure(1), UniformDyadic{}, 10);
  EXPECT_THROW(estimate_packing_dim(tree, 10, 0, 1), ParameterError);
  EXPECT_THROW(estimate_packing_dim(tree, 11, 1, 1), DepthError);
}

TEST(Hmin, ClosedFormAndLimits) {
  EXPECT_NEAR(hmin_and_converse(1, 0.25, 0.5).hmin, ov::hmin_1_025, 1e-15);
  EXPECT_NEAR(hmin_and_converse(1, 0.25, 0.5).lower_bound, ov::hmin_bound_1_025_05, 1e-15);
  for (unsigned d = 1; d <= 4; ++d) {
    EXPECT_EQ(hmin_and_converse(d, std::ldexp(1.0, -static_cast<int>(d)), 0.0).hmin, d * kLn2);
    EXPECT_EQ(hmin_and_converse(d, 0.0, 0.0).hmin, 0.0);
  }
  EXPECT_THROW(hmin_and_converse(1, 0.5 + 1e-12, 0.0), ParameterError);
  EXPECT_THROW(hmin_and_converse(1, 0.1, 1.5), ParameterError);
}

TEST(Hmin, MatchesGridMinimization) {
  for (double eps : {0.0, 0.1, 0.25, 0.37, 0.5}) {
    EXPECT_NEAR(hmin_grid_minimum(1, eps, 1e-3), hmin_and_converse(1, eps, 0.0).hmin, 1e-6) << eps;
  }
  for (double eps : {0.0, 0.05, 0.125, 0.2, 0.25}) {
    EXPECT_NEAR(hmin_grid_minimum(2, eps, 1e-3), hmin_and_converse(2, eps, 0.0).hmin, 1e-6) << eps;
  }
}

TEST(Hmin, ConverseBoundApproachesD) {
  for (unsigned d = 1; d <= 3; ++d) {
    const double top = std::ldexp(1.0, -static_cast<int>(d));
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 30; ++j) {
      const double h = std::ldexp(1.0, -j);
      const auto b = hmin_and_converse(d, top * (1.0 - h), h);
      const double next = d - b.lower_bound;
      EXPECT_LE(next, gap + 1e-15);
      gap = next;
    }
    EXPECT_LT(gap, 1e-3);
  }
}
