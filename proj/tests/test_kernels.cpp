#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "geoling/kernels.hpp"
#include "test_util.hpp"

using namespace geoling;

TEST(Rbf, ScalarValues) {
  EXPECT_DOUBLE_EQ(rbf(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(rbf(std::log(2.0), 1.0), 0.5);
  EXPECT_NEAR(rbf(4.0, 0.25), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(rbf(4.0, 0.25), 0.367879441, 1e-9);
}

TEST(Rbf, MonotoneDecreasingInSquaredDistance) {
  double prev = 1.1;
  for (double d2 = 0.0; d2 < 10.0; d2 += 0.25) {
    const double v = rbf(d2, 0.7);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Rbf, RejectsBadArguments) {
  EXPECT_THROW(rbf(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(rbf(1.0, 0.0), std::invalid_argument);
}

TEST(GramGeo, ConstantPointSetIsAllOnes) {
  PointSet ps({{2, 3}, {2, 3}, {2, 3}});
  const Gram g = gram_geo(ps, 1.0);
  EXPECT_TRUE(g.k.isApprox(Eigen::MatrixXd::Ones(3, 3)));
}

TEST(GramDelta, Patterns) {
  const Gram g = gram_delta(ObservationColumn::categorical({0, 0, 1}, 2));
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_TRUE(g.k.isApprox(expected));

  const Gram distinct = gram_delta(ObservationColumn::categorical({0, 1, 2}, 3));
  EXPECT_TRUE(distinct.k.isApprox(Eigen::MatrixXd::Identity(3, 3)));

  const Gram equal = gram_delta(ObservationColumn::binary({1, 1, 1}));
  EXPECT_TRUE(equal.k.isApprox(Eigen::MatrixXd::Ones(3, 3)));
}

TEST(GramDelta, RejectsFrequency) {
  Eigen::MatrixXd f(2, 1);
  f << 0.1, 0.2;
  EXPECT_THROW(gram_delta(ObservationColumn::frequency(f)), std::invalid_argument);
}

TEST(GramFreq, Values) {
  Eigen::MatrixXd same(2, 1);
  same << 0.4, 0.4;
  EXPECT_DOUBLE_EQ(gram_freq(ObservationColumn::frequency(same), 2.0).k(0, 1), 1.0);

  Eigen::MatrixXd scalar(2, 1);
  scalar << 0.0, 1.0;
  EXPECT_NEAR(gram_freq(ObservationColumn::frequency(scalar), 1.0).k(0, 1), std::exp(-1.0), 1e-15);

  Eigen::MatrixXd simplex(2, 2);
  simplex << 1, 0, 0, 1;  // squared distance 2
  EXPECT_NEAR(gram_freq(ObservationColumn::frequency(simplex), 0.5).k(0, 1), std::exp(-1.0), 1e-15);
}

TEST(MedianBandwidth, FromMedianDistance) {
  // collinear points 0,1,3: median distance 2 -> gamma 0.25
  PointSet ps({{0, 0}, {1, 0}, {3, 0}});
  EXPECT_DOUBLE_EQ(median_bandwidth(ps), 0.25);

  PointSet square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_DOUBLE_EQ(median_bandwidth(square), 1.0);

  PointSet unit({{0, 0}, {1, 0}});
  EXPECT_DOUBLE_EQ(median_bandwidth(unit), 1.0);
}

TEST(MedianBandwidth, DegeneratePointSetThrows) {
  PointSet ps({{1, 1}, {1, 1}, {1, 1}});
  EXPECT_THROW(median_bandwidth(ps), std::invalid_argument);
}

TEST(Gram, ConstructorsYieldValidKernels) {
  RngEngine g = make_engine(7);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(uniform_below(g, 48));
    Gram k = [&] {
      switch (t % 3) {
        case 0: return testutil::random_rbf_gram(n, g);
        case 1: return gram_delta(testutil::random_categorical_column(n, 3, g));
        default: {
          Eigen::MatrixXd f(n, 1);
          for (int i = 0; i < n; ++i) f(i, 0) = uniform_double(g);
          return gram_freq(ObservationColumn::frequency(f), 1.0 + uniform_double(g));
        }
      }
    }();
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      EXPECT_DOUBLE_EQ(k.k(i, i), 1.0);
      for (Eigen::Index j = 0; j < k.size(); ++j) {
        EXPECT_EQ(k.k(i, j), k.k(j, i));
        EXPECT_GE(k.k(i, j), 0.0);
        EXPECT_LE(k.k(i, j), 1.0);
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.k);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Gram, DeltaMatchesLargeGammaRbfPattern) {
  RngEngine g = make_engine(13);
  const auto col = testutil::random_binary_column(20, g);
  const Gram delta = gram_delta(col);
  Eigen::MatrixXd f(20, 1);
  for (int i = 0; i < 20; ++i) {
    f(i, 0) = static_cast<double>(col.discrete()[static_cast<size_t>(i)]);
  }
  const Gram sharp = gram_freq(ObservationColumn::frequency(f), 1e6);
  EXPECT_TRUE((delta.k - sharp.k).cwiseAbs().maxCoeff() < 1e-6);
}

TEST(IncompleteCholesky, AllOnesIsRankOne) {
  Gram ones{Eigen::MatrixXd::Ones(6, 6)};
  const LowRankGram lr = incomplete_cholesky(accessor_gram(ones), 1e-12);
  EXPECT_EQ(lr.rank(), 1);
  EXPECT_TRUE(lr.factor.isApprox(Eigen::MatrixXd::Ones(6, 1)));
  EXPECT_NEAR(lr.residual_trace, 0.0, 1e-12);
}

TEST(IncompleteCholesky, IdentityAtZeroToleranceIsFullRank) {
  Gram eye{Eigen::MatrixXd::Identity(5, 5)};
  const LowRankGram lr = incomplete_cholesky(accessor_gram(eye), 0.0);
  EXPECT_EQ(lr.rank(), 5);
  EXPECT_TRUE(lr.factor.isApprox(Eigen::MatrixXd::Identity(5, 5)));
  // ties pivot to the lowest index, so the order is 0..4
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(lr.pivots[i], static_cast<Eigen::Index>(i));
  }
}

TEST(IncompleteCholesky, RandomRbfGramCloseToExact) {
  RngEngine g = make_engine(29);
  const Gram k = testutil::random_rbf_gram(8, g);
  // PSD oracle: full eigendecomposition confirms the input is factorable
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.k);
  ASSERT_GE(eig.eigenvalues().minCoeff(), -1e-10);

  const LowRankGram lr = incomplete_cholesky(accessor_gram(k), 1e-10);
  const Eigen::MatrixXd recon = lr.factor * lr.factor.transpose();
  EXPECT_LE((k.k - recon).norm(), 1e-4);
}

TEST(IncompleteCholesky, ZeroToleranceReconstructsPsdInputs) {
  RngEngine g = make_engine(37);
  for (int t = 0; t < 10; ++t) {
    const int n = 4 + static_cast<int>(uniform_below(g, 17));
    const Gram k = testutil::random_rbf_gram(n, g);
    const LowRankGram lr = incomplete_cholesky(accessor_gram(k), 0.0);
    EXPECT_LE((k.k - lr.factor * lr.factor.transpose()).norm(), 1e-8 * n);
  }
}

TEST(IncompleteCholesky, NonPsdInputThrows) {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  Gram g{bad};
  EXPECT_THROW(incomplete_cholesky(accessor_gram(g), 0.0), std::runtime_error);
}

TEST(IncompleteCholesky, DeltaKernelRankEqualsCategoryCount) {
  const auto col = ObservationColumn::categorical({0, 1, 2, 0, 1, 2, 0}, 3);
  const LowRankGram lr = incomplete_cholesky(accessor_column(col, std::nullopt), 1e-12);
  EXPECT_EQ(lr.rank(), 3);
}
