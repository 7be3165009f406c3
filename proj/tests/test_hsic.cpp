#include <gtest/gtest.h>

#include <cmath>

#include "geoling/hsic.hpp"
#include "test_util.hpp"

using namespace geoling;

TEST(Hsic, ConstantKernelGivesZero) {
  RngEngine g = make_engine(3);
  const Gram ky = testutil::random_rbf_gram(6, g);
  const Gram ones{Eigen::MatrixXd::Ones(6, 6)};
  EXPECT_NEAR(hsic_dense(ones, ky).raw, 0.0, 1e-14);
  EXPECT_NEAR(hsic_oracle(ones, ky).raw, 0.0, 1e-14);
}

TEST(Hsic, TwoPointClosedForm) {
  // Kx = Ky = [[1, a], [a, 1]] gives (1 - a)^2 / 4
  for (double a : {0.0, 0.25, 0.7}) {
    Eigen::MatrixXd m(2, 2);
    m << 1, a, a, 1;
    const Gram k{m};
    EXPECT_NEAR(hsic_dense(k, k).raw, (1 - a) * (1 - a) / 4.0, 1e-14);
  }
  const Gram eye{Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_NEAR(hsic_dense(eye, eye).raw, 0.25, 1e-15);
  EXPECT_NEAR(hsic_oracle(eye, eye).raw, 0.25, 1e-15);
}

TEST(Hsic, OracleMatchesDenseOnRandomPairs) {
  RngEngine g = make_engine(41);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + static_cast<int>(uniform_below(g, 18));
    const Gram kx = testutil::random_rbf_gram(n, g);
    const Gram ky = (t % 2 == 0) ? testutil::random_rbf_gram(n, g)
                                 : gram_delta(testutil::random_categorical_column(n, 3, g));
    EXPECT_NEAR(hsic_oracle(kx, ky).raw, hsic_dense(kx, ky).raw, 1e-12);
  }
}

TEST(Hsic, ExactLowRankFactorsMatchDense) {
  RngEngine g = make_engine(43);
  for (int t = 0; t < 10; ++t) {
    const int n = 5 + static_cast<int>(uniform_below(g, 16));
    const Gram kx = testutil::random_rbf_gram(n, g);
    const Gram ky = testutil::random_rbf_gram(n, g);
    const LowRankGram a = incomplete_cholesky(accessor_gram(kx), 0.0);
    const LowRankGram b = incomplete_cholesky(accessor_gram(ky), 0.0);
    EXPECT_NEAR(hsic_lowrank(a, b).raw, hsic_dense(kx, ky).raw, 1e-9);
  }
}

TEST(Hsic, RankOneOnesFactorsGiveZero) {
  LowRankGram a;
  a.factor = Eigen::MatrixXd::Ones(8, 1);
  LowRankGram b = a;
  EXPECT_NEAR(hsic_lowrank(a, b).raw, 0.0, 1e-15);
}

TEST(Hsic, BitwiseSymmetric) {
  RngEngine g = make_engine(47);
  for (int t = 0; t < 10; ++t) {
    const int n = 4 + static_cast<int>(uniform_below(g, 12));
    const Gram kx = testutil::random_rbf_gram(n, g);
    const Gram ky = testutil::random_rbf_gram(n, g);
    EXPECT_EQ(hsic_dense(kx, ky).raw, hsic_dense(ky, kx).raw);
  }
}

TEST(Hsic, NonnegativeForPsdInputs) {
  RngEngine g = make_engine(53);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + static_cast<int>(uniform_below(g, 20));
    const Gram kx = testutil::random_rbf_gram(n, g);
    const Gram ky = gram_delta(testutil::random_binary_column(n, g));
    const HsicValue v = hsic_dense(kx, ky);
    EXPECT_GE(v.raw, -1e-12);
    EXPECT_GE(v.value, 0.0);
  }
}

TEST(Hsic, JointPermutationInvariance) {
  RngEngine g = make_engine(59);
  const int n = 12;
  const Gram kx = testutil::random_rbf_gram(n, g);
  const Gram ky = testutil::random_rbf_gram(n, g);
  const double base = hsic_dense(kx, ky).raw;
  for (int t = 0; t < 5; ++t) {
    const auto perm = random_permutation(n, g);
    Eigen::MatrixXd px(n, n), py(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        px(i, j) = kx.k(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
        py(i, j) = ky.k(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
      }
    }
    EXPECT_NEAR(hsic_dense(Gram{px}, Gram{py}).raw, base, 1e-12);
  }
}

TEST(Hsic, OracleGuardsLargeInputs) {
  const Gram big{Eigen::MatrixXd::Identity(65, 65)};
  EXPECT_THROW(hsic_oracle(big, big), std::invalid_argument);
}

TEST(Hsic, DimensionMismatchThrows) {
  const Gram a{Eigen::MatrixXd::Identity(4, 4)};
  const Gram b{Eigen::MatrixXd::Identity(5, 5)};
  EXPECT_THROW(hsic_dense(a, b), std::invalid_argument);
}
