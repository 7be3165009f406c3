#pragma once

#include <Eigen/Dense>

#include "geoling/geometry.hpp"
#include "geoling/lingdata.hpp"

namespace geoling {

struct MoranResult {
  double I = 0.0;
  Eigen::Index n = 0;
  double null_expectation = 0.0;  // -1 / (n - 1)
};

/// I = [n / sum_i r_i^2] * [sum_ij w_ij r_i r_j / sum_ij w_ij] with
/// r = x - mean(x). Throws on constant x or all-zero weights.
MoranResult morans_i(const Eigen::VectorXd& x, const SpatialWeights& w);

struct JoinCountResult {
  double num_agree = 0.0;
  double total_weight = 0.0;
};

/// Weighted agreement sum over linked pairs: sum_ij w_ij [x_i == x_j],
/// diagonal excluded by the weights' zero diagonal.
JoinCountResult join_counts(const ObservationColumn& col, const SpatialWeights& w);

struct MantelResult {
  double r = 0.0;
  Eigen::Index pairs_used = 0;  // n(n-1)/2
};

/// Pearson correlation between the upper-triangle entries of two symmetric
/// zero-diagonal matrices. Throws when either side is constant off-diagonal.
MantelResult mantel(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy);
MantelResult mantel(const Eigen::MatrixXd& dx, const DistanceMatrix& dy);

/// Pairwise linguistic distances: 0/1 delta for discrete columns, |x_i - x_j|
/// for scalar frequencies, Euclidean norm for simplex vectors.
Eigen::MatrixXd linguistic_distance(const ObservationColumn& col);

}  // namespace geoling
