#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "geoling/geometry.hpp"
#include "geoling/lingdata.hpp"

namespace geoling {

/// Gaussian RBF similarity exp(-gamma * d^2).
double rbf(double squared_distance, double gamma);

/// Symmetric kernel similarity matrix with unit diagonal and entries in [0, 1].
struct Gram {
  Eigen::MatrixXd k;

  Eigen::Index size() const { return k.rows(); }
};

/// RBF Gram over geolocations under the point set's metric.
Gram gram_geo(const PointSet& ps, double gamma);

/// Delta kernel over discrete observations: K_ij = [x_i == x_j].
Gram gram_delta(const ObservationColumn& col);

/// RBF Gram over frequency vectors: K_ij = exp(-gamma * ||x_i - x_j||^2).
Gram gram_freq(const ObservationColumn& col, double gamma);

/// Kernel for a linguistic column: delta for discrete shapes, RBF for
/// frequency shapes (gamma defaults to the median heuristic).
Gram gram_for_column(const ObservationColumn& col, std::optional<double> gamma = std::nullopt);

/// The median heuristic: gamma = 1 / median(pairwise distance)^2.
double median_bandwidth(const PointSet& ps);
double median_bandwidth(const ObservationColumn& freq_col);

/// Median pairwise Euclidean distance between frequency rows.
double median_distance(const ObservationColumn& freq_col);

/// Lazy symmetric PSD kernel, evaluated entrywise on demand.
struct KernelAccessor {
  Eigen::Index n = 0;
  std::function<double(Eigen::Index, Eigen::Index)> at;
};

KernelAccessor accessor_geo(const PointSet& ps, double gamma);
KernelAccessor accessor_column(const ObservationColumn& col, std::optional<double> gamma = std::nullopt);
KernelAccessor accessor_gram(const Gram& g);

/// Greedy pivoted low-rank factor F with K ~ F F^T and
/// trace(K - F F^T) <= residual_tol.
struct LowRankGram {
  Eigen::MatrixXd factor;             // n x r
  std::vector<Eigen::Index> pivots;   // chosen column order
  double residual_tol = 0.0;
  double residual_trace = 0.0;        // achieved at stop

  Eigen::Index size() const { return factor.rows(); }
  Eigen::Index rank() const { return factor.cols(); }
};

/// Incomplete Cholesky: at each step pivot on the largest diagonal residual
/// (ties to the lowest index) and append the scaled Schur-complement column;
/// stop once the summed diagonal residual drops to tol or the factor is full
/// rank. Throws if a residual falls below -1e-8 (non-PSD input).
LowRankGram incomplete_cholesky(const KernelAccessor& kernel, double tol);

inline double default_lowrank_tol(Eigen::Index n) { return 1e-8 * static_cast<double>(n); }

}  // namespace geoling
