#pragma once

#include <Eigen/Dense>

#include "geoling/kernels.hpp"

namespace geoling {

enum class HsicMode { dense, lowrank, oracle };

/// Biased V-statistic estimate of the Hilbert-Schmidt independence criterion.
struct HsicValue {
  double value = 0.0;  // clamped at 0 for reporting
  double raw = 0.0;    // unclamped, used in permutation comparisons
  Eigen::Index n = 0;
  HsicMode mode = HsicMode::dense;
  Eigen::Index rank_a = 0;
  Eigen::Index rank_b = 0;
};

/// tr(Kx H Ky H) / n^2 via double-centering both Gram matrices; no centering
/// matrix is materialized. Exactly symmetric in its arguments.
HsicValue hsic_dense(const Gram& kx, const Gram& ky);

/// The literal three-sum estimator with factorized inner sums. Guarded to
/// n <= 64; serves as an independent cross-check of the trace form.
HsicValue hsic_oracle(const Gram& kx, const Gram& ky);

/// ||B^T (H A)||_F^2 / n^2 for low-rank factors Kx ~ A A^T, Ky ~ B B^T;
/// never forms an n x n matrix.
HsicValue hsic_lowrank(const LowRankGram& a, const LowRankGram& b);

namespace detail {
/// Double-centered copy: subtract row means and column means, add the grand
/// mean.
Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k);
}  // namespace detail

}  // namespace geoling
