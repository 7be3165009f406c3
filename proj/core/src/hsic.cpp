#include "geoling/hsic.hpp"

#include <algorithm>
#include <stdexcept>

namespace geoling {

namespace detail {

Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k) {
  const Eigen::VectorXd row_mean = k.rowwise().mean();
  const Eigen::VectorXd col_mean = k.colwise().mean();
  const double grand = k.mean();
  Eigen::MatrixXd c = k;
  c.colwise() -= row_mean;
  c.rowwise() -= col_mean.transpose();
  c.array() += grand;
  return c;
}

}  // namespace detail

namespace {

HsicValue finish(double raw, Eigen::Index n, HsicMode mode) {
  HsicValue v;
  v.raw = raw;
  v.value = std::max(raw, 0.0);
  v.n = n;
  v.mode = mode;
  return v;
}

}  // namespace

HsicValue hsic_dense(const Gram& kx, const Gram& ky) {
  const Eigen::Index n = kx.size();
  if (n != ky.size()) {
    throw std::invalid_argument("hsic_dense: Gram dimensions differ");
  }
  const Eigen::MatrixXd cx = detail::center_gram(kx.k);
  const Eigen::MatrixXd cy = detail::center_gram(ky.k);
  const double raw = cx.cwiseProduct(cy).sum() / (static_cast<double>(n) * static_cast<double>(n));
  return finish(raw, n, HsicMode::dense);
}

HsicValue hsic_oracle(const Gram& kx, const Gram& ky) {
  const Eigen::Index n = kx.size();
  if (n != ky.size()) {
    throw std::invalid_argument("hsic_oracle: Gram dimensions differ");
  }
  if (n > 64) {
    throw std::invalid_argument("hsic_oracle: guarded to n <= 64");
  }
  const double m = static_cast<double>(n);
  const double term1 = kx.k.cwiseProduct(ky.k).sum() / (m * m);
  const double term2 = kx.k.sum() * ky.k.sum() / (m * m * m * m);
  const double term3 = 2.0 * kx.k.rowwise().sum().dot(ky.k.rowwise().sum()) / (m * m * m);
  return finish(term1 + term2 - term3, n, HsicMode::oracle);
}

HsicValue hsic_lowrank(const LowRankGram& a, const LowRankGram& b) {
  const Eigen::Index n = a.size();
  if (n != b.size()) {
    throw std::invalid_argument("hsic_lowrank: factor dimensions differ");
  }
  Eigen::MatrixXd ha = a.factor;
  ha.rowwise() -= a.factor.colwise().mean();
  const Eigen::MatrixXd cross = b.factor.transpose() * ha;
  const double raw = cross.squaredNorm() / (static_cast<double>(n) * static_cast<double>(n));
  HsicValue v = finish(raw, n, HsicMode::lowrank);
  v.rank_a = a.rank();
  v.rank_b = b.rank();
  return v;
}

}  // namespace geoling
