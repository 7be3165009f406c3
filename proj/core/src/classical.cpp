#include "geoling/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace geoling {

MoranResult morans_i(const Eigen::VectorXd& x, const SpatialWeights& w) {
  const Eigen::Index n = x.size();
  if (n != w.size()) {
    throw std::invalid_argument("morans_i: dimension mismatch");
  }
  if (n < 2) {
    throw std::invalid_argument("morans_i: need n >= 2");
  }
  const Eigen::VectorXd r = x.array() - x.mean();
  const double ss = r.squaredNorm();
  if (ss <= 0.0) {
    throw std::invalid_argument("morans_i: zero variance in x");
  }
  const double total = w.total();
  if (total <= 0.0) {
    throw std::invalid_argument("morans_i: empty weights");
  }
  const double num = r.dot(w.matrix() * r);
  MoranResult out;
  out.I = (static_cast<double>(n) / ss) * (num / total);
  out.n = n;
  out.null_expectation = -1.0 / static_cast<double>(n - 1);
  return out;
}

JoinCountResult join_counts(const ObservationColumn& col, const SpatialWeights& w) {
  if (!col.is_discrete()) {
    throw std::invalid_argument("join_counts: requires a binary or categorical column");
  }
  const Eigen::Index n = col.size();
  if (n != w.size()) {
    throw std::invalid_argument("join_counts: dimension mismatch");
  }
  const double total = w.total();
  if (total <= 0.0) {
    throw std::invalid_argument("join_counts: empty weights");
  }
  const auto& x = col.discrete();
  double agree = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (x[static_cast<size_t>(i)] == x[static_cast<size_t>(j)]) {
        agree += w.matrix()(j, i);
      }
    }
  }
  return JoinCountResult{agree, total};
}

MantelResult mantel(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy) {
  const Eigen::Index n = dx.rows();
  if (dx.cols() != n || dy.rows() != n || dy.cols() != n) {
    throw std::invalid_argument("mantel: matrices must be square and equal-sized");
  }
  if (n < 3) {
    throw std::invalid_argument("mantel: need n >= 3");
  }
  const double count = static_cast<double>(n * (n - 1) / 2);
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double a = dx(i, j);
      const double b = dy(i, j);
      sx += a;
      sy += b;
      sxx += a * a;
      syy += b * b;
      sxy += a * b;
    }
  }
  const double var_x = count * sxx - sx * sx;
  const double var_y = count * syy - sy * sy;
  if (var_x <= 0.0 || var_y <= 0.0) {
    throw std::invalid_argument("mantel: zero variance in distances");
  }
  MantelResult out;
  out.r = (count * sxy - sx * sy) / std::sqrt(var_x * var_y);
  out.pairs_used = static_cast<Eigen::Index>(count);
  return out;
}

MantelResult mantel(const Eigen::MatrixXd& dx, const DistanceMatrix& dy) {
  return mantel(dx, dy.entries());
}

Eigen::MatrixXd linguistic_distance(const ObservationColumn& col) {
  const Eigen::Index n = col.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (col.is_discrete()) {
    const auto& x = col.discrete();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = (x[static_cast<size_t>(i)] == x[static_cast<size_t>(j)]) ? 0.0 : 1.0;
        d(i, j) = v;
        d(j, i) = v;
      }
    }
    return d;
  }
  const Eigen::MatrixXd& f = col.frequencies();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (f.row(i) - f.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace geoling
