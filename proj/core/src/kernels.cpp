#include "geoling/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace geoling {

double rbf(double squared_distance, double gamma) {
  if (!(squared_distance >= 0.0)) {
    throw std::invalid_argument("rbf: squared distance must be nonnegative");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("rbf: gamma must be positive and finite");
  }
  return std::exp(-gamma * squared_distance);
}

Gram gram_geo(const PointSet& ps, double gamma) {
  const Eigen::Index n = ps.size();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = ps.distance(i, j);
      const double v = rbf(d * d, gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return Gram{std::move(k)};
}

Gram gram_delta(const ObservationColumn& col) {
  if (!col.is_discrete()) {
    throw std::invalid_argument("gram_delta: requires a binary or categorical column");
  }
  const auto& x = col.discrete();
  const Eigen::Index n = col.size();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = (x[static_cast<size_t>(i)] == x[static_cast<size_t>(j)]) ? 1.0 : 0.0;
    }
  }
  return Gram{std::move(k)};
}

Gram gram_freq(const ObservationColumn& col, double gamma) {
  const Eigen::MatrixXd& f = col.frequencies();
  const Eigen::Index n = f.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = rbf((f.row(i) - f.row(j)).squaredNorm(), gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return Gram{std::move(k)};
}

Gram gram_for_column(const ObservationColumn& col, std::optional<double> gamma) {
  if (col.is_discrete()) {
    return gram_delta(col);
  }
  return gram_freq(col, gamma ? *gamma : median_bandwidth(col));
}

namespace {

double bandwidth_from_median(double med) {
  if (!(med > 0.0)) {
    throw std::invalid_argument("median_bandwidth: median pairwise distance is zero");
  }
  return 1.0 / (med * med);
}

}  // namespace

double median_bandwidth(const PointSet& ps) {
  return bandwidth_from_median(median_distance(ps));
}

double median_distance(const ObservationColumn& freq_col) {
  const Eigen::MatrixXd& f = freq_col.frequencies();
  const Eigen::Index n = f.rows();
  if (n < 2) {
    throw std::invalid_argument("median_distance: need at least 2 observations");
  }
  std::vector<double> pairs;
  pairs.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      pairs.push_back((f.row(i) - f.row(j)).norm());
    }
  }
  return detail::median_of(std::move(pairs));
}

double median_bandwidth(const ObservationColumn& freq_col) {
  return bandwidth_from_median(median_distance(freq_col));
}

KernelAccessor accessor_geo(const PointSet& ps, double gamma) {
  return {ps.size(), [&ps, gamma](Eigen::Index i, Eigen::Index j) {
            if (i == j) return 1.0;
            const double d = ps.distance(i, j);
            return std::exp(-gamma * d * d);
          }};
}

KernelAccessor accessor_column(const ObservationColumn& col, std::optional<double> gamma) {
  if (col.is_discrete()) {
    const auto& x = col.discrete();
    return {col.size(), [&x](Eigen::Index i, Eigen::Index j) {
              return x[static_cast<size_t>(i)] == x[static_cast<size_t>(j)] ? 1.0 : 0.0;
            }};
  }
  const double g = gamma ? *gamma : median_bandwidth(col);
  const Eigen::MatrixXd& f = col.frequencies();
  return {col.size(), [&f, g](Eigen::Index i, Eigen::Index j) {
            if (i == j) return 1.0;
            return std::exp(-g * (f.row(i) - f.row(j)).squaredNorm());
          }};
}

KernelAccessor accessor_gram(const Gram& g) {
  return {g.size(), [&g](Eigen::Index i, Eigen::Index j) { return g.k(i, j); }};
}

LowRankGram incomplete_cholesky(const KernelAccessor& kernel, double tol) {
  if (!(tol >= 0.0)) {
    throw std::invalid_argument("incomplete_cholesky: tol must be nonnegative");
  }
  const Eigen::Index n = kernel.n;
  if (n < 1 || !kernel.at) {
    throw std::invalid_argument("incomplete_cholesky: empty kernel");
  }

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag(i) = kernel.at(i, i);
    if (diag(i) < -1e-8) {
      throw std::runtime_error("incomplete_cholesky: negative kernel diagonal (non-PSD input)");
    }
  }

  LowRankGram out;
  out.residual_tol = tol;
  Eigen::MatrixXd factor(n, n);
  Eigen::Index rank = 0;
  double trace = diag.sum();

  while (rank < n && trace > tol) {
    Eigen::Index pivot = 0;
    diag.maxCoeff(&pivot);  // Eigen returns the first (lowest-index) maximizer
    const double piv = diag(pivot);
    if (piv < -1e-8) {
      throw std::runtime_error("incomplete_cholesky: negative pivot residual (non-PSD input)");
    }
    if (piv <= 0.0) {
      break;  // nothing left to factor
    }

    const double scale = 1.0 / std::sqrt(piv);
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = kernel.at(i, pivot);
      if (rank > 0) {
        v -= factor.row(i).head(rank).dot(factor.row(pivot).head(rank));
      }
      factor(i, rank) = v * scale;
    }
    factor(pivot, rank) = std::sqrt(piv);

    for (Eigen::Index i = 0; i < n; ++i) {
      diag(i) -= factor(i, rank) * factor(i, rank);
      if (diag(i) < 0.0) {
        if (diag(i) < -1e-8) {
          throw std::runtime_error("incomplete_cholesky: negative diagonal residual (non-PSD input)");
        }
        diag(i) = 0.0;
      }
    }
    diag(pivot) = 0.0;
    trace = diag.sum();
    out.pivots.push_back(pivot);
    ++rank;
  }

  out.factor = factor.leftCols(rank);
  out.residual_trace = trace;
  return out;
}

}  // namespace geoling
