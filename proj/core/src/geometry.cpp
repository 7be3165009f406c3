#include "geoling/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geoling {

bool operator==(const GeoPoint& a, const GeoPoint& b) {
  return a.x == b.x && a.y == b.y;
}

namespace {

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double lat1 = a.y * deg;
  const double lat2 = b.y * deg;
  const double dlat = (b.y - a.y) * deg;
  const double dlon = (b.x - a.x) * deg;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1) * std::cos(lat2) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace

double point_distance(const GeoPoint& a, const GeoPoint& b, Metric metric) {
  if (metric == Metric::euclidean) {
    return std::hypot(a.x - b.x, a.y - b.y);
  }
  return haversine_km(a, b);
}

PointSet::PointSet(std::vector<GeoPoint> points, Metric metric)
    : points_(std::move(points)), metric_(metric) {
  if (points_.size() < 2) {
    throw std::invalid_argument("PointSet: need at least 2 points");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("PointSet: non-finite coordinate");
    }
  }
}

double PointSet::distance(Eigen::Index i, Eigen::Index j) const {
  return point_distance((*this)[i], (*this)[j], metric_);
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries) : d_(std::move(entries)) {
  if (d_.rows() != d_.cols() || d_.rows() < 2) {
    throw std::invalid_argument("DistanceMatrix: square matrix with n >= 2 required");
  }
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (d_(i, i) != 0.0) {
      throw std::invalid_argument("DistanceMatrix: nonzero diagonal");
    }
    for (Eigen::Index j = i + 1; j < d_.cols(); ++j) {
      if (!(d_(i, j) >= 0.0) || d_(i, j) != d_(j, i)) {
        throw std::invalid_argument("DistanceMatrix: entries must be symmetric and nonnegative");
      }
    }
  }
}

DistanceMatrix distance_matrix(const PointSet& ps) {
  const Eigen::Index n = ps.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dij = ps.distance(i, j);
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return DistanceMatrix(std::move(d));
}

namespace detail {

double median_of(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median_of: empty sample");
  }
  const size_t n = values.size();
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace detail

double median_distance(const DistanceMatrix& dm) {
  const Eigen::Index n = dm.size();
  std::vector<double> pairs;
  pairs.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      pairs.push_back(dm(i, j));
    }
  }
  return detail::median_of(std::move(pairs));
}

double median_distance(const PointSet& ps) {
  return median_distance(distance_matrix(ps));
}

SpatialWeights::SpatialWeights(Eigen::MatrixXd w, WeightsKind kind, bool normalized)
    : w_(std::move(w)), kind_(kind), normalized_(normalized) {
  if (w_.rows() != w_.cols()) {
    throw std::invalid_argument("SpatialWeights: square matrix required");
  }
  for (Eigen::Index i = 0; i < w_.rows(); ++i) {
    if (w_(i, i) != 0.0) {
      throw std::invalid_argument("SpatialWeights: diagonal must be zero");
    }
  }
  if ((w_.array() < 0.0).any()) {
    throw std::invalid_argument("SpatialWeights: negative weight");
  }
}

SpatialWeights SpatialWeights::normalized_copy() const {
  const double sum = w_.sum();
  if (sum <= 0.0) {
    throw std::invalid_argument("SpatialWeights: cannot normalize all-zero weights");
  }
  Eigen::MatrixXd scaled = w_ * (static_cast<double>(w_.rows()) / sum);
  return SpatialWeights(std::move(scaled), kind_, true);
}

SpatialWeights weights_threshold(const DistanceMatrix& dm, double tau, bool normalize) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("weights_threshold: tau must be positive");
  }
  const Eigen::Index n = dm.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && dm(i, j) < tau) {
        w(i, j) = 1.0;
      }
    }
  }
  if (w.sum() == 0.0) {
    throw std::invalid_argument("weights_threshold: no pair within tau (threshold too small)");
  }
  SpatialWeights out(std::move(w), WeightsKind::threshold, false);
  return normalize ? out.normalized_copy() : out;
}

SpatialWeights weights_exponential(const DistanceMatrix& dm, double gamma, bool normalize) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("weights_exponential: gamma must be positive");
  }
  const Eigen::Index n = dm.size();
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = (i == j) ? 0.0 : std::exp(-gamma * dm(i, j));
    }
  }
  SpatialWeights out(std::move(w), WeightsKind::exponential, false);
  return normalize ? out.normalized_copy() : out;
}

SpatialWeights weights_knn(const DistanceMatrix& dm, int k) {
  const Eigen::Index n = dm.size();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("weights_knn: k must be in [1, n-1]");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    // Stable under distance ties: lower index wins.
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return dm(i, a) < dm(i, b); });
    for (int t = 0; t < k; ++t) {
      w(i, order[static_cast<size_t>(t)]) = 1.0;
    }
  }
  return SpatialWeights(std::move(w), WeightsKind::knn, false);
}

SpatialWeights build_weights(const PointSet& ps, const DistanceMatrix& dm,
                             const WeightsSpec& spec, bool normalize) {
  return std::visit(
      [&](const auto& s) -> SpatialWeights {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThresholdSpec>) {
          return weights_threshold(dm, s.tau, normalize);
        } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return weights_exponential(dm, s.gamma, normalize);
        } else if constexpr (std::is_same_v<T, KnnSpec>) {
          SpatialWeights w = weights_knn(dm, s.k);
          return normalize ? w.normalized_copy() : w;
        } else {
          SpatialWeights w = delaunay_edges(ps);
          return normalize ? w.normalized_copy() : w;
        }
      },
      spec);
}

}  // namespace geoling
