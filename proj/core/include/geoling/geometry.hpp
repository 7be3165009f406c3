#pragma once

#include <Eigen/Dense>

#include <span>
#include <variant>
#include <vector>

namespace geoling {

struct GeoPoint {
  double x = 0.0;
  double y = 0.0;
};

bool operator==(const GeoPoint& a, const GeoPoint& b);

/// Distance convention for a point set. Euclidean treats (x, y) as planar
/// units; haversine treats them as (longitude, latitude) degrees and returns
/// great-circle kilometers.
enum class Metric { euclidean, haversine_km };

// Mean Earth radius (IUGG), kilometers.
inline constexpr double kEarthRadiusKm = 6371.0088;

double point_distance(const GeoPoint& a, const GeoPoint& b, Metric metric);

/// Ordered sample of n >= 2 geolocations with a fixed distance metric.
/// Immutable after construction; all coordinates must be finite.
class PointSet {
 public:
  PointSet(std::vector<GeoPoint> points, Metric metric = Metric::euclidean);

  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
  const GeoPoint& operator[](Eigen::Index i) const { return points_[static_cast<size_t>(i)]; }
  std::span<const GeoPoint> points() const { return points_; }
  Metric metric() const { return metric_; }

  double distance(Eigen::Index i, Eigen::Index j) const;

 private:
  std::vector<GeoPoint> points_;
  Metric metric_;
};

/// Symmetric pairwise-distance matrix with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd entries);

  Eigen::Index size() const { return d_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& entries() const { return d_; }

 private:
  Eigen::MatrixXd d_;
};

DistanceMatrix distance_matrix(const PointSet& ps);

/// Median of the n(n-1)/2 off-diagonal pair distances. Even pair counts take
/// the mean of the two middle order statistics.
double median_distance(const DistanceMatrix& dm);
double median_distance(const PointSet& ps);

namespace detail {
// Median convention shared by all callers; consumes its argument.
double median_of(std::vector<double> values);
}  // namespace detail

enum class WeightsKind { threshold, exponential, knn, delaunay };

/// Nonnegative spatial proximity matrix with zero diagonal. Threshold,
/// exponential, and Delaunay weights are symmetric; kNN may be asymmetric.
class SpatialWeights {
 public:
  SpatialWeights(Eigen::MatrixXd w, WeightsKind kind, bool normalized);

  Eigen::Index size() const { return w_.rows(); }
  const Eigen::MatrixXd& matrix() const { return w_; }
  WeightsKind kind() const { return kind_; }
  bool normalized() const { return normalized_; }
  double total() const { return w_.sum(); }

  /// Rescaled copy with sum(w) == n.
  SpatialWeights normalized_copy() const;

 private:
  Eigen::MatrixXd w_;
  WeightsKind kind_;
  bool normalized_;
};

/// w_ij = 1 iff d_ij < tau and i != j. Throws if no pair falls within tau.
SpatialWeights weights_threshold(const DistanceMatrix& dm, double tau, bool normalize);

/// w_ij = exp(-gamma * d_ij) for i != j.
SpatialWeights weights_exponential(const DistanceMatrix& dm, double gamma, bool normalize);

/// w_ij = 1 iff j is among the k nearest neighbors of i (ties at equal
/// distance go to the lower index). Not normalized here.
SpatialWeights weights_knn(const DistanceMatrix& dm, int k);

/// Binary adjacency of the Delaunay triangulation over the unique coordinate
/// sites; observations sharing a site are mutually connected and inherit
/// their site's edges. Throws if fewer than 3 unique sites remain or all
/// unique sites are collinear.
SpatialWeights delaunay_edges(const PointSet& ps);

// Lazy weight-construction request, resolved against a concrete dataset.
struct ThresholdSpec { double tau; };
struct ExponentialSpec { double gamma; };
struct KnnSpec { int k; };
struct DelaunaySpec {};
using WeightsSpec = std::variant<ThresholdSpec, ExponentialSpec, KnnSpec, DelaunaySpec>;

SpatialWeights build_weights(const PointSet& ps, const DistanceMatrix& dm,
                             const WeightsSpec& spec, bool normalize);

}  // namespace geoling
