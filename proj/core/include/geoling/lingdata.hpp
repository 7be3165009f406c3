#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoling/geometry.hpp"

namespace geoling {

enum class Shape { binary, categorical, frequency };

std::string_view shape_name(Shape s);
std::optional<Shape> shape_from_name(std::string_view name);

/// One linguistic variable observed at n sites. Binary stores 0/1, categorical
/// stores variant indices in [0, k), frequency stores an n x k matrix whose
/// rows are on the simplex (k >= 2) or bare relative frequencies in [0, 1]
/// (k == 1).
class ObservationColumn {
 public:
  static ObservationColumn binary(std::vector<int> values);
  static ObservationColumn categorical(std::vector<int> values, int k,
                                       std::vector<std::string> labels = {});
  static ObservationColumn frequency(Eigen::MatrixXd values);

  Shape shape() const { return shape_; }
  int k() const { return k_; }
  Eigen::Index size() const;
  bool is_discrete() const { return shape_ != Shape::frequency; }
  bool is_scalar_frequency() const { return shape_ == Shape::frequency && k_ == 1; }

  const std::vector<int>& discrete() const;
  const Eigen::MatrixXd& frequencies() const;
  const std::vector<std::string>& labels() const { return labels_; }

  /// The i-th observation as a numeric row (length k for frequency, length 1
  /// holding the variant index otherwise).
  Eigen::RowVectorXd row(Eigen::Index i) const;

 private:
  ObservationColumn() = default;

  Shape shape_ = Shape::binary;
  int k_ = 2;
  std::vector<int> discrete_;
  Eigen::MatrixXd freq_;
  std::vector<std::string> labels_;
};

struct Dataset {
  PointSet points;
  ObservationColumn column;
  std::string variable_name;
};

Dataset make_dataset(PointSet points, ObservationColumn column, std::string variable_name);

/// Mean-centered values x_i - mean(x). Defined for binary, two-variant
/// categorical, and scalar frequency columns only.
Eigen::VectorXd residuals(const ObservationColumn& col);

enum class Method { hsic, moran, mantel, join_counts };

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

struct Applicability {
  bool accepted = false;
  std::string reason;  // empty when accepted
};

/// Which tests a column shape supports: Moran's I needs a scalar signal
/// (binary, two-variant categorical, or scalar frequency); join counts need
/// discrete data; Mantel and HSIC accept everything.
Applicability applicability(const ObservationColumn& col, Method m);

}  // namespace geoling
