#include "geoling/lingdata.hpp"

#include <cmath>
#include <stdexcept>

namespace geoling {

std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::binary: return "binary";
    case Shape::categorical: return "categorical";
    case Shape::frequency: return "frequency";
  }
  return "?";
}

std::optional<Shape> shape_from_name(std::string_view name) {
  if (name == "binary") return Shape::binary;
  if (name == "categorical") return Shape::categorical;
  if (name == "frequency") return Shape::frequency;
  return std::nullopt;
}

ObservationColumn ObservationColumn::binary(std::vector<int> values) {
  if (values.empty()) {
    throw std::invalid_argument("ObservationColumn: empty column");
  }
  for (int v : values) {
    if (v != 0 && v != 1) {
      throw std::invalid_argument("ObservationColumn: binary values must be 0 or 1");
    }
  }
  ObservationColumn col;
  col.shape_ = Shape::binary;
  col.k_ = 2;
  col.discrete_ = std::move(values);
  return col;
}

ObservationColumn ObservationColumn::categorical(std::vector<int> values, int k,
                                                 std::vector<std::string> labels) {
  if (values.empty()) {
    throw std::invalid_argument("ObservationColumn: empty column");
  }
  if (k < 2) {
    throw std::invalid_argument("ObservationColumn: categorical needs k >= 2");
  }
  for (int v : values) {
    if (v < 0 || v >= k) {
      throw std::invalid_argument("ObservationColumn: variant index out of range");
    }
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != k) {
    throw std::invalid_argument("ObservationColumn: label count must equal k");
  }
  ObservationColumn col;
  col.shape_ = Shape::categorical;
  col.k_ = k;
  col.discrete_ = std::move(values);
  col.labels_ = std::move(labels);
  return col;
}

ObservationColumn ObservationColumn::frequency(Eigen::MatrixXd values) {
  if (values.rows() == 0 || values.cols() < 1) {
    throw std::invalid_argument("ObservationColumn: empty frequency column");
  }
  const int k = static_cast<int>(values.cols());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw std::invalid_argument("ObservationColumn: frequency components must be in [0, 1]");
      }
      sum += v;
    }
    if (k >= 2 && std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("ObservationColumn: frequency rows must sum to 1");
    }
  }
  ObservationColumn col;
  col.shape_ = Shape::frequency;
  col.k_ = k;
  col.freq_ = std::move(values);
  return col;
}

Eigen::Index ObservationColumn::size() const {
  return shape_ == Shape::frequency ? freq_.rows()
                                    : static_cast<Eigen::Index>(discrete_.size());
}

const std::vector<int>& ObservationColumn::discrete() const {
  if (shape_ == Shape::frequency) {
    throw std::logic_error("ObservationColumn: frequency column has no discrete values");
  }
  return discrete_;
}

const Eigen::MatrixXd& ObservationColumn::frequencies() const {
  if (shape_ != Shape::frequency) {
    throw std::logic_error("ObservationColumn: discrete column has no frequency values");
  }
  return freq_;
}

Eigen::RowVectorXd ObservationColumn::row(Eigen::Index i) const {
  if (shape_ == Shape::frequency) {
    return freq_.row(i);
  }
  Eigen::RowVectorXd r(1);
  r(0) = static_cast<double>(discrete_[static_cast<size_t>(i)]);
  return r;
}

Dataset make_dataset(PointSet points, ObservationColumn column, std::string variable_name) {
  if (points.size() != column.size()) {
    throw std::invalid_argument("Dataset: point and observation counts differ");
  }
  return Dataset{std::move(points), std::move(column), std::move(variable_name)};
}

namespace {

// A column carries a scalar signal when it is binary, categorical with two
// variants, or a bare relative frequency.
bool has_scalar_signal(const ObservationColumn& col) {
  switch (col.shape()) {
    case Shape::binary: return true;
    case Shape::categorical: return col.k() == 2;
    case Shape::frequency: return col.k() == 1;
  }
  return false;
}

}  // namespace

Eigen::VectorXd residuals(const ObservationColumn& col) {
  if (!has_scalar_signal(col)) {
    throw std::invalid_argument("residuals: defined only for binary, two-variant, or scalar frequency columns");
  }
  const Eigen::Index n = col.size();
  Eigen::VectorXd x(n);
  if (col.shape() == Shape::frequency) {
    x = col.frequencies().col(0);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i) = static_cast<double>(col.discrete()[static_cast<size_t>(i)]);
    }
  }
  return x.array() - x.mean();
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::hsic: return "hsic";
    case Method::moran: return "moran";
    case Method::mantel: return "mantel";
    case Method::join_counts: return "joins";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "hsic") return Method::hsic;
  if (name == "moran") return Method::moran;
  if (name == "mantel") return Method::mantel;
  if (name == "joins" || name == "join_counts") return Method::join_counts;
  return std::nullopt;
}

Applicability applicability(const ObservationColumn& col, Method m) {
  switch (m) {
    case Method::hsic:
    case Method::mantel:
      return {true, {}};
    case Method::moran:
      if (has_scalar_signal(col)) {
        return {true, {}};
      }
      if (col.shape() == Shape::categorical) {
        return {false, "Moran's I undefined for >2 variants"};
      }
      return {false, "Moran's I undefined for simplex frequency vectors"};
    case Method::join_counts:
      if (col.is_discrete()) {
        return {true, {}};
      }
      return {false, "join counts undefined for frequency data"};
  }
  return {false, "unknown method"};
}

}  // namespace geoling
