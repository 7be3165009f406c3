#include "geoling/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace geoling {

std::string_view scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::null_uniform: return "null";
    case ScenarioKind::continuum: return "continuum";
    case ScenarioKind::centers: return "centers";
  }
  return "?";
}

std::string_view data_mode_name(DataMode m) {
  return m == DataMode::counts ? "counts" : "frequency";
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.k < 2) {
    throw std::invalid_argument("scenario: k must be >= 2");
  }
  if (!(cfg.mu_obs > 0.0)) {
    throw std::invalid_argument("scenario: mu_obs must be positive");
  }
  if (cfg.kind == ScenarioKind::null_uniform && !cfg.theta0.empty()) {
    if (static_cast<int>(cfg.theta0.size()) != cfg.k) {
      throw std::invalid_argument("scenario: theta0 length must equal k");
    }
    double sum = 0.0;
    for (double v : cfg.theta0) {
      if (!(v >= 0.0)) throw std::invalid_argument("scenario: theta0 components must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("scenario: theta0 must sum to 1");
    }
  }
  if (cfg.kind != ScenarioKind::null_uniform) {
    if (!(cfg.theta_min > 0.0 && cfg.theta_max < 1.0 && cfg.theta_min < cfg.theta_max)) {
      throw std::invalid_argument("scenario: need 0 < theta_min < theta_max < 1");
    }
    if (cfg.k != 2) {
      throw std::invalid_argument("scenario: continuum and centers scenarios are two-variant");
    }
  }
  if (cfg.kind == ScenarioKind::centers) {
    if (cfg.centers.empty()) {
      throw std::invalid_argument("scenario: centers scenario needs at least one center");
    }
    if (!(cfg.radius >= 0.0)) {
      throw std::invalid_argument("scenario: radius must be nonnegative");
    }
  }
  if (cfg.data_mode == DataMode::frequency && !(cfg.dirichlet_scale > 0.0)) {
    throw std::invalid_argument("scenario: dirichlet_scale must be positive");
  }
  if (!(cfg.outlier_fraction >= 0.0 && cfg.outlier_fraction < 1.0)) {
    throw std::invalid_argument("scenario: outlier_fraction must be in [0, 1)");
  }
  if (cfg.outlier_fraction > 0.0 &&
      (cfg.data_mode != DataMode::frequency || cfg.k != 2)) {
    throw std::invalid_argument("scenario: outliers apply to scalar frequency data only");
  }
  if (!(cfg.sample_disc_radius >= 0.0)) {
    throw std::invalid_argument("scenario: sample_disc_radius must be nonnegative");
  }
}

std::vector<long> region_counts(std::span<const Region> regions, double mu_obs, RngEngine& g) {
  if (!(mu_obs > 0.0)) {
    throw std::invalid_argument("region_counts: mu_obs must be positive");
  }
  std::vector<long> counts;
  counts.reserve(regions.size());
  for (const Region& r : regions) {
    counts.push_back(1 + sample_poisson(mu_obs * r.population, g));
  }
  return counts;
}

std::vector<GeoPoint> sample_locations(const Region& region, long n, double disc_radius,
                                       RngEngine& g, bool* fallback) {
  if (n < 1) {
    throw std::invalid_argument("sample_locations: n must be >= 1");
  }
  if (fallback) {
    *fallback = false;
  }
  std::vector<GeoPoint> out;
  out.reserve(static_cast<size_t>(n));
  const auto& pool = region.location_pool;
  if (!pool.empty()) {
    if (static_cast<long>(pool.size()) >= n) {
      std::vector<int> idx = identity_permutation(static_cast<int>(pool.size()));
      shuffle_indices(idx, g);
      for (long i = 0; i < n; ++i) {
        out.push_back(pool[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
      }
    } else {
      if (fallback) {
        *fallback = true;
      }
      for (long i = 0; i < n; ++i) {
        out.push_back(pool[uniform_below(g, pool.size())]);
      }
    }
    return out;
  }
  for (long i = 0; i < n; ++i) {
    if (disc_radius <= 0.0) {
      out.push_back(region.centroid);
    } else {
      const double rad = disc_radius * std::sqrt(uniform_double(g));
      const double ang = 2.0 * std::numbers::pi * uniform_double(g);
      out.push_back({region.centroid.x + rad * std::cos(ang),
                     region.centroid.y + rad * std::sin(ang)});
    }
  }
  return out;
}

ThetaField theta_null(std::span<const Region> regions, std::span<const double> theta0) {
  const Eigen::Index m = static_cast<Eigen::Index>(regions.size());
  const Eigen::Index k = static_cast<Eigen::Index>(theta0.size());
  ThetaField f;
  f.theta.resize(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      f.theta(i, j) = theta0[static_cast<size_t>(j)];
    }
  }
  return f;
}

ThetaField theta_continuum(std::span<const Region> regions, double angle_deg,
                           double theta_min, double theta_max) {
  if (!(theta_min < theta_max)) {
    throw std::invalid_argument("theta_continuum: theta_min must be below theta_max");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(regions.size());
  if (m < 1) {
    throw std::invalid_argument("theta_continuum: no regions");
  }
  // Normalizing the angle first keeps theta(a) and theta(a + 360) identical.
  double a = std::fmod(angle_deg, 360.0);
  if (a < 0.0) {
    a += 360.0;
  }
  const double rad = a * std::numbers::pi / 180.0;
  const double ux = std::cos(rad);
  const double uy = std::sin(rad);

  Eigen::VectorXd proj(m);
  double min_x = regions[0].centroid.x, max_x = min_x;
  double min_y = regions[0].centroid.y, max_y = min_y;
  for (Eigen::Index i = 0; i < m; ++i) {
    const GeoPoint& c = regions[static_cast<size_t>(i)].centroid;
    proj(i) = ux * c.x + uy * c.y;
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  const double span = proj.maxCoeff() - proj.minCoeff();
  const double extent = std::hypot(max_x - min_x, max_y - min_y);
  if (span <= 1e-9 * std::max(extent, 1e-300)) {
    throw std::invalid_argument("theta_continuum: degenerate projection (no spread along direction)");
  }

  ThetaField f;
  f.theta.resize(m, 2);
  const double lo = proj.minCoeff();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = (proj(i) - lo) / span;
    const double th = theta_min + t * (theta_max - theta_min);
    f.theta(i, 0) = th;
    f.theta(i, 1) = 1.0 - th;
  }
  return f;
}

ThetaField theta_centers(std::span<const Region> regions, std::span<const GeoPoint> centers,
                         double radius, double theta_max, double theta_min, double slope) {
  if (centers.empty()) {
    throw std::invalid_argument("theta_centers: need at least one center");
  }
  if (!(slope > 0.0)) {
    throw std::invalid_argument("theta_centers: slope must be positive");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(regions.size());
  ThetaField f;
  f.theta.resize(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const GeoPoint& c = regions[static_cast<size_t>(i)].centroid;
    double d = std::numeric_limits<double>::infinity();
    for (const GeoPoint& ctr : centers) {
      d = std::min(d, std::hypot(c.x - ctr.x, c.y - ctr.y));
    }
    const double th = d <= radius ? theta_max
                                  : std::max(theta_min, theta_max - slope * (d - radius));
    f.theta(i, 0) = th;
    f.theta(i, 1) = 1.0 - th;
  }
  return f;
}

ThetaField make_theta_field(const ScenarioConfig& cfg, std::span<const Region> regions) {
  switch (cfg.kind) {
    case ScenarioKind::null_uniform: {
      std::vector<double> theta0 = cfg.theta0;
      if (theta0.empty()) {
        theta0.assign(static_cast<size_t>(cfg.k), 1.0 / static_cast<double>(cfg.k));
      }
      return theta_null(regions, theta0);
    }
    case ScenarioKind::continuum:
      return theta_continuum(regions, cfg.angle_deg, cfg.theta_min, cfg.theta_max);
    case ScenarioKind::centers: {
      double slope = cfg.decay_slope;
      if (slope <= 0.0) {
        slope = (cfg.theta_max - cfg.theta_min) / (2.0 * std::max(cfg.radius, 1e-12));
      }
      return theta_centers(regions, cfg.centers, cfg.radius, cfg.theta_max, cfg.theta_min, slope);
    }
  }
  throw std::logic_error("make_theta_field: unknown scenario kind");
}

Dataset gen_counts_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                           const ThetaField& theta, RngEngine& g,
                           std::vector<std::string>* warnings) {
  if (cfg.data_mode != DataMode::counts) {
    throw std::invalid_argument("gen_counts_dataset: config is not in counts mode");
  }
  const int k = theta.k();
  const auto counts = region_counts(regions, cfg.mu_obs, g);

  std::vector<GeoPoint> points;
  std::vector<int> values;
  bool any_fallback = false;
  std::vector<double> row(static_cast<size_t>(k));
  for (size_t r = 0; r < regions.size(); ++r) {
    bool fallback = false;
    auto locs = sample_locations(regions[r], counts[r], cfg.sample_disc_radius, g, &fallback);
    any_fallback = any_fallback || fallback;
    for (int j = 0; j < k; ++j) {
      row[static_cast<size_t>(j)] = theta.theta(static_cast<Eigen::Index>(r), j);
    }
    for (const GeoPoint& p : locs) {
      points.push_back(p);
      values.push_back(sample_categorical(row, g));
    }
  }
  if (any_fallback && warnings) {
    warnings->push_back("location pool smaller than sample; fell back to with-replacement draws");
  }

  ObservationColumn col = (k == 2) ? ObservationColumn::binary(std::move(values))
                                   : ObservationColumn::categorical(std::move(values), k);
  return make_dataset(PointSet(std::move(points), cfg.metric), std::move(col), "synthetic");
}

Dataset gen_frequency_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                              const ThetaField& theta, RngEngine& g) {
  if (cfg.data_mode != DataMode::frequency) {
    throw std::invalid_argument("gen_frequency_dataset: config is not in frequency mode");
  }
  const int k = theta.k();
  const Eigen::Index m = static_cast<Eigen::Index>(regions.size());

  std::vector<GeoPoint> points;
  points.reserve(regions.size());
  Eigen::MatrixXd values(m, k == 2 ? 1 : k);
  std::vector<double> alpha(static_cast<size_t>(k));
  for (Eigen::Index r = 0; r < m; ++r) {
    const Region& region = regions[static_cast<size_t>(r)];
    if (!region.location_pool.empty()) {
      points.push_back(region.location_pool[uniform_below(g, region.location_pool.size())]);
    } else {
      points.push_back(region.centroid);
    }
    for (int j = 0; j < k; ++j) {
      alpha[static_cast<size_t>(j)] = cfg.dirichlet_scale * theta.theta(r, j);
    }
    const auto phi = sample_dirichlet(alpha, g);
    if (k == 2) {
      values(r, 0) = phi[0];
    } else {
      for (int j = 0; j < k; ++j) {
        values(r, j) = phi[static_cast<size_t>(j)];
      }
    }
  }
  return make_dataset(PointSet(std::move(points), cfg.metric),
                      ObservationColumn::frequency(std::move(values)), "synthetic");
}

void inject_outliers(ObservationColumn& col, double fraction, RngEngine& g) {
  if (!col.is_scalar_frequency()) {
    throw std::invalid_argument("inject_outliers: requires a scalar frequency column");
  }
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("inject_outliers: fraction must be in [0, 1)");
  }
  const Eigen::Index n = col.size();
  const long count = std::lround(fraction * static_cast<double>(n));
  if (count == 0) {
    return;
  }
  Eigen::MatrixXd values = col.frequencies();
  std::vector<int> idx = identity_permutation(static_cast<int>(n));
  // Partial Fisher-Yates: the first `count` slots are a uniform
  // without-replacement draw.
  for (long i = 0; i < count; ++i) {
    const size_t j = static_cast<size_t>(i) +
                     static_cast<size_t>(uniform_below(g, static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<size_t>(i)], idx[j]);
  }
  for (long i = 0; i < count; ++i) {
    values(idx[static_cast<size_t>(i)], 0) = (uniform_below(g, 2) == 0) ? 0.0 : 1.0;
  }
  col = ObservationColumn::frequency(std::move(values));
}

Dataset generate_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                         std::vector<std::string>* warnings) {
  validate(cfg);
  if (regions.empty()) {
    throw std::invalid_argument("generate_dataset: no regions");
  }
  RngEngine g = make_engine(substream_seed(cfg.seed, 0));
  const ThetaField theta = make_theta_field(cfg, regions);
  Dataset ds = (cfg.data_mode == DataMode::counts)
                   ? gen_counts_dataset(cfg, regions, theta, g, warnings)
                   : gen_frequency_dataset(cfg, regions, theta, g);
  if (cfg.outlier_fraction > 0.0) {
    inject_outliers(ds.column, cfg.outlier_fraction, g);
  }
  return ds;
}

std::vector<Region> default_region_grid() {
  // Documented layout: 12 columns spaced 12 units (x = 6..138) by 12 rows
  // spaced 4 units (y = 2..46). Log-populations carry a west-to-east decline
  // plus log-normal noise from a fixed seed, giving the skewed, spatially
  // uneven density the tests assume.
  constexpr std::uint64_t kGridSeed = 0x67656f6c696e6721ULL;
  RngEngine g = make_engine(kGridSeed);
  std::vector<Region> out;
  out.reserve(144);
  int id = 0;
  for (int row = 0; row < 12; ++row) {
    for (int col = 0; col < 12; ++col) {
      const double x = 6.0 + 12.0 * col;
      const double y = 2.0 + 4.0 * row;
      const double log_pop = std::log(15000.0) - 1.6 * (x / 144.0) + 0.45 * sample_normal(g);
      Region r;
      r.id = id++;
      r.population = std::max(1.0, std::round(std::exp(log_pop)));
      r.centroid = {x, y};
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<GeoPoint> default_center_layout() {
  std::vector<GeoPoint> centers;
  centers.reserve(25);
  for (int row : {1, 3, 5, 7, 9}) {
    for (int col : {1, 3, 5, 7, 9}) {
      centers.push_back({6.0 + 12.0 * col, 2.0 + 4.0 * row});
    }
  }
  return centers;
}

std::vector<double> continuum_angle_grid() {
  std::vector<double> angles;
  angles.reserve(120);
  for (int a = 0; a < 360; a += 3) {
    angles.push_back(static_cast<double>(a));
  }
  return angles;
}

std::vector<ScenarioConfig> continuum_suite(const ScenarioConfig& base, int replicates) {
  if (replicates < 1) {
    throw std::invalid_argument("continuum_suite: replicates must be >= 1");
  }
  std::vector<ScenarioConfig> out;
  const auto angles = continuum_angle_grid();
  out.reserve(angles.size() * static_cast<size_t>(replicates));
  std::uint64_t stream = 0;
  for (double angle : angles) {
    for (int r = 0; r < replicates; ++r) {
      ScenarioConfig cfg = base;
      cfg.kind = ScenarioKind::continuum;
      cfg.angle_deg = angle;
      cfg.seed = substream_seed(base.seed, ++stream);
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

std::vector<ScenarioConfig> centers_suite(const ScenarioConfig& base,
                                          std::span<const GeoPoint> centers, int replicates) {
  if (replicates < 1) {
    throw std::invalid_argument("centers_suite: replicates must be >= 1");
  }
  std::vector<ScenarioConfig> out;
  out.reserve(centers.size() * static_cast<size_t>(replicates));
  std::uint64_t stream = 0;
  for (const GeoPoint& c : centers) {
    for (int r = 0; r < replicates; ++r) {
      ScenarioConfig cfg = base;
      cfg.kind = ScenarioKind::centers;
      cfg.centers = {c};
      cfg.seed = substream_seed(base.seed, ++stream);
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

}  // namespace geoling
