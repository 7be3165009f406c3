#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoling/geometry.hpp"
#include "geoling/lingdata.hpp"
#include "geoling/rng.hpp"

namespace geoling {

/// An aggregation unit (municipality analogue): a population, a centroid, and
/// an optional pool of empirical sample positions.
struct Region {
  int id = 0;
  double population = 0.0;
  GeoPoint centroid;
  std::vector<GeoPoint> location_pool;
};

/// Per-region variant-frequency vectors; one simplex row per region.
struct ThetaField {
  Eigen::MatrixXd theta;  // regions x k

  Eigen::Index regions() const { return theta.rows(); }
  int k() const { return static_cast<int>(theta.cols()); }
};

enum class ScenarioKind { null_uniform, continuum, centers };
enum class DataMode { counts, frequency };

std::string_view scenario_kind_name(ScenarioKind k);
std::string_view data_mode_name(DataMode m);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::null_uniform;
  int k = 2;

  // null: shared frequency vector (defaults to uniform over k variants)
  std::vector<double> theta0;

  // continuum: component-0 frequency ramps along this direction
  double angle_deg = 0.0;
  double theta_min = 0.25;
  double theta_max = 0.75;

  // centers: maximal frequency within radius of the nearest center, then a
  // linear decay down to theta_min (slope <= 0 picks the default
  // (theta_max - theta_min) / (2 * radius))
  std::vector<GeoPoint> centers;
  double radius = 10.0;
  double decay_slope = 0.0;

  double mu_obs = 1e-5;
  DataMode data_mode = DataMode::counts;
  double dirichlet_scale = 10.0;
  double outlier_fraction = 0.0;
  double sample_disc_radius = 2.0;
  std::uint64_t seed = 0;
  Metric metric = Metric::euclidean;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ScenarioConfig& cfg);

/// n_i = 1 + Poisson(mu_obs * population_i); every region contributes at
/// least one observation.
std::vector<long> region_counts(std::span<const Region> regions, double mu_obs, RngEngine& g);

/// Sampled positions for one region: without replacement from the pool when
/// it is large enough, with replacement otherwise (sets *fallback), or
/// uniform in a disc around the centroid when no pool exists.
std::vector<GeoPoint> sample_locations(const Region& region, long n, double disc_radius,
                                       RngEngine& g, bool* fallback);

ThetaField theta_null(std::span<const Region> regions, std::span<const double> theta0);

/// Component-0 frequency ramps linearly along the given direction: centroid
/// projections are min-max normalized and mapped onto [theta_min, theta_max].
ThetaField theta_continuum(std::span<const Region> regions, double angle_deg,
                           double theta_min, double theta_max);

/// theta_max within `radius` of the nearest center, decaying linearly to a
/// theta_min floor beyond it.
ThetaField theta_centers(std::span<const Region> regions, std::span<const GeoPoint> centers,
                         double radius, double theta_max, double theta_min, double slope);

ThetaField make_theta_field(const ScenarioConfig& cfg, std::span<const Region> regions);

/// Counts-mode dataset: per region, n_i observations with variants drawn from
/// theta_i. Two variants produce a binary column, more a categorical one.
Dataset gen_counts_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                           const ThetaField& theta, RngEngine& g,
                           std::vector<std::string>* warnings = nullptr);

/// Frequency-mode dataset: one observation per region with value drawn from
/// Dirichlet(s * theta_i). Two variants reduce to a scalar relative
/// frequency (Beta draw), more keep the full simplex vector.
Dataset gen_frequency_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                              const ThetaField& theta, RngEngine& g);

/// Replaces round(fraction * n) scalar frequencies, chosen without
/// replacement, by 0 or 1 with equal probability.
void inject_outliers(ObservationColumn& col, double fraction, RngEngine& g);

/// Full pipeline for one dataset under cfg.seed.
Dataset generate_dataset(const ScenarioConfig& cfg, std::span<const Region> regions,
                         std::vector<std::string>* warnings = nullptr);

/// Default synthetic geography: a 12 x 12 grid of region centroids over an
/// elongated domain (spacing 12 x 4 units) with log-normal populations that
/// thin from west to east. Fixed internal seed; always identical.
std::vector<Region> default_region_grid();

/// 25 focal points (a 5 x 5 subsample of the default grid) standing in for
/// provincial capitals in center-based scenarios.
std::vector<GeoPoint> default_center_layout();

/// The canonical 120-angle continuum grid: 0, 3, ..., 357 degrees.
std::vector<double> continuum_angle_grid();

/// One config per (angle, replicate); entry seeds derive from base.seed.
std::vector<ScenarioConfig> continuum_suite(const ScenarioConfig& base, int replicates);

/// One config per (center, replicate); 25 centers x 4 replicates = 100
/// datasets with the default layout.
std::vector<ScenarioConfig> centers_suite(const ScenarioConfig& base,
                                          std::span<const GeoPoint> centers, int replicates);

}  // namespace geoling
