#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "geoling/io.hpp"
#include "geoling/synthgen.hpp"
#include "test_util.hpp"

using namespace geoling;

namespace {

std::vector<Region> three_regions() {
  return {{0, 1000, {0, 0}, {}}, {1, 2000, {5, 0}, {}}, {2, 500, {10, 0}, {}}};
}

}  // namespace

TEST(RegionCounts, ZeroPopulationStillContributesOne) {
  RngEngine g = make_engine(1);
  std::vector<Region> regions{{0, 0.0, {0, 0}, {}}};
  for (int t = 0; t < 50; ++t) {
    EXPECT_EQ(region_counts(regions, 1.0, g)[0], 1);
  }
}

TEST(RegionCounts, PoissonMeanMonteCarlo) {
  RngEngine g = make_engine(2);
  std::vector<Region> regions{{0, 3.0, {0, 0}, {}}};
  double sum = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    sum += static_cast<double>(region_counts(regions, 1.0, g)[0] - 1);
  }
  EXPECT_NEAR(sum / draws, 3.0, 0.03);
}

TEST(RegionCounts, ExpectedCountScalesWithRate) {
  RngEngine g = make_engine(3);
  std::vector<Region> regions{{0, 100000.0, {0, 0}, {}}};
  double sum = 0.0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    sum += static_cast<double>(region_counts(regions, 1e-5, g)[0]);
  }
  EXPECT_NEAR(sum / draws, 2.0, 0.05);  // 1 + Poisson(1)
}

TEST(SampleLocations, WholePoolWhenSizesMatch) {
  RngEngine g = make_engine(4);
  Region r{0, 10, {0, 0}, {{1, 1}, {2, 2}, {3, 3}}};
  bool fallback = true;
  const auto pts = sample_locations(r, 3, 1.0, g, &fallback);
  EXPECT_FALSE(fallback);
  std::set<std::pair<double, double>> got;
  for (const auto& p : pts) {
    got.insert({p.x, p.y});
  }
  EXPECT_EQ(got.size(), 3u);
  EXPECT_TRUE(got.count({1, 1}) && got.count({2, 2}) && got.count({3, 3}));
}

TEST(SampleLocations, SmallPoolFallsBackWithReplacement) {
  RngEngine g = make_engine(5);
  Region r{0, 10, {0, 0}, {{1, 1}, {2, 2}, {3, 3}}};
  bool fallback = false;
  const auto pts = sample_locations(r, 5, 1.0, g, &fallback);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(pts.size(), 5u);
  for (const auto& p : pts) {
    EXPECT_TRUE((p == GeoPoint{1, 1}) || (p == GeoPoint{2, 2}) || (p == GeoPoint{3, 3}));
  }
}

TEST(SampleLocations, ZeroRadiusCollapsesToCentroid) {
  RngEngine g = make_engine(6);
  Region r{0, 10, {4, 7}, {}};
  for (const auto& p : sample_locations(r, 4, 0.0, g, nullptr)) {
    EXPECT_EQ(p.x, 4.0);
    EXPECT_EQ(p.y, 7.0);
  }
}

TEST(ThetaContinuum, EndpointsHitRange) {
  std::vector<Region> regions{{0, 1, {0, 0}, {}}, {1, 1, {10, 0}, {}}};
  const ThetaField f = theta_continuum(regions, 0.0, 0.1, 0.9);
  EXPECT_DOUBLE_EQ(f.theta(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(f.theta(1, 0), 0.9);
  EXPECT_DOUBLE_EQ(f.theta(0, 1), 0.9);

  const ThetaField reversed = theta_continuum(regions, 180.0, 0.1, 0.9);
  EXPECT_DOUBLE_EQ(reversed.theta(0, 0), 0.9);
  EXPECT_DOUBLE_EQ(reversed.theta(1, 0), 0.1);
}

TEST(ThetaContinuum, FullTurnIsIdentical) {
  const auto regions = default_region_grid();
  const ThetaField a = theta_continuum(regions, 33.0, 0.25, 0.75);
  const ThetaField b = theta_continuum(regions, 393.0, 0.25, 0.75);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(ThetaContinuum, DegenerateProjectionThrows) {
  std::vector<Region> regions{{0, 1, {0, 0}, {}}, {1, 1, {10, 0}, {}}};
  EXPECT_THROW(theta_continuum(regions, 90.0, 0.1, 0.9), std::invalid_argument);
  std::vector<Region> identical{{0, 1, {3, 3}, {}}, {1, 1, {3, 3}, {}}};
  EXPECT_THROW(theta_continuum(identical, 0.0, 0.1, 0.9), std::invalid_argument);
}

TEST(ThetaCenters, PlateauDecayAndFloor) {
  std::vector<Region> regions{
      {0, 1, {0, 0}, {}}, {1, 1, {4, 0}, {}}, {2, 1, {20, 0}, {}}, {3, 1, {0, 9}, {}}};
  const std::vector<GeoPoint> centers{{0, 0}, {0, 12}};
  const double radius = 2.0;
  const double slope = 0.05;
  const ThetaField f = theta_centers(regions, centers, radius, 0.8, 0.2, slope);
  EXPECT_DOUBLE_EQ(f.theta(0, 0), 0.8);                        // at a center
  EXPECT_DOUBLE_EQ(f.theta(1, 0), 0.8 - slope * (4.0 - 2.0));  // on the decay
  EXPECT_DOUBLE_EQ(f.theta(2, 0), 0.2);                        // floor reached
  // nearer to the second center (distance 3) than the first (distance 9)
  EXPECT_DOUBLE_EQ(f.theta(3, 0), 0.8 - slope * (3.0 - 2.0));
}

TEST(ThetaCenters, FloorHitExactly) {
  std::vector<Region> regions{{0, 1, {14, 0}, {}}};
  // d = radius + (theta_max - theta_min) / slope lands exactly on theta_min
  const ThetaField f = theta_centers(regions, std::vector<GeoPoint>{{0, 0}}, 2.0, 0.8, 0.2, 0.05);
  EXPECT_DOUBLE_EQ(f.theta(0, 0), 0.2);
}

TEST(GenCounts, DegenerateThetaIsConstant) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::null_uniform;
  cfg.theta0 = {1.0, 0.0};
  cfg.mu_obs = 0.01;
  cfg.seed = 9;
  const auto regions = three_regions();
  const Dataset ds = generate_dataset(cfg, regions);
  for (int v : ds.column.discrete()) {
    EXPECT_EQ(v, 0);
  }
}

TEST(GenCounts, BinomialFractionConcentrates) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::null_uniform;
  cfg.mu_obs = 40.0;  // ~120k observations over three small regions
  cfg.seed = 10;
  const auto regions = three_regions();
  const Dataset ds = generate_dataset(cfg, regions);
  ASSERT_GT(ds.points.size(), 50000);
  double ones = 0;
  for (int v : ds.column.discrete()) {
    ones += v;
  }
  EXPECT_NEAR(ones / static_cast<double>(ds.points.size()), 0.5, 0.01);
}

TEST(GenCounts, MultinomialFractionsConcentrate) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::null_uniform;
  cfg.k = 3;
  cfg.theta0 = {0.45, 0.45, 0.1};
  cfg.mu_obs = 40.0;
  cfg.seed = 11;
  const auto regions = three_regions();
  const Dataset ds = generate_dataset(cfg, regions);
  ASSERT_EQ(ds.column.shape(), Shape::categorical);
  const double n = static_cast<double>(ds.points.size());
  ASSERT_GT(n, 50000);
  double counts[3] = {0, 0, 0};
  for (int v : ds.column.discrete()) {
    counts[v] += 1;
  }
  EXPECT_NEAR(counts[0] / n, 0.45, 0.01);
  EXPECT_NEAR(counts[1] / n, 0.45, 0.01);
  EXPECT_NEAR(counts[2] / n, 0.10, 0.01);
}

TEST(GenFrequency, LargeScaleConcentratesOnTheta) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::continuum;
  cfg.data_mode = DataMode::frequency;
  cfg.dirichlet_scale = 1e6;
  cfg.theta_min = 0.2;
  cfg.theta_max = 0.8;
  cfg.seed = 12;
  const auto regions = default_region_grid();
  const ThetaField theta = make_theta_field(cfg, regions);
  RngEngine g = make_engine(12);
  const Dataset ds = gen_frequency_dataset(cfg, regions, theta, g);
  ASSERT_EQ(ds.points.size(), static_cast<Eigen::Index>(regions.size()));
  for (Eigen::Index i = 0; i < ds.points.size(); ++i) {
    EXPECT_NEAR(ds.column.frequencies()(i, 0), theta.theta(i, 0), 1e-2);
  }
}

TEST(GenFrequency, DirichletMeanMonteCarlo) {
  RngEngine g = make_engine(13);
  const std::vector<double> alpha{5.0 * 0.3, 5.0 * 0.7};
  double mean0 = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    mean0 += sample_dirichlet(alpha, g)[0];
  }
  EXPECT_NEAR(mean0 / draws, 0.3, 0.005);
}

TEST(GenFrequency, BetaOneOneIsUniform) {
  // k=2, s=2, theta=0.5 gives Beta(1,1); variance 1/12
  RngEngine g = make_engine(14);
  const std::vector<double> alpha{1.0, 1.0};
  double sum = 0.0, sum2 = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const double v = sample_dirichlet(alpha, g)[0];
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = sum2 / draws - mean * mean;
  EXPECT_NEAR(var, 1.0 / 12.0, 0.003);
  EXPECT_NEAR(mean, 0.5, 0.005);
}

TEST(Outliers, FractionZeroLeavesDataUnchanged) {
  Eigen::MatrixXd f(5, 1);
  f << 0.3, 0.4, 0.5, 0.6, 0.7;
  auto col = ObservationColumn::frequency(f);
  RngEngine g = make_engine(15);
  inject_outliers(col, 0.0, g);
  EXPECT_EQ(col.frequencies(), f);
}

TEST(Outliers, ExactCountReplaced) {
  Eigen::MatrixXd f(100, 1);
  for (int i = 0; i < 100; ++i) {
    f(i, 0) = 0.5;
  }
  auto col = ObservationColumn::frequency(f);
  RngEngine g = make_engine(16);
  inject_outliers(col, 0.1, g);
  int replaced = 0;
  for (int i = 0; i < 100; ++i) {
    const double v = col.frequencies()(i, 0);
    if (v == 0.0 || v == 1.0) {
      ++replaced;
    } else {
      EXPECT_DOUBLE_EQ(v, 0.5);
    }
  }
  EXPECT_EQ(replaced, 10);
}

TEST(Outliers, NearFullFractionReplacesAll) {
  Eigen::MatrixXd f(8, 1);
  for (int i = 0; i < 8; ++i) {
    f(i, 0) = 0.5;
  }
  auto col = ObservationColumn::frequency(f);
  RngEngine g = make_engine(17);
  inject_outliers(col, 0.99, g);  // round(0.99 * 8) = 8
  for (int i = 0; i < 8; ++i) {
    const double v = col.frequencies()(i, 0);
    EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
}

TEST(Outliers, NonScalarColumnRejected) {
  auto col = ObservationColumn::binary({0, 1});
  RngEngine g = make_engine(18);
  EXPECT_THROW(inject_outliers(col, 0.1, g), std::invalid_argument);
}

TEST(Suites, AngleGridHas120Angles) {
  const auto angles = continuum_angle_grid();
  EXPECT_EQ(angles.size(), 120u);
  EXPECT_DOUBLE_EQ(angles.front(), 0.0);
  EXPECT_DOUBLE_EQ(angles.back(), 357.0);
}

TEST(Suites, CentersSuiteIsHundredDatasets) {
  ScenarioConfig base;
  base.kind = ScenarioKind::centers;
  base.theta_min = 0.25;
  base.theta_max = 0.75;
  base.radius = 5;
  base.seed = 77;
  const auto centers = default_center_layout();
  EXPECT_EQ(centers.size(), 25u);
  const auto suite = centers_suite(base, centers, 4);
  EXPECT_EQ(suite.size(), 100u);
  std::set<std::uint64_t> seeds;
  for (const auto& cfg : suite) {
    seeds.insert(cfg.seed);
    EXPECT_EQ(cfg.centers.size(), 1u);
  }
  EXPECT_EQ(seeds.size(), 100u);  // distinct replicate seeds
}

TEST(Suites, ConfigsRoundTripThroughSerialization) {
  ScenarioConfig base;
  base.kind = ScenarioKind::continuum;
  base.theta_min = 0.25;
  base.theta_max = 0.75;
  base.mu_obs = 3e-4;
  base.seed = 5;
  const auto suite = continuum_suite(base, 1);
  ASSERT_EQ(suite.size(), 120u);
  for (size_t i = 0; i < suite.size(); i += 17) {
    const ScenarioConfig& cfg = suite[i];
    const ScenarioConfig parsed = parse_scenario_config(scenario_config_to_string(cfg));
    EXPECT_EQ(parsed.kind, cfg.kind);
    EXPECT_EQ(parsed.angle_deg, cfg.angle_deg);
    EXPECT_EQ(parsed.theta_min, cfg.theta_min);
    EXPECT_EQ(parsed.theta_max, cfg.theta_max);
    EXPECT_EQ(parsed.mu_obs, cfg.mu_obs);
    EXPECT_EQ(parsed.seed, cfg.seed);
  }
}

TEST(Generate, ReproducibleBitForBit) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::continuum;
  cfg.theta_min = 0.1;
  cfg.theta_max = 0.9;
  cfg.mu_obs = 1e-4;
  cfg.seed = 99;
  const auto regions = default_region_grid();
  const Dataset a = generate_dataset(cfg, regions);
  const Dataset b = generate_dataset(cfg, regions);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (Eigen::Index i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].x, b.points[i].x);
    EXPECT_EQ(a.points[i].y, b.points[i].y);
  }
  EXPECT_EQ(a.column.discrete(), b.column.discrete());
}

TEST(Generate, ThetaRowsStayOnSimplex) {
  const auto regions = default_region_grid();
  for (double angle : {0.0, 45.0, 120.0, 303.0}) {
    const ThetaField f = theta_continuum(regions, angle, 0.25, 0.75);
    for (Eigen::Index i = 0; i < f.regions(); ++i) {
      EXPECT_NEAR(f.theta.row(i).sum(), 1.0, 1e-9);
      EXPECT_GT(f.theta.row(i).minCoeff(), 0.0);
    }
  }
}

TEST(Generate, DefaultGridIsStable) {
  const auto a = default_region_grid();
  const auto b = default_region_grid();
  ASSERT_EQ(a.size(), 144u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].population, b[i].population);
    EXPECT_EQ(a[i].centroid.x, b[i].centroid.x);
  }
  // populations skew: the maximum should dominate the median noticeably
  std::vector<double> pops;
  for (const auto& r : a) {
    pops.push_back(r.population);
  }
  std::sort(pops.begin(), pops.end());
  EXPECT_GT(pops.back() / pops[pops.size() / 2], 3.0);
}
