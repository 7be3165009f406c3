#include <gtest/gtest.h>

#include <filesystem>

#include "geoling/io.hpp"
#include "test_util.hpp"

using namespace geoling;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("geoling_io_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

}  // namespace

TEST_F(IoTest, BinaryRoundTripIsExact) {
  RngEngine g = make_engine(1);
  auto pts = testutil::random_points(20, g);
  auto col = testutil::random_binary_column(20, g);
  const Dataset ds = make_dataset(PointSet(pts), col, "var");
  const fs::path file = dir_ / "binary.csv";
  write_observations_csv(file, ds);
  const IngestResult in = read_observations_csv(file, Shape::binary);
  EXPECT_EQ(in.n_dropped_rows, 0);
  ASSERT_EQ(in.dataset.points.size(), 20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    EXPECT_EQ(in.dataset.points[i].x, pts[static_cast<size_t>(i)].x);
    EXPECT_EQ(in.dataset.points[i].y, pts[static_cast<size_t>(i)].y);
  }
  EXPECT_EQ(in.dataset.column.discrete(), col.discrete());
}

TEST_F(IoTest, CategoricalLabelsMapByFirstAppearance) {
  const fs::path file = dir_ / "cat.csv";
  write_text_file(file, "x,y,value\n0,0,pop\n1,0,soda\n2,0,pop\n3,0,coke\n");
  const IngestResult in = read_observations_csv(file, Shape::categorical);
  ASSERT_EQ(in.category_labels.size(), 3u);
  EXPECT_EQ(in.category_labels[0], "pop");
  EXPECT_EQ(in.category_labels[1], "soda");
  EXPECT_EQ(in.category_labels[2], "coke");
  EXPECT_EQ(in.dataset.column.discrete(), (std::vector<int>{0, 1, 0, 2}));

  // round-trip keeps the labels
  const fs::path copy = dir_ / "cat2.csv";
  write_observations_csv(copy, in.dataset);
  const IngestResult again = read_observations_csv(copy, Shape::categorical);
  EXPECT_EQ(again.category_labels, in.category_labels);
  EXPECT_EQ(again.dataset.column.discrete(), in.dataset.column.discrete());
}

TEST_F(IoTest, FrequencyRoundTripWithinTolerance) {
  RngEngine g = make_engine(2);
  auto pts = testutil::random_points(15, g);
  Eigen::MatrixXd f(15, 3);
  for (int i = 0; i < 15; ++i) {
    double a = uniform_double(g), b = uniform_double(g), c = uniform_double(g);
    const double s = a + b + c + 1e-9;
    f(i, 0) = a / s;
    f(i, 1) = b / s;
    f(i, 2) = 1.0 - a / s - b / s;
  }
  const Dataset ds = make_dataset(PointSet(pts), ObservationColumn::frequency(f), "var");
  const fs::path file = dir_ / "freq.csv";
  write_observations_csv(file, ds);
  const IngestResult in = read_observations_csv(file, Shape::frequency);
  ASSERT_EQ(in.dataset.column.k(), 3);
  EXPECT_LE((in.dataset.column.frequencies() - f).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(IoTest, ScalarFrequencyUsesFreqHeader) {
  const fs::path file = dir_ / "scalar.csv";
  write_text_file(file, "x,y,freq\n0,0,0.25\n1,0,0.75\n");
  const IngestResult in = read_observations_csv(file, Shape::frequency);
  EXPECT_EQ(in.dataset.column.k(), 1);
  EXPECT_DOUBLE_EQ(in.dataset.column.frequencies()(0, 0), 0.25);
}

TEST_F(IoTest, EmptyCellsAreDroppedAndCounted) {
  const fs::path file = dir_ / "drops.csv";
  write_text_file(file, "x,y,value\n0,0,1\n1,0,\n2,,1\n3,0,0\n,1,0\n");
  const IngestResult in = read_observations_csv(file, Shape::binary);
  EXPECT_EQ(in.n_dropped_rows, 3);
  EXPECT_EQ(in.dataset.points.size(), 2);
}

TEST_F(IoTest, ParseFailuresThrowIoError) {
  const fs::path file = dir_ / "bad.csv";
  write_text_file(file, "x,y,value\n0,0,maybe\n1,0,1\n");
  EXPECT_THROW(read_observations_csv(file, Shape::binary), IoError);
  EXPECT_THROW(read_observations_csv(dir_ / "missing.csv", Shape::binary), IoError);
  write_text_file(dir_ / "nohead.csv", "a,b,c\n0,0,1\n");
  EXPECT_THROW(read_observations_csv(dir_ / "nohead.csv", Shape::binary), IoError);
}

TEST_F(IoTest, RegionsRoundTrip) {
  const auto regions = default_region_grid();
  const fs::path file = dir_ / "regions.csv";
  write_regions_csv(file, regions);
  const auto back = read_regions_csv(file);
  ASSERT_EQ(back.size(), regions.size());
  for (size_t i = 0; i < regions.size(); ++i) {
    EXPECT_EQ(back[i].id, regions[i].id);
    EXPECT_EQ(back[i].population, regions[i].population);
    EXPECT_EQ(back[i].centroid.x, regions[i].centroid.x);
    EXPECT_EQ(back[i].centroid.y, regions[i].centroid.y);
  }
}

TEST_F(IoTest, RegionPoolFilesResolveRelatively) {
  write_text_file(dir_ / "pool0.csv", "x,y\n1,2\n3,4\n");
  write_text_file(dir_ / "regions.csv",
                  "id,population,centroid_x,centroid_y,pool_file\n0,100,0,0,pool0.csv\n1,200,5,5,\n");
  const auto regions = read_regions_csv(dir_ / "regions.csv");
  ASSERT_EQ(regions.size(), 2u);
  ASSERT_EQ(regions[0].location_pool.size(), 2u);
  EXPECT_EQ(regions[0].location_pool[1].y, 4.0);
  EXPECT_TRUE(regions[1].location_pool.empty());
}

TEST_F(IoTest, ScenarioConfigRoundTrip) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::centers;
  cfg.centers = {{10.5, 20.25}, {30, 40}};
  cfg.radius = 7.5;
  cfg.theta_min = 0.2;
  cfg.theta_max = 0.8;
  cfg.mu_obs = 2.5e-4;
  cfg.data_mode = DataMode::frequency;
  cfg.dirichlet_scale = 12.0;
  cfg.outlier_fraction = 0.1;
  cfg.seed = 424242;
  const ScenarioConfig back = parse_scenario_config(scenario_config_to_string(cfg));
  EXPECT_EQ(back.kind, cfg.kind);
  ASSERT_EQ(back.centers.size(), 2u);
  EXPECT_EQ(back.centers[0].x, 10.5);
  EXPECT_EQ(back.centers[0].y, 20.25);
  EXPECT_EQ(back.radius, cfg.radius);
  EXPECT_EQ(back.data_mode, cfg.data_mode);
  EXPECT_EQ(back.dirichlet_scale, cfg.dirichlet_scale);
  EXPECT_EQ(back.outlier_fraction, cfg.outlier_fraction);
  EXPECT_EQ(back.seed, cfg.seed);
}

TEST_F(IoTest, ScenarioConfigRejectsUnknownKeys) {
  EXPECT_THROW(parse_scenario_config("kind = null\nbogus = 3\n"), IoError);
  EXPECT_THROW(parse_scenario_config("kind = sideways\n"), IoError);
}

TEST_F(IoTest, ReportJsonIsStable) {
  TestReport report;
  report.method = Method::moran;
  report.observed = -1.0;
  report.p_value = 0.001;
  report.n_permutations = 999;
  report.permutation_mean = -0.5;
  report.permutation_sd = 0.25;
  report.seed = 7;
  report.params.tau = 2.0;
  ReportContext context;
  context.variable = "toy";
  context.shape = Shape::binary;
  context.n_observations = 2;
  const std::string a = test_report_json(report, context);
  const std::string b = test_report_json(report, context);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"method\": \"moran\""), std::string::npos);
  EXPECT_NE(a.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(a.find("\"tau\": 2.0"), std::string::npos);
}

TEST_F(IoTest, FormatDoubleRoundTrips) {
  RngEngine g = make_engine(3);
  for (int t = 0; t < 200; ++t) {
    const double v = (uniform_double(g) - 0.5) * std::pow(10.0, static_cast<double>(t % 12) - 6.0);
    const std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v);
  }
}
