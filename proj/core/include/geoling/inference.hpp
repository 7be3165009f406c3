#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geoling/classical.hpp"
#include "geoling/geometry.hpp"
#include "geoling/hsic.hpp"
#include "geoling/kernels.hpp"
#include "geoling/lingdata.hpp"
#include "geoling/rng.hpp"

namespace geoling {

/// Thrown when a test is requested on a column shape it does not support.
struct ApplicabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Upper-tailed permutation protocol: larger statistics mean more spatial
/// dependence for every test in this toolkit.
struct PermutationPlan {
  int n_permutations = 999;  // >= 99
  std::uint64_t seed = 0;
};

/// Parameters actually used by a test, echoed into reports.
struct ResolvedParams {
  std::optional<double> tau;
  std::optional<double> weights_gamma;
  std::optional<int> knn_k;
  bool delaunay = false;
  std::optional<double> gamma_geo;
  std::optional<double> gamma_ling;
  std::optional<double> lowrank_tol;
};

/// Optional overrides; anything unset falls back to the median heuristic
/// (HSIC bandwidths, Moran threshold) or the method's conventional weights
/// (Delaunay for join counts).
struct TestParams {
  std::optional<WeightsSpec> weights;
  std::optional<double> gamma_geo;
  std::optional<double> gamma_ling;
  std::optional<double> lowrank_tol;
};

struct TestReport {
  Method method = Method::hsic;
  double observed = 0.0;
  double p_value = 1.0;
  int n_permutations = 0;
  double permutation_mean = 0.0;
  double permutation_sd = 0.0;
  std::uint64_t seed = 0;
  ResolvedParams params;
  std::vector<std::string> warnings;
};

/// A test statistic precomputed against fixed geography, evaluated under
/// relabelings of the linguistic observations. Implementations are immutable
/// and safe to call concurrently.
class PermutationStatistic {
 public:
  virtual ~PermutationStatistic() = default;
  virtual Eigen::Index size() const = 0;
  virtual double operator()(std::span<const int> perm) const = 0;
};

struct PreparedTest {
  std::unique_ptr<PermutationStatistic> statistic;
  ResolvedParams params;
  std::vector<std::string> warnings;
};

/// Builds the reindexable statistic for a dataset: Gram matrices, spatial
/// weights, and distance matrices are computed once here and only gathered
/// per permutation. Throws ApplicabilityError for unsupported shapes.
PreparedTest prepare_statistic(const Dataset& ds, Method method, const TestParams& params = {});

/// Core engine: observed statistic on the identity labeling, B permuted
/// statistics on streams derived from (seed, b), and the add-one empirical
/// p-value (1 + #{stat_b >= observed}) / (1 + B). Reports are identical for
/// any thread count.
TestReport run_permutation_test(const PermutationStatistic& stat, Method method,
                                const PermutationPlan& plan, int threads = 0);

TestReport permutation_test(const Dataset& ds, Method method, const PermutationPlan& plan,
                            const TestParams& params = {}, int threads = 0);

/// Benjamini-Hochberg step-up adjustment, returned in input order.
std::vector<double> bh_fdr(std::span<const double> raw_p);

struct BatchEntry {
  std::string name;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
};

struct BatchReport {
  std::vector<BatchEntry> entries;
  double alpha = 0.05;
  int n_significant = 0;  // adjusted_p <= alpha
};

BatchReport make_batch_report(const std::vector<std::pair<std::string, double>>& named_p,
                              double alpha);

/// Produces one dataset per derived seed; used by the calibration and power
/// harnesses.
using DatasetGenerator = std::function<Dataset(std::uint64_t dataset_seed)>;

struct CalibrationResult {
  std::vector<double> p_values;                    // successful datasets, in order
  double type1_rate = 0.0;                         // fraction with p < alpha
  double alpha = 0.05;
  double ks_statistic = 0.0;                       // sup distance to Uniform(0, 1)
  std::vector<std::pair<double, double>> qq;       // (uniform quantile, sorted p)
  int n_errors = 0;                                // degenerate datasets, excluded
  std::vector<std::string> warnings;
};

/// Runs the test on n_datasets null datasets and summarizes the p-value
/// sample. Dataset and permutation streams both derive from plan.seed, so the
/// whole study is reproducible at any thread count.
CalibrationResult calibrate(const DatasetGenerator& gen, Method method,
                            const PermutationPlan& plan, int n_datasets,
                            const TestParams& params = {}, double alpha = 0.05,
                            int threads = 0);

enum class SweepParameter { moran_tau, hsic_gamma };

struct SweepResult {
  double best_param = 0.0;
  double min_p = 1.0;
  std::vector<std::pair<double, double>> per_param;  // (value, p)
  std::vector<std::string> warnings;
};

/// Evaluates a permutation test per grid value on independent streams and
/// returns the minimizer. The minimum p over a searched grid is not a
/// calibrated p-value; the result carries a warning saying so.
SweepResult sweep_min_p(const Dataset& ds, Method method, SweepParameter which,
                        std::span<const double> grid, const PermutationPlan& plan,
                        const TestParams& base = {}, int threads = 0);

/// Calibration of the min-p sweep itself: per null dataset, Moran's I is
/// swept over distance-quantile cutoffs and the minimum p is kept. Reproduces
/// the Type-I inflation of threshold searching.
CalibrationResult calibrate_sweep_moran(const DatasetGenerator& gen,
                                        std::span<const double> tau_quantiles,
                                        const PermutationPlan& plan, int n_datasets,
                                        double alpha = 0.05, int threads = 0);

struct PowerResult {
  double power = 0.0;  // fraction with p < alpha; errors count as non-rejections
  int n_rejections = 0;
  int n_errors = 0;
  int n_datasets = 0;
  double alpha = 0.05;
  std::vector<double> p_values;  // successful datasets, in order
};

PowerResult power(const DatasetGenerator& gen, Method method, const PermutationPlan& plan,
                  int n_datasets, double alpha = 0.05, const TestParams& params = {},
                  int threads = 0);

/// q-th quantile (nearest rank) of the off-diagonal pair distances.
double distance_quantile(const DistanceMatrix& dm, double q);

}  // namespace geoling
