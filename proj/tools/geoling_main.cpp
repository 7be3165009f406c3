// geoling: permutation tests for the geographic dependence of linguistic
// (or any categorical/frequency) variables, plus the synthetic-data
// calibration and power harnesses.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 test not applicable to the
// data shape, 3 invalid configuration.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geoling/inference.hpp"
#include "geoling/io.hpp"
#include "geoling/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitApplicability = 2;
constexpr int kExitConfig = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

geoling::Shape parse_shape(const std::string& name) {
  const auto s = geoling::shape_from_name(name);
  if (!s) {
    throw ConfigError("unknown shape: " + name);
  }
  return *s;
}

geoling::Method parse_method(const std::string& name) {
  const auto m = geoling::method_from_name(name);
  if (!m) {
    throw ConfigError("unknown method: " + name);
  }
  return *m;
}

geoling::Metric parse_metric(const std::string& name) {
  if (name == "euclidean") {
    return geoling::Metric::euclidean;
  }
  if (name == "haversine") {
    return geoling::Metric::haversine_km;
  }
  throw ConfigError("unknown metric: " + name);
}

// Shared weight / kernel flags for test-like commands.
struct MethodFlags {
  std::optional<double> tau;
  std::optional<double> gamma;
  std::optional<int> knn;
  std::string weights;  // "delaunay" or empty
  std::optional<double> gamma_ling;
  std::optional<double> lowrank_tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tau", tau, "Threshold-weight cutoff (moran/joins)");
    cmd->add_option("--gamma", gamma,
                    "Exponential-weight rate (moran/joins) or geographic RBF bandwidth (hsic)");
    cmd->add_option("--knn", knn, "k-nearest-neighbor weights (moran/joins)");
    cmd->add_option("--weights", weights, "Weight construction: delaunay");
    cmd->add_option("--gamma-ling", gamma_ling, "Linguistic RBF bandwidth for frequency data (hsic)");
    cmd->add_option("--lowrank-tol", lowrank_tol,
                    "Incomplete-Cholesky residual tolerance; enables the low-rank HSIC path");
  }

  geoling::TestParams resolve(geoling::Method method) const {
    geoling::TestParams params;
    int weight_flags = 0;
    if (tau) ++weight_flags;
    if (knn) ++weight_flags;
    if (!weights.empty()) ++weight_flags;
    if (gamma && method != geoling::Method::hsic) ++weight_flags;
    if (weight_flags > 1) {
      throw ConfigError("choose at most one of --tau, --gamma, --knn, --weights");
    }
    if (!weights.empty() && weights != "delaunay") {
      throw ConfigError("unknown --weights value: " + weights);
    }
    if (method == geoling::Method::hsic) {
      params.gamma_geo = gamma;
      params.gamma_ling = gamma_ling;
      params.lowrank_tol = lowrank_tol;
      return params;
    }
    if (tau) {
      params.weights = geoling::ThresholdSpec{*tau};
    } else if (gamma) {
      params.weights = geoling::ExponentialSpec{*gamma};
    } else if (knn) {
      params.weights = geoling::KnnSpec{*knn};
    } else if (!weights.empty()) {
      params.weights = geoling::DelaunaySpec{};
    }
    return params;
  }
};

std::vector<geoling::Region> load_regions(const std::string& regions_file) {
  if (regions_file.empty()) {
    return geoling::default_region_grid();
  }
  return geoling::read_regions_csv(regions_file);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw geoling::IoError("cannot create output directory: " + dir.string());
  }
}

std::string pvalues_csv(const std::vector<double>& p_values) {
  std::ostringstream out;
  out << "dataset,p\n";
  for (size_t i = 0; i < p_values.size(); ++i) {
    out << i << ',' << geoling::format_double(p_values[i]) << '\n';
  }
  return out.str();
}

std::string qq_csv(const std::vector<std::pair<double, double>>& qq) {
  std::ostringstream out;
  out << "uniform_quantile,p\n";
  for (const auto& [x, y] : qq) {
    out << geoling::format_double(x) << ',' << geoling::format_double(y) << '\n';
  }
  return out.str();
}

int run_test(const std::string& input, const std::string& shape_name,
             const std::string& method_name, int permutations, std::uint64_t seed,
             const MethodFlags& flags, const std::string& metric_name,
             const std::string& output, int threads) {
  const geoling::Shape shape = parse_shape(shape_name);
  const geoling::Method method = parse_method(method_name);
  const geoling::Metric metric = parse_metric(metric_name);

  const geoling::IngestResult ingest = geoling::read_observations_csv(input, shape, metric);
  const geoling::PermutationPlan plan{permutations, seed};
  const geoling::TestReport report =
      geoling::permutation_test(ingest.dataset, method, plan, flags.resolve(method), threads);

  geoling::ReportContext context;
  context.variable = ingest.dataset.variable_name;
  context.shape = shape;
  context.n_observations = ingest.dataset.points.size();
  context.n_dropped_rows = ingest.n_dropped_rows;
  context.category_labels = ingest.category_labels;
  geoling::write_text_file(output, geoling::test_report_json(report, context));
  return kExitOk;
}

int run_batch(const std::string& manifest_file, const std::string& method_name, double alpha,
              int permutations, std::uint64_t seed, const MethodFlags& flags,
              const std::string& metric_name, const std::string& output, int threads) {
  const geoling::Metric metric = parse_metric(metric_name);
  const std::optional<geoling::Method> default_method =
      method_name.empty() ? std::nullopt : std::optional(parse_method(method_name));

  struct Entry {
    std::string name;
    fs::path file;
    geoling::Shape shape;
    geoling::Method method;
  };

  const std::string text = geoling::read_text_file(manifest_file);
  const fs::path base_dir = fs::path(manifest_file).parent_path();
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::ostringstream trimmed;
    trimmed << line;
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (first) {
      first = false;
      if (!cells.empty() && cells[0] == "name") {
        continue;  // header row
      }
    }
    if (cells.size() < 3) {
      throw geoling::IoError("manifest rows need name,file,shape[,method]: " + line);
    }
    Entry e;
    e.name = cells[0];
    e.file = base_dir / cells[1];
    e.shape = parse_shape(cells[2]);
    if (cells.size() >= 4 && !cells[3].empty()) {
      e.method = parse_method(cells[3]);
    } else if (default_method) {
      e.method = *default_method;
    } else {
      throw ConfigError("manifest row for '" + e.name + "' has no method and no --method default");
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) {
    throw geoling::IoError("empty manifest: " + manifest_file);
  }

  struct Outcome {
    bool ok = false;
    double p = 1.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(entries.size());
  geoling::parallel_chunks(static_cast<std::int64_t>(entries.size()), threads,
                           [&](std::int64_t b0, std::int64_t b1) {
                             for (std::int64_t i = b0; i < b1; ++i) {
                               const Entry& e = entries[static_cast<size_t>(i)];
                               Outcome& out = outcomes[static_cast<size_t>(i)];
                               try {
                                 const auto ingest =
                                     geoling::read_observations_csv(e.file, e.shape, metric);
                                 const geoling::PermutationPlan plan{
                                     permutations,
                                     geoling::substream_seed(seed, static_cast<std::uint64_t>(i))};
                                 const auto report = geoling::permutation_test(
                                     ingest.dataset, e.method, plan, flags.resolve(e.method), 1);
                                 out.ok = true;
                                 out.p = report.p_value;
                               } catch (const std::exception& ex) {
                                 out.error = ex.what();
                               }
                             }
                           });

  std::vector<std::pair<std::string, double>> named_p;
  std::vector<geoling::BatchFailure> failures;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (outcomes[i].ok) {
      named_p.emplace_back(entries[i].name, outcomes[i].p);
    } else {
      failures.push_back({entries[i].name, outcomes[i].error});
    }
  }
  if (named_p.empty()) {
    throw geoling::IoError("no manifest variable produced a result");
  }
  const geoling::BatchReport report = geoling::make_batch_report(named_p, alpha);
  const geoling::Method report_method = default_method ? *default_method : entries[0].method;
  geoling::write_text_file(output, geoling::batch_report_json(report, report_method, failures));
  return kExitOk;
}

int run_synth(const std::string& scenario_file, const std::string& out_dir,
              const std::string& regions_file, std::uint64_t seed) {
  geoling::ScenarioConfig cfg = geoling::read_scenario_config(scenario_file);
  cfg.seed = seed;
  const auto regions = load_regions(regions_file);
  std::vector<std::string> warnings;
  const geoling::Dataset ds = geoling::generate_dataset(cfg, regions, &warnings);

  ensure_directory(out_dir);
  const fs::path dir(out_dir);
  geoling::write_observations_csv(dir / "observations.csv", ds);
  geoling::write_scenario_config(dir / "scenario_used.cfg", cfg);

  ordered_json meta;
  meta["schema_version"] = 1;
  meta["kind"] = "synth_meta";
  meta["scenario"] = std::string(geoling::scenario_kind_name(cfg.kind));
  meta["data_mode"] = std::string(geoling::data_mode_name(cfg.data_mode));
  meta["n_observations"] = ds.points.size();
  meta["seed"] = cfg.seed;
  meta["warnings"] = warnings;
  geoling::write_text_file(dir / "meta.json", meta.dump(2) + "\n");
  return kExitOk;
}

int run_calibrate(const std::string& scenario_file, const std::string& method_name,
                  int n_datasets, int permutations, std::uint64_t seed, double alpha,
                  const std::string& regions_file, int sweep_cutoffs, const MethodFlags& flags,
                  const std::string& out_dir, int threads) {
  geoling::ScenarioConfig cfg = geoling::read_scenario_config(scenario_file);
  if (cfg.kind != geoling::ScenarioKind::null_uniform) {
    throw ConfigError("calibrate requires a null scenario (kind = null)");
  }
  const geoling::Method method = parse_method(method_name);
  const auto regions = load_regions(regions_file);
  geoling::validate(cfg);

  const geoling::DatasetGenerator gen = [cfg, regions](std::uint64_t dataset_seed) {
    geoling::ScenarioConfig c = cfg;
    c.seed = dataset_seed;
    return geoling::generate_dataset(c, regions);
  };

  const geoling::PermutationPlan plan{permutations, seed};
  geoling::CalibrationResult result;
  if (sweep_cutoffs > 0) {
    if (method != geoling::Method::moran) {
      throw ConfigError("--sweep applies to Moran's I cutoff searches");
    }
    if (sweep_cutoffs < 2) {
      throw ConfigError("--sweep needs at least 2 cutoffs");
    }
    std::vector<double> quantiles;
    for (int i = 1; i <= sweep_cutoffs; ++i) {
      quantiles.push_back(static_cast<double>(i) / static_cast<double>(sweep_cutoffs + 1));
    }
    result = geoling::calibrate_sweep_moran(gen, quantiles, plan, n_datasets, alpha, threads);
  } else {
    result = geoling::calibrate(gen, method, plan, n_datasets, flags.resolve(method), alpha,
                                threads);
  }

  ensure_directory(out_dir);
  const fs::path dir(out_dir);
  geoling::write_text_file(dir / "pvalues.csv", pvalues_csv(result.p_values));
  geoling::write_text_file(dir / "qq.csv", qq_csv(result.qq));

  ordered_json summary;
  summary["schema_version"] = 1;
  summary["kind"] = "calibration_report";
  summary["method"] = method_name;
  summary["n_datasets"] = n_datasets;
  summary["n_errors"] = result.n_errors;
  summary["permutations"] = permutations;
  summary["seed"] = seed;
  summary["alpha"] = result.alpha;
  summary["type1_rate"] = result.type1_rate;
  summary["ks_statistic"] = result.ks_statistic;
  summary["sweep_cutoffs"] = sweep_cutoffs;
  summary["warnings"] = result.warnings;
  geoling::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int run_power(const std::string& scenario_file, const std::string& method_name, int n_datasets,
              int permutations, std::uint64_t seed, double alpha,
              const std::string& regions_file, const std::string& suite, int datasets_per_point,
              const MethodFlags& flags, const std::string& out_dir, int threads) {
  const geoling::Method method = parse_method(method_name);
  const auto regions = load_regions(regions_file);
  geoling::ScenarioConfig cfg = geoling::read_scenario_config(scenario_file);
  cfg.seed = seed;
  geoling::validate(cfg);
  const geoling::TestParams params = flags.resolve(method);

  ensure_directory(out_dir);
  const fs::path dir(out_dir);

  ordered_json summary;
  summary["schema_version"] = 1;
  summary["kind"] = "power_report";
  summary["method"] = method_name;
  summary["permutations"] = permutations;
  summary["seed"] = seed;
  summary["alpha"] = alpha;

  if (suite.empty()) {
    const geoling::DatasetGenerator gen = [cfg, regions](std::uint64_t dataset_seed) {
      geoling::ScenarioConfig c = cfg;
      c.seed = dataset_seed;
      return geoling::generate_dataset(c, regions);
    };
    const geoling::PowerResult result =
        geoling::power(gen, method, {permutations, seed}, n_datasets, alpha, params, threads);
    geoling::write_text_file(dir / "pvalues.csv", pvalues_csv(result.p_values));
    summary["n_datasets"] = result.n_datasets;
    summary["n_errors"] = result.n_errors;
    summary["n_rejections"] = result.n_rejections;
    summary["power"] = result.power;
    geoling::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }

  // Suite mode: rejection fraction per grid point (angle or center).
  std::vector<geoling::ScenarioConfig> entries;
  std::vector<double> grid_value;
  if (suite == "continuum") {
    entries = geoling::continuum_suite(cfg, datasets_per_point);
    for (const auto& e : entries) {
      grid_value.push_back(e.angle_deg);
    }
  } else if (suite == "centers") {
    const auto centers = geoling::default_center_layout();
    entries = geoling::centers_suite(cfg, centers, datasets_per_point);
    for (size_t i = 0; i < entries.size(); ++i) {
      grid_value.push_back(static_cast<double>(i / static_cast<size_t>(datasets_per_point)));
    }
  } else {
    throw ConfigError("unknown --suite: " + suite + " (expected continuum or centers)");
  }

  std::vector<double> pvals(entries.size(), std::numeric_limits<double>::quiet_NaN());
  geoling::parallel_chunks(static_cast<std::int64_t>(entries.size()), threads,
                           [&](std::int64_t b0, std::int64_t b1) {
                             for (std::int64_t i = b0; i < b1; ++i) {
                               const auto& entry = entries[static_cast<size_t>(i)];
                               try {
                                 const auto ds = geoling::generate_dataset(entry, regions);
                                 const geoling::PermutationPlan plan{
                                     permutations,
                                     geoling::substream_seed(seed, 0xC0FFEEULL + static_cast<std::uint64_t>(i))};
                                 pvals[static_cast<size_t>(i)] =
                                     geoling::permutation_test(ds, method, plan, params, 1).p_value;
                               } catch (const std::invalid_argument&) {
                                 // degenerate draw: counted as a non-rejection
                               }
                             }
                           });

  std::map<double, std::pair<int, int>> per_point;  // grid value -> (rejections, total)
  for (size_t i = 0; i < entries.size(); ++i) {
    auto& [rej, total] = per_point[grid_value[i]];
    ++total;
    if (!std::isnan(pvals[i]) && pvals[i] < alpha) {
      ++rej;
    }
  }

  std::ostringstream curve;
  curve << (suite == "continuum" ? "angle,power\n" : "center,power\n");
  double power_sum = 0.0;
  for (const auto& [value, counts] : per_point) {
    const double p = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    curve << geoling::format_double(value) << ',' << geoling::format_double(p) << '\n';
    power_sum += p;
  }
  geoling::write_text_file(dir / "power_curve.csv", curve.str());

  summary["suite"] = suite;
  summary["datasets_per_point"] = datasets_per_point;
  summary["n_grid_points"] = per_point.size();
  summary["mean_power"] = power_sum / static_cast<double>(per_point.size());
  geoling::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoling: spatial dependence tests for geo-coded variables"};
  app.require_subcommand(1);

  // test
  auto* cmd_test = app.add_subcommand("test", "Permutation test on one observations file");
  std::string in_file, shape_name, method_name = "hsic", metric_name = "euclidean", out_file;
  int permutations = 999;
  std::uint64_t seed = 0;
  int threads = 0;
  MethodFlags test_flags;
  cmd_test->add_option("--input", in_file, "Observations CSV")->required();
  cmd_test->add_option("--shape", shape_name, "binary | categorical | frequency")->required();
  cmd_test->add_option("--method", method_name, "hsic | moran | mantel | joins")->required();
  cmd_test->add_option("--permutations", permutations, "Permutation count B (default 999)");
  cmd_test->add_option("--seed", seed, "RNG seed")->required();
  cmd_test->add_option("--metric", metric_name, "euclidean | haversine");
  cmd_test->add_option("--output", out_file, "Report JSON path")->required();
  cmd_test->add_option("--threads", threads, "Worker threads (0 = auto)");
  test_flags.attach(cmd_test);

  // batch
  auto* cmd_batch = app.add_subcommand("batch", "Run many variables and adjust p-values (BH-FDR)");
  std::string manifest_file, batch_method, batch_metric = "euclidean", batch_out;
  double alpha = 0.05;
  int batch_permutations = 9999;
  std::uint64_t batch_seed = 0;
  int batch_threads = 0;
  MethodFlags batch_flags;
  cmd_batch->add_option("--manifest", manifest_file, "CSV: name,file,shape[,method]")->required();
  cmd_batch->add_option("--method", batch_method, "Default method for manifest rows");
  cmd_batch->add_option("--alpha", alpha, "Significance level (default 0.05)");
  cmd_batch->add_option("--permutations", batch_permutations, "Permutation count B (default 9999)");
  cmd_batch->add_option("--seed", batch_seed, "RNG seed")->required();
  cmd_batch->add_option("--metric", batch_metric, "euclidean | haversine");
  cmd_batch->add_option("--output", batch_out, "Batch report JSON path")->required();
  cmd_batch->add_option("--threads", batch_threads, "Worker threads (0 = auto)");
  batch_flags.attach(cmd_batch);

  // synth
  auto* cmd_synth = app.add_subcommand("synth", "Generate one synthetic dataset");
  std::string synth_scenario, synth_out, synth_regions;
  std::uint64_t synth_seed = 0;
  cmd_synth->add_option("--scenario", synth_scenario, "Scenario config file")->required();
  cmd_synth->add_option("--out", synth_out, "Output directory")->required();
  cmd_synth->add_option("--regions", synth_regions, "Region CSV (default: built-in grid)");
  cmd_synth->add_option("--seed", synth_seed, "RNG seed (overrides the scenario file)")->required();

  // calibrate
  auto* cmd_calibrate = app.add_subcommand("calibrate", "Null-scenario p-value calibration study");
  std::string cal_scenario, cal_method, cal_regions, cal_out;
  int cal_datasets = 500, cal_permutations = 499, cal_sweep = 0, cal_threads = 0;
  std::uint64_t cal_seed = 0;
  double cal_alpha = 0.05;
  MethodFlags cal_flags;
  cmd_calibrate->add_option("--scenario", cal_scenario, "Null scenario config file")->required();
  cmd_calibrate->add_option("--method", cal_method, "hsic | moran | mantel | joins")->required();
  cmd_calibrate->add_option("--datasets", cal_datasets, "Number of null datasets (default 500)");
  cmd_calibrate->add_option("--permutations", cal_permutations, "Permutations per dataset (default 499)");
  cmd_calibrate->add_option("--seed", cal_seed, "RNG seed")->required();
  cmd_calibrate->add_option("--alpha", cal_alpha, "Significance level (default 0.05)");
  cmd_calibrate->add_option("--regions", cal_regions, "Region CSV (default: built-in grid)");
  cmd_calibrate->add_option("--sweep", cal_sweep,
                            "Min-p sweep over this many Moran cutoff quantiles (demonstrates miscalibration)");
  cmd_calibrate->add_option("--out", cal_out, "Output directory")->required();
  cmd_calibrate->add_option("--threads", cal_threads, "Worker threads (0 = auto)");
  cal_flags.attach(cmd_calibrate);

  // power
  auto* cmd_power = app.add_subcommand("power", "Signal-scenario power study");
  std::string pow_scenario, pow_method, pow_regions, pow_out, pow_suite;
  int pow_datasets = 100, pow_permutations = 199, pow_per_point = 4, pow_threads = 0;
  std::uint64_t pow_seed = 0;
  double pow_alpha = 0.05;
  MethodFlags pow_flags;
  cmd_power->add_option("--scenario", pow_scenario, "Scenario config file")->required();
  cmd_power->add_option("--method", pow_method, "hsic | moran | mantel | joins")->required();
  cmd_power->add_option("--datasets", pow_datasets, "Number of datasets (default 100)");
  cmd_power->add_option("--permutations", pow_permutations, "Permutations per dataset (default 199)");
  cmd_power->add_option("--seed", pow_seed, "RNG seed")->required();
  cmd_power->add_option("--alpha", pow_alpha, "Significance level (default 0.05)");
  cmd_power->add_option("--regions", pow_regions, "Region CSV (default: built-in grid)");
  cmd_power->add_option("--suite", pow_suite,
                        "Run a canonical grid instead of one scenario: continuum | centers");
  cmd_power->add_option("--datasets-per-point", pow_per_point,
                        "Replicates per grid point in suite mode (default 4)");
  cmd_power->add_option("--out", pow_out, "Output directory")->required();
  cmd_power->add_option("--threads", pow_threads, "Worker threads (0 = auto)");
  pow_flags.attach(cmd_power);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (cmd_test->parsed()) {
      return run_test(in_file, shape_name, method_name, permutations, seed, test_flags,
                      metric_name, out_file, threads);
    }
    if (cmd_batch->parsed()) {
      return run_batch(manifest_file, batch_method, alpha, batch_permutations, batch_seed,
                       batch_flags, batch_metric, batch_out, batch_threads);
    }
    if (cmd_synth->parsed()) {
      return run_synth(synth_scenario, synth_out, synth_regions, synth_seed);
    }
    if (cmd_calibrate->parsed()) {
      return run_calibrate(cal_scenario, cal_method, cal_datasets, cal_permutations, cal_seed,
                           cal_alpha, cal_regions, cal_sweep, cal_flags, cal_out, cal_threads);
    }
    if (cmd_power->parsed()) {
      return run_power(pow_scenario, pow_method, pow_datasets, pow_permutations, pow_seed,
                       pow_alpha, pow_regions, pow_suite, pow_per_point, pow_flags, pow_out,
                       pow_threads);
    }
  } catch (const geoling::ApplicabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitApplicability;
  } catch (const geoling::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
