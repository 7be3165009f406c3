#include "geoling/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace geoling {

namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(std::string_view(line).substr(start)));
      return out;
    }
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
}

double parse_double(const std::string& cell, const std::string& what) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError("cannot parse " + what + " from '" + cell + "'");
  }
  return value;
}

// Seeds are 64-bit and must not pass through a double.
std::uint64_t parse_uint64(const std::string& cell, const std::string& what) {
  std::uint64_t value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError("cannot parse " + what + " from '" + cell + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw IoError("cannot format double");
  }
  return std::string(buf, ptr);
}

IngestResult read_observations_csv(const std::filesystem::path& path, Shape shape,
                                   Metric metric) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw IoError("empty observations file: " + path.string());
  }
  const auto header = split(lines[0], ',');
  const int col_x = find_column(header, "x");
  const int col_y = find_column(header, "y");
  if (col_x < 0 || col_y < 0) {
    throw IoError("observations file needs 'x' and 'y' columns: " + path.string());
  }

  std::vector<int> value_cols;
  bool scalar_freq = false;
  if (shape == Shape::frequency) {
    const int col_freq = find_column(header, "freq");
    if (col_freq >= 0) {
      scalar_freq = true;
      value_cols.push_back(col_freq);
    } else {
      for (int k = 0;; ++k) {
        const int c = find_column(header, "f" + std::to_string(k));
        if (c < 0) {
          break;
        }
        value_cols.push_back(c);
      }
      if (value_cols.empty()) {
        throw IoError("frequency file needs a 'freq' column or 'f0..f{k-1}' columns: " +
                      path.string());
      }
    }
  } else {
    const int col_value = find_column(header, "value");
    if (col_value < 0) {
      throw IoError("observations file needs a 'value' column: " + path.string());
    }
    value_cols.push_back(col_value);
  }

  std::vector<GeoPoint> points;
  std::vector<int> discrete;
  std::vector<double> freq_rows;
  std::vector<std::string> labels;
  std::map<std::string, int> label_index;
  int dropped = 0;

  for (size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) {
      continue;
    }
    const auto cells = split(lines[row], ',');
    auto cell_at = [&](int c) -> std::string {
      return c < static_cast<int>(cells.size()) ? cells[static_cast<size_t>(c)] : std::string{};
    };
    bool missing = cell_at(col_x).empty() || cell_at(col_y).empty();
    for (int c : value_cols) {
      missing = missing || cell_at(c).empty();
    }
    if (missing) {
      ++dropped;
      continue;
    }

    points.push_back({parse_double(cell_at(col_x), "x"), parse_double(cell_at(col_y), "y")});
    if (shape == Shape::frequency) {
      for (int c : value_cols) {
        freq_rows.push_back(parse_double(cell_at(c), "frequency"));
      }
    } else if (shape == Shape::binary) {
      const std::string v = cell_at(value_cols[0]);
      if (v == "0") {
        discrete.push_back(0);
      } else if (v == "1") {
        discrete.push_back(1);
      } else {
        throw IoError("binary value must be 0 or 1, got '" + v + "' in " + path.string());
      }
    } else {
      const std::string v = cell_at(value_cols[0]);
      auto [it, inserted] = label_index.try_emplace(v, static_cast<int>(labels.size()));
      if (inserted) {
        labels.push_back(v);
      }
      discrete.push_back(it->second);
    }
  }

  if (points.size() < 2) {
    throw IoError("observations file has fewer than 2 usable rows: " + path.string());
  }

  ObservationColumn column = [&] {
    switch (shape) {
      case Shape::binary:
        return ObservationColumn::binary(std::move(discrete));
      case Shape::categorical:
        if (labels.size() < 2) {
          throw IoError("categorical file has fewer than 2 distinct labels: " + path.string());
        }
        return ObservationColumn::categorical(std::move(discrete),
                                              static_cast<int>(labels.size()), labels);
      case Shape::frequency: {
        const Eigen::Index n = static_cast<Eigen::Index>(points.size());
        const Eigen::Index k = scalar_freq ? 1 : static_cast<Eigen::Index>(value_cols.size());
        Eigen::MatrixXd values(n, k);
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) {
            values(i, j) = freq_rows[static_cast<size_t>(i * k + j)];
          }
        }
        return ObservationColumn::frequency(std::move(values));
      }
    }
    throw IoError("unknown shape");
  }();

  IngestResult result{make_dataset(PointSet(std::move(points), metric), std::move(column),
                                   path.stem().string()),
                      dropped, std::move(labels)};
  return result;
}

void write_observations_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ostringstream out;
  const ObservationColumn& col = ds.column;
  if (col.shape() == Shape::frequency) {
    if (col.k() == 1) {
      out << "x,y,freq\n";
    } else {
      out << "x,y";
      for (int j = 0; j < col.k(); ++j) {
        out << ",f" << j;
      }
      out << "\n";
    }
  } else {
    out << "x,y,value\n";
  }
  for (Eigen::Index i = 0; i < ds.points.size(); ++i) {
    const GeoPoint& p = ds.points[i];
    out << format_double(p.x) << ',' << format_double(p.y);
    if (col.shape() == Shape::frequency) {
      for (int j = 0; j < col.k(); ++j) {
        out << ',' << format_double(col.frequencies()(i, j));
      }
    } else {
      const int v = col.discrete()[static_cast<size_t>(i)];
      if (col.shape() == Shape::categorical && !col.labels().empty()) {
        out << ',' << col.labels()[static_cast<size_t>(v)];
      } else {
        out << ',' << v;
      }
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<Region> read_regions_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw IoError("empty region file: " + path.string());
  }
  const auto header = split(lines[0], ',');
  const int col_id = find_column(header, "id");
  const int col_pop = find_column(header, "population");
  const int col_cx = find_column(header, "centroid_x");
  const int col_cy = find_column(header, "centroid_y");
  const int col_pool = find_column(header, "pool_file");
  if (col_id < 0 || col_pop < 0 || col_cx < 0 || col_cy < 0) {
    throw IoError("region file needs id,population,centroid_x,centroid_y columns: " +
                  path.string());
  }

  std::vector<Region> regions;
  for (size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) {
      continue;
    }
    const auto cells = split(lines[row], ',');
    auto cell_at = [&](int c) -> std::string {
      return c >= 0 && c < static_cast<int>(cells.size()) ? cells[static_cast<size_t>(c)]
                                                          : std::string{};
    };
    Region r;
    r.id = static_cast<int>(parse_double(cell_at(col_id), "id"));
    r.population = parse_double(cell_at(col_pop), "population");
    if (r.population < 0.0) {
      throw IoError("region population must be nonnegative: " + path.string());
    }
    r.centroid = {parse_double(cell_at(col_cx), "centroid_x"),
                  parse_double(cell_at(col_cy), "centroid_y")};
    const std::string pool_file = cell_at(col_pool);
    if (!pool_file.empty()) {
      const std::filesystem::path pool_path = path.parent_path() / pool_file;
      const auto pool_lines = read_lines(pool_path);
      if (pool_lines.empty()) {
        throw IoError("empty location pool: " + pool_path.string());
      }
      const auto pool_header = split(pool_lines[0], ',');
      const int px = find_column(pool_header, "x");
      const int py = find_column(pool_header, "y");
      if (px < 0 || py < 0) {
        throw IoError("location pool needs x,y columns: " + pool_path.string());
      }
      for (size_t i = 1; i < pool_lines.size(); ++i) {
        if (trim(pool_lines[i]).empty()) {
          continue;
        }
        const auto pc = split(pool_lines[i], ',');
        r.location_pool.push_back({parse_double(pc[static_cast<size_t>(px)], "pool x"),
                                   parse_double(pc[static_cast<size_t>(py)], "pool y")});
      }
    }
    regions.push_back(std::move(r));
  }
  if (regions.empty()) {
    throw IoError("region file has no rows: " + path.string());
  }
  return regions;
}

void write_regions_csv(const std::filesystem::path& path, std::span<const Region> regions) {
  std::ostringstream out;
  out << "id,population,centroid_x,centroid_y\n";
  for (const Region& r : regions) {
    out << r.id << ',' << format_double(r.population) << ',' << format_double(r.centroid.x)
        << ',' << format_double(r.centroid.y) << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& piece : split(text, ';')) {
    if (!piece.empty()) {
      out.push_back(parse_double(piece, "list entry"));
    }
  }
  return out;
}

std::vector<GeoPoint> parse_point_list(const std::string& text) {
  std::vector<GeoPoint> out;
  for (const auto& piece : split(text, ';')) {
    if (piece.empty()) {
      continue;
    }
    const auto xy = split(piece, ':');
    if (xy.size() != 2) {
      throw IoError("point list entries must look like x:y, got '" + piece + "'");
    }
    out.push_back({parse_double(xy[0], "point x"), parse_double(xy[1], "point y")});
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  ScenarioConfig cfg;
  bool seed_set = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string trimmed = trim(line);
    if (trimmed.empty()) {
      continue;
    }
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw IoError("scenario config lines must look like 'key = value': '" + trimmed + "'");
    }
    const std::string key = trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = trim(std::string_view(trimmed).substr(eq + 1));

    if (key == "kind") {
      if (value == "null") {
        cfg.kind = ScenarioKind::null_uniform;
      } else if (value == "continuum") {
        cfg.kind = ScenarioKind::continuum;
      } else if (value == "centers") {
        cfg.kind = ScenarioKind::centers;
      } else {
        throw IoError("unknown scenario kind: " + value);
      }
    } else if (key == "k") {
      cfg.k = static_cast<int>(parse_double(value, "k"));
    } else if (key == "theta0") {
      cfg.theta0 = parse_double_list(value);
    } else if (key == "angle") {
      cfg.angle_deg = parse_double(value, "angle");
    } else if (key == "theta_min") {
      cfg.theta_min = parse_double(value, "theta_min");
    } else if (key == "theta_max") {
      cfg.theta_max = parse_double(value, "theta_max");
    } else if (key == "centers") {
      cfg.centers = parse_point_list(value);
    } else if (key == "radius") {
      cfg.radius = parse_double(value, "radius");
    } else if (key == "decay_slope") {
      cfg.decay_slope = parse_double(value, "decay_slope");
    } else if (key == "mu_obs") {
      cfg.mu_obs = parse_double(value, "mu_obs");
    } else if (key == "data_mode") {
      if (value == "counts") {
        cfg.data_mode = DataMode::counts;
      } else if (value == "frequency") {
        cfg.data_mode = DataMode::frequency;
      } else {
        throw IoError("unknown data_mode: " + value);
      }
    } else if (key == "dirichlet_scale") {
      cfg.dirichlet_scale = parse_double(value, "dirichlet_scale");
    } else if (key == "outlier_fraction") {
      cfg.outlier_fraction = parse_double(value, "outlier_fraction");
    } else if (key == "sample_disc_radius") {
      cfg.sample_disc_radius = parse_double(value, "sample_disc_radius");
    } else if (key == "seed") {
      cfg.seed = parse_uint64(value, "seed");
      seed_set = true;
    } else if (key == "metric") {
      if (value == "euclidean") {
        cfg.metric = Metric::euclidean;
      } else if (value == "haversine") {
        cfg.metric = Metric::haversine_km;
      } else {
        throw IoError("unknown metric: " + value);
      }
    } else {
      throw IoError("unknown scenario config key: " + key);
    }
  }
  (void)seed_set;
  return cfg;
}

std::string scenario_config_to_string(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "kind = " << scenario_kind_name(cfg.kind) << '\n';
  out << "k = " << cfg.k << '\n';
  if (!cfg.theta0.empty()) {
    out << "theta0 = ";
    for (size_t i = 0; i < cfg.theta0.size(); ++i) {
      out << (i ? ";" : "") << format_double(cfg.theta0[i]);
    }
    out << '\n';
  }
  if (cfg.kind == ScenarioKind::continuum) {
    out << "angle = " << format_double(cfg.angle_deg) << '\n';
  }
  if (cfg.kind != ScenarioKind::null_uniform) {
    out << "theta_min = " << format_double(cfg.theta_min) << '\n';
    out << "theta_max = " << format_double(cfg.theta_max) << '\n';
  }
  if (cfg.kind == ScenarioKind::centers) {
    out << "centers = ";
    for (size_t i = 0; i < cfg.centers.size(); ++i) {
      out << (i ? ";" : "") << format_double(cfg.centers[i].x) << ':'
          << format_double(cfg.centers[i].y);
    }
    out << '\n';
    out << "radius = " << format_double(cfg.radius) << '\n';
    if (cfg.decay_slope > 0.0) {
      out << "decay_slope = " << format_double(cfg.decay_slope) << '\n';
    }
  }
  out << "mu_obs = " << format_double(cfg.mu_obs) << '\n';
  out << "data_mode = " << data_mode_name(cfg.data_mode) << '\n';
  if (cfg.data_mode == DataMode::frequency) {
    out << "dirichlet_scale = " << format_double(cfg.dirichlet_scale) << '\n';
  }
  if (cfg.outlier_fraction > 0.0) {
    out << "outlier_fraction = " << format_double(cfg.outlier_fraction) << '\n';
  }
  out << "sample_disc_radius = " << format_double(cfg.sample_disc_radius) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "metric = " << (cfg.metric == Metric::euclidean ? "euclidean" : "haversine") << '\n';
  return out.str();
}

ScenarioConfig read_scenario_config(const std::filesystem::path& path) {
  return parse_scenario_config(read_text_file(path));
}

void write_scenario_config(const std::filesystem::path& path, const ScenarioConfig& cfg) {
  write_text_file(path, scenario_config_to_string(cfg));
}

namespace {

ordered_json params_json(const TestReport& report) {
  ordered_json params;
  params["permutations"] = report.n_permutations;
  params["seed"] = report.seed;
  if (report.params.tau) params["tau"] = *report.params.tau;
  if (report.params.weights_gamma) params["weights_gamma"] = *report.params.weights_gamma;
  if (report.params.knn_k) params["knn"] = *report.params.knn_k;
  if (report.params.delaunay) params["weights"] = "delaunay";
  if (report.params.gamma_geo) params["gamma_geo"] = *report.params.gamma_geo;
  if (report.params.gamma_ling) params["gamma_ling"] = *report.params.gamma_ling;
  if (report.params.lowrank_tol) params["lowrank_tol"] = *report.params.lowrank_tol;
  return params;
}

}  // namespace

std::string test_report_json(const TestReport& report, const ReportContext& context) {
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "test_report";
  j["method"] = std::string(method_name(report.method));
  j["variable"] = context.variable;
  j["shape"] = std::string(shape_name(context.shape));
  j["n_observations"] = context.n_observations;
  j["n_dropped_rows"] = context.n_dropped_rows;
  j["parameters"] = params_json(report);
  j["observed"] = report.observed;
  j["p_value"] = report.p_value;
  j["permutation_mean"] = report.permutation_mean;
  j["permutation_sd"] = report.permutation_sd;
  if (!context.category_labels.empty()) {
    j["category_labels"] = context.category_labels;
  }
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string batch_report_json(const BatchReport& report, Method method,
                              const std::vector<BatchFailure>& failures) {
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "batch_report";
  j["method"] = std::string(method_name(method));
  j["alpha"] = report.alpha;
  j["n_significant"] = report.n_significant;
  ordered_json results = ordered_json::array();
  for (const BatchEntry& e : report.entries) {
    ordered_json r;
    r["name"] = e.name;
    r["raw_p"] = e.raw_p;
    r["adjusted_p"] = e.adjusted_p;
    results.push_back(std::move(r));
  }
  j["results"] = std::move(results);
  ordered_json fails = ordered_json::array();
  for (const BatchFailure& f : failures) {
    ordered_json r;
    r["name"] = f.name;
    r["error"] = f.error;
    fails.push_back(std::move(r));
  }
  j["failures"] = std::move(fails);
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write file: " + path.string());
  }
  out << text;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace geoling
