#include "geoling/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

namespace geoling {

namespace {

// Substream tags; all other streams hang off these.
constexpr std::uint64_t kPermutationStream = 0x7065726dULL;   // per permutation index
constexpr std::uint64_t kDatasetGenStream = 0x67656e00ULL;    // per calibration dataset
constexpr std::uint64_t kDatasetTestStream = 0x74657374ULL;   // per-dataset permutation plan

class MoranStat final : public PermutationStatistic {
 public:
  MoranStat(Eigen::VectorXd residuals, const SpatialWeights& w) : r_(std::move(residuals)), w_(w.matrix()) {
    const double ss = r_.squaredNorm();
    if (ss <= 0.0) {
      throw std::invalid_argument("morans_i: zero variance in x");
    }
    const double total = w_.sum();
    if (total <= 0.0) {
      throw std::invalid_argument("morans_i: empty weights");
    }
    factor_ = static_cast<double>(r_.size()) / (ss * total);
  }

  Eigen::Index size() const override { return r_.size(); }

  double operator()(std::span<const int> perm) const override {
    const Eigen::Index n = r_.size();
    Eigen::VectorXd rp(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      rp(i) = r_(perm[static_cast<size_t>(i)]);
    }
    return factor_ * rp.dot(w_ * rp);
  }

 private:
  Eigen::VectorXd r_;
  Eigen::MatrixXd w_;
  double factor_ = 0.0;
};

class JoinCountStat final : public PermutationStatistic {
 public:
  JoinCountStat(const ObservationColumn& col, const SpatialWeights& w) {
    n_ = col.size();
    x_ = col.discrete();
    const Eigen::MatrixXd& m = w.matrix();
    if (m.sum() <= 0.0) {
      throw std::invalid_argument("join_counts: empty weights");
    }
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (i != j && m(i, j) != 0.0) {
          ei_.push_back(static_cast<int>(i));
          ej_.push_back(static_cast<int>(j));
          ew_.push_back(m(i, j));
        }
      }
    }
  }

  Eigen::Index size() const override { return n_; }

  double operator()(std::span<const int> perm) const override {
    double agree = 0.0;
    for (size_t t = 0; t < ew_.size(); ++t) {
      const int a = x_[static_cast<size_t>(perm[static_cast<size_t>(ei_[t])])];
      const int b = x_[static_cast<size_t>(perm[static_cast<size_t>(ej_[t])])];
      if (a == b) {
        agree += ew_[t];
      }
    }
    return agree;
  }

 private:
  Eigen::Index n_ = 0;
  std::vector<int> x_;
  std::vector<int> ei_, ej_;
  std::vector<double> ew_;
};

class MantelStat final : public PermutationStatistic {
 public:
  MantelStat(Eigen::MatrixXd dx, const Eigen::MatrixXd& dy) : dx_(std::move(dx)) {
    const Eigen::Index n = dx_.rows();
    n_ = n;
    if (n < 3) {
      throw std::invalid_argument("mantel: need n >= 3");
    }
    const double count = static_cast<double>(n * (n - 1) / 2);
    double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
    iv_.reserve(static_cast<size_t>(count));
    jv_.reserve(static_cast<size_t>(count));
    dyv_.reserve(static_cast<size_t>(count));
    for (Eigen::Index j = 1; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double a = dx_(i, j);
        const double b = dy(i, j);
        sx += a;
        sxx += a * a;
        sy += b;
        syy += b * b;
        iv_.push_back(static_cast<int>(i));
        jv_.push_back(static_cast<int>(j));
        dyv_.push_back(b);
      }
    }
    const double var_x = count * sxx - sx * sx;
    const double var_y = count * syy - sy * sy;
    if (var_x <= 0.0 || var_y <= 0.0) {
      throw std::invalid_argument("mantel: zero variance in distances");
    }
    count_ = count;
    sx_sy_ = sx * sy;
    denom_ = std::sqrt(var_x * var_y);
  }

  Eigen::Index size() const override { return n_; }

  double operator()(std::span<const int> perm) const override {
    const double* dx = dx_.data();
    const Eigen::Index n = n_;
    double s = 0.0;
    for (size_t t = 0; t < dyv_.size(); ++t) {
      const Eigen::Index pi = perm[static_cast<size_t>(iv_[t])];
      const Eigen::Index pj = perm[static_cast<size_t>(jv_[t])];
      s += dx[pj * n + pi] * dyv_[t];
    }
    return (count_ * s - sx_sy_) / denom_;
  }

 private:
  Eigen::MatrixXd dx_;
  Eigen::Index n_ = 0;
  std::vector<int> iv_, jv_;
  std::vector<double> dyv_;
  double count_ = 0.0, sx_sy_ = 0.0, denom_ = 1.0;
};

class HsicDenseStat final : public PermutationStatistic {
 public:
  HsicDenseStat(Gram kx, const Gram& ky) : kx_(std::move(kx.k)), kyc_(detail::center_gram(ky.k)) {
    if (kx_.rows() != kyc_.rows()) {
      throw std::invalid_argument("hsic: Gram dimensions differ");
    }
  }

  Eigen::Index size() const override { return kx_.rows(); }

  double operator()(std::span<const int> perm) const override {
    const Eigen::Index n = kx_.rows();
    const double* kx = kx_.data();
    const double* kyc = kyc_.data();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index pj = perm[static_cast<size_t>(j)];
      const double* kx_col = kx + pj * n;
      const double* kyc_col = kyc + j * n;
      double s = 0.0;
      for (Eigen::Index i = 0; i < j; ++i) {
        s += kx_col[perm[static_cast<size_t>(i)]] * kyc_col[i];
      }
      acc += 2.0 * s + kx_col[pj] * kyc_col[j];
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n));
  }

 private:
  Eigen::MatrixXd kx_;
  Eigen::MatrixXd kyc_;  // H Ky H
};

class HsicLowRankStat final : public PermutationStatistic {
 public:
  HsicLowRankStat(const LowRankGram& a, const LowRankGram& b)
      : a_(a.factor), a_col_means_(a.factor.colwise().mean()), bc_t_() {
    if (a.size() != b.size()) {
      throw std::invalid_argument("hsic: factor dimensions differ");
    }
    Eigen::MatrixXd bc = b.factor;
    bc.rowwise() -= b.factor.colwise().mean();
    bc_t_ = bc.transpose();
  }

  Eigen::Index size() const override { return a_.rows(); }

  double operator()(std::span<const int> perm) const override {
    const Eigen::Index n = a_.rows();
    Eigen::MatrixXd ap(n, a_.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      ap.row(i) = a_.row(perm[static_cast<size_t>(i)]);
    }
    ap.rowwise() -= a_col_means_;
    return (bc_t_ * ap).squaredNorm() / (static_cast<double>(n) * static_cast<double>(n));
  }

 private:
  Eigen::MatrixXd a_;                 // linguistic factor (permuted side)
  Eigen::RowVectorXd a_col_means_;    // invariant under row permutation
  Eigen::MatrixXd bc_t_;              // (H B)^T
};

SpatialWeights resolve_weights(const Dataset& ds, Method method, const TestParams& params,
                               ResolvedParams& resolved) {
  WeightsSpec spec = params.weights ? *params.weights
                     : method == Method::join_counts
                         ? WeightsSpec{DelaunaySpec{}}
                         : WeightsSpec{ThresholdSpec{median_distance(ds.points)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ThresholdSpec>) {
          resolved.tau = s.tau;
        } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
          resolved.weights_gamma = s.gamma;
        } else if constexpr (std::is_same_v<T, KnnSpec>) {
          resolved.knn_k = s.k;
        } else {
          resolved.delaunay = true;
        }
      },
      spec);
  // Moran's I is scale-invariant in W and reported against the sum-to-n
  // normalization; join counts keep raw weights.
  const bool normalize = method == Method::moran;
  const DistanceMatrix dm = distance_matrix(ds.points);
  return build_weights(ds.points, dm, spec, normalize);
}

}  // namespace

PreparedTest prepare_statistic(const Dataset& ds, Method method, const TestParams& params) {
  const Applicability ok = applicability(ds.column, method);
  if (!ok.accepted) {
    throw ApplicabilityError(std::string(method_name(method)) + ": " + ok.reason);
  }

  PreparedTest out;
  switch (method) {
    case Method::moran: {
      const SpatialWeights w = resolve_weights(ds, method, params, out.params);
      out.statistic = std::make_unique<MoranStat>(residuals(ds.column), w);
      break;
    }
    case Method::join_counts: {
      const SpatialWeights w = resolve_weights(ds, method, params, out.params);
      out.statistic = std::make_unique<JoinCountStat>(ds.column, w);
      break;
    }
    case Method::mantel: {
      out.statistic = std::make_unique<MantelStat>(linguistic_distance(ds.column),
                                                   distance_matrix(ds.points).entries());
      break;
    }
    case Method::hsic: {
      const double gamma_geo = params.gamma_geo ? *params.gamma_geo : median_bandwidth(ds.points);
      out.params.gamma_geo = gamma_geo;
      std::optional<double> gamma_ling = params.gamma_ling;
      if (!gamma_ling && !ds.column.is_discrete()) {
        gamma_ling = median_bandwidth(ds.column);
      }
      out.params.gamma_ling = gamma_ling;
      if (params.lowrank_tol) {
        out.params.lowrank_tol = params.lowrank_tol;
        const LowRankGram a = incomplete_cholesky(accessor_column(ds.column, gamma_ling),
                                                  *params.lowrank_tol);
        const LowRankGram b = incomplete_cholesky(accessor_geo(ds.points, gamma_geo),
                                                  *params.lowrank_tol);
        out.statistic = std::make_unique<HsicLowRankStat>(a, b);
      } else {
        out.statistic = std::make_unique<HsicDenseStat>(gram_for_column(ds.column, gamma_ling),
                                                        gram_geo(ds.points, gamma_geo));
      }
      break;
    }
  }
  return out;
}

TestReport run_permutation_test(const PermutationStatistic& stat, Method method,
                                const PermutationPlan& plan, int threads) {
  if (plan.n_permutations < 99) {
    throw std::invalid_argument("PermutationPlan: n_permutations must be >= 99");
  }
  const int n = static_cast<int>(stat.size());
  const int B = plan.n_permutations;

  const std::vector<int> identity = identity_permutation(n);
  const double observed = stat(identity);

  std::vector<double> permuted(static_cast<size_t>(B));
  parallel_chunks(B, threads, [&](std::int64_t b0, std::int64_t b1) {
    for (std::int64_t b = b0; b < b1; ++b) {
      RngEngine g = make_engine(
          substream_seed(plan.seed, kPermutationStream + static_cast<std::uint64_t>(b)));
      const std::vector<int> perm = random_permutation(n, g);
      permuted[static_cast<size_t>(b)] = stat(perm);
    }
  });

  // Counts and a fixed-order reduction keep the report independent of the
  // thread count.
  long count_ge = 0;
  double mean = 0.0;
  for (double v : permuted) {
    if (v >= observed) {
      ++count_ge;
    }
    mean += v;
  }
  mean /= static_cast<double>(B);
  double ss = 0.0;
  for (double v : permuted) {
    ss += (v - mean) * (v - mean);
  }

  TestReport report;
  report.method = method;
  report.observed = observed;
  report.p_value = static_cast<double>(1 + count_ge) / static_cast<double>(1 + B);
  report.n_permutations = B;
  report.permutation_mean = mean;
  report.permutation_sd = B > 1 ? std::sqrt(ss / static_cast<double>(B - 1)) : 0.0;
  report.seed = plan.seed;
  return report;
}

TestReport permutation_test(const Dataset& ds, Method method, const PermutationPlan& plan,
                            const TestParams& params, int threads) {
  PreparedTest prepared = prepare_statistic(ds, method, params);
  TestReport report = run_permutation_test(*prepared.statistic, method, plan, threads);
  report.params = prepared.params;
  report.warnings = std::move(prepared.warnings);
  return report;
}

std::vector<double> bh_fdr(std::span<const double> raw_p) {
  const size_t m = raw_p.size();
  for (double p : raw_p) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument("bh_fdr: p-values must lie in (0, 1]");
    }
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return raw_p[a] < raw_p[b]; });

  std::vector<double> adjusted(m);
  double running_min = 1.0;
  for (size_t rank = m; rank > 0; --rank) {
    const size_t idx = order[rank - 1];
    const double candidate =
        raw_p[idx] * static_cast<double>(m) / static_cast<double>(rank);
    running_min = std::min(running_min, candidate);
    adjusted[idx] = running_min;
  }
  return adjusted;
}

BatchReport make_batch_report(const std::vector<std::pair<std::string, double>>& named_p,
                              double alpha) {
  std::vector<double> raw;
  raw.reserve(named_p.size());
  for (const auto& [name, p] : named_p) {
    raw.push_back(p);
  }
  const std::vector<double> adjusted = bh_fdr(raw);

  BatchReport report;
  report.alpha = alpha;
  for (size_t i = 0; i < named_p.size(); ++i) {
    report.entries.push_back({named_p[i].first, raw[i], adjusted[i]});
    if (adjusted[i] <= alpha) {
      ++report.n_significant;
    }
  }
  return report;
}

namespace {

void summarize_pvalues(CalibrationResult& result, double alpha) {
  result.alpha = alpha;
  const size_t n = result.p_values.size();
  if (n == 0) {
    return;
  }
  size_t rejections = 0;
  for (double p : result.p_values) {
    if (p < alpha) {
      ++rejections;
    }
  }
  result.type1_rate = static_cast<double>(rejections) / static_cast<double>(n);

  std::vector<double> sorted = result.p_values;
  std::sort(sorted.begin(), sorted.end());
  double ks = 0.0;
  result.qq.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    ks = std::max({ks, std::abs(hi - sorted[i]), std::abs(sorted[i] - lo)});
    result.qq.emplace_back(static_cast<double>(i + 1) / static_cast<double>(n + 1), sorted[i]);
  }
  result.ks_statistic = ks;
}

// Shared dataset loop for calibrate / power; returns NaN per errored dataset.
std::vector<double> per_dataset_pvalues(
    const DatasetGenerator& gen, const PermutationPlan& plan, int n_datasets, int threads,
    const std::function<double(const Dataset&, const PermutationPlan&)>& run_one,
    std::vector<std::string>& warnings) {
  std::vector<double> p(static_cast<size_t>(n_datasets),
                        std::numeric_limits<double>::quiet_NaN());
  std::mutex warn_mutex;
  parallel_chunks(n_datasets, threads, [&](std::int64_t d0, std::int64_t d1) {
    for (std::int64_t d = d0; d < d1; ++d) {
      const std::uint64_t gen_seed =
          substream_seed(substream_seed(plan.seed, kDatasetGenStream), static_cast<std::uint64_t>(d));
      const PermutationPlan dataset_plan{
          plan.n_permutations,
          substream_seed(substream_seed(plan.seed, kDatasetTestStream), static_cast<std::uint64_t>(d))};
      try {
        const Dataset ds = gen(gen_seed);
        p[static_cast<size_t>(d)] = run_one(ds, dataset_plan);
      } catch (const std::invalid_argument& e) {
        std::lock_guard<std::mutex> lock(warn_mutex);
        if (warnings.size() < 8) {
          warnings.push_back(std::string("dataset error: ") + e.what());
        }
      }
    }
  });
  return p;
}

}  // namespace

CalibrationResult calibrate(const DatasetGenerator& gen, Method method,
                            const PermutationPlan& plan, int n_datasets,
                            const TestParams& params, double alpha, int threads) {
  CalibrationResult result;
  const auto raw = per_dataset_pvalues(
      gen, plan, n_datasets, threads,
      [&](const Dataset& ds, const PermutationPlan& dataset_plan) {
        return permutation_test(ds, method, dataset_plan, params, 1).p_value;
      },
      result.warnings);
  for (double v : raw) {
    if (std::isnan(v)) {
      ++result.n_errors;
    } else {
      result.p_values.push_back(v);
    }
  }
  summarize_pvalues(result, alpha);
  return result;
}

SweepResult sweep_min_p(const Dataset& ds, Method method, SweepParameter which,
                        std::span<const double> grid, const PermutationPlan& plan,
                        const TestParams& base, int threads) {
  if (grid.empty()) {
    throw std::invalid_argument("sweep_min_p: empty parameter grid");
  }
  if (which == SweepParameter::moran_tau && method != Method::moran) {
    throw std::invalid_argument("sweep_min_p: tau sweeps apply to Moran's I");
  }
  if (which == SweepParameter::hsic_gamma && method != Method::hsic) {
    throw std::invalid_argument("sweep_min_p: gamma sweeps apply to HSIC");
  }
  SweepResult out;
  for (size_t g = 0; g < grid.size(); ++g) {
    TestParams params = base;
    if (which == SweepParameter::moran_tau) {
      params.weights = ThresholdSpec{grid[g]};
    } else {
      params.gamma_geo = grid[g];
    }
    // The first grid point shares the plan's stream, so a singleton sweep
    // reproduces the plain permutation test.
    const PermutationPlan grid_plan{
        plan.n_permutations,
        g == 0 ? plan.seed : substream_seed(plan.seed, static_cast<std::uint64_t>(g))};
    const TestReport report = permutation_test(ds, method, grid_plan, params, threads);
    out.per_param.emplace_back(grid[g], report.p_value);
    if (g == 0 || report.p_value < out.min_p) {
      out.min_p = report.p_value;
      out.best_param = grid[g];
    }
  }
  out.warnings.push_back("min-p parameter sweep: the selected p-value is not calibrated");
  return out;
}

CalibrationResult calibrate_sweep_moran(const DatasetGenerator& gen,
                                        std::span<const double> tau_quantiles,
                                        const PermutationPlan& plan, int n_datasets,
                                        double alpha, int threads) {
  if (tau_quantiles.empty()) {
    throw std::invalid_argument("calibrate_sweep_moran: empty quantile grid");
  }
  CalibrationResult result;
  const auto raw = per_dataset_pvalues(
      gen, plan, n_datasets, threads,
      [&](const Dataset& ds, const PermutationPlan& dataset_plan) {
        const DistanceMatrix dm = distance_matrix(ds.points);
        std::vector<double> taus;
        taus.reserve(tau_quantiles.size());
        for (double q : tau_quantiles) {
          taus.push_back(distance_quantile(dm, q));
        }
        return sweep_min_p(ds, Method::moran, SweepParameter::moran_tau, taus, dataset_plan, {}, 1)
            .min_p;
      },
      result.warnings);
  for (double v : raw) {
    if (std::isnan(v)) {
      ++result.n_errors;
    } else {
      result.p_values.push_back(v);
    }
  }
  summarize_pvalues(result, alpha);
  result.warnings.push_back("min-p parameter sweep: the selected p-value is not calibrated");
  return result;
}

PowerResult power(const DatasetGenerator& gen, Method method, const PermutationPlan& plan,
                  int n_datasets, double alpha, const TestParams& params, int threads) {
  PowerResult result;
  result.alpha = alpha;
  result.n_datasets = n_datasets;
  std::vector<std::string> warnings;
  const auto raw = per_dataset_pvalues(
      gen, plan, n_datasets, threads,
      [&](const Dataset& ds, const PermutationPlan& dataset_plan) {
        return permutation_test(ds, method, dataset_plan, params, 1).p_value;
      },
      warnings);
  for (double v : raw) {
    if (std::isnan(v)) {
      ++result.n_errors;  // degenerate draws count as non-rejections
    } else {
      result.p_values.push_back(v);
      if (v < alpha) {
        ++result.n_rejections;
      }
    }
  }
  result.power = n_datasets > 0
                     ? static_cast<double>(result.n_rejections) / static_cast<double>(n_datasets)
                     : 0.0;
  return result;
}

double distance_quantile(const DistanceMatrix& dm, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("distance_quantile: q must be in [0, 1]");
  }
  const Eigen::Index n = dm.size();
  std::vector<double> pairs;
  pairs.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      pairs.push_back(dm(i, j));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  const size_t rank = std::min(
      pairs.size() - 1,
      static_cast<size_t>(std::ceil(q * static_cast<double>(pairs.size()))) -
          (q > 0.0 ? 1 : 0));
  return pairs[rank];
}

}  // namespace geoling
