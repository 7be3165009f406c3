#include "geoling/rng.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace geoling {

std::uint64_t mix_bits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_bits(mix_bits(seed) ^ mix_bits(stream + 0x51f15eedULL));
}

RngEngine make_engine(std::uint64_t seed) {
  return RngEngine(seed);
}

std::uint64_t uniform_below(RngEngine& g, std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: bound must be positive");
  }
  // Mask-and-reject keeps the draw unbiased while consuming a deterministic,
  // engine-defined bit stream.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t v = g() & mask;
    if (v < bound) {
      return v;
    }
  }
}

void shuffle_indices(std::span<int> values, RngEngine& g) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(uniform_below(g, i));
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<int> identity_permutation(int n) {
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    perm[static_cast<size_t>(i)] = i;
  }
  return perm;
}

std::vector<int> random_permutation(int n, RngEngine& g) {
  std::vector<int> perm = identity_permutation(n);
  shuffle_indices(perm, g);
  return perm;
}

double uniform_double(RngEngine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform_double_positive(RngEngine& g) {
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

double sample_normal(RngEngine& g) {
  const double u1 = uniform_double_positive(g);
  const double u2 = uniform_double(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(double alpha, RngEngine& g) {
  if (alpha == 0.0) {
    return 0.0;
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("sample_gamma: alpha must be nonnegative");
  }
  if (alpha < 1.0) {
    const double boost = std::pow(uniform_double_positive(g), 1.0 / alpha);
    return sample_gamma(alpha + 1.0, g) * boost;
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_normal(g);
    const double t = 1.0 + c * x;
    if (t <= 0.0) {
      continue;
    }
    const double v = t * t * t;
    const double u = uniform_double_positive(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

long sample_poisson(double lambda, RngEngine& g) {
  if (lambda <= 0.0) {
    if (lambda < 0.0) {
      throw std::invalid_argument("sample_poisson: negative rate");
    }
    return 0;
  }
  if (lambda > 500.0) {
    const double half = 0.5 * lambda;
    return sample_poisson(half, g) + sample_poisson(lambda - half, g);
  }
  const double limit = std::exp(-lambda);
  long k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform_double(g);
  } while (p > limit);
  return k - 1;
}

int sample_categorical(std::span<const double> weights, RngEngine& g) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("sample_categorical: negative weight");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("sample_categorical: all-zero weights");
  }
  const double u = uniform_double(g) * total;
  double cum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) {
      return static_cast<int>(i);
    }
  }
  return static_cast<int>(weights.size()) - 1;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, RngEngine& g) {
  std::vector<double> draw(alpha.size());
  double total = 0.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    draw[i] = sample_gamma(alpha[i], g);
    total += draw[i];
  }
  if (total <= 0.0) {
    double alpha_sum = 0.0;
    for (double a : alpha) alpha_sum += a;
    for (size_t i = 0; i < alpha.size(); ++i) {
      draw[i] = alpha_sum > 0.0 ? alpha[i] / alpha_sum : 1.0 / static_cast<double>(alpha.size());
    }
    return draw;
  }
  for (double& v : draw) {
    v /= total;
  }
  return draw;
}

int resolve_threads(int requested) {
  if (requested >= 1) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::int64_t count, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (count <= 0) {
    return;
  }
  const int workers = std::min<std::int64_t>(resolve_threads(threads), count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  const std::int64_t base = count / workers;
  const std::int64_t extra = count % workers;
  std::int64_t begin = 0;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < workers; ++t) {
    const std::int64_t len = base + (t < extra ? 1 : 0);
    const std::int64_t end = begin + len;
    pool.emplace_back([&, begin, end]() {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
      }
    });
    begin = end;
  }
  for (auto& th : pool) {
    th.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace geoling
