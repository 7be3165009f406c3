#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace geoling {

/// splitmix64 finalizer; used to spread seed bits and derive substreams.
std::uint64_t mix_bits(std::uint64_t z);

/// Seed for an independent substream, keyed by (seed, stream id). Derivation
/// is pure, so any worker can reconstruct stream k without coordination.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

using RngEngine = std::mt19937_64;

RngEngine make_engine(std::uint64_t seed);

/// Unbiased uniform draw from [0, bound) via rejection sampling. The output
/// sequence depends only on the (standardized) mt19937_64 stream, not on any
/// library's distribution internals.
std::uint64_t uniform_below(RngEngine& g, std::uint64_t bound);

/// In-place Fisher-Yates shuffle.
void shuffle_indices(std::span<int> values, RngEngine& g);

std::vector<int> identity_permutation(int n);
std::vector<int> random_permutation(int n, RngEngine& g);

/// Uniform double in [0, 1) built from the top 53 engine bits.
double uniform_double(RngEngine& g);

/// Uniform double in (0, 1]; safe to pass to log().
double uniform_double_positive(RngEngine& g);

/// Standard normal via Box-Muller (two engine draws per call).
double sample_normal(RngEngine& g);

/// Gamma(alpha, 1) via Marsaglia-Tsang squeeze; alpha == 0 yields 0.
double sample_gamma(double alpha, RngEngine& g);

/// Poisson(lambda); exact for any nonnegative lambda (large rates split by
/// additivity).
long sample_poisson(double lambda, RngEngine& g);

/// Index draw from an unnormalized nonnegative weight vector.
int sample_categorical(std::span<const double> weights, RngEngine& g);

/// Dirichlet(alpha) via normalized gamma draws; degenerate all-zero draws
/// fall back to the normalized alpha vector.
std::vector<double> sample_dirichlet(std::span<const double> alpha, RngEngine& g);

/// Runs fn(begin, end) over [0, count) split into contiguous chunks, one per
/// worker. Chunk boundaries depend only on (count, threads), so callers that
/// write results by index stay deterministic at any thread count.
void parallel_chunks(std::int64_t count, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Resolves a requested thread count: values < 1 mean hardware concurrency.
int resolve_threads(int requested);

}  // namespace geoling
