#pragma once

// Sharded sampling with a fixed reduction order. Shard i always draws from
// an engine seeded by (seed, i) and partial moments are merged in shard
// order, so results are bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>
#include <atomic>

namespace slicemean::parallel {

// Welford accumulator; merge() is Chan's pairwise update.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
  }

  double sample_variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double stderr_of_mean() const {
    return count > 0 ? std::sqrt(sample_variance() / static_cast<double>(count)) : 0.0;
  }
};

inline std::mt19937_64 shard_engine(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
  return std::mt19937_64(seq);
}

inline std::uint64_t shard_count(std::uint64_t n_samples, std::uint64_t shard_size) {
  return (n_samples + shard_size - 1) / shard_size;
}

/// Runs fn(shard, samples_in_shard, engine) -> Moments for every shard on up
/// to `threads` workers and returns the per-shard results in shard order.
/// The first exception (by shard index) is rethrown.
template <class Fn>
std::vector<Moments> run_shards(std::uint64_t n_samples, std::uint64_t shard_size,
                                std::uint64_t seed, unsigned threads, Fn&& fn) {
  const std::uint64_t shards = shard_count(n_samples, shard_size);
  std::vector<Moments> out(shards);
  std::vector<std::exception_ptr> errors(shards);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next.fetch_add(1); i < shards; i = next.fetch_add(1)) {
      const std::uint64_t begin = i * shard_size;
      const std::uint64_t count = std::min(shard_size, n_samples - begin);
      try {
        auto engine = shard_engine(seed, i);
        out[i] = fn(i, count, engine);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), std::max<std::uint64_t>(shards, 1)));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

inline Moments reduce(const std::vector<Moments>& parts, std::size_t count) {
  Moments total;
  for (std::size_t i = 0; i < count && i < parts.size(); ++i) total.merge(parts[i]);
  return total;
}

}  // namespace slicemean::parallel
