#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace minen {

// Seeded random stream. All draws are built from the raw 64-bit output of
// mt19937_64 (whose sequence is fixed by the standard), so results do not
// depend on the standard library's distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform integer on [0, n). n must be positive.
  std::size_t index(std::size_t n);

  // Uniform integer on [lo, hi], inclusive.
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  // Independent child stream; same (seed, tag) always gives the same child.
  RngStream fork(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_distinct(RngStream& rng, std::size_t n, std::size_t k);

// Well-known stream tags used by the simulator.
namespace streams {
inline constexpr std::uint64_t kNetwork = 1;
inline constexpr std::uint64_t kProtocol = 2;
inline constexpr std::uint64_t kScheduler = 3;
}  // namespace streams

}  // namespace minen
