#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mixcs {

// SplitMix64 stream. 64 bits of state, so a stream is cheap to create and
// copy; independent streams are obtained with derive_seed() rather than by
// sharing one generator between tasks.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool coin() { return (next_u64() >> 63) != 0; }

  // Standard normal via the Marsaglia polar method. The second value of
  // each accepted pair is cached.
  double gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed for the sub-stream (master, tag, index). Distinct tags or indices
// give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t index = 0);

inline Stream substream(std::uint64_t master, std::string_view tag,
                        std::uint64_t index = 0) {
  return Stream(derive_seed(master, tag, index));
}

// k distinct indices from [0, n), uniformly among k-subsets, sorted
// ascending (Floyd's algorithm).
std::vector<std::size_t> sample_subset(Stream& stream, std::size_t n,
                                       std::size_t k);

}  // namespace mixcs
