#include "mixcs/random.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mixcs/error.hpp"

namespace mixcs {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Stream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Stream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Stream::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Stream::below: bound must be positive");
  // Rejection on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = -bound % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= limit) return r % bound;
  }
}

double Stream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t index) {
  std::uint64_t h = mix64(master + kGolden);
  h = mix64(h ^ fnv1a(tag));
  h = mix64(h + (index + 1) * kGolden);
  return h;
}

std::vector<std::size_t> sample_subset(Stream& stream, std::size_t n,
                                       std::size_t k) {
  if (k > n) throw ValidationError("sample_subset: k exceeds n");
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::unordered_set<std::size_t> seen;
  seen.reserve(2 * k);
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = stream.below(j + 1);
    if (seen.insert(t).second) {
      chosen.push_back(t);
    } else {
      seen.insert(j);
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace mixcs
