#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixcs/random.hpp"

namespace mixcs {

enum class LawKind { gaussian_unit, bernoulli_sym, three_point, discrete };

struct DiscreteAtom {
  double value;
  double probability;
};

// A scalar law together with its declared moments. The declared metadata
// is what the RIP analysis relies on; moment_check() measures it.
class DistributionSpec {
 public:
  static DistributionSpec gaussian_unit();
  // +1 / -1 with probability 1/2 each.
  static DistributionSpec bernoulli_sym();
  // +sqrt(3) w.p. 1/6, 0 w.p. 2/3, -sqrt(3) w.p. 1/6.
  static DistributionSpec three_point();
  // Throws ValidationError unless the probabilities are nonnegative and sum
  // to 1 within 1e-12.
  static DistributionSpec discrete(std::vector<DiscreteAtom> atoms);

  // "gaussian", "bernoulli", "three-point".
  static DistributionSpec from_name(std::string_view name);

  LawKind kind() const { return kind_; }
  const std::vector<DiscreteAtom>& atoms() const { return atoms_; }
  double declared_mean() const { return mean_; }
  double declared_variance() const { return variance_; }
  // Raw fourth moment E[x^4]; empty when unknown.
  std::optional<double> declared_fourth_moment() const { return fourth_; }
  std::string name() const;

  double sample(Stream& stream) const;

 private:
  DistributionSpec(LawKind kind, std::vector<DiscreteAtom> atoms, double mean,
                   double variance, std::optional<double> fourth);

  LawKind kind_;
  std::vector<DiscreteAtom> atoms_;
  std::vector<double> cumulative_;
  double mean_;
  double variance_;
  std::optional<double> fourth_;
};

inline double sample_scalar(const DistributionSpec& spec, Stream& stream) {
  return spec.sample(stream);
}

struct MomentReport {
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;       // population variance about the sample mean
  double fourth_moment = 0.0;  // raw, mean of x^4
  double positive_part_second_moment = 0.0;  // mean of max(x, 0)^2
};

// Empirical moments from `samples` draws (at least 10^4).
MomentReport moment_check(const DistributionSpec& spec, std::size_t samples,
                          std::uint64_t seed);

}  // namespace mixcs
