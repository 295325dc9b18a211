#include "mixcs/distribution.hpp"

#include <cmath>
#include <sstream>

#include "mixcs/error.hpp"

namespace mixcs {

DistributionSpec::DistributionSpec(LawKind kind, std::vector<DiscreteAtom> atoms,
                                   double mean, double variance,
                                   std::optional<double> fourth)
    : kind_(kind),
      atoms_(std::move(atoms)),
      mean_(mean),
      variance_(variance),
      fourth_(fourth) {
  double running = 0.0;
  cumulative_.reserve(atoms_.size());
  for (const auto& atom : atoms_) {
    running += atom.probability;
    cumulative_.push_back(running);
  }
}

DistributionSpec DistributionSpec::gaussian_unit() {
  return DistributionSpec(LawKind::gaussian_unit, {}, 0.0, 1.0, 3.0);
}

DistributionSpec DistributionSpec::bernoulli_sym() {
  return DistributionSpec(LawKind::bernoulli_sym, {{1.0, 0.5}, {-1.0, 0.5}},
                          0.0, 1.0, 1.0);
}

DistributionSpec DistributionSpec::three_point() {
  const double r3 = std::sqrt(3.0);
  return DistributionSpec(LawKind::three_point,
                          {{r3, 1.0 / 6.0}, {0.0, 2.0 / 3.0}, {-r3, 1.0 / 6.0}},
                          0.0, 1.0, 3.0);
}

DistributionSpec DistributionSpec::discrete(std::vector<DiscreteAtom> atoms) {
  if (atoms.empty()) throw ValidationError("discrete law needs at least one atom");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.probability >= 0.0) || !std::isfinite(atom.value)) {
      throw ValidationError("discrete law: probabilities must be nonnegative "
                            "and values finite");
    }
    total += atom.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "discrete law: probabilities sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
  double mean = 0.0;
  double fourth = 0.0;
  for (const auto& atom : atoms) {
    mean += atom.probability * atom.value;
    fourth += atom.probability * std::pow(atom.value, 4);
  }
  double variance = 0.0;
  for (const auto& atom : atoms) {
    variance += atom.probability * (atom.value - mean) * (atom.value - mean);
  }
  return DistributionSpec(LawKind::discrete, std::move(atoms), mean, variance,
                          fourth);
}

DistributionSpec DistributionSpec::from_name(std::string_view name) {
  if (name == "gaussian" || name == "gaussian-unit") return gaussian_unit();
  if (name == "bernoulli" || name == "bernoulli-sym") return bernoulli_sym();
  if (name == "three-point") return three_point();
  throw ValidationError("unknown law '" + std::string(name) +
                        "' (expected gaussian, bernoulli or three-point)");
}

std::string DistributionSpec::name() const {
  switch (kind_) {
    case LawKind::gaussian_unit: return "gaussian";
    case LawKind::bernoulli_sym: return "bernoulli";
    case LawKind::three_point: return "three-point";
    case LawKind::discrete: return "discrete";
  }
  return "unknown";
}

double DistributionSpec::sample(Stream& stream) const {
  switch (kind_) {
    case LawKind::gaussian_unit:
      return stream.gaussian();
    case LawKind::bernoulli_sym:
      return stream.coin() ? 1.0 : -1.0;
    case LawKind::three_point: {
      const double u = stream.uniform();
      if (u < 1.0 / 6.0) return atoms_[0].value;
      if (u < 1.0 / 3.0) return atoms_[2].value;
      return 0.0;
    }
    case LawKind::discrete: {
      const double u = stream.uniform();
      for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
        if (u < cumulative_[i]) return atoms_[i].value;
      }
      return atoms_.back().value;
    }
  }
  return 0.0;
}

MomentReport moment_check(const DistributionSpec& spec, std::size_t samples,
                          std::uint64_t seed) {
  if (samples < 10000) {
    throw ValidationError("moment_check needs at least 10^4 samples");
  }
  Stream stream = substream(seed, "moments");
  // Welford for the variance; plain means for the rest.
  double mean = 0.0, m2 = 0.0, fourth = 0.0, positive = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = spec.sample(stream);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
    const double x2 = x * x;
    fourth += x2 * x2;
    if (x > 0.0) positive += x2;
  }
  const double count = static_cast<double>(samples);
  MomentReport report;
  report.samples = samples;
  report.mean = mean;
  report.variance = m2 / count;
  report.fourth_moment = fourth / count;
  report.positive_part_second_moment = positive / count;
  return report;
}

}  // namespace mixcs
