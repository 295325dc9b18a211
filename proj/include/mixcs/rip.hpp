#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixcs/ensembles.hpp"
#include "mixcs/matrix.hpp"

namespace mixcs {

enum class RipMethod { exhaustive, monte_carlo };

// delta = max(gram_max - 1, 1 - gram_min), where gram_min / gram_max are the
// extreme eigenvalues of Phi_S^T Phi_S over all examined supports S.
struct RipEstimate {
  std::size_t k = 0;
  double delta = 0.0;
  RipMethod method = RipMethod::exhaustive;
  std::size_t trials = 0;              // Monte Carlo only
  std::uint64_t seed = 0;              // Monte Carlo only
  std::size_t supports_examined = 0;   // distinct supports evaluated
  std::vector<std::size_t> witness;    // 0-based, ascending
  double gram_min = 0.0;
  double gram_max = 0.0;

  // k,delta,method,trials,gram_min,gram_max,witness
  std::string csv_line() const;
  static std::string csv_header();
};

// Supports beyond which delta_exhaustive refuses to enumerate.
inline constexpr double kExhaustiveSupportLimit = 2e6;

// Exact delta_k by enumerating all k-subsets in lexicographic order; the
// witness is the first support attaining the largest deviation.
RipEstimate delta_exhaustive(const MeasurementMatrix& phi, std::size_t k);

// Lower bound on delta_k from `trials` uniformly sampled supports. Trial t
// always draws the same support for a given seed, so raising `trials` only
// adds supports. Repeated supports are evaluated once.
RipEstimate delta_monte_carlo(const MeasurementMatrix& phi, std::size_t k,
                              std::size_t trials, std::uint64_t seed);

// Deviation of one support: max(lambda_max - 1, 1 - lambda_min) of its Gram
// matrix; the extremes are returned through the out-parameters.
double support_deviation(const MatrixXd& gram, const std::vector<std::size_t>& support,
                         double& lambda_min, double& lambda_max);

enum class SupportCase { diag_inside, off_diag, mixed_boundary };

std::string to_string(SupportCase which);

// Admissible sigma^2 range for one support case of the RIP argument.
struct SigmaInterval {
  double gamma = 0.0;
  double delta = 0.0;
  SupportCase which = SupportCase::diag_inside;
  double lo = 0.0;
  double hi = 0.0;
  bool feasible = false;
};

// Throws ValidationError for gamma outside [0, 1) or delta outside (0, 1),
// and SingularityError when a lower-bound denominator is not positive.
SigmaInterval sigma_interval(double gamma, double delta, SupportCase which);

struct CaseOutcome {
  SupportCase which;
  std::optional<SigmaInterval> interval;
  std::string error;  // set when the case degenerates
};

struct SigmaFeasibility {
  std::array<CaseOutcome, 3> cases;
  std::optional<std::pair<double, double>> intersection;
  bool feasible = false;  // all cases nondegenerate and the intersection nonempty
};

SigmaFeasibility sigma_feasible_all_cases(double gamma, double delta);

// delta_2k < sqrt(2) - 1.
bool recovery_condition(double delta_2k);

struct GramAsymptoteReport {
  SupportCase which = SupportCase::diag_inside;
  std::size_t n = 0, N = 0, k = 0;
  double gamma = 0.0;  // k / n as realised
  double sigma2 = 0.0;
  double observed_min = 0.0;
  double observed_max = 0.0;
  // diag_inside: (1 - 2 sqrt(g(1-g))) s2 and (1 + 4g + 2 sqrt(g(1-g))) s2,
  // a lower and an upper bound. off_diag: (1 -/+ sqrt(g))^2 s2, the limits.
  double limit_min = 0.0;
  double limit_max = 0.0;
};

// Builds Phi from the first n rows of a model.N-vertex mixed graph and
// examines one support: {0..k-1} (inside the selected rows) or
// {n..n+k-1} (disjoint from them), k = round(gamma n).
GramAsymptoteReport gram_asymptote_check(const MixedGraphModel& model, std::size_t n,
                                         double gamma, SupportCase which,
                                         std::uint64_t seed);

}  // namespace mixcs
