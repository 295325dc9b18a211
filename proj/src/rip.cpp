#include "mixcs/rip.hpp"

#include <cmath>
#include <set>

#include "mixcs/csv.hpp"
#include "mixcs/error.hpp"
#include "mixcs/random.hpp"
#include "mixcs/symmetric_eigen.hpp"

namespace mixcs {
namespace {

// Gram submatrices Phi_S^T Phi_S, from a cached full Gram matrix when N is
// moderate and from the columns otherwise.
class SupportGram {
 public:
  explicit SupportGram(const MeasurementMatrix& phi) : columns_(phi.entries()) {
    if (phi.cols() <= 2048) full_ = columns_.transpose() * columns_;
  }

  MatrixXd operator()(const std::vector<std::size_t>& support) const {
    const auto k = static_cast<Eigen::Index>(support.size());
    MatrixXd g(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b <= a; ++b) {
        const double v = full_.size() ? full_(support[a], support[b])
                                      : columns_.col(support[a]).dot(columns_.col(support[b]));
        g(a, b) = v;
        g(b, a) = v;
      }
    }
    return g;
  }

 private:
  MatrixXd columns_;
  MatrixXd full_;
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    value *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(value);
}

void check_order(const MeasurementMatrix& phi, std::size_t k) {
  if (k == 0 || k > phi.rows()) {
    throw ValidationError("RIP order k must satisfy 1 <= k <= n");
  }
  if (k > phi.cols()) throw ValidationError("RIP order k exceeds the column count");
}

// Running max over supports; the first support attaining the maximum wins.
struct Accumulator {
  double delta = -1.0;
  double gram_min = std::numeric_limits<double>::infinity();
  double gram_max = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> witness;
  std::size_t examined = 0;

  void add(const MatrixXd& gram_s, const std::vector<std::size_t>& support) {
    double lmin, lmax;
    const double dev = support_deviation(gram_s, {}, lmin, lmax);
    ++examined;
    gram_min = std::min(gram_min, lmin);
    gram_max = std::max(gram_max, lmax);
    if (dev > delta) {
      delta = dev;
      witness = support;
    }
  }

  RipEstimate finish(std::size_t k, RipMethod method) const {
    RipEstimate est;
    est.k = k;
    est.method = method;
    est.supports_examined = examined;
    est.witness = witness;
    est.gram_min = gram_min;
    est.gram_max = gram_max;
    est.delta = std::max(gram_max - 1.0, 1.0 - gram_min);
    return est;
  }
};

}  // namespace

double support_deviation(const MatrixXd& gram, const std::vector<std::size_t>& support,
                         double& lambda_min, double& lambda_max) {
  MatrixXd sub;
  const MatrixXd* g = &gram;
  if (!support.empty()) {
    const auto k = static_cast<Eigen::Index>(support.size());
    sub.resize(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = gram(support[a], support[b]);
    g = &sub;
  }
  if (g->rows() == 1) {
    lambda_min = lambda_max = (*g)(0, 0);
  } else {
    const VectorXd lambda = symmetric_eigenvalues(*g);
    lambda_min = lambda(0);
    lambda_max = lambda(lambda.size() - 1);
  }
  return std::max(lambda_max - 1.0, 1.0 - lambda_min);
}

std::string RipEstimate::csv_header() {
  return "k,delta,method,trials,gram_min,gram_max,witness";
}

std::string RipEstimate::csv_line() const {
  return std::to_string(k) + ',' + format_double(delta) + ',' +
         (method == RipMethod::exhaustive ? "exhaustive" : "monte-carlo") + ',' +
         std::to_string(trials) + ',' + format_double(gram_min) + ',' +
         format_double(gram_max) + ',' + join_indices(witness);
}

RipEstimate delta_exhaustive(const MeasurementMatrix& phi, std::size_t k) {
  check_order(phi, k);
  const std::size_t N = phi.cols();
  if (binomial(N, k) > kExhaustiveSupportLimit) {
    throw ValidationError("too large for exhaustive enumeration (C(" +
                          std::to_string(N) + ", " + std::to_string(k) +
                          ") supports); use the monte-carlo estimate instead (rip --trials)");
  }
  const SupportGram gram(phi);
  Accumulator acc;
  std::vector<std::size_t> support(k);
  for (std::size_t i = 0; i < k; ++i) support[i] = i;
  for (;;) {
    acc.add(gram(support), support);
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && support[i - 1] == N - k + (i - 1)) --i;
    if (i == 0) break;
    ++support[i - 1];
    for (std::size_t j = i; j < k; ++j) support[j] = support[j - 1] + 1;
  }
  return acc.finish(k, RipMethod::exhaustive);
}

RipEstimate delta_monte_carlo(const MeasurementMatrix& phi, std::size_t k,
                              std::size_t trials, std::uint64_t seed) {
  check_order(phi, k);
  if (trials == 0) throw ValidationError("delta_monte_carlo: trials must be positive");
  const SupportGram gram(phi);
  Stream stream = substream(seed, "rip-supports");
  std::set<std::vector<std::size_t>> seen;
  Accumulator acc;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::size_t> support = sample_subset(stream, phi.cols(), k);
    if (!seen.insert(support).second) continue;
    acc.add(gram(support), support);
  }
  RipEstimate est = acc.finish(k, RipMethod::monte_carlo);
  est.trials = trials;
  est.seed = seed;
  return est;
}

std::string to_string(SupportCase which) {
  switch (which) {
    case SupportCase::diag_inside: return "diag-inside";
    case SupportCase::off_diag: return "off-diag";
    case SupportCase::mixed_boundary: return "mixed-boundary";
  }
  return "unknown";
}

SigmaInterval sigma_interval(double gamma, double delta, SupportCase which) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ValidationError("sigma_interval: gamma must lie in [0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("sigma_interval: delta must lie in (0, 1)");
  }
  double lo_den = 0.0, hi_den = 0.0;
  switch (which) {
    case SupportCase::diag_inside: {
      const double cross = std::sqrt(gamma * (1.0 - gamma));
      lo_den = 1.0 - 2.0 * cross;
      hi_den = 1.0 + 4.0 * gamma + 2.0 * cross;
      if (!(lo_den > 0.0)) {
        throw SingularityError("diag-inside lower bound degenerates: 1 - 2 sqrt(gamma (1 - gamma)) <= 0");
      }
      break;
    }
    case SupportCase::off_diag: {
      const double r = std::sqrt(gamma);
      lo_den = (1.0 - r) * (1.0 - r);
      hi_den = (1.0 + r) * (1.0 + r);
      if (!(lo_den > 0.0)) {
        throw SingularityError("off-diag lower bound degenerates: (1 - sqrt(gamma))^2 = 0");
      }
      break;
    }
    case SupportCase::mixed_boundary: {
      const double base = 1.0 - std::sqrt(gamma / (1.0 - gamma));
      lo_den = base * base;
      hi_den = 1.0 + 7.0 * gamma + 2.0 * std::sqrt(gamma);
      if (!(base > 0.0)) {
        throw SingularityError(
            "mixed-boundary lower bound degenerates: 1 - sqrt(gamma / (1 - gamma)) <= 0");
      }
      break;
    }
  }
  SigmaInterval interval;
  interval.gamma = gamma;
  interval.delta = delta;
  interval.which = which;
  interval.lo = (1.0 - delta) / lo_den;
  interval.hi = (1.0 + delta) / hi_den;
  interval.feasible = interval.lo <= interval.hi;
  return interval;
}

SigmaFeasibility sigma_feasible_all_cases(double gamma, double delta) {
  SigmaFeasibility result;
  const std::array<SupportCase, 3> order = {
      SupportCase::diag_inside, SupportCase::off_diag, SupportCase::mixed_boundary};
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    result.cases[i].which = order[i];
    try {
      const SigmaInterval interval = sigma_interval(gamma, delta, order[i]);
      lo = std::max(lo, interval.lo);
      hi = std::min(hi, interval.hi);
      result.cases[i].interval = interval;
    } catch (const SingularityError& e) {
      result.cases[i].error = e.what();
      all_ok = false;
    }
  }
  if (all_ok) {
    result.intersection = std::make_pair(lo, hi);
    result.feasible = lo <= hi;
  }
  return result;
}

bool recovery_condition(double delta_2k) {
  if (!(delta_2k >= 0.0)) throw ValidationError("recovery_condition: delta must be nonnegative");
  return delta_2k < std::sqrt(2.0) - 1.0;
}

GramAsymptoteReport gram_asymptote_check(const MixedGraphModel& model, std::size_t n,
                                         double gamma, SupportCase which,
                                         std::uint64_t seed) {
  model.validate();
  if (which == SupportCase::mixed_boundary) {
    throw ValidationError("gram_asymptote_check: only diag-inside and off-diag supports "
                          "have limit expressions");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("gram_asymptote_check: gamma must lie in (0, 1)");
  }
  const auto k = static_cast<std::size_t>(std::llround(gamma * static_cast<double>(n)));
  if (k == 0) throw ValidationError("gram_asymptote_check: round(gamma n) must be >= 1");
  const std::size_t needed = which == SupportCase::diag_inside ? n : n + k;
  if (n == 0 || k > n || needed > model.N) {
    throw ValidationError("gram_asymptote_check: support placement impossible for N = " +
                          std::to_string(model.N));
  }
  const std::size_t first = which == SupportCase::diag_inside ? 0 : n;

  const auto theta = leading_rows(n);
  const RowMatrix psi = sample_mixed_rows(model, seed, theta);
  const MatrixXd phi_s =
      psi.middleCols(first, k) / std::sqrt(static_cast<double>(n));
  const MatrixXd gram = phi_s.transpose() * phi_s;
  double lmin, lmax;
  support_deviation(gram, {}, lmin, lmax);

  GramAsymptoteReport report;
  report.which = which;
  report.n = n;
  report.N = model.N;
  report.k = k;
  report.gamma = static_cast<double>(k) / static_cast<double>(n);
  report.sigma2 = model.offdiag_law.declared_variance();
  report.observed_min = lmin;
  report.observed_max = lmax;
  const double g = report.gamma;
  if (which == SupportCase::diag_inside) {
    const double cross = std::sqrt(g * (1.0 - g));
    report.limit_min = (1.0 - 2.0 * cross) * report.sigma2;
    report.limit_max = (1.0 + 4.0 * g + 2.0 * cross) * report.sigma2;
  } else {
    report.limit_min = (1.0 - std::sqrt(g)) * (1.0 - std::sqrt(g)) * report.sigma2;
    report.limit_max = (1.0 + std::sqrt(g)) * (1.0 + std::sqrt(g)) * report.sigma2;
  }
  return report;
}

}  // namespace mixcs
