#include "mixcs/spectral.hpp"

#include <cmath>

#include "mixcs/csv.hpp"
#include "mixcs/error.hpp"
#include "mixcs/symmetric_eigen.hpp"

namespace mixcs {

SingularRange extreme_singular_values(const MatrixXd& m) {
  if (m.size() == 0) throw ValidationError("extreme_singular_values: empty matrix");
  if (!m.allFinite()) {
    throw ValidationError("extreme_singular_values: non-finite entries");
  }
  MatrixXd gram = m.rows() >= m.cols() ? MatrixXd(m.transpose() * m)
                                       : MatrixXd(m * m.transpose());
  const VectorXd lambda = symmetric_eigenvalues(gram);
  const double lmax = lambda(lambda.size() - 1);
  const double lmin = lambda(0);
  if (lmax > 0.0 && lmin >= 1e-6 * lmax) {
    return {std::sqrt(lmin), std::sqrt(lmax)};
  }
  const VectorXd sigma = singular_values_bidiagonal(m);
  return {sigma(0), sigma(sigma.size() - 1)};
}

EigenRange extreme_eigenvalues_symmetric(const MatrixXd& m) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw ValidationError("extreme_eigenvalues_symmetric: need a nonempty square matrix");
  }
  if (!m.allFinite()) {
    throw ValidationError("extreme_eigenvalues_symmetric: non-finite entries");
  }
  const double tolerance = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tolerance) {
    throw ValidationError("extreme_eigenvalues_symmetric: matrix is not symmetric");
  }
  const VectorXd lambda = symmetric_eigenvalues(m);
  return {lambda(0), lambda(lambda.size() - 1)};
}

std::string SpectralEdgeReport::csv_header() {
  return "n,y,observed_min,observed_max,predicted_min,predicted_max,abs_deviation";
}

std::string SpectralEdgeReport::csv_line() const {
  return std::to_string(n) + ',' + format_double(y) + ',' +
         format_double(observed_min) + ',' + format_double(observed_max) + ',' +
         format_double(predicted_min) + ',' + format_double(predicted_max) + ',' +
         format_double(abs_deviation);
}

SpectralEdgeReport bai_yin_check(const DistributionSpec& spec, std::size_t n,
                                 double y, std::uint64_t seed) {
  if (!(y > 0.0 && y < 1.0)) throw ValidationError("bai_yin_check: y must lie in (0, 1)");
  if (spec.declared_mean() != 0.0) {
    throw ValidationError("bai_yin_check: law must have zero mean");
  }
  if (!spec.declared_fourth_moment()) {
    throw ValidationError("bai_yin_check: law needs a finite fourth moment");
  }
  const auto p = static_cast<std::size_t>(std::llround(y * static_cast<double>(n)));
  if (p < 2) throw ValidationError("bai_yin_check: round(y n) must be at least 2");
  if (p >= n) throw ValidationError("bai_yin_check: round(y n) must be below n");

  const MeasurementMatrix raw = sample_iid_matrix(spec, n, p, seed);
  const MatrixXd scaled = raw.entries() / std::sqrt(static_cast<double>(n));
  const SingularRange observed = extreme_singular_values(scaled);

  const double aspect = static_cast<double>(p) / static_cast<double>(n);
  const double sd = std::sqrt(spec.declared_variance());
  SpectralEdgeReport report;
  report.n = n;
  report.y = aspect;
  report.observed_min = observed.min;
  report.observed_max = observed.max;
  report.predicted_min = sd * (1.0 - std::sqrt(aspect));
  report.predicted_max = sd * (1.0 + std::sqrt(aspect));
  report.abs_deviation = std::max(std::abs(observed.min - report.predicted_min),
                                  std::abs(observed.max - report.predicted_max));
  return report;
}

SpectralEdgeReport semicircle_edge_check(const MixedGraphModel& model,
                                         std::size_t n, std::uint64_t seed) {
  MixedGraphModel square = model;
  square.N = n;
  square.validate();
  MatrixXd a = sample_mixed_adjacency(square, seed);
  a /= std::sqrt(static_cast<double>(n));
  const VectorXd lambda = symmetric_eigenvalues(a);

  SpectralEdgeReport report;
  report.n = n;
  report.y = 1.0;
  report.observed_min = lambda(0);
  report.observed_max = lambda(lambda.size() - 1);
  report.predicted_min = -2.0 * square.sigma();
  report.predicted_max = 2.0 * square.sigma();
  report.abs_deviation = std::abs(report.observed_max - report.predicted_max);
  return report;
}

}  // namespace mixcs
