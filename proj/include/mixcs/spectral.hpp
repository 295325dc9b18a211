#pragma once

#include <cstdint>
#include <string>

#include "mixcs/distribution.hpp"
#include "mixcs/ensembles.hpp"
#include "mixcs/matrix.hpp"

namespace mixcs {

struct SingularRange {
  double min = 0.0;
  double max = 0.0;
};

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

// Smallest and largest singular values of `m` as given. Uses the Gram
// matrix of the short side when it is well conditioned (condition number at
// most 1e3) and bidiagonalization otherwise. Throws on non-finite entries.
SingularRange extreme_singular_values(const MatrixXd& m);

// Extreme eigenvalues of a symmetric matrix. Rejects (does not symmetrize)
// inputs with |m_ij - m_ji| > 1e-12 * max(1, max|m|).
EigenRange extreme_eigenvalues_symmetric(const MatrixXd& m);

// Observed vs. predicted spectral edges of one sampled matrix.
struct SpectralEdgeReport {
  std::size_t n = 0;
  double y = 0.0;  // aspect p/n of the sampled matrix; 1 for the square symmetric case
  double observed_min = 0.0;
  double observed_max = 0.0;
  double predicted_min = 0.0;
  double predicted_max = 0.0;
  double abs_deviation = 0.0;

  // n,y,observed_min,observed_max,predicted_min,predicted_max,abs_deviation
  std::string csv_line() const;
  static std::string csv_header();
};

// Samples an n x round(y n) iid matrix, scales by n^{-1/2} and compares the
// extreme singular values with sqrt(v) (1 -/+ sqrt(p/n)).
SpectralEdgeReport bai_yin_check(const DistributionSpec& spec, std::size_t n,
                                 double y, std::uint64_t seed);

// Samples the n x n mixed adjacency matrix, scales by n^{-1/2} and compares
// lambda_max with 2 sigma (lambda_min with -2 sigma). abs_deviation refers
// to the largest eigenvalue only.
SpectralEdgeReport semicircle_edge_check(const MixedGraphModel& model,
                                         std::size_t n, std::uint64_t seed);

}  // namespace mixcs
