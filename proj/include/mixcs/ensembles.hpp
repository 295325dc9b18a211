#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "mixcs/distribution.hpp"
#include "mixcs/matrix.hpp"

namespace mixcs {

// Complete weighted graph on N vertices: loop weights from diag_law,
// edge weights from offdiag_law. Its adjacency matrix is the mixed
// symmetric random matrix.
struct MixedGraphModel {
  std::size_t N = 0;
  DistributionSpec diag_law = DistributionSpec::gaussian_unit();
  DistributionSpec offdiag_law = DistributionSpec::bernoulli_sym();

  // Off-diagonal law must be zero-mean with positive variance and a known
  // fourth moment; N must be positive.
  void validate() const;
  double sigma() const;
};

// n x N matrix of iid draws, unscaled.
MeasurementMatrix sample_iid_matrix(const DistributionSpec& spec, std::size_t n,
                                    std::size_t N, std::uint64_t seed);

// Symmetric N x N adjacency matrix of a draw from the mixed model.
MatrixXd sample_mixed_adjacency(const MixedGraphModel& model, std::uint64_t seed);

// Rows `theta` of sample_mixed_adjacency(model, seed), without
// materialising the full N x N matrix. Row r of the result is row theta[r].
RowMatrix sample_mixed_rows(const MixedGraphModel& model, std::uint64_t seed,
                            std::span<const std::size_t> theta);

// 2A(G) - J for G drawn from the Erdos-Renyi model G_N(p) with loops.
MatrixXd bernoulli_from_graph(std::size_t N, double p, std::uint64_t seed);

// Rows `theta` of a square parent, multiplied by n^{-1/2} when `scale`.
// Throws on duplicate or out-of-range indices.
MeasurementMatrix subsample_rows(const MatrixXd& parent,
                                 std::span<const std::size_t> theta, bool scale,
                                 Provenance provenance = {});

// {0, 1, ..., n-1}
std::vector<std::size_t> leading_rows(std::size_t n);

// Phi = n^{-1/2} Psi with Psi the first n rows of a mixed adjacency matrix.
MeasurementMatrix mixed_measurement_matrix(const MixedGraphModel& model,
                                           std::size_t n, std::uint64_t seed);

}  // namespace mixcs
