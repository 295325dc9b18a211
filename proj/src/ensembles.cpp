#include "mixcs/ensembles.hpp"

#include <cmath>
#include <vector>

#include "mixcs/error.hpp"

namespace mixcs {

void MixedGraphModel::validate() const {
  if (N == 0) throw ValidationError("mixed graph model: N must be positive");
  if (offdiag_law.declared_mean() != 0.0) {
    throw ValidationError("mixed graph model: off-diagonal law must have zero mean");
  }
  if (!(offdiag_law.declared_variance() > 0.0)) {
    throw ValidationError(
        "mixed graph model: off-diagonal law must have positive variance");
  }
  if (!offdiag_law.declared_fourth_moment() ||
      !std::isfinite(*offdiag_law.declared_fourth_moment())) {
    throw ValidationError(
        "mixed graph model: off-diagonal law needs a finite fourth moment");
  }
}

double MixedGraphModel::sigma() const {
  return std::sqrt(offdiag_law.declared_variance());
}

MeasurementMatrix sample_iid_matrix(const DistributionSpec& spec, std::size_t n,
                                    std::size_t N, std::uint64_t seed) {
  if (n == 0 || N == 0) throw ValidationError("sample_iid_matrix: zero dimension");
  Stream stream = substream(seed, "iid");
  RowMatrix entries(n, N);
  double* data = entries.data();
  for (std::size_t i = 0; i < n * N; ++i) data[i] = spec.sample(stream);
  return MeasurementMatrix(std::move(entries), 1.0, {spec.name(), seed, {}});
}

// Entry (i, j) with i < j comes from the upper-row stream of row i at
// position j - i - 1; diagonals come from one dedicated stream. Changing the
// diagonal law therefore leaves the off-diagonal entries untouched.
RowMatrix sample_mixed_rows(const MixedGraphModel& model, std::uint64_t seed,
                            std::span<const std::size_t> theta) {
  model.validate();
  const std::size_t N = model.N;
  std::vector<long> slot(N, -1);
  for (std::size_t r = 0; r < theta.size(); ++r) {
    if (theta[r] >= N) throw ValidationError("row index out of range");
    if (slot[theta[r]] != -1) throw ValidationError("duplicate row index");
    slot[theta[r]] = static_cast<long>(r);
  }
  RowMatrix out(theta.size(), N);

  Stream diag = substream(seed, "mixed-diag");
  for (std::size_t i = 0; i < N; ++i) {
    const double w = model.diag_law.sample(diag);
    if (slot[i] >= 0) out(slot[i], i) = w;
  }
  for (std::size_t i = 0; i + 1 < N; ++i) {
    Stream row = substream(seed, "mixed-offdiag", i);
    const long ri = slot[i];
    for (std::size_t j = i + 1; j < N; ++j) {
      const double w = model.offdiag_law.sample(row);
      if (ri >= 0) out(ri, j) = w;
      if (slot[j] >= 0) out(slot[j], i) = w;
    }
  }
  return out;
}

MatrixXd sample_mixed_adjacency(const MixedGraphModel& model, std::uint64_t seed) {
  const auto all = leading_rows(model.N);
  return sample_mixed_rows(model, seed, all);
}

MatrixXd bernoulli_from_graph(std::size_t N, double p, std::uint64_t seed) {
  if (N == 0) throw ValidationError("bernoulli_from_graph: N must be positive");
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("bernoulli_from_graph: p must lie in (0, 1)");
  }
  Stream stream = substream(seed, "gnp");
  MatrixXd adjacency(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      const double a = stream.uniform() < p ? 1.0 : 0.0;
      adjacency(i, j) = a;
      adjacency(j, i) = a;
    }
  }
  return 2.0 * adjacency - MatrixXd::Ones(N, N);
}

MeasurementMatrix subsample_rows(const MatrixXd& parent,
                                 std::span<const std::size_t> theta, bool scale,
                                 Provenance provenance) {
  if (parent.rows() != parent.cols()) {
    throw ValidationError("subsample_rows: parent must be square");
  }
  const std::size_t N = static_cast<std::size_t>(parent.rows());
  if (theta.empty()) throw ValidationError("subsample_rows: empty row set");
  std::vector<bool> used(N, false);
  for (std::size_t index : theta) {
    if (index >= N) throw ValidationError("subsample_rows: row index out of range");
    if (used[index]) throw ValidationError("subsample_rows: duplicate row index");
    used[index] = true;
  }
  const std::size_t n = theta.size();
  const double factor = scale ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
  RowMatrix rows(n, N);
  for (std::size_t r = 0; r < n; ++r) rows.row(r) = parent.row(theta[r]) * factor;
  provenance.rows.assign(theta.begin(), theta.end());
  return MeasurementMatrix(std::move(rows), factor, std::move(provenance));
}

std::vector<std::size_t> leading_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

MeasurementMatrix mixed_measurement_matrix(const MixedGraphModel& model,
                                           std::size_t n, std::uint64_t seed) {
  if (n == 0 || n > model.N) {
    throw ValidationError("mixed_measurement_matrix: need 1 <= n <= N");
  }
  const auto theta = leading_rows(n);
  RowMatrix rows = sample_mixed_rows(model, seed, theta);
  const double factor = 1.0 / std::sqrt(static_cast<double>(n));
  rows *= factor;
  return MeasurementMatrix(std::move(rows), factor, {"s-mixed", seed, theta});
}

}  // namespace mixcs
