#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixcs {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Where a measurement matrix came from. Row indices are 0-based.
struct Provenance {
  std::string ensemble;  // "gaussian", "bernoulli", "s-mixed", "file", ...
  std::uint64_t seed = 0;
  std::vector<std::size_t> rows;  // selected row set of the parent, if any
};

// Dense n x N matrix, row-major. `scaling` is the factor already applied to
// the stored entries (n^{-1/2} for a measurement matrix, 1 for raw draws).
class MeasurementMatrix {
 public:
  MeasurementMatrix() = default;
  // Throws ValidationError on empty dimensions or non-finite entries.
  MeasurementMatrix(RowMatrix entries, double scaling, Provenance provenance = {});

  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
  const RowMatrix& entries() const { return entries_; }
  double scaling() const { return scaling_; }
  const Provenance& provenance() const { return provenance_; }

  // Same provenance, entries multiplied by `factor`, scaling updated.
  MeasurementMatrix scaled(double factor) const;

 private:
  RowMatrix entries_;
  double scaling_ = 1.0;
  Provenance provenance_;
};

}  // namespace mixcs
