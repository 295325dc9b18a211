#include "mixcs/matrix.hpp"

#include "mixcs/error.hpp"

namespace mixcs {

MeasurementMatrix::MeasurementMatrix(RowMatrix entries, double scaling,
                                     Provenance provenance)
    : entries_(std::move(entries)),
      scaling_(scaling),
      provenance_(std::move(provenance)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) {
    throw ValidationError("measurement matrix dimensions must be positive");
  }
  if (!entries_.allFinite()) {
    throw ValidationError("measurement matrix has non-finite entries");
  }
  if (!std::isfinite(scaling_) || scaling_ <= 0.0) {
    throw ValidationError("measurement matrix scaling must be finite and positive");
  }
}

MeasurementMatrix MeasurementMatrix::scaled(double factor) const {
  return MeasurementMatrix(entries_ * factor, scaling_ * factor, provenance_);
}

}  // namespace mixcs
