#include "mixcs/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>

#include "mixcs/csv.hpp"
#include "mixcs/error.hpp"

namespace mixcs {
namespace {

constexpr std::array<char, 6> kMagic = {'C', 'S', 'M', 'A', 'T', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw ValidationError("CSMAT1: truncated file");
  }
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= U(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_csmat(std::ostream& out, const MeasurementMatrix& matrix) {
  if (matrix.rows() > std::numeric_limits<std::uint32_t>::max() ||
      matrix.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("CSMAT1: dimensions exceed 32 bits");
  }
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(matrix.rows()));
  put_le(out, static_cast<std::uint32_t>(matrix.cols()));
  put_le(out, matrix.scaling());
  const double* data = matrix.entries().data();
  for (std::size_t i = 0; i < matrix.rows() * matrix.cols(); ++i) put_le(out, data[i]);
  if (!out) throw SolverError("CSMAT1: write failed");
}

MeasurementMatrix read_csmat(std::istream& in) {
  std::array<char, 6> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ValidationError("CSMAT1: bad magic");
  }
  const auto n = get_le<std::uint32_t>(in);
  const auto N = get_le<std::uint32_t>(in);
  const double scaling = get_le<double>(in);
  if (n == 0 || N == 0) throw ValidationError("CSMAT1: zero dimension");
  RowMatrix entries(n, N);
  double* data = entries.data();
  for (std::size_t i = 0; i < std::size_t(n) * N; ++i) data[i] = get_le<double>(in);
  return MeasurementMatrix(std::move(entries), scaling, {"file", 0, {}});
}

void save_csmat(const std::string& path, const MeasurementMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_csmat(out, matrix);
}

MeasurementMatrix load_csmat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_csmat(in);
}

void write_matrix_csv(std::ostream& out, const RowMatrix& entries) {
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      if (j) out << ',';
      out << format_double(entries(i, j));
    }
    out << '\n';
  }
}

}  // namespace mixcs
