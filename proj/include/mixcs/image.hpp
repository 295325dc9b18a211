#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixcs/matrix.hpp"

namespace mixcs {

// Grayscale image with intensities in [0, 1], stored row-major.
struct GrayImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;

  double& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
  std::size_t nonzeros() const;
};

// Binary PGM (P5), 8-bit. Reading divides by maxval (<= 255); writing
// clamps to [0, 1] and rounds to 0..255.
GrayImage read_pgm(std::istream& in);
void write_pgm(std::ostream& out, const GrayImage& image);
GrayImage load_pgm(const std::string& path);
void save_pgm(const std::string& path, const GrayImage& image);

// Column-major vectorisation and its inverse.
VectorXd vectorize(const GrayImage& image);
GrayImage unvectorize(const VectorXd& v, std::size_t height, std::size_t width);

// ||X - M||_F / ||M||_F. Throws on size mismatch or an all-zero reference.
double relative_frobenius_error(const GrayImage& reconstruction, const GrayImage& reference);

// Deterministic test scene (a few smooth blobs and a bar) keeping exactly
// `nonzeros` pixels, every kept intensity a nonzero multiple of 1/255.
GrayImage synthetic_test_image(std::size_t height = 64, std::size_t width = 64,
                               std::size_t nonzeros = 739);

// Keeps the `keep` largest intensities (ties by lower index), zeroes the rest.
GrayImage hard_threshold(const GrayImage& image, std::size_t keep);

}  // namespace mixcs
