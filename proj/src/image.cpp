#include "mixcs/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "mixcs/error.hpp"

namespace mixcs {
namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token += static_cast<char>(c);
  }
  return token;
}

std::size_t header_number(std::istream& in, const char* what) {
  const std::string token = header_token(in);
  if (token.empty() || !std::all_of(token.begin(), token.end(), ::isdigit)) {
    throw ValidationError(std::string("PGM: bad ") + what);
  }
  return std::stoul(token);
}

}  // namespace

std::size_t GrayImage::nonzeros() const {
  return static_cast<std::size_t>(
      std::count_if(pixels.begin(), pixels.end(), [](double p) { return p != 0.0; }));
}

GrayImage read_pgm(std::istream& in) {
  if (header_token(in) != "P5") throw ValidationError("PGM: expected binary P5 magic");
  GrayImage image;
  image.width = header_number(in, "width");
  image.height = header_number(in, "height");
  const std::size_t maxval = header_number(in, "maxval");
  if (image.width == 0 || image.height == 0) throw ValidationError("PGM: empty image");
  if (maxval == 0 || maxval > 255) throw ValidationError("PGM: only 8-bit images are supported");
  // header_token consumed exactly one whitespace byte after maxval.
  std::vector<unsigned char> raw(image.width * image.height);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw ValidationError("PGM: truncated pixel data");
  }
  image.pixels.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    image.pixels[i] = static_cast<double>(raw[i]) / static_cast<double>(maxval);
  }
  return image;
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (double p : image.pixels) {
    const double clamped = std::clamp(std::isfinite(p) ? p : 0.0, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
  }
  if (!out) throw SolverError("PGM: write failed");
}

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_pgm(in);
}

void save_pgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_pgm(out, image);
}

VectorXd vectorize(const GrayImage& image) {
  VectorXd v(image.height * image.width);
  for (std::size_t c = 0; c < image.width; ++c)
    for (std::size_t r = 0; r < image.height; ++r) v(c * image.height + r) = image.at(r, c);
  return v;
}

GrayImage unvectorize(const VectorXd& v, std::size_t height, std::size_t width) {
  if (static_cast<std::size_t>(v.size()) != height * width) {
    throw ValidationError("unvectorize: length does not match height * width");
  }
  GrayImage image{height, width, std::vector<double>(height * width)};
  for (std::size_t c = 0; c < width; ++c)
    for (std::size_t r = 0; r < height; ++r) image.at(r, c) = v(c * height + r);
  return image;
}

double relative_frobenius_error(const GrayImage& reconstruction, const GrayImage& reference) {
  if (reconstruction.height != reference.height || reconstruction.width != reference.width) {
    throw ValidationError("MSE: image dimensions differ");
  }
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
    const double d = reconstruction.pixels[i] - reference.pixels[i];
    diff += d * d;
    ref += reference.pixels[i] * reference.pixels[i];
  }
  if (ref == 0.0) throw ValidationError("MSE: reference image is all zero");
  return std::sqrt(diff) / std::sqrt(ref);
}

GrayImage hard_threshold(const GrayImage& image, std::size_t keep) {
  std::vector<std::size_t> order(image.pixels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(image.pixels[a]) > std::abs(image.pixels[b]);
  });
  GrayImage out{image.height, image.width, std::vector<double>(image.pixels.size(), 0.0)};
  for (std::size_t i = 0; i < std::min(keep, order.size()); ++i) {
    out.pixels[order[i]] = image.pixels[order[i]];
  }
  return out;
}

GrayImage synthetic_test_image(std::size_t height, std::size_t width, std::size_t nonzeros) {
  if (nonzeros > height * width) {
    throw ValidationError("synthetic_test_image: more nonzeros than pixels");
  }
  GrayImage field{height, width, std::vector<double>(height * width)};
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  auto blob = [](double dr, double dc, double radius) {
    return std::exp(-(dr * dr + dc * dc) / (2.0 * radius * radius));
  };
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double y = static_cast<double>(r) / h;
      const double x = static_cast<double>(c) / w;
      double v = 0.95 * blob(y - 0.32, x - 0.30, 0.10) +
                 0.75 * blob(y - 0.68, x - 0.70, 0.08) +
                 0.55 * blob(y - 0.30, x - 0.75, 0.05);
      // A faint diagonal bar.
      if (std::abs((y - 0.85) - 0.6 * (x - 0.2)) < 0.03 && x > 0.1 && x < 0.6) v += 0.45;
      // Index-dependent jitter keeps the ranking free of ties.
      v += 1e-9 * static_cast<double>((r * 131 + c * 71) % 997);
      field.at(r, c) = v;
    }
  }
  GrayImage kept = hard_threshold(field, nonzeros);
  double peak = 0.0;
  for (double p : kept.pixels) peak = std::max(peak, p);
  for (double& p : kept.pixels) {
    if (p == 0.0) continue;
    // Quantise to k/255 with k >= 1 so the image survives an 8-bit PGM trip.
    const long level = std::max(1L, std::lround(255.0 * p / peak));
    p = static_cast<double>(level) / 255.0;
  }
  return kept;
}

}  // namespace mixcs
