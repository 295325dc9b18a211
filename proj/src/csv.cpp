#include "mixcs/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mixcs/error.hpp"

namespace mixcs {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string join_indices(const std::vector<std::size_t>& indices, char sep) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(indices[i]);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  std::string token;
  auto flush = [&] {
    std::size_t b = token.find_first_not_of(" \t\r");
    std::size_t e = token.find_last_not_of(" \t\r");
    if (b != std::string::npos) {
      const std::string trimmed = token.substr(b, e - b + 1);
      double v = 0.0;
      const auto res =
          std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size()) {
        throw ValidationError("cannot parse '" + trimmed + "' as a real number");
      }
      values.push_back(v);
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == '\n') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return values;
}

}  // namespace mixcs
