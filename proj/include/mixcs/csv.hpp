#pragma once

#include <string>
#include <vector>

namespace mixcs {

// Shortest decimal that round-trips the double ('.' separator).
std::string format_double(double value);

std::string join_indices(const std::vector<std::size_t>& indices, char sep = ';');

// One comma-separated list of reals per line; blank lines skipped.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace mixcs
