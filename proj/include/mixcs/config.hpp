#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixcs/experiments.hpp"

namespace mixcs {

enum class BenchKind { sparsity, measurements, image };

std::string command_name(BenchKind kind);

// Resolved benchmark configuration. Which of n / n_grid / k / k_grid is
// meaningful depends on the command.
struct BenchConfig {
  BenchKind kind = BenchKind::sparsity;
  std::vector<Ensemble> ensembles = kAllEnsembles;
  std::size_t N = 256;
  std::size_t n = 100;
  std::vector<std::size_t> n_grid;
  std::size_t k = 20;
  std::vector<std::size_t> k_grid;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  double threshold = kDefaultSuccessThreshold;
  double eps = 0.0;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::string image;  // bench-image: PGM path, empty for the built-in test image

  nlohmann::json to_json() const;
};

// Validates against the strict per-command schema and fills defaults.
// Unknown keys and type errors throw ValidationError naming the key. A run
// manifest (an object with "manifest_version") is accepted too; its
// embedded "config" is used.
BenchConfig load_config(const nlohmann::json& document, BenchKind kind);
BenchConfig load_config_file(const std::string& path, BenchKind kind);

}  // namespace mixcs
