#include "mixcs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mixcs/error.hpp"

namespace mixcs {
namespace {

using nlohmann::json;

const std::vector<std::size_t> kDefaultKGrid = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
const std::vector<std::size_t> kDefaultNGrid = {40, 50, 60, 70, 80, 90, 95, 100, 110, 120, 130};

[[noreturn]] void bad(const std::string& key, const std::string& expected) {
  throw ValidationError("config key '" + key + "': expected " + expected);
}

std::size_t positive_int(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) bad(key, "positive integer");
  return v.get<std::size_t>();
}

std::size_t nonnegative_int(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(key, "nonnegative integer");
  return v.get<std::size_t>();
}

double nonnegative_real(const json& v, const std::string& key) {
  if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0) {
    bad(key, "nonnegative number");
  }
  return v.get<double>();
}

std::vector<std::size_t> int_list(const json& v, const std::string& key, bool allow_zero) {
  if (!v.is_array() || v.empty()) bad(key, "nonempty array of integers");
  std::vector<std::size_t> out;
  for (const auto& item : v) {
    out.push_back(allow_zero ? nonnegative_int(item, key) : positive_int(item, key));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) bad(key, "strictly ascending array of integers");
  }
  return out;
}

std::set<std::string> allowed_keys(BenchKind kind) {
  std::set<std::string> keys = {"ensembles", "master_seed", "eps", "tol", "max_iter", "threshold"};
  switch (kind) {
    case BenchKind::sparsity:
      keys.insert({"N", "n", "k_grid", "trials"});
      break;
    case BenchKind::measurements:
      keys.insert({"N", "k", "n_grid", "trials"});
      break;
    case BenchKind::image:
      keys.insert({"n", "image"});
      break;
  }
  return keys;
}

}  // namespace

std::string command_name(BenchKind kind) {
  switch (kind) {
    case BenchKind::sparsity: return "bench-sparsity";
    case BenchKind::measurements: return "bench-measurements";
    case BenchKind::image: return "bench-image";
  }
  return "unknown";
}

json BenchConfig::to_json() const {
  json j;
  json names = json::array();
  for (Ensemble e : ensembles) names.push_back(to_string(e));
  j["ensembles"] = names;
  j["master_seed"] = master_seed;
  j["eps"] = eps;
  j["tol"] = tol;
  j["max_iter"] = max_iter;
  j["threshold"] = threshold;
  switch (kind) {
    case BenchKind::sparsity:
      j["N"] = N;
      j["n"] = n;
      j["k_grid"] = k_grid;
      j["trials"] = trials;
      break;
    case BenchKind::measurements:
      j["N"] = N;
      j["k"] = k;
      j["n_grid"] = n_grid;
      j["trials"] = trials;
      break;
    case BenchKind::image:
      j["n"] = n;
      j["image"] = image;
      break;
  }
  return j;
}

BenchConfig load_config(const json& document, BenchKind kind) {
  if (!document.is_object()) throw ValidationError("config must be a JSON object");
  if (document.contains("manifest_version")) {
    if (!document.contains("config") || !document.contains("command")) {
      throw ValidationError("manifest lacks 'config' or 'command'");
    }
    if (document.at("command") != command_name(kind)) {
      throw ValidationError("manifest was written by '" +
                            document.at("command").get<std::string>() + "', not '" +
                            command_name(kind) + "'");
    }
    return load_config(document.at("config"), kind);
  }
  const auto allowed = allowed_keys(kind);
  for (const auto& [key, value] : document.items()) {
    if (!allowed.count(key)) {
      throw ValidationError("config key '" + key + "' is not recognised by " +
                            command_name(kind));
    }
  }

  BenchConfig config;
  config.kind = kind;
  if (kind == BenchKind::image) {
    config.n = 2400;
    config.threshold = 0.1;
    config.trials = 1;
    config.N = 0;
  }
  if (kind == BenchKind::sparsity) config.k_grid = kDefaultKGrid;
  if (kind == BenchKind::measurements) config.n_grid = kDefaultNGrid;

  if (document.contains("ensembles")) {
    const json& v = document.at("ensembles");
    if (!v.is_array() || v.empty()) bad("ensembles", "nonempty array of ensemble names");
    config.ensembles.clear();
    for (const auto& item : v) {
      if (!item.is_string()) bad("ensembles", "array of strings");
      const std::string name = item.get<std::string>();
      if (name != "gaussian" && name != "bernoulli" && name != "s-mixed") {
        bad("ensembles", "gaussian, bernoulli or s-mixed, got '" + name + "'");
      }
      config.ensembles.push_back(ensemble_from_name(name));
    }
  }
  if (document.contains("N")) config.N = positive_int(document.at("N"), "N");
  if (document.contains("n")) config.n = positive_int(document.at("n"), "n");
  if (document.contains("k")) config.k = nonnegative_int(document.at("k"), "k");
  if (document.contains("n_grid")) config.n_grid = int_list(document.at("n_grid"), "n_grid", false);
  if (document.contains("k_grid")) config.k_grid = int_list(document.at("k_grid"), "k_grid", true);
  if (document.contains("trials")) config.trials = positive_int(document.at("trials"), "trials");
  if (document.contains("master_seed")) {
    const json& v = document.at("master_seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      bad("master_seed", "nonnegative integer");
    }
    config.master_seed = v.get<std::uint64_t>();
  }
  if (document.contains("threshold")) {
    config.threshold = nonnegative_real(document.at("threshold"), "threshold");
  }
  if (document.contains("eps")) config.eps = nonnegative_real(document.at("eps"), "eps");
  if (document.contains("tol")) {
    config.tol = nonnegative_real(document.at("tol"), "tol");
    if (config.tol == 0.0) bad("tol", "positive number");
  }
  if (document.contains("max_iter")) {
    config.max_iter = positive_int(document.at("max_iter"), "max_iter");
  }
  if (document.contains("image")) {
    if (!document.at("image").is_string()) bad("image", "string path");
    config.image = document.at("image").get<std::string>();
  }

  if (kind == BenchKind::sparsity) {
    if (config.n > config.N) bad("n", "integer not exceeding N");
    if (config.k_grid.back() > config.N) bad("k_grid", "values not exceeding N");
  }
  if (kind == BenchKind::measurements) {
    if (config.n_grid.back() > config.N) bad("n_grid", "values not exceeding N");
    if (config.k > config.N) bad("k", "integer not exceeding N");
  }
  return config;
}

BenchConfig load_config_file(const std::string& path, BenchKind kind) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return load_config(document, kind);
}

}  // namespace mixcs
