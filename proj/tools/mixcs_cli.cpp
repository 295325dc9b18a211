// mixcs: command-line front end for matrix generation, spectral checks, RIP
// estimation, recovery and the benchmark sweeps.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixcs/config.hpp"
#include "mixcs/csv.hpp"
#include "mixcs/error.hpp"
#include "mixcs/experiments.hpp"
#include "mixcs/matrix_io.hpp"
#include "mixcs/parallel.hpp"
#include "mixcs/rip.hpp"
#include "mixcs/spectral.hpp"

namespace {

using nlohmann::json;
using namespace mixcs;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Manifest {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::string& primary_output) const {
    json j;
    j["manifest_version"] = 1;
    j["command"] = command;
    j["config"] = config;
    j["master_seed"] = seed;
    j["tool_version"] = MIXCS_VERSION;
    j["outputs"] = outputs;
    j["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(primary_output + ".manifest.json");
    if (!out) throw ValidationError("cannot write manifest next to '" + primary_output + "'");
    out << j.dump(2) << '\n';
  }
};

std::size_t resolve_jobs(std::size_t flag) {
  if (const char* env = std::getenv("MIXCS_JOBS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    throw ValidationError("MIXCS_JOBS must be a positive integer");
  }
  return flag > 0 ? flag : default_jobs();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  return out;
}

// gen-matrix ---------------------------------------------------------------

struct GenMatrixArgs {
  std::string ensemble = "s-mixed";
  std::size_t N = 256;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  bool raw = false;
  std::string diag_law = "gaussian";
  std::string offdiag_law = "bernoulli";
};

int run_gen_matrix(const GenMatrixArgs& a) {
  Manifest manifest{"gen-matrix",
                    {{"ensemble", a.ensemble}, {"N", a.N}, {"n", a.n}, {"seed", a.seed},
                     {"raw", a.raw}, {"diag_law", a.diag_law}, {"offdiag_law", a.offdiag_law}},
                    a.seed};
  if (a.n == 0 || a.N == 0 || a.n > a.N) throw ValidationError("need 1 <= n <= N");
  MeasurementMatrix phi;
  if (a.ensemble == "s-mixed") {
    const MixedGraphModel model{a.N, DistributionSpec::from_name(a.diag_law),
                                DistributionSpec::from_name(a.offdiag_law)};
    phi = mixed_measurement_matrix(model, a.n, a.seed);
    if (a.raw) phi = phi.scaled(1.0 / phi.scaling());
  } else {
    phi = sample_iid_matrix(DistributionSpec::from_name(a.ensemble), a.n, a.N, a.seed);
    if (!a.raw) phi = phi.scaled(1.0 / std::sqrt(static_cast<double>(a.n)));
  }
  save_csmat(a.out, phi);
  manifest.outputs.push_back(a.out);
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    write_matrix_csv(out, phi.entries());
    manifest.outputs.push_back(a.csv);
  }
  manifest.write(a.out);
  std::cout << "wrote " << a.out << " (" << phi.rows() << " x " << phi.cols()
            << ", scaling " << format_double(phi.scaling()) << ")\n";
  return 0;
}

// spectral-check -----------------------------------------------------------

struct SpectralArgs {
  std::string law = "gaussian";
  std::size_t n = 1000;
  double y = 0.25;
  bool symmetric = false;
  std::string diag_law = "gaussian";
  std::string offdiag_law = "bernoulli";
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::string out;
};

int run_spectral(const SpectralArgs& a) {
  std::ostringstream csv;
  csv << SpectralEdgeReport::csv_header() << '\n';
  for (std::size_t s = 0; s < a.seeds; ++s) {
    const std::uint64_t seed = a.seed + s;
    const SpectralEdgeReport report =
        a.symmetric ? semicircle_edge_check({a.n, DistributionSpec::from_name(a.diag_law),
                                             DistributionSpec::from_name(a.offdiag_law)},
                                            a.n, seed)
                    : bai_yin_check(DistributionSpec::from_name(a.law), a.n, a.y, seed);
    csv << report.csv_line() << '\n';
  }
  std::cout << csv.str();
  if (!a.out.empty()) {
    auto out = open_output(a.out);
    out << csv.str();
    Manifest manifest{"spectral-check",
                      {{"law", a.law}, {"n", a.n}, {"y", a.y}, {"symmetric", a.symmetric},
                       {"diag_law", a.diag_law}, {"offdiag_law", a.offdiag_law},
                       {"seed", a.seed}, {"seeds", a.seeds}},
                      a.seed, {a.out}};
    manifest.write(a.out);
  }
  return 0;
}

// rip ----------------------------------------------------------------------

struct RipArgs {
  std::string matrix;
  std::size_t k = 2;
  bool exhaustive = false;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int run_rip(const RipArgs& a) {
  if (!a.exhaustive && a.trials == 0) {
    throw ValidationError("rip: pass --exhaustive or --trials <int>");
  }
  const MeasurementMatrix phi = load_csmat(a.matrix);
  const RipEstimate est = a.exhaustive ? delta_exhaustive(phi, a.k)
                                       : delta_monte_carlo(phi, a.k, a.trials, a.seed);
  std::ostringstream csv;
  csv << RipEstimate::csv_header() << '\n' << est.csv_line() << '\n';
  std::cout << csv.str();
  std::cout << "delta = " << format_double(est.delta) << " ("
            << (recovery_condition(est.delta) ? "below" : "not below")
            << " sqrt(2) - 1)\n";
  if (!a.out.empty()) {
    auto out = open_output(a.out);
    out << csv.str();
    Manifest manifest{"rip",
                      {{"matrix", a.matrix}, {"k", a.k}, {"exhaustive", a.exhaustive},
                       {"trials", a.trials}, {"seed", a.seed}},
                      a.seed, {a.out}};
    manifest.write(a.out);
  }
  return 0;
}

// recover ------------------------------------------------------------------

struct RecoverArgs {
  std::string matrix;
  std::string y;
  double eps = 0.0;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::string out;
};

int run_recover(const RecoverArgs& a) {
  const MeasurementMatrix phi = load_csmat(a.matrix);
  std::ifstream in(a.y);
  if (!in) throw ValidationError("cannot open '" + a.y + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::vector<double> values = parse_real_list(buffer.str());
  const VectorXd y = Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));

  SolverOptions options;
  options.tol = a.tol;
  options.max_iter = a.max_iter;
  if (a.eps < 0.0) throw ValidationError("--eps must be nonnegative");
  const RecoveryResult result = L1Solver(phi).bpdn(y, a.eps, options);

  auto out = open_output(a.out);
  out << "# objective=" << format_double(result.objective)
      << ",residual=" << format_double(result.residual)
      << ",iterations=" << result.iterations << ",status=" << to_string(result.status) << '\n';
  out << "index,value\n";
  for (Eigen::Index i = 0; i < result.x_star.size(); ++i) {
    if (std::abs(result.x_star(i)) > 1e-10) out << i << ',' << format_double(result.x_star(i)) << '\n';
  }
  Manifest manifest{"recover",
                    {{"matrix", a.matrix}, {"y", a.y}, {"eps", a.eps}, {"tol", a.tol},
                     {"max_iter", a.max_iter}},
                    0, {a.out}};
  manifest.write(a.out);
  std::cout << "status " << to_string(result.status) << ", objective "
            << format_double(result.objective) << ", residual "
            << format_double(result.residual) << ", iterations " << result.iterations << '\n';
  return result.status == SolveStatus::infeasible ? kExitRuntime : 0;
}

// moments ------------------------------------------------------------------

struct MomentArgs {
  std::string law = "three-point";
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
};

int run_moments(const MomentArgs& a) {
  const DistributionSpec spec = DistributionSpec::from_name(a.law);
  const MomentReport r = moment_check(spec, a.samples, a.seed);
  std::cout << "law,samples,mean,variance,fourth_moment,positive_part_second_moment,"
               "declared_mean,declared_variance,declared_fourth_moment\n"
            << spec.name() << ',' << r.samples << ',' << format_double(r.mean) << ','
            << format_double(r.variance) << ',' << format_double(r.fourth_moment) << ','
            << format_double(r.positive_part_second_moment) << ','
            << format_double(spec.declared_mean()) << ','
            << format_double(spec.declared_variance()) << ','
            << (spec.declared_fourth_moment() ? format_double(*spec.declared_fourth_moment())
                                              : std::string("unknown"))
            << '\n';
  return 0;
}

// bench-* ------------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string out;
  bool quiet = false;
};

std::function<void(std::size_t, std::size_t)> progress_printer(const std::string& label,
                                                               bool quiet) {
  if (quiet) return {};
  return [label](std::size_t done, std::size_t total) {
    const std::size_t step = std::max<std::size_t>(1, total / 10);
    if (done % step == 0 || done == total) {
      std::cerr << label << ": " << done << '/' << total << '\n';
    }
  };
}

int run_bench(BenchKind kind, const BenchArgs& a, std::size_t jobs) {
  const BenchConfig config =
      a.config.empty() ? load_config(json::object(), kind) : load_config_file(a.config, kind);
  Manifest manifest{command_name(kind), config.to_json(), config.master_seed, {a.out}};
  auto out = open_output(a.out);
  out << success_csv_header() << '\n';

  SolverOptions solver;
  solver.tol = config.tol;
  solver.max_iter = config.max_iter;
  int status = 0;
  std::string failure;
  try {
    if (kind == BenchKind::image) {
      const GrayImage image = config.image.empty() ? synthetic_test_image() : load_pgm(config.image);
      if (config.n > image.height * image.width) {
        throw ValidationError("config key 'n': exceeds the image pixel count");
      }
      const std::filesystem::path stem = std::filesystem::path(a.out).replace_extension();
      const std::string original = stem.string() + ".original.pgm";
      save_pgm(original, image);
      manifest.outputs.push_back(original);
      for (Ensemble e : config.ensembles) {
        if (!a.quiet) std::cerr << "bench-image: " << to_string(e) << '\n';
        const ImageResult r =
            image_experiment(image, config.n, e, config.master_seed, config.eps, solver);
        const bool ok = r.mse <= config.threshold;
        out << to_string(e) << ',' << config.n << ",1," << (ok ? 1 : 0) << ','
            << (ok ? "1" : "0") << ',' << format_double(r.mse) << ',' << r.iterations << '\n';
        out.flush();
        const std::string pgm = stem.string() + "." + to_string(e) + ".pgm";
        save_pgm(pgm, r.reconstruction);
        manifest.outputs.push_back(pgm);
      }
    } else {
      SweepOptions sweep;
      sweep.trials = config.trials;
      sweep.master_seed = config.master_seed;
      sweep.threshold = config.threshold;
      sweep.eps = config.eps;
      sweep.jobs = jobs;
      sweep.solver = solver;
      for (Ensemble e : config.ensembles) {
        sweep.progress = progress_printer(command_name(kind) + " " + to_string(e), a.quiet);
        const auto curves =
            kind == BenchKind::sparsity
                ? success_vs_sparsity({e}, config.N, config.n, config.k_grid, sweep)
                : success_vs_measurements({e}, config.N, config.k, config.n_grid, sweep);
        out << success_csv_rows(curves);
        out.flush();
      }
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    failure = e.what();
    out << "# FAILED: " << failure << '\n';
    status = kExitRuntime;
  }
  out.close();
  manifest.write(a.out);
  if (status != 0) std::cerr << "error: " << failure << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed random-graph compressed sensing workbench"};
  app.require_subcommand(1);
  std::size_t jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads for sweeps (MIXCS_JOBS overrides)");

  GenMatrixArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-matrix", "Sample a measurement matrix (CSMAT1)");
  gen_cmd->add_option("--ensemble", gen.ensemble, "gaussian | bernoulli | three-point | s-mixed");
  gen_cmd->add_option("--N", gen.N, "Columns (graph vertices)");
  gen_cmd->add_option("--n", gen.n, "Rows (measurements)");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out)->required();
  gen_cmd->add_option("--csv", gen.csv, "Also write the entries as CSV");
  gen_cmd->add_flag("--raw", gen.raw, "Skip the n^{-1/2} scaling");
  gen_cmd->add_option("--diag-law", gen.diag_law, "s-mixed loop-weight law");
  gen_cmd->add_option("--offdiag-law", gen.offdiag_law, "s-mixed edge-weight law");

  SpectralArgs spectral;
  auto* spec_cmd = app.add_subcommand("spectral-check", "Extreme singular values / eigenvalues vs. limits");
  spec_cmd->add_option("--law", spectral.law, "iid law for the rectangular check");
  spec_cmd->add_option("--n", spectral.n);
  spec_cmd->add_option("--y", spectral.y, "Aspect ratio p/n in (0, 1)");
  spec_cmd->add_flag("--symmetric", spectral.symmetric, "Largest eigenvalue of the mixed matrix");
  spec_cmd->add_option("--diag-law", spectral.diag_law);
  spec_cmd->add_option("--offdiag-law", spectral.offdiag_law);
  spec_cmd->add_option("--seed", spectral.seed);
  spec_cmd->add_option("--seeds", spectral.seeds, "Consecutive seeds to run");
  spec_cmd->add_option("--out", spectral.out);

  RipArgs rip;
  auto* rip_cmd = app.add_subcommand("rip", "Estimate the restricted isometry constant");
  rip_cmd->add_option("--matrix", rip.matrix)->required();
  rip_cmd->add_option("--k", rip.k)->required();
  auto* exhaustive = rip_cmd->add_flag("--exhaustive", rip.exhaustive);
  auto* trials = rip_cmd->add_option("--trials", rip.trials);
  exhaustive->excludes(trials);
  rip_cmd->add_option("--seed", rip.seed);
  rip_cmd->add_option("--out", rip.out);

  RecoverArgs recover;
  auto* rec_cmd = app.add_subcommand("recover", "l1 recovery (basis pursuit / BPDN)");
  rec_cmd->add_option("--matrix", recover.matrix)->required();
  rec_cmd->add_option("--y", recover.y, "Measurements, comma or newline separated")->required();
  rec_cmd->add_option("--eps", recover.eps);
  rec_cmd->add_option("--tol", recover.tol);
  rec_cmd->add_option("--max-iter", recover.max_iter);
  rec_cmd->add_option("--out", recover.out)->required();

  MomentArgs moments;
  auto* mom_cmd = app.add_subcommand("moments", "Empirical moments of a law");
  mom_cmd->add_option("--law", moments.law);
  mom_cmd->add_option("--samples", moments.samples);
  mom_cmd->add_option("--seed", moments.seed);

  BenchArgs sparsity, measurements, image;
  auto add_bench = [&](const char* name, const char* help, BenchArgs& args) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", args.config, "JSON config (or a run manifest)");
    cmd->add_option("--out", args.out)->required();
    cmd->add_flag("--quiet", args.quiet);
    return cmd;
  };
  auto* sp_cmd = add_bench("bench-sparsity", "Success rate vs. sparsity", sparsity);
  auto* ms_cmd = add_bench("bench-measurements", "Success rate vs. measurement count", measurements);
  auto* im_cmd = add_bench("bench-image", "Image reconstruction MSE", image);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return e.get_exit_code() == 0 ? 0 : kExitValidation;
  }

  try {
    const std::size_t workers = resolve_jobs(jobs);
    if (gen_cmd->parsed()) return run_gen_matrix(gen);
    if (spec_cmd->parsed()) return run_spectral(spectral);
    if (rip_cmd->parsed()) return run_rip(rip);
    if (rec_cmd->parsed()) return run_recover(recover);
    if (mom_cmd->parsed()) return run_moments(moments);
    if (sp_cmd->parsed()) return run_bench(BenchKind::sparsity, sparsity, workers);
    if (ms_cmd->parsed()) return run_bench(BenchKind::measurements, measurements, workers);
    if (im_cmd->parsed()) return run_bench(BenchKind::image, image, workers);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::cerr << app.help();
  return kExitValidation;
}
