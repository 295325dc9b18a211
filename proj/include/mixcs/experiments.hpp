#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixcs/ensembles.hpp"
#include "mixcs/image.hpp"
#include "mixcs/solver.hpp"

namespace mixcs {

enum class Ensemble { gaussian, bernoulli, s_mixed };

std::string to_string(Ensemble ensemble);
Ensemble ensemble_from_name(const std::string& name);
inline const std::vector<Ensemble> kAllEnsembles = {Ensemble::gaussian, Ensemble::bernoulli,
                                                    Ensemble::s_mixed};

// Diagonal gaussian, off-diagonal +/-1.
MixedGraphModel default_mixed_model(std::size_t N);

// n^{-1/2}-scaled n x N measurement matrix for the ensemble. The mixed
// ensemble takes the first n rows of the N-vertex adjacency matrix.
MeasurementMatrix make_measurement_matrix(Ensemble ensemble, std::size_t n, std::size_t N,
                                          std::uint64_t seed);

struct SparseSignal {
  std::size_t length = 0;
  std::vector<std::size_t> support;  // ascending
  std::vector<double> values;        // aligned with support

  VectorXd dense() const;
};

// Uniform k-subset support with independent +/-1 values.
SparseSignal gen_sparse_signal(std::size_t N, std::size_t k, std::uint64_t seed);

// x with all but the k largest magnitudes zeroed (ties by lower index).
VectorXd best_k_term(const VectorXd& x, std::size_t k);

inline constexpr double kDefaultSuccessThreshold = 1e-4;

struct TrialOutcome {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0, N = 0, k = 0;
  std::uint64_t seed = 0;
  double rel_error = 0.0;  // ||x* - x0|| / ||x0||; ||x*|| when x0 = 0
  bool success = false;
  std::size_t solve_iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
};

// Fresh matrix (seed-derived, per ensemble) and fresh signal (seed-derived,
// shared across ensembles) followed by basis pursuit, or bpdn when eps > 0.
// Solver failures are recorded as unsuccessful trials.
TrialOutcome run_trial(Ensemble ensemble, std::size_t n, std::size_t N, std::size_t k,
                       std::uint64_t seed, double threshold = kDefaultSuccessThreshold,
                       const SolverOptions& options = {}, double eps = 0.0);

struct SuccessPoint {
  std::size_t value = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  double mean_rel_error = 0.0;
  double mean_iterations = 0.0;
};

struct SuccessCurve {
  std::string parameter;  // "k" or "n"
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t N = 0;
  std::size_t fixed = 0;  // n for a k sweep, k for an n sweep
  std::vector<SuccessPoint> points;
};

struct SweepOptions {
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  double threshold = kDefaultSuccessThreshold;
  double eps = 0.0;
  std::size_t jobs = 1;
  SolverOptions solver;
  // Called after every finished trial with (done, total); may be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

// Seed of trial t at one sweep point. It does not depend on the ensemble,
// so all ensembles see the same signals.
std::uint64_t trial_seed(std::uint64_t master, const std::string& parameter,
                         std::size_t value, std::size_t trial);

std::vector<SuccessCurve> success_vs_sparsity(const std::vector<Ensemble>& ensembles,
                                              std::size_t N, std::size_t n,
                                              const std::vector<std::size_t>& k_grid,
                                              const SweepOptions& options);

std::vector<SuccessCurve> success_vs_measurements(const std::vector<Ensemble>& ensembles,
                                                  std::size_t N, std::size_t k,
                                                  const std::vector<std::size_t>& n_grid,
                                                  const SweepOptions& options);

// Rate at a single (n, k) point.
SuccessPoint success_rate(Ensemble ensemble, std::size_t N, std::size_t n, std::size_t k,
                          const SweepOptions& options);

// CSV: ensemble,param,trials,successes,rate,mean_rel_error,mean_iterations
std::string success_csv_header();
std::string success_csv_rows(const std::vector<SuccessCurve>& curves);

struct ImageResult {
  GrayImage reconstruction;
  double mse = 0.0;  // ||X - M||_F / ||M||_F
  std::size_t nonzeros = 0;
  std::size_t pixels = 0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
};

// Column-major vectorisation, y = Phi x0, bpdn(eps) (basis pursuit when
// eps = 0), reshape, relative Frobenius error.
ImageResult image_experiment(const GrayImage& image, std::size_t n, Ensemble ensemble,
                             std::uint64_t seed, double eps = 0.0,
                             const SolverOptions& options = {});

struct ErrorBoundReport {
  double l1_error = 0.0;
  double l2_error = 0.0;
  double tail_l1 = 0.0;  // ||x0 - (x0)_(k)||_1
  double l2_error_double_eps = 0.0;
  std::optional<double> growth_ratio;  // l2 error at 2 eps over l2 error at eps
  SolveStatus status = SolveStatus::max_iter;
};

// y = Phi x0 + z with ||z||_2 = eps along a seed-derived random direction;
// the solve at 2 eps reuses the direction with doubled length.
ErrorBoundReport error_bound_probe(const MeasurementMatrix& phi, const VectorXd& x0,
                                   std::size_t k, double eps, std::uint64_t seed,
                                   const SolverOptions& options = {});

}  // namespace mixcs
