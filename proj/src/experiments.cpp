#include "mixcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixcs/csv.hpp"
#include "mixcs/error.hpp"
#include "mixcs/parallel.hpp"
#include "mixcs/random.hpp"

namespace mixcs {

std::string to_string(Ensemble ensemble) {
  switch (ensemble) {
    case Ensemble::gaussian: return "gaussian";
    case Ensemble::bernoulli: return "bernoulli";
    case Ensemble::s_mixed: return "s-mixed";
  }
  return "unknown";
}

Ensemble ensemble_from_name(const std::string& name) {
  if (name == "gaussian") return Ensemble::gaussian;
  if (name == "bernoulli") return Ensemble::bernoulli;
  if (name == "s-mixed") return Ensemble::s_mixed;
  throw ValidationError("unknown ensemble '" + name +
                        "' (expected gaussian, bernoulli or s-mixed)");
}

MixedGraphModel default_mixed_model(std::size_t N) {
  return {N, DistributionSpec::gaussian_unit(), DistributionSpec::bernoulli_sym()};
}

MeasurementMatrix make_measurement_matrix(Ensemble ensemble, std::size_t n, std::size_t N,
                                          std::uint64_t seed) {
  if (n == 0 || n > N) throw ValidationError("measurement matrix needs 1 <= n <= N");
  switch (ensemble) {
    case Ensemble::gaussian:
    case Ensemble::bernoulli: {
      const DistributionSpec law = ensemble == Ensemble::gaussian
                                       ? DistributionSpec::gaussian_unit()
                                       : DistributionSpec::bernoulli_sym();
      return sample_iid_matrix(law, n, N, seed).scaled(1.0 / std::sqrt(static_cast<double>(n)));
    }
    case Ensemble::s_mixed:
      return mixed_measurement_matrix(default_mixed_model(N), n, seed);
  }
  throw ValidationError("unknown ensemble");
}

VectorXd SparseSignal::dense() const {
  VectorXd x = VectorXd::Zero(static_cast<Eigen::Index>(length));
  for (std::size_t i = 0; i < support.size(); ++i) x(support[i]) = values[i];
  return x;
}

SparseSignal gen_sparse_signal(std::size_t N, std::size_t k, std::uint64_t seed) {
  if (k > N) throw ValidationError("gen_sparse_signal: k exceeds N");
  Stream stream = substream(seed, "sparse-signal");
  SparseSignal signal;
  signal.length = N;
  signal.support = sample_subset(stream, N, k);
  signal.values.reserve(k);
  for (std::size_t i = 0; i < k; ++i) signal.values.push_back(stream.coin() ? 1.0 : -1.0);
  return signal;
}

VectorXd best_k_term(const VectorXd& x, std::size_t k) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(x(a)) > std::abs(x(b));
  });
  VectorXd out = VectorXd::Zero(x.size());
  for (std::size_t i = 0; i < std::min<std::size_t>(k, order.size()); ++i) {
    out(order[i]) = x(order[i]);
  }
  return out;
}

TrialOutcome run_trial(Ensemble ensemble, std::size_t n, std::size_t N, std::size_t k,
                       std::uint64_t seed, double threshold, const SolverOptions& options,
                       double eps) {
  if (n > N) throw ValidationError("run_trial: n exceeds N");
  TrialOutcome outcome;
  outcome.ensemble = ensemble;
  outcome.n = n;
  outcome.N = N;
  outcome.k = k;
  outcome.seed = seed;

  const MeasurementMatrix phi =
      make_measurement_matrix(ensemble, n, N, derive_seed(seed, "matrix:" + to_string(ensemble)));
  const VectorXd x0 = gen_sparse_signal(N, k, derive_seed(seed, "signal")).dense();
  const VectorXd y = phi.entries() * x0;
  try {
    const L1Solver solver(phi);
    const RecoveryResult result = solver.bpdn(y, eps, options);
    const double reference = x0.norm();
    const double error = (result.x_star - x0).norm();
    outcome.rel_error = reference > 0.0 ? error / reference : error;
    outcome.solve_iterations = result.iterations;
    outcome.status = result.status;
    outcome.success = outcome.rel_error <= threshold;
  } catch (const SolverError&) {
    outcome.rel_error = std::numeric_limits<double>::infinity();
    outcome.status = SolveStatus::infeasible;
    outcome.success = false;
  }
  return outcome;
}

std::uint64_t trial_seed(std::uint64_t master, const std::string& parameter, std::size_t value,
                         std::size_t trial) {
  return derive_seed(derive_seed(master, "sweep:" + parameter, value), "trial", trial);
}

namespace {

struct SweepPoint {
  Ensemble ensemble;
  std::size_t n, k, value;
};

std::vector<SuccessPoint> run_points(const std::vector<SweepPoint>& points, std::size_t N,
                                     const std::string& parameter, const SweepOptions& options) {
  if (options.trials == 0) throw ValidationError("sweep needs at least one trial");
  const std::size_t total = points.size() * options.trials;
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> done{0};
  parallel_for(total, options.jobs, [&](std::size_t task) {
    const SweepPoint& p = points[task / options.trials];
    const std::size_t t = task % options.trials;
    outcomes[task] = run_trial(p.ensemble, p.n, N, p.k,
                               trial_seed(options.master_seed, parameter, p.value, t),
                               options.threshold, options.solver, options.eps);
    const std::size_t finished = ++done;
    if (options.progress) options.progress(finished, total);
  });

  std::vector<SuccessPoint> summary(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    SuccessPoint& s = summary[i];
    s.value = points[i].value;
    s.trials = options.trials;
    double error_sum = 0.0, iteration_sum = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const TrialOutcome& o = outcomes[i * options.trials + t];
      if (o.success) ++s.successes;
      error_sum += o.rel_error;
      iteration_sum += static_cast<double>(o.solve_iterations);
    }
    s.rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.mean_rel_error = error_sum / static_cast<double>(s.trials);
    s.mean_iterations = iteration_sum / static_cast<double>(s.trials);
  }
  return summary;
}

void check_ascending(const std::vector<std::size_t>& grid, const char* name) {
  if (grid.empty()) throw ValidationError(std::string(name) + " must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw ValidationError(std::string(name) + " must be strictly ascending");
    }
  }
}

}  // namespace

std::vector<SuccessCurve> success_vs_sparsity(const std::vector<Ensemble>& ensembles,
                                              std::size_t N, std::size_t n,
                                              const std::vector<std::size_t>& k_grid,
                                              const SweepOptions& options) {
  check_ascending(k_grid, "k_grid");
  if (n == 0 || n > N) throw ValidationError("success_vs_sparsity: need 1 <= n <= N");
  if (k_grid.back() > N) throw ValidationError("success_vs_sparsity: k exceeds N");
  std::vector<SweepPoint> points;
  for (Ensemble e : ensembles)
    for (std::size_t k : k_grid) points.push_back({e, n, k, k});
  const auto summary = run_points(points, N, "k", options);

  std::vector<SuccessCurve> curves;
  for (std::size_t e = 0; e < ensembles.size(); ++e) {
    SuccessCurve curve{"k", ensembles[e], N, n, {}};
    for (std::size_t i = 0; i < k_grid.size(); ++i)
      curve.points.push_back(summary[e * k_grid.size() + i]);
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<SuccessCurve> success_vs_measurements(const std::vector<Ensemble>& ensembles,
                                                  std::size_t N, std::size_t k,
                                                  const std::vector<std::size_t>& n_grid,
                                                  const SweepOptions& options) {
  check_ascending(n_grid, "n_grid");
  if (n_grid.front() == 0 || n_grid.back() > N) {
    throw ValidationError("success_vs_measurements: need 1 <= n <= N");
  }
  if (k > N) throw ValidationError("success_vs_measurements: k exceeds N");
  std::vector<SweepPoint> points;
  for (Ensemble e : ensembles)
    for (std::size_t n : n_grid) points.push_back({e, n, k, n});
  const auto summary = run_points(points, N, "n", options);

  std::vector<SuccessCurve> curves;
  for (std::size_t e = 0; e < ensembles.size(); ++e) {
    SuccessCurve curve{"n", ensembles[e], N, k, {}};
    for (std::size_t i = 0; i < n_grid.size(); ++i)
      curve.points.push_back(summary[e * n_grid.size() + i]);
    curves.push_back(std::move(curve));
  }
  return curves;
}

SuccessPoint success_rate(Ensemble ensemble, std::size_t N, std::size_t n, std::size_t k,
                          const SweepOptions& options) {
  // Seeds follow the measurement sweep so a point here equals the same point
  // of success_vs_measurements.
  return run_points({{ensemble, n, k, n}}, N, "n", options).front();
}

std::string success_csv_header() {
  return "ensemble,param,trials,successes,rate,mean_rel_error,mean_iterations";
}

std::string success_csv_rows(const std::vector<SuccessCurve>& curves) {
  std::ostringstream out;
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << to_string(curve.ensemble) << ',' << p.value << ',' << p.trials << ','
          << p.successes << ',' << format_double(p.rate) << ','
          << format_double(p.mean_rel_error) << ',' << format_double(p.mean_iterations)
          << '\n';
    }
  }
  return out.str();
}

ImageResult image_experiment(const GrayImage& image, std::size_t n, Ensemble ensemble,
                             std::uint64_t seed, double eps, const SolverOptions& options) {
  const std::size_t N = image.height * image.width;
  if (N == 0 || image.pixels.size() != N) {
    throw ValidationError("image_experiment: pixel count does not match dimensions");
  }
  if (n == 0 || n > N) throw ValidationError("image_experiment: need 1 <= n <= h * w");

  const VectorXd x0 = vectorize(image);
  const MeasurementMatrix phi =
      make_measurement_matrix(ensemble, n, N, derive_seed(seed, "image:" + to_string(ensemble)));
  const VectorXd y = phi.entries() * x0;
  const L1Solver solver(phi);
  const RecoveryResult result = solver.bpdn(y, eps, options);

  ImageResult out;
  out.reconstruction = unvectorize(result.x_star, image.height, image.width);
  out.mse = relative_frobenius_error(out.reconstruction, image);
  out.nonzeros = image.nonzeros();
  out.pixels = N;
  out.iterations = result.iterations;
  out.status = result.status;
  return out;
}

ErrorBoundReport error_bound_probe(const MeasurementMatrix& phi, const VectorXd& x0,
                                   std::size_t k, double eps, std::uint64_t seed,
                                   const SolverOptions& options) {
  if (k == 0) throw ValidationError("error_bound_probe: k must be positive");
  if (static_cast<std::size_t>(x0.size()) != phi.cols()) {
    throw ValidationError("error_bound_probe: signal length mismatch");
  }
  if (!(eps >= 0.0)) throw ValidationError("error_bound_probe: eps must be nonnegative");
  Stream stream = substream(seed, "noise-direction");
  VectorXd direction(static_cast<Eigen::Index>(phi.rows()));
  for (Eigen::Index i = 0; i < direction.size(); ++i) direction(i) = stream.gaussian();
  direction.normalize();

  const L1Solver solver(phi);
  const VectorXd clean = phi.entries() * x0;
  const RecoveryResult at_eps = solver.bpdn(clean + eps * direction, eps, options);
  const RecoveryResult at_double = solver.bpdn(clean + 2.0 * eps * direction, 2.0 * eps, options);

  ErrorBoundReport report;
  report.l1_error = (at_eps.x_star - x0).lpNorm<1>();
  report.l2_error = (at_eps.x_star - x0).norm();
  report.tail_l1 = (x0 - best_k_term(x0, k)).lpNorm<1>();
  report.l2_error_double_eps = (at_double.x_star - x0).norm();
  if (report.l2_error > 0.0) report.growth_ratio = report.l2_error_double_eps / report.l2_error;
  report.status = at_eps.status;
  return report;
}

}  // namespace mixcs
