// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. All tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "mixcs/ensembles.hpp"
#include "mixcs/experiments.hpp"
#include "mixcs/parallel.hpp"
#include "mixcs/rip.hpp"
#include "mixcs/solver.hpp"
#include "mixcs/spectral.hpp"

using namespace mixcs;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::size_t jobs() { return default_jobs(); }

SweepOptions sweep(std::size_t trials, std::uint64_t master) {
  SweepOptions o;
  o.trials = trials;
  o.master_seed = master;
  o.jobs = jobs();
  return o;
}

double binomial_se(double p, std::size_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

MatrixXd signs(Eigen::Index n, Eigen::Index N, Stream& s) {
  MatrixXd m(n, N);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) m(i, j) = s.coin() ? 1.0 : -1.0;
  }
  return m;
}

MatrixXd gaussians(Eigen::Index n, Eigen::Index N, Stream& s) {
  MatrixXd m(n, N);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) m(i, j) = s.gaussian();
  }
  return m;
}

// 1. Success at n = 95 and n = 120 with N = 256, k = 20.
Verdict measurement_threshold() {
  constexpr double kRateAt95 = 0.95, kRateAt120 = 0.99;
  const auto curves = success_vs_measurements(kAllEnsembles, 256, 20, {95, 120}, sweep(1000, 1));
  Verdict v;
  for (const auto& c : curves) {
    const auto& p95 = c.points[0];
    const auto& p120 = c.points[1];
    v.detail += fmt("%s: n=95 %.3f, n=120 %.3f; ", to_string(c.ensemble).c_str(), p95.rate, p120.rate);
    v.pass = v.pass && p95.rate >= kRateAt95 && p120.rate >= kRateAt120;
  }
  return v;
}

// 2. Ensemble parity and monotone success curves at n = 100.
Verdict ensemble_parity() {
  constexpr double kParity = 0.05;
  constexpr double kSigmas = 3.0;
  const std::vector<std::size_t> ks = {10, 20, 30, 40};
  const auto curves = success_vs_sparsity(kAllEnsembles, 256, 100, ks, sweep(1000, 2));
  Verdict v;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double lo = 1.0, hi = 0.0;
    std::string rates;
    for (const auto& c : curves) {
      lo = std::min(lo, c.points[i].rate);
      hi = std::max(hi, c.points[i].rate);
      rates += fmt("%.3f/", c.points[i].rate);
    }
    rates.pop_back();
    v.detail += fmt("k=%zu %s; ", ks[i], rates.c_str());
    v.pass = v.pass && hi - lo <= kParity;
  }
  for (const auto& c : curves) {
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      const auto& a = c.points[i];
      const auto& b = c.points[i + 1];
      const double se = std::hypot(binomial_se(a.rate, a.trials), binomial_se(b.rate, b.trials));
      if (b.rate - a.rate > kSigmas * se) {
        v.require(false, to_string(c.ensemble) + " rises at k=" + std::to_string(ks[i + 1]));
      }
    }
  }
  return v;
}

// 3. Synthetic 64x64 image with 739 nonzeros, n = 2400.
Verdict image_reconstruction() {
  constexpr double kMaxMse = 0.1, kSpread = 0.02;
  const GrayImage image = synthetic_test_image(64, 64, 739);
  Verdict v;
  v.require(image.nonzeros() == 739, "test image does not have 739 nonzeros");
  double lo = INFINITY, hi = -INFINITY;
  for (Ensemble e : kAllEnsembles) {
    const ImageResult r = image_experiment(image, 2400, e, 3);
    v.detail += fmt("%s MSE %.3g; ", to_string(e).c_str(), r.mse);
    v.pass = v.pass && r.mse <= kMaxMse;
    lo = std::min(lo, r.mse);
    hi = std::max(hi, r.mse);
  }
  v.require(hi - lo <= kSpread, "MSE spread too large");
  return v;
}

// 4. Bai-Yin and semicircle edges over 20 seeds.
Verdict spectral_laws() {
  constexpr double kEdgeTol = 0.05, kSemicircleTol = 0.1;
  constexpr std::size_t kSeeds = 20, kRequired = 18;
  std::size_t bai_yin_ok = 0, semicircle_ok = 0;
  const MixedGraphModel model{1000, DistributionSpec::gaussian_unit(), DistributionSpec::bernoulli_sym()};
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const auto b = bai_yin_check(DistributionSpec::gaussian_unit(), 1000, 0.25, seed);
    if (std::abs(b.observed_min - 0.5) <= kEdgeTol && std::abs(b.observed_max - 1.5) <= kEdgeTol) {
      ++bai_yin_ok;
    }
    const auto s = semicircle_edge_check(model, 1000, seed);
    if (std::abs(s.observed_max - 2.0) <= kSemicircleTol) ++semicircle_ok;
  }
  Verdict v;
  v.detail = fmt("Bai-Yin %zu/%zu, semicircle %zu/%zu", bai_yin_ok, kSeeds, semicircle_ok, kSeeds);
  v.pass = bai_yin_ok >= kRequired && semicircle_ok >= kRequired;
  return v;
}

// 5. sigma^2 intervals.
Verdict sigma_intervals() {
  Verdict v;
  for (double delta : {0.1, 0.3, 0.5}) {
    for (auto which : {SupportCase::diag_inside, SupportCase::off_diag, SupportCase::mixed_boundary}) {
      const auto iv = sigma_interval(0.0, delta, which);
      v.require(iv.lo == 1.0 - delta && iv.hi == 1.0 + delta,
                fmt("gamma=0 delta=%.1f %s gives [%.17g, %.17g]", delta, to_string(which).c_str(),
                    iv.lo, iv.hi));
    }
  }
  std::size_t grid = 0;
  for (double gamma = 0.0; gamma <= 1e-3 + 1e-15; gamma += 1e-5) {
    ++grid;
    v.require(sigma_feasible_all_cases(gamma, 0.3).feasible, fmt("infeasible at gamma=%g", gamma));
  }
  v.require(!sigma_feasible_all_cases(0.3, 0.1).feasible, "feasible at (0.3, 0.1)");
  if (v.pass) v.detail = fmt("exact at gamma=0; feasible on %zu gamma values in [0, 1e-3]; infeasible at (0.3, 0.1)", grid);
  return v;
}

// 6. Monte Carlo vs exhaustive RIP and the 2x2 closed form.
Verdict rip_oracles() {
  constexpr double kMcTol = 1e-12, kClosedFormTol = 1e-10;
  Verdict v;
  double worst_mc = 0.0, worst_cf = 0.0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Stream s(derive_seed(6, "rip-instance", inst));
    const MatrixXd m = signs(8, 12, s) / std::sqrt(8.0);
    const MeasurementMatrix phi(RowMatrix(m), 1.0 / std::sqrt(8.0));
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto exact = delta_exhaustive(phi, k);
      const auto mc = delta_monte_carlo(phi, k, 20000, inst);
      v.require(mc.supports_examined == exact.supports_examined,
                fmt("instance %llu k=%zu incomplete coverage", static_cast<unsigned long long>(inst), k));
      worst_mc = std::max(worst_mc, std::abs(mc.delta - exact.delta));
    }
    double closed = 0.0;
    for (Eigen::Index i = 0; i < 12; ++i) {
      for (Eigen::Index j = i + 1; j < 12; ++j) {
        const double a = m.col(i).squaredNorm(), c = m.col(j).squaredNorm(), b = m.col(i).dot(m.col(j));
        const double rad = std::hypot(0.5 * (a - c), b);
        closed = std::max({closed, 0.5 * (a + c) + rad - 1.0, 1.0 - (0.5 * (a + c) - rad)});
      }
    }
    worst_cf = std::max(worst_cf, std::abs(delta_exhaustive(phi, 2).delta - closed));
  }
  v.require(worst_mc <= kMcTol, "Monte Carlo differs from exhaustive");
  v.require(worst_cf <= kClosedFormTol, "k=2 differs from the closed form");
  v.detail = fmt("max |MC - exhaustive| %.3g, max |k=2 - closed form| %.3g. ", worst_mc, worst_cf) + v.detail;
  return v;
}

// 7. Basis pursuit vs the LP oracle, and oracle certificates.
Verdict solver_optimality() {
  constexpr double kObjectiveRel = 1e-5, kGap = 1e-8;
  Verdict v;
  double worst_rel = 0.0, worst_gap = 0.0;
  std::size_t certified = 0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    Stream s(derive_seed(7, "lp-instance", inst));
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(s.below(15));              // 6..20
    const Eigen::Index N = n + 4 + static_cast<Eigen::Index>(s.below(static_cast<std::uint64_t>(45 - n)));  // up to 48
    const MatrixXd m = (inst % 2 ? signs(n, N, s) : gaussians(n, N, s)) / std::sqrt(static_cast<double>(n));
    const MeasurementMatrix phi(RowMatrix(m), 1.0 / std::sqrt(static_cast<double>(n)));
    VectorXd y;
    if (inst % 5 == 4) {
      y = gaussians(n, 1, s);  // dense optimum
    } else {
      const std::size_t k = 1 + s.below(static_cast<std::uint64_t>(n / 2));
      VectorXd x = VectorXd::Zero(N);
      for (std::size_t i : sample_subset(s, static_cast<std::size_t>(N), k)) x(static_cast<Eigen::Index>(i)) = s.gaussian();
      y = m * x;
    }
    const auto lp = lp_oracle(phi, y);
    const auto bp = basis_pursuit(phi, y);
    if (lp.status != SolveStatus::converged) {
      v.require(false, fmt("LP failed on instance %llu", static_cast<unsigned long long>(inst)));
      continue;
    }
    const double rel = std::abs(bp.objective - lp.objective) / std::max(1.0, lp.objective);
    worst_rel = std::max(worst_rel, rel);
    const auto cert = dual_certificate_check(phi, lp.x_star, kGap);
    worst_gap = std::max(worst_gap, cert.certificate_gap);
    if (cert.valid && cert.certificate_gap <= kGap) ++certified;
  }
  v.require(worst_rel <= kObjectiveRel, "objective mismatch");
  v.require(certified == 50, "uncertified oracle solution");
  v.detail = fmt("max relative objective gap %.3g, certified %zu/50, max certificate gap %.3g. ", worst_rel,
                 certified, worst_gap) + v.detail;
  return v;
}

// 8. Exact recovery on instances with a certified delta_2k.
Verdict exact_recovery() {
  constexpr double kRelError = 1e-6;
  constexpr std::size_t kSignals = 50;
  constexpr std::size_t k = 1;
  Verdict v;
  std::size_t instances = 0;
  for (Ensemble e : kAllEnsembles) {
    double smallest_delta = std::numeric_limits<double>::infinity();
    bool certified = false;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto phi = make_measurement_matrix(e, 200, 256, derive_seed(8, to_string(e), seed));
      const auto rip = delta_exhaustive(phi, 2 * k);
      smallest_delta = std::min(smallest_delta, rip.delta);
      if (!recovery_condition(rip.delta)) continue;
      certified = true;
      ++instances;
      const L1Solver solver(phi);
      std::size_t ok = 0;
      for (std::size_t t = 0; t < kSignals; ++t) {
        const SparseSignal x0 = gen_sparse_signal(256, k, derive_seed(seed, "exact", t));
        const VectorXd x = x0.dense();
        const auto r = solver.basis_pursuit(phi.entries() * x);
        if ((r.x_star - x).norm() <= kRelError * x.norm()) ++ok;
      }
      v.detail += fmt("%s seed %llu delta_2=%.3f %zu/%zu; ", to_string(e).c_str(),
                      static_cast<unsigned long long>(seed), rip.delta, ok, kSignals);
      v.pass = v.pass && ok == kSignals;
      break;
    }
    if (!certified) {
      v.detail += fmt("%s no certified instance in 5 seeds (smallest delta_2=%.3f); ",
                      to_string(e).c_str(), smallest_delta);
    }
  }
  v.require(instances > 0, "no instance with certified delta_2k");
  return v;
}

// 9. Smallest n reaching rate 0.95 grows like k log(N/k).
Verdict scaling_law() {
  constexpr double kTargetRate = 0.95, kRatioSpread = 2.0;
  constexpr std::size_t N = 256, kTrials = 500;
  const std::vector<std::size_t> ks = {5, 10, 20};
  Verdict v;
  for (Ensemble e : kAllEnsembles) {
    std::vector<std::size_t> smallest;
    std::vector<double> ratios;
    for (std::size_t k : ks) {
      const auto opts = sweep(kTrials, 9);
      std::size_t lo = k, hi = N;  // rate(lo) < target <= rate(hi)
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (success_rate(e, N, mid, k, opts).rate >= kTargetRate ? hi : lo) = mid;
      }
      smallest.push_back(hi);
      ratios.push_back(static_cast<double>(hi) / (4.0 * static_cast<double>(k) *
                                                  std::log(static_cast<double>(N) / static_cast<double>(k))));
    }
    const auto [rmin, rmax] = std::minmax_element(ratios.begin(), ratios.end());
    v.detail += fmt("%s n*=%zu/%zu/%zu ratio %.3f..%.3f; ", to_string(e).c_str(), smallest[0], smallest[1],
                    smallest[2], *rmin, *rmax);
    v.pass = v.pass && std::is_sorted(smallest.begin(), smallest.end()) && *rmax / *rmin <= kRatioSpread;
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 measurement threshold (n=95, n=120)", measurement_threshold},
      {"2 ensemble parity across sparsity", ensemble_parity},
      {"3 image reconstruction", image_reconstruction},
      {"4 spectral edge laws", spectral_laws},
      {"5 sigma^2 intervals", sigma_intervals},
      {"6 RIP oracle equivalence", rip_oracles},
      {"7 solver optimality vs LP", solver_optimality},
      {"8 exact recovery under certified RIP", exact_recovery},
      {"9 measurement scaling with k log(N/k)", scaling_law},
  };
  std::string only = argc > 1 ? argv[1] : "";
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && name.substr(0, name.find(' ')) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s [%.1fs]: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
