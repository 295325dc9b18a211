#include <cmath>

#include "doctest.h"
#include "mixcs/ensembles.hpp"
#include "mixcs/error.hpp"
#include "mixcs/rip.hpp"
#include "oracles.hpp"

using namespace mixcs;

namespace {

MeasurementMatrix scaled_signs(Eigen::Index n, Eigen::Index N, std::uint64_t seed) {
  return oracle::as_measurement(oracle::sign_matrix(n, N, seed) / std::sqrt(static_cast<double>(n)),
                                1.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace

TEST_CASE("identity has delta zero") {
  const auto id = oracle::as_measurement(MatrixXd::Identity(6, 6));
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK(delta_exhaustive(id, k).delta <= 1e-15);
    CHECK(delta_monte_carlo(id, k, 50, 3).delta <= 1e-15);
  }
}

TEST_CASE("duplicated columns give delta one") {
  MatrixXd m = MatrixXd::Identity(3, 4);
  m.col(3) = m.col(1);
  const auto est = delta_exhaustive(oracle::as_measurement(m), 2);
  CHECK(std::abs(est.gram_min) <= 1e-15);
  CHECK(est.delta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(est.witness == std::vector<std::size_t>{1, 3});
  CHECK(est.gram_min >= 0.0);
}

TEST_CASE("k = 2 agrees with the closed-form 2x2 oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto phi = scaled_signs(8, 12, seed);
    const auto est = delta_exhaustive(phi, 2);
    CHECK(est.supports_examined == 66);
    CHECK(std::abs(est.delta - oracle::delta2_closed_form(phi.entries())) <= 1e-10);
    CHECK(est.witness.size() == 2);
  }
}

TEST_CASE("witness attains delta and is the first maximiser") {
  const auto phi = scaled_signs(6, 9, 17);
  const MatrixXd gram = phi.entries().transpose() * phi.entries();
  const auto est = delta_exhaustive(phi, 3);
  double lo = 0.0, hi = 0.0;
  CHECK(support_deviation(gram, est.witness, lo, hi) == est.delta);
  // No lexicographically earlier support reaches the same deviation.
  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = a + 1; b < 9; ++b) {
      for (std::size_t c = b + 1; c < 9; ++c) supports.push_back({a, b, c});
    }
  }
  bool earlier = false;
  for (const auto& s : supports) {
    if (s == est.witness) break;
    if (support_deviation(gram, s, lo, hi) >= est.delta) earlier = true;
  }
  CHECK_FALSE(earlier);
}

TEST_CASE("delta is monotone in k") {
  const auto phi = scaled_signs(6, 10, 23);
  double previous = 0.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const double d = delta_exhaustive(phi, k).delta;
    CHECK(d >= previous - 1e-15);
    previous = d;
  }
}

TEST_CASE("scaling the matrix maps the Gram extremes") {
  const auto phi = scaled_signs(6, 10, 29);
  const auto doubled = phi.scaled(2.0);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto base = delta_exhaustive(phi, k);
    const auto est = delta_exhaustive(doubled, k);
    CHECK(est.gram_min == doctest::Approx(4.0 * base.gram_min).epsilon(1e-12));
    CHECK(est.gram_max == doctest::Approx(4.0 * base.gram_max).epsilon(1e-12));
    CHECK(est.delta ==
          doctest::Approx(std::max(4.0 * base.gram_max - 1.0, 1.0 - 4.0 * base.gram_min)).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo is a lower bound and exact with full coverage") {
  const auto phi = scaled_signs(7, 10, 31);
  for (std::size_t k : {2u, 3u}) {
    const auto exact = delta_exhaustive(phi, k);
    const auto partial = delta_monte_carlo(phi, k, 5, 8);
    CHECK(partial.delta <= exact.delta);
    const auto full = delta_monte_carlo(phi, k, 10000, 8);
    CHECK(full.supports_examined == exact.supports_examined);
    CHECK(std::abs(full.delta - exact.delta) <= 1e-12);
    CHECK(full.method == RipMethod::monte_carlo);
    CHECK(full.trials == 10000);
  }
}

TEST_CASE("a single Monte Carlo trial reports its own support") {
  const auto phi = scaled_signs(5, 12, 37);
  const auto est = delta_monte_carlo(phi, 3, 1, 44);
  CHECK(est.supports_examined == 1);
  REQUIRE(est.witness.size() == 3);
  MatrixXd sub(5, 3);
  for (int j = 0; j < 3; ++j) sub.col(j) = phi.entries().col(static_cast<Eigen::Index>(est.witness[static_cast<std::size_t>(j)]));
  const VectorXd ev = oracle::eigen_eigenvalues(sub.transpose() * sub);
  CHECK(est.delta == doctest::Approx(std::max(ev(2) - 1.0, 1.0 - ev(0))).epsilon(1e-12));
  CHECK(delta_monte_carlo(phi, 3, 1, 44).witness == est.witness);
}

TEST_CASE("argument errors") {
  const auto phi = scaled_signs(5, 12, 1);
  CHECK_THROWS_AS(delta_exhaustive(phi, 0), ValidationError);
  CHECK_THROWS_AS(delta_exhaustive(phi, 13), ValidationError);
  CHECK_THROWS_AS(delta_monte_carlo(phi, 2, 0, 1), ValidationError);
  const auto wide = oracle::as_measurement(oracle::sign_matrix(4, 256, 2));
  try {
    delta_exhaustive(wide, 4);
    FAIL("expected the exhaustive guard to trip");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("monte") != std::string::npos);
  }
}

TEST_CASE("csv serialisation") {
  RipEstimate e;
  e.k = 2;
  e.delta = 0.5;
  e.gram_min = 0.5;
  e.gram_max = 1.25;
  e.witness = {1, 4};
  CHECK(RipEstimate::csv_header() == "k,delta,method,trials,gram_min,gram_max,witness");
  CHECK(e.csv_line() == "2,0.5,exhaustive,0,0.5,1.25,1;4");
}

TEST_CASE("sigma intervals at gamma = 0") {
  for (double delta : {0.1, 0.3, 0.5, 0.9}) {
    for (auto which : {SupportCase::diag_inside, SupportCase::off_diag, SupportCase::mixed_boundary}) {
      const auto iv = sigma_interval(0.0, delta, which);
      CHECK(iv.lo == 1.0 - delta);
      CHECK(iv.hi == 1.0 + delta);
      CHECK(iv.feasible);
    }
  }
  const auto all = sigma_feasible_all_cases(0.0, 0.5);
  REQUIRE(all.intersection);
  CHECK(all.intersection->first == 0.5);
  CHECK(all.intersection->second == 1.5);
  CHECK(all.feasible);
}

TEST_CASE("sigma interval closed forms") {
  const auto off = sigma_interval(0.01, 0.3, SupportCase::off_diag);
  CHECK(std::abs(off.lo - 0.7 / 0.81) <= 1e-12);
  CHECK(std::abs(off.hi - 1.3 / 1.21) <= 1e-12);
  CHECK(std::abs(off.lo - 0.86420) <= 1e-5);
  CHECK(std::abs(off.hi - 1.07438) <= 1e-5);

  const double g = 0.04, d = 0.2;
  const auto inside = sigma_interval(g, d, SupportCase::diag_inside);
  CHECK(inside.lo == doctest::Approx(0.8 / (1 - 2 * std::sqrt(g * (1 - g)))));
  CHECK(inside.hi == doctest::Approx(1.2 / (1 + 4 * g + 2 * std::sqrt(g * (1 - g)))));
  const auto mixed = sigma_interval(g, d, SupportCase::mixed_boundary);
  CHECK(mixed.lo == doctest::Approx(0.8 / std::pow(1 - std::sqrt(g / (1 - g)), 2)));
  CHECK(mixed.hi == doctest::Approx(1.2 / (1 + 7 * g + 2 * std::sqrt(g))));
  CHECK(mixed.feasible == (mixed.lo <= mixed.hi));
}

TEST_CASE("degenerate and invalid sigma intervals") {
  CHECK_THROWS_AS(sigma_interval(0.5, 0.3, SupportCase::diag_inside), SingularityError);
  CHECK_THROWS_AS(sigma_interval(0.5, 0.3, SupportCase::mixed_boundary), SingularityError);
  CHECK_THROWS_AS(sigma_interval(-0.1, 0.3, SupportCase::off_diag), ValidationError);
  CHECK_THROWS_AS(sigma_interval(1.0, 0.3, SupportCase::off_diag), ValidationError);
  CHECK_THROWS_AS(sigma_interval(0.1, 0.0, SupportCase::off_diag), ValidationError);
  CHECK_THROWS_AS(sigma_interval(0.1, 1.0, SupportCase::off_diag), ValidationError);
  const auto all = sigma_feasible_all_cases(0.5, 0.3);
  CHECK_FALSE(all.feasible);
  CHECK_FALSE(all.cases[0].interval);
  CHECK_FALSE(all.cases[0].error.empty());
  CHECK(all.cases[1].interval);
}

TEST_CASE("sigma feasibility across cases") {
  const auto tight = sigma_feasible_all_cases(0.3, 0.1);
  CHECK_FALSE(tight.feasible);
  for (double gamma : {0.0, 1e-5, 1e-4, 5e-4, 1e-3}) {
    for (double delta : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
      const auto r = sigma_feasible_all_cases(gamma, delta);
      CAPTURE(gamma);
      CAPTURE(delta);
      REQUIRE(r.feasible);
      CHECK(r.intersection->first <= 1.0);
      CHECK(r.intersection->second >= 1.0);
    }
  }
}

TEST_CASE("recovery condition threshold") {
  CHECK(recovery_condition(0.0));
  CHECK_FALSE(recovery_condition(0.5));
  CHECK(recovery_condition(0.41421));
  CHECK_FALSE(recovery_condition(0.41422));
  CHECK_THROWS_AS(recovery_condition(-0.1), ValidationError);
}

TEST_CASE("Gram asymptotes of the mixed ensemble") {
  const MixedGraphModel model{1500, DistributionSpec::gaussian_unit(), DistributionSpec::bernoulli_sym()};
  const auto off = gram_asymptote_check(model, 1000, 0.25, SupportCase::off_diag, 3);
  CHECK(off.k == 250);
  CHECK(off.limit_min == doctest::Approx(0.25));
  CHECK(off.limit_max == doctest::Approx(2.25));
  CHECK(off.observed_min >= 0.20);
  CHECK(off.observed_min <= 0.30);
  CHECK(off.observed_max >= 2.10);
  CHECK(off.observed_max <= 2.40);

  const auto inside = gram_asymptote_check(model, 1000, 0.04, SupportCase::diag_inside, 4);
  CHECK(inside.limit_min == doctest::Approx(1 - 2 * std::sqrt(0.04 * 0.96)));
  CHECK(inside.observed_min >= 0.5);
  CHECK(std::abs(inside.observed_min - inside.limit_min) <= 0.1);

  for (auto which : {SupportCase::diag_inside, SupportCase::off_diag}) {
    const auto single = gram_asymptote_check(model, 1000, 0.001, which, 5);
    CHECK(single.k == 1);
    CHECK(single.observed_min >= 0.8);
    CHECK(single.observed_max <= 1.2);
  }

  const MixedGraphModel small{1100, DistributionSpec::gaussian_unit(), DistributionSpec::bernoulli_sym()};
  CHECK_THROWS_AS(gram_asymptote_check(small, 1000, 0.25, SupportCase::off_diag, 1), ValidationError);
  CHECK_THROWS_AS(gram_asymptote_check(model, 1000, 0.1, SupportCase::mixed_boundary, 1), ValidationError);
}
