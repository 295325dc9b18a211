#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mixcs/csv.hpp"
#include "mixcs/ensembles.hpp"
#include "mixcs/error.hpp"
#include "mixcs/matrix_io.hpp"

using namespace mixcs;

TEST_CASE("streams are deterministic and sub-streams differ") {
  Stream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "x", 1));
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "y", 0));
  CHECK(derive_seed(1, "x", 0) != derive_seed(2, "x", 0));
  Stream u(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(5) < 5);
  }
}

TEST_CASE("sample_subset returns sorted distinct indices") {
  Stream s(3);
  for (std::size_t k : {0u, 1u, 5u, 10u}) {
    const auto subset = sample_subset(s, 10, k);
    CHECK(subset.size() == k);
    CHECK(std::is_sorted(subset.begin(), subset.end()));
    CHECK(std::set<std::size_t>(subset.begin(), subset.end()).size() == k);
    for (std::size_t i : subset) CHECK(i < 10);
  }
}

TEST_CASE("three-point draws lie in its support with unit variance") {
  const auto spec = DistributionSpec::three_point();
  Stream s(11);
  const double r3 = std::sqrt(3.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = sample_scalar(spec, s);
    CHECK((v == r3 || v == 0.0 || v == -r3));
  }
  const auto report = moment_check(spec, 1000000, 5);
  CHECK(report.mean >= -0.01);
  CHECK(report.mean <= 0.01);
  CHECK(report.variance >= 0.99);
  CHECK(report.variance <= 1.01);
  CHECK(report.fourth_moment >= 2.9);
  CHECK(report.fourth_moment <= 3.1);
}

TEST_CASE("point mass laws") {
  const auto five = DistributionSpec::discrete({{5.0, 1.0}});
  Stream s(1);
  for (int i = 0; i < 100; ++i) CHECK(five.sample(s) == 5.0);
  const auto zero = moment_check(DistributionSpec::discrete({{0.0, 1.0}}), 10000, 2);
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == 0.0);
  CHECK(zero.fourth_moment == 0.0);
  CHECK(zero.positive_part_second_moment == 0.0);
}

TEST_CASE("malformed discrete laws are rejected") {
  CHECK_THROWS_AS(DistributionSpec::discrete({{1.0, 0.5}, {-1.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::discrete({{1.0, 1.2}, {-1.0, -0.2}}), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::discrete({}), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::from_name("cauchy"), ValidationError);
  CHECK_NOTHROW(DistributionSpec::discrete({{1.0, 0.5}, {-1.0, 0.5 + 1e-13}}));
  CHECK_THROWS_AS(moment_check(DistributionSpec::bernoulli_sym(), 100, 1), ValidationError);
}

TEST_CASE("declared moments of the named laws") {
  struct Case {
    DistributionSpec spec;
    double fourth;
  };
  for (const Case& c : {Case{DistributionSpec::bernoulli_sym(), 1.0},
                        Case{DistributionSpec::three_point(), 3.0},
                        Case{DistributionSpec::gaussian_unit(), 3.0}}) {
    CHECK(c.spec.declared_mean() == 0.0);
    CHECK(c.spec.declared_variance() == 1.0);
    REQUIRE(c.spec.declared_fourth_moment());
    CHECK(*c.spec.declared_fourth_moment() == doctest::Approx(c.fourth).epsilon(1e-15));
  }
}

TEST_CASE("empirical moments match the declared ones") {
  std::uint64_t seed = 100;
  for (const auto& spec : {DistributionSpec::bernoulli_sym(), DistributionSpec::three_point(),
                           DistributionSpec::gaussian_unit()}) {
    CAPTURE(spec.name());
    const auto r = moment_check(spec, 1000000, seed++);
    CHECK(std::abs(r.mean - spec.declared_mean()) <= 5e-3);
    CHECK(std::abs(r.variance - spec.declared_variance()) <= 5e-3);
    CHECK(std::abs(r.fourth_moment - *spec.declared_fourth_moment()) <=
          0.02 * *spec.declared_fourth_moment());
  }
  const auto b = moment_check(DistributionSpec::bernoulli_sym(), 1000000, 9);
  CHECK(b.fourth_moment >= 0.995);
  CHECK(b.fourth_moment <= 1.005);
  // Half of the mass of a symmetric unit-variance law sits on the positive side.
  CHECK(b.positive_part_second_moment == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("iid matrices") {
  const auto m = sample_iid_matrix(DistributionSpec::bernoulli_sym(), 2, 3, 17);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.scaling() == 1.0);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(std::abs(m.entries()(i, j)) == 1.0);
  }
  CHECK(m.entries() == sample_iid_matrix(DistributionSpec::bernoulli_sym(), 2, 3, 17).entries());
  CHECK(m.entries() != sample_iid_matrix(DistributionSpec::bernoulli_sym(), 2, 3, 18).entries());
  CHECK_THROWS_AS(sample_iid_matrix(DistributionSpec::gaussian_unit(), 0, 3, 1), ValidationError);

  const auto g = sample_iid_matrix(DistributionSpec::gaussian_unit(), 1000, 100, 23);
  for (Eigen::Index j = 0; j < 100; ++j) {
    const auto col = g.entries().col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / 999.0;
    CHECK(var >= 0.85);
    CHECK(var <= 1.15);
  }
}

TEST_CASE("mixed adjacency matrices") {
  MixedGraphModel one{1, DistributionSpec::discrete({{2.5, 1.0}}), DistributionSpec::bernoulli_sym()};
  const MatrixXd single = sample_mixed_adjacency(one, 4);
  CHECK(single.rows() == 1);
  CHECK(single(0, 0) == 2.5);

  const MixedGraphModel model{500, DistributionSpec::gaussian_unit(),
                              DistributionSpec::bernoulli_sym()};
  const MatrixXd a = sample_mixed_adjacency(model, 31);
  CHECK(a == a.transpose());
  double sum = 0.0;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < 500; ++i) {
    for (Eigen::Index j = 0; j < 500; ++j) {
      if (i == j) continue;
      CHECK(std::abs(a(i, j)) == 1.0);
      sum += a(i, j);
      ++count;
    }
  }
  CHECK(std::abs(sum / static_cast<double>(count)) <= 0.01);
  CHECK(a == sample_mixed_adjacency(model, 31));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const MatrixXd b = sample_mixed_adjacency({40, DistributionSpec::three_point(),
                                               DistributionSpec::gaussian_unit()},
                                              seed);
    CHECK(b == b.transpose());
  }
}

TEST_CASE("row generation agrees with the full adjacency matrix") {
  const MixedGraphModel model{30, DistributionSpec::three_point(), DistributionSpec::gaussian_unit()};
  const MatrixXd full = sample_mixed_adjacency(model, 8);
  const std::vector<std::size_t> theta = {29, 0, 7, 13};
  const RowMatrix rows = sample_mixed_rows(model, 8, theta);
  for (std::size_t r = 0; r < theta.size(); ++r) {
    CHECK(MatrixXd(rows.row(static_cast<Eigen::Index>(r))) ==
          MatrixXd(full.row(static_cast<Eigen::Index>(theta[r]))));
  }
}

TEST_CASE("mixed model validation") {
  CHECK_THROWS_AS((MixedGraphModel{0, DistributionSpec::gaussian_unit(),
                                   DistributionSpec::bernoulli_sym()}
                       .validate()),
                  ValidationError);
  // Off-diagonal weights must be centred.
  const MixedGraphModel biased{10, DistributionSpec::gaussian_unit(),
                               DistributionSpec::discrete({{1.0, 0.75}, {-1.0, 0.25}})};
  CHECK_THROWS_AS(biased.validate(), ValidationError);
  CHECK_THROWS_AS(sample_mixed_adjacency(biased, 1), ValidationError);
  const MixedGraphModel halved{10, DistributionSpec::gaussian_unit(),
                               DistributionSpec::discrete({{0.5, 0.5}, {-0.5, 0.5}})};
  CHECK(halved.sigma() == doctest::Approx(0.5));
}

TEST_CASE("Erdos-Renyi sign matrices") {
  const MatrixXd two = bernoulli_from_graph(2, 0.3, 5);
  CHECK(two == two.transpose());
  for (double v : std::vector<double>(two.data(), two.data() + 4)) CHECK(std::abs(v) == 1.0);
  const MatrixXd big = bernoulli_from_graph(500, 0.5, 6);
  CHECK(big == big.transpose());
  CHECK(std::abs(big.mean()) <= 0.01);
  CHECK_THROWS_AS(bernoulli_from_graph(5, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(bernoulli_from_graph(5, 1.0, 1), ValidationError);
  // Edge density follows p.
  const MatrixXd sparse = bernoulli_from_graph(400, 0.2, 7);
  const double ones = (sparse.array() > 0).cast<double>().mean();
  CHECK(ones == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("row subsampling") {
  MatrixXd parent(4, 4);
  parent << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  const auto all = subsample_rows(parent, leading_rows(4), false);
  CHECK(all.entries() == RowMatrix(parent));
  CHECK(all.scaling() == 1.0);

  const std::vector<std::size_t> theta = {0, 1};
  const auto two = subsample_rows(parent, theta, true);
  CHECK(two.scaling() == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(two.entries()(i, j) == (1.0 / std::sqrt(2.0)) * parent(i, j));
  }

  const auto half = subsample_rows(MatrixXd::Ones(6, 6), std::vector<std::size_t>{0, 2, 4, 5}, true);
  CHECK((half.entries().array() == 0.5).all());

  const std::vector<std::size_t> arbitrary = {3, 1};
  const auto picked = subsample_rows(parent, arbitrary, true);
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t r = 0; r < arbitrary.size(); ++r) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(picked.entries()(static_cast<Eigen::Index>(r), j) ==
            s * parent(static_cast<Eigen::Index>(arbitrary[r]), j));
    }
  }
  CHECK(picked.provenance().rows == arbitrary);

  CHECK_THROWS_AS(subsample_rows(parent, std::vector<std::size_t>{1, 1}, true), ValidationError);
  CHECK_THROWS_AS(subsample_rows(parent, std::vector<std::size_t>{4}, true), ValidationError);
  CHECK_THROWS_AS(subsample_rows(MatrixXd::Ones(2, 3), std::vector<std::size_t>{0}, true),
                  ValidationError);
}

TEST_CASE("mixed measurement matrix keeps the symmetric top block") {
  const MixedGraphModel model{64, DistributionSpec::gaussian_unit(), DistributionSpec::bernoulli_sym()};
  const auto phi = mixed_measurement_matrix(model, 20, 99);
  CHECK(phi.rows() == 20);
  CHECK(phi.cols() == 64);
  CHECK(phi.scaling() == doctest::Approx(1.0 / std::sqrt(20.0)));
  CHECK(phi.provenance().ensemble == "s-mixed");
  CHECK(phi.provenance().seed == 99);
  const RowMatrix psi = phi.entries() / phi.scaling();
  const MatrixXd parent = sample_mixed_adjacency(model, 99);
  const MatrixXd block = psi.leftCols(20);
  CHECK((block - block.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((psi - RowMatrix(parent.topRows(20))).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("measurement matrix rejects bad input") {
  RowMatrix bad = RowMatrix::Ones(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(MeasurementMatrix(bad, 1.0), ValidationError);
  CHECK_THROWS_AS(MeasurementMatrix(RowMatrix(0, 3), 1.0), ValidationError);
  CHECK_THROWS_AS(MeasurementMatrix(RowMatrix::Ones(2, 2), 0.0), ValidationError);
  const auto m = MeasurementMatrix(RowMatrix::Ones(2, 3), 1.0).scaled(0.5);
  CHECK(m.scaling() == 0.5);
  CHECK((m.entries().array() == 0.5).all());
}

TEST_CASE("CSMAT1 round trip and layout") {
  RowMatrix e(2, 3);
  e << 1.5, -2.0, 1e-300, 0.1, 3.0, -0.0;
  const MeasurementMatrix m(e, 0.25);
  std::stringstream buffer;
  write_csmat(buffer, m);
  const std::string bytes = buffer.str();
  REQUIRE(bytes.size() == 6 + 4 + 4 + 8 + 6 * 8);
  CHECK(bytes.substr(0, 6) == "CSMAT1");
  CHECK(static_cast<unsigned char>(bytes[6]) == 2);
  CHECK(bytes[7] == 0);
  CHECK(static_cast<unsigned char>(bytes[10]) == 3);
  const auto back = read_csmat(buffer);
  CHECK(back.entries() == e);
  CHECK(back.scaling() == 0.25);

  std::stringstream bad("CSMAT2xxxxxxxx");
  CHECK_THROWS_AS(read_csmat(bad), ValidationError);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_csmat(truncated), ValidationError);
}

TEST_CASE("CSV formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(join_indices({1, 5, 9}) == "1;5;9");
  CHECK(parse_real_list("1,2.5\n-3\n") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK_THROWS_AS(parse_real_list("1,abc"), ValidationError);
  std::ostringstream csv;
  RowMatrix e(2, 2);
  e << 0.1, 2, -3, 4.25;
  write_matrix_csv(csv, e);
  CHECK(csv.str() == "0.1,2\n-3,4.25\n");
}
