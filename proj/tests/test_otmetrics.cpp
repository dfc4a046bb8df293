#include "lsnw/error.hpp"
#include "lsnw/otmetrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lsnw;

namespace {

DiscreteMeasure two_point(double a, double b)
{
  DiscreteMeasure m;
  m.support = Eigen::Vector2d(a, b);
  m.weights = Eigen::Vector2d(0.5, 0.5);
  return m;
}

} // namespace

TEST_CASE("W1 and Wr on small examples")
{
  const auto d0 = DiscreteMeasure::dirac(0.0);
  CHECK(w1_discrete(d0, DiscreteMeasure::dirac(0.5)) == doctest::Approx(0.5));
  CHECK(w1_discrete(d0, DiscreteMeasure::dirac(-3.0)) == doctest::Approx(3.0));
  CHECK(w1_discrete(d0, two_point(0.0, 1.0)) == doctest::Approx(0.5));
  CHECK(wr_discrete(d0, two_point(0.0, 1.0), 2.0) ==
        doctest::Approx(std::sqrt(0.5)));
  CHECK(wr_discrete(d0, two_point(0.0, 1.0), 1.0) == doctest::Approx(0.5));
  CHECK(w1_discrete(two_point(0, 1), two_point(1, 2)) == doctest::Approx(1.0));
  CHECK(w1_discrete(two_point(0, 2), DiscreteMeasure::dirac(1.0)) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(wr_discrete(d0, d0, 0.5), InputError);
}

TEST_CASE("W1 equals the transport linear program")
{
  std::mt19937_64 rng(77);
  const int bits = 6;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> ua, ub;
    const auto mu = oracle::random_dyadic_measure(rng, 6, bits, &ua);
    const auto nu = oracle::random_dyadic_measure(rng, 6, bits, &ub);
    const std::vector<double> xs(mu.support.data(), mu.support.data() + mu.size());
    const std::vector<double> ys(nu.support.data(), nu.support.data() + nu.size());
    const double lp = oracle::transport_cost(xs, ua, ys, ub) / (1 << bits);
    CHECK(w1_discrete(mu, nu) == doctest::Approx(lp).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms")
{
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_measure(rng, 8);
    const auto b = oracle::random_measure(rng, 8);
    const auto c = oracle::random_measure(rng, 8);
    const double ab = w1_discrete(a, b);
    CHECK(w1_discrete(a, a) == 0.0);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(w1_discrete(b, a)).epsilon(1e-12));
    CHECK(ab <= w1_discrete(a, c) + w1_discrete(c, b) + 1e-12);
    CHECK(ab == doctest::Approx(oracle::w1_by_cdf_evaluation(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("translation and scaling")
{
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_measure(rng, 8);
    const auto b = oracle::random_measure(rng, 8);
    const double s = shift(rng);
    const double c = scale(rng);
    auto a2 = a, b2 = b;
    a2.support.array() += s;
    b2.support.array() += s;
    CHECK(w1_discrete(a2, b2) == doctest::Approx(w1_discrete(a, b)).epsilon(1e-9));
    a2 = a;
    a2.support *= c;
    b2 = b;
    b2.support *= c;
    CHECK(w1_discrete(a2, b2) ==
          doctest::Approx(c * w1_discrete(a, b)).epsilon(1e-9));
    // Shifting one measure against itself costs |s|.
    a2 = a;
    a2.support.array() += s;
    CHECK(w1_discrete(a, a2) == doctest::Approx(std::abs(s)).epsilon(1e-9));
  }
}

TEST_CASE("CDF integral agrees with the quantile sweep")
{
  std::mt19937_64 rng(80);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_measure(rng, 10);
    const auto b = oracle::random_measure(rng, 10);
    CHECK(std::abs(w1_cdf(to_cdf(a), to_cdf(b)) - w1_discrete(a, b)) <= 1e-10);
  }
}

TEST_CASE("Wr is nondecreasing in r")
{
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_measure(rng, 8);
    const auto b = oracle::random_measure(rng, 8);
    double prev = 0.0;
    for (double r : { 1.0, 1.5, 2.0, 3.0, 5.0 }) {
      const double w = wr_discrete(a, b, r);
      CHECK(w >= prev - 1e-12);
      prev = w;
    }
  }
}

TEST_CASE("directions on the sphere")
{
  const Eigen::MatrixXd th = sample_sphere(3, 100000, 4);
  CHECK(th.rows() == 3);
  CHECK(th.cols() == 100000);
  CHECK((th.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(std::abs(th.row(0).mean()) <= 0.01);
  CHECK(std::abs(th.row(0).array().square().mean() - 1.0 / 3.0) <= 0.01);
  CHECK(sample_sphere(3, 10, 4) == sample_sphere(3, 10, 4));
  CHECK_THROWS_AS(sample_sphere(0, 10, 4), InputError);
}

TEST_CASE("sliced W1")
{
  SUBCASE("identical measures")
  {
    VectorMeasure m;
    m.support = Eigen::MatrixXd::Random(5, 3);
    m.weights = Eigen::VectorXd::Constant(5, 0.2);
    const auto s = sliced_w1(m, m, 50, 1);
    CHECK(s.value == 0.0);
    CHECK(s.std_error == 0.0);
  }
  SUBCASE("q = 1 reduces to W1")
  {
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = oracle::random_measure(rng, 6);
      const auto b = oracle::random_measure(rng, 6);
      const VectorMeasure va{ a.support, a.weights };
      const VectorMeasure vb{ b.support, b.weights };
      const auto s = sliced_w1(va, vb, 10, trial);
      CHECK(s.value == doctest::Approx(w1_discrete(a, b)).epsilon(1e-12));
    }
  }
  SUBCASE("two Diracs in the plane")
  {
    VectorMeasure a, b;
    a.support = Eigen::MatrixXd::Zero(1, 2);
    a.weights = Eigen::VectorXd::Ones(1);
    b.support = Eigen::RowVector2d(3.0, 4.0);
    b.weights = Eigen::VectorXd::Ones(1);
    const auto s = sliced_w1(a, b, 10000, 17);
    const double expected = 2.0 / std::numbers::pi * 5.0;
    CHECK(s.n_directions == 10000);
    CHECK(s.std_error > 0.0);
    CHECK(std::abs(s.value - expected) <= 3.0 * s.std_error);
  }
  VectorMeasure a;
  a.support = Eigen::MatrixXd::Zero(1, 2);
  a.weights = Eigen::VectorXd::Ones(1);
  VectorMeasure b;
  b.support = Eigen::MatrixXd::Zero(1, 3);
  b.weights = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(sliced_w1(a, b, 10, 1), InputError);
  CHECK_THROWS_AS(sliced_w1(a, a, 1, 1), InputError);
}

TEST_CASE("invalid measures are rejected")
{
  DiscreteMeasure bad;
  bad.support = Eigen::Vector2d(1, 0);
  bad.weights = Eigen::Vector2d(0.5, 0.5);
  CHECK_THROWS_AS(w1_discrete(bad, DiscreteMeasure::dirac(0)), InputError);
}
