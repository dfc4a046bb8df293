#include "lsnw/error.hpp"
#include "lsnw/random.hpp"
#include "lsnw/simulate.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <unordered_set>

using namespace lsnw;

namespace {

constexpr std::array<ProcessFamily, 4> kFamilies{ ProcessFamily::GaussianTvAR1,
                                                  ProcessFamily::GaussianTvAR2,
                                                  ProcessFamily::CauchyTvAR2,
                                                  ProcessFamily::GaussianTvTAR1 };

double sample_variance(const Eigen::VectorXd& v)
{
  const double m = v.mean();
  return (v.array() - m).square().sum() / (v.size() - 1);
}

NoiseFn zeros()
{
  return [] { return 0.0; };
}

} // namespace

TEST_CASE("zero noise is a fixed point of every family")
{
  for (auto f : kFamilies) {
    ProcessSpec spec{ f };
    CHECK(simulate(spec, 100, zeros()).values.isZero(0.0));
    CHECK(simulate_stationary_at(spec, 0.3, 100, zeros()).values.isZero(0.0));
  }
}

TEST_CASE("recursion uses t/T with T the final length")
{
  ProcessSpec spec{ ProcessFamily::GaussianTvAR1, 0 };
  const Series s = simulate(spec, 3, [] { return 1.0; });
  const double a2 = 0.9 * std::sin(2 * std::numbers::pi * 2.0 / 3.0);
  const double a3 = 0.9 * std::sin(2 * std::numbers::pi);
  CHECK(s.at(1) == doctest::Approx(1.0));
  CHECK(s.at(2) == doctest::Approx(a2 + 1.0));
  CHECK(s.at(3) == doctest::Approx(a3 * (a2 + 1.0) + 1.0));
}

TEST_CASE("burn-in runs at u = 1/T and is discarded")
{
  ProcessSpec spec{ ProcessFamily::GaussianTvAR1, 2 };
  int calls = 0;
  const Series s = simulate(spec, 4, [&] {
    ++calls;
    return 1.0;
  });
  CHECK(calls == 6);
  const double a = 0.9 * std::sin(2 * std::numbers::pi * 0.25);
  const double y_burn = a * 1.0 + 1.0; // second burn-in value
  CHECK(s.at(1) == doctest::Approx(a * y_burn + 1.0));
}

TEST_CASE("tvAR(1) is mean zero")
{
  ProcessSpec spec{ ProcessFamily::GaussianTvAR1 };
  for (std::uint64_t seed : { 1, 2, 3 }) {
    const Series s = simulate(spec, 100000, seed);
    CHECK(std::abs(s.values.mean()) <= 0.05);
  }
}

TEST_CASE("stationary approximation variance")
{
  ProcessSpec spec{ ProcessFamily::GaussianTvAR1 };
  SUBCASE("u = 0.5 gives white noise")
  {
    const Series s = simulate_stationary_at(spec, 0.5, 100000, 1);
    CHECK(std::abs(sample_variance(s.values) - 1.0) <= 0.05);
  }
  SUBCASE("u = 0.125 matches 1/(1 - alpha^2)")
  {
    const double alpha = 0.9 * std::sin(std::numbers::pi / 4);
    const double target = 1.0 / (1.0 - alpha * alpha);
    const Series s = simulate_stationary_at(spec, 0.125, 100000, 1);
    CHECK(std::abs(sample_variance(s.values) / target - 1.0) <= 0.05);
  }
}

TEST_CASE("simulation input errors")
{
  ProcessSpec spec{ ProcessFamily::GaussianTvAR1 };
  CHECK_THROWS_AS(simulate(spec, 1, 7), InputError);
  CHECK_THROWS_AS(simulate_stationary_at(spec, 1.5, 10, 7), InputError);
  CHECK_THROWS_AS(simulate_stationary_at(spec, -0.1, 10, 7), InputError);
  CHECK_THROWS_AS(parse_process("tvar3"), InputError);
  for (auto f : kFamilies)
    CHECK(parse_process(process_name(f)) == f);
}

TEST_CASE("simulation is deterministic in the seed")
{
  for (auto f : kFamilies) {
    ProcessSpec spec{ f };
    const Series a = simulate(spec, 500, 99);
    const Series b = simulate(spec, 500, 99);
    const Series c = simulate(spec, 500, 100);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
}

TEST_CASE("Cauchy tvAR(2) never emits non-finite values")
{
  ProcessSpec spec{ ProcessFamily::CauchyTvAR2 };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Series s = simulate(spec, 20000, seed);
    CHECK(s.values.allFinite());
  }
}

TEST_CASE("true conditional mean")
{
  Eigen::VectorXd x1(1), x2(2);
  x1 << 3.7;
  CHECK(true_conditional_mean({ ProcessFamily::GaussianTvAR1 }, 0.0, x1) == 0.0);
  x2 << 1.0, 1.0;
  // 1.8 cos(1.5) - 0.81
  CHECK(true_conditional_mean({ ProcessFamily::GaussianTvAR2 }, 0.25, x2) ==
        doctest::Approx(1.8 * 0.0707372016677029 - 0.81).epsilon(1e-12));
  CHECK(true_conditional_mean({ ProcessFamily::CauchyTvAR2 }, 0.25, x2) ==
        doctest::Approx(-0.6826730370).epsilon(1e-9));
  x1 << -2.0;
  CHECK(true_conditional_mean({ ProcessFamily::GaussianTvTAR1 }, 0.0, x1) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(true_conditional_mean({ ProcessFamily::GaussianTvAR2 }, 0.1, x1),
                  InputError);
}

TEST_CASE("Gaussian smoothing replication")
{
  const Series base = simulate({ ProcessFamily::GaussianTvAR1 }, 200, 5);
  SUBCASE("vanishing sigma reproduces the base")
  {
    const auto reps = gaussian_smooth_replicate(base, 1e-12, 3, 1);
    REQUIRE(reps.size() == 3);
    for (const auto& r : reps)
      CHECK((r.values - base.values).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("pure noise on a zero base has unit variance")
  {
    const Series zero(Eigen::VectorXd::Zero(100000));
    const auto reps = gaussian_smooth_replicate(zero, 1.0, 1, 3);
    CHECK(std::abs(sample_variance(reps[0].values) - 1.0) <= 0.05);
  }
  SUBCASE("deterministic and distinct across replications")
  {
    const auto a = gaussian_smooth_replicate(base, 0.1, 2, 9);
    const auto b = gaussian_smooth_replicate(base, 0.1, 2, 9);
    CHECK(a[0].values == b[0].values);
    CHECK(a[1].values == b[1].values);
    CHECK(a[0].values != a[1].values);
  }
  CHECK_THROWS_AS(gaussian_smooth_replicate(base, 0.0, 2, 1), InputError);
  CHECK_THROWS_AS(gaussian_smooth_replicate(base, 1.0, 0, 1), InputError);
}

TEST_CASE("lag embedding")
{
  const Series s(Eigen::Vector4d(1, 2, 3, 4));
  SUBCASE("d = 1")
  {
    const auto e = lag_embed(s, 1);
    REQUIRE(e.rows() == 3);
    CHECK(e.X.col(0) == Eigen::Vector3d(1, 2, 3));
    CHECK(e.y == Eigen::Vector3d(2, 3, 4));
    CHECK(e.t == Eigen::Vector3i(2, 3, 4));
    CHECK(e.series_length == 4);
  }
  SUBCASE("d = 2, most recent lag first")
  {
    const auto e = lag_embed(s, 2);
    REQUIRE(e.rows() == 2);
    CHECK(e.X.row(0) == Eigen::RowVector2d(2, 1));
    CHECK(e.X.row(1) == Eigen::RowVector2d(3, 2));
    CHECK(e.y == Eigen::Vector2d(3, 4));
    CHECK(e.t == Eigen::Vector2i(3, 4));
  }
  SUBCASE("boundary d = T - 1")
  {
    const Series long_s(Eigen::VectorXd::LinSpaced(100, 1, 100));
    const auto e = lag_embed(long_s, 99);
    CHECK(e.rows() == 1);
    CHECK(e.X(0, 0) == 99.0);
    CHECK(e.y(0) == 100.0);
  }
  CHECK_THROWS_AS(lag_embed(s, 4), InputError);
  CHECK_THROWS_AS(lag_embed(s, 0), InputError);
}

TEST_CASE("lag embedding length and first component")
{
  const Series s = simulate({ ProcessFamily::GaussianTvTAR1 }, 300, 4);
  for (int d : { 1, 2, 5 }) {
    const auto e = lag_embed(s, d);
    CHECK(e.rows() == 300 - d);
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      CHECK(e.X(i, 0) == s.at(e.t(i) - 1));
  }
}

TEST_CASE("derived seed streams do not collide")
{
  // 10 replication streams x 10^5 raw draws = 10^6 values.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1 << 21);
  std::size_t total = 0;
  for (std::uint64_t l = 0; l < 10; ++l) {
    Engine eng(derive_seed(12345, l));
    for (int i = 0; i < 100000; ++i) {
      seen.insert(eng());
      ++total;
    }
  }
  CHECK(seen.size() == total);
  CHECK(derive_seed(1, 0) != derive_seed(0, 1));
}
