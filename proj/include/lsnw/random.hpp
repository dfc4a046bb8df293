#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace lsnw {

//! Engine with a fully specified output sequence. Distributions come from
//! Boost so that draws are identical across standard library vendors.
using Engine = std::mt19937_64;

//! A source of i.i.d. innovations. Tests substitute deterministic streams.
using NoiseFn = std::function<double()>;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

//! Child seed for stream `index` of `base`: splitmix64(base ^ mix(index)).
//! Distinct indices give statistically independent engines.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

//! N(0, sigma^2) draws.
class NormalNoise
{
public:
  explicit NormalNoise(std::uint64_t seed, double sigma = 1.0)
    : engine_(seed)
    , dist_(0.0, sigma)
  {}
  double operator()() { return dist_(engine_); }

private:
  Engine engine_;
  boost::random::normal_distribution<double> dist_;
};

//! Standard Cauchy draws via tan(pi (U - 1/2)); no truncation.
class CauchyNoise
{
public:
  explicit CauchyNoise(std::uint64_t seed)
    : engine_(seed)
  {}
  double operator()();

private:
  Engine engine_;
  boost::random::uniform_01<double> unif_;
};

} // namespace lsnw
