#include "lsnw/random.hpp"

#include <cmath>
#include <numbers>

namespace lsnw {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
{
  return splitmix64(base ^ splitmix64(index));
}

double CauchyNoise::operator()()
{
  // U == 0 maps to tan(-pi/2), a large but finite double.
  return std::tan(std::numbers::pi * (unif_(engine_) - 0.5));
}

} // namespace lsnw
