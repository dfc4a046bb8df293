#include "lsnw/simulate.hpp"
#include "lsnw/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace lsnw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One step of the recursion without noise: m*(u, y1, y2).
double drift(ProcessFamily family, double u, double y1, double y2)
{
  switch (family) {
    case ProcessFamily::GaussianTvAR1:
      return 0.9 * std::sin(kTwoPi * u) * y1;
    case ProcessFamily::GaussianTvAR2:
    case ProcessFamily::CauchyTvAR2:
      return 1.8 * std::cos(1.5 - std::cos(kTwoPi * u)) * y1 - 0.81 * y2;
    case ProcessFamily::GaussianTvTAR1:
      return 0.4 * std::sin(kTwoPi * u) * std::max(y1, 0.0) +
             0.5 * std::cos(kTwoPi * u) * std::max(-y1, 0.0);
  }
  return 0.0;
}

NoiseFn default_noise(ProcessFamily family, std::uint64_t seed)
{
  if (family == ProcessFamily::CauchyTvAR2)
    return CauchyNoise(seed);
  return NormalNoise(seed);
}

template<class CoefficientTime>
Series run_recursion(const ProcessSpec& spec,
                     int T,
                     const NoiseFn& noise,
                     CoefficientTime&& u_of)
{
  if (T < 2)
    throw InputError("series length T must be at least 2");
  if (spec.burn_in < 0)
    throw InputError("burn_in must be non-negative");

  double y1 = 0.0;
  double y2 = 0.0;
  const double u_burn = u_of(1);
  for (int i = 0; i < spec.burn_in; ++i) {
    const double y = drift(spec.family, u_burn, y1, y2) + noise();
    y2 = y1;
    y1 = y;
  }

  Eigen::VectorXd values(T);
  for (int t = 1; t <= T; ++t) {
    const double y = drift(spec.family, u_of(t), y1, y2) + noise();
    values(t - 1) = y;
    y2 = y1;
    y1 = y;
  }
  return Series(std::move(values), std::string(process_name(spec.family)));
}

void check_u(double u)
{
  if (!(u >= 0.0 && u <= 1.0))
    throw InputError("rescaled time u must lie in [0, 1]");
}

} // namespace

Series::Series(Eigen::VectorXd v,
               std::string n,
               std::optional<std::uint64_t> s)
  : values(std::move(v))
  , name(std::move(n))
  , seed(s)
{
  if (values.size() < 2)
    throw InputError("a series needs at least 2 observations");
}

int ProcessSpec::lag_order() const noexcept
{
  switch (family) {
    case ProcessFamily::GaussianTvAR2:
    case ProcessFamily::CauchyTvAR2:
      return 2;
    default:
      return 1;
  }
}

ProcessFamily parse_process(std::string_view name)
{
  static constexpr std::array<ProcessFamily, 4> all{
    ProcessFamily::GaussianTvAR1, ProcessFamily::GaussianTvAR2,
    ProcessFamily::CauchyTvAR2, ProcessFamily::GaussianTvTAR1
  };
  for (auto f : all)
    if (process_name(f) == name)
      return f;
  throw InputError("unknown process '" + std::string(name) + "'");
}

std::string_view process_name(ProcessFamily family)
{
  switch (family) {
    case ProcessFamily::GaussianTvAR1:
      return "tvar1-gauss";
    case ProcessFamily::GaussianTvAR2:
      return "tvar2-gauss";
    case ProcessFamily::CauchyTvAR2:
      return "tvar2-cauchy";
    case ProcessFamily::GaussianTvTAR1:
      return "tvtar1-gauss";
  }
  return "unknown";
}

Series simulate(const ProcessSpec& spec, int T, const NoiseFn& noise)
{
  const double len = T;
  return run_recursion(spec, T, noise, [len](int t) { return t / len; });
}

Series simulate(const ProcessSpec& spec, int T, std::uint64_t seed)
{
  auto s = simulate(spec, T, default_noise(spec.family, seed));
  s.seed = seed;
  return s;
}

Series simulate_stationary_at(const ProcessSpec& spec,
                              double u,
                              int T,
                              const NoiseFn& noise)
{
  check_u(u);
  return run_recursion(spec, T, noise, [u](int) { return u; });
}

Series simulate_stationary_at(const ProcessSpec& spec,
                              double u,
                              int T,
                              std::uint64_t seed)
{
  check_u(u);
  auto s = simulate_stationary_at(spec, u, T, default_noise(spec.family, seed));
  s.seed = seed;
  return s;
}

double true_conditional_mean(const ProcessSpec& spec,
                             double u,
                             const Eigen::Ref<const Eigen::VectorXd>& x)
{
  if (x.size() != spec.lag_order())
    throw InputError("lag vector has dimension " + std::to_string(x.size()) +
                     ", process needs " + std::to_string(spec.lag_order()));
  return drift(spec.family, u, x(0), x.size() > 1 ? x(1) : 0.0);
}

Series smooth_replication(const Series& base,
                          double sigma,
                          std::uint64_t seed,
                          std::uint64_t index)
{
  if (!(sigma > 0.0))
    throw InputError("smoothing sigma must be positive");
  NormalNoise noise(derive_seed(seed, index), sigma);
  Eigen::VectorXd v = base.values;
  for (Eigen::Index a = 0; a < v.size(); ++a)
    v(a) += noise();
  return Series(std::move(v), base.name);
}

std::vector<Series> gaussian_smooth_replicate(const Series& base,
                                              double sigma,
                                              int L,
                                              std::uint64_t seed)
{
  if (!(sigma > 0.0))
    throw InputError("smoothing sigma must be positive");
  if (L < 1)
    throw InputError("number of replications L must be at least 1");
  std::vector<Series> out;
  out.reserve(L);
  for (int l = 0; l < L; ++l)
    out.push_back(smooth_replication(base, sigma, seed, l));
  return out;
}

LagEmbedding lag_embed(const Series& s, int d)
{
  const auto T = s.size();
  if (d < 1 || d >= T)
    throw InputError("lag order d must satisfy 1 <= d < T");
  const Eigen::Index n = T - d;
  LagEmbedding e;
  e.X.resize(n, d);
  e.y.resize(n);
  e.t.resize(n);
  e.series_length = static_cast<int>(T);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index t = i + d + 1;
    for (int j = 0; j < d; ++j)
      e.X(i, j) = s.at(t - 1 - j);
    e.y(i) = s.at(t);
    e.t(i) = static_cast<int>(t);
  }
  return e;
}

Eigen::VectorXd lag_vector(const Series& s, int t, int d)
{
  if (t <= d || t > s.size())
    throw InputError("time index " + std::to_string(t) +
                     " has no complete lag vector of order " +
                     std::to_string(d));
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j)
    x(j) = s.at(t - 1 - j);
  return x;
}

} // namespace lsnw
