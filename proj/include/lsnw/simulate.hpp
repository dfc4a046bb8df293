#pragma once

#include "lsnw/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsnw {

//! A sample path Y_1..Y_T. Index t (1-based) sits at rescaled time t/T.
struct Series
{
  Eigen::VectorXd values;
  std::string name;
  std::optional<std::uint64_t> seed;

  Series() = default;
  explicit Series(Eigen::VectorXd v,
                  std::string name = {},
                  std::optional<std::uint64_t> seed = std::nullopt);

  Eigen::Index size() const noexcept { return values.size(); }
  //! Y_t for 1-based t.
  double at(Eigen::Index t) const { return values(t - 1); }
};

enum class ProcessFamily
{
  GaussianTvAR1,
  GaussianTvAR2,
  CauchyTvAR2,
  GaussianTvTAR1
};

struct ProcessSpec
{
  ProcessFamily family = ProcessFamily::GaussianTvAR1;
  int burn_in = 200;

  //! Number of lags the recursion reads (1 or 2).
  int lag_order() const noexcept;
};

ProcessFamily parse_process(std::string_view name);
std::string_view process_name(ProcessFamily family);

//! Simulates the locally stationary recursion with coefficients evaluated at
//! t/T. Lags start at zero and `burn_in` steps at u = 1/T are discarded.
Series simulate(const ProcessSpec& spec, int T, std::uint64_t seed);
Series simulate(const ProcessSpec& spec, int T, const NoiseFn& noise);

//! The strictly stationary approximation Y_t(u): coefficients frozen at u.
Series simulate_stationary_at(const ProcessSpec& spec,
                              double u,
                              int T,
                              std::uint64_t seed);
Series simulate_stationary_at(const ProcessSpec& spec,
                              double u,
                              int T,
                              const NoiseFn& noise);

//! m*(u, x) for lag vector x = (Y_{t-1}, ..., Y_{t-d}).
double true_conditional_mean(const ProcessSpec& spec,
                             double u,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

//! Replication `index` of the Gaussian smoothing scheme: base + N(0, sigma^2).
Series smooth_replication(const Series& base,
                          double sigma,
                          std::uint64_t seed,
                          std::uint64_t index);

//! L smoothed replications; replication l equals smooth_replication(.., l).
std::vector<Series> gaussian_smooth_replicate(const Series& base,
                                              double sigma,
                                              int L,
                                              std::uint64_t seed);

//! Lag-embedded regression data: row i holds X_t = (Y_{t-1}, ..., Y_{t-d})
//! and y_i = Y_t for t = d+1..T. `series_length` is the T used to rescale
//! time indices.
struct LagEmbedding
{
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXi t;
  int series_length = 0;

  Eigen::Index rows() const noexcept { return y.size(); }
  Eigen::Index dim() const noexcept { return X.cols(); }
};

LagEmbedding lag_embed(const Series& s, int d);

//! X_t for 1-based t > d.
Eigen::VectorXd lag_vector(const Series& s, int t, int d);

} // namespace lsnw
