#pragma once

#include "lsnw/estimator.hpp"
#include "lsnw/kernels.hpp"
#include "lsnw/simulate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lsnw {

//! Everything an experiment run depends on. All randomness derives from
//! `seed`.
struct ExperimentConfig
{
  std::optional<ProcessSpec> process;
  int T = 1000;
  std::optional<int> t;    //!< evaluation index (1-based)
  std::optional<double> u; //!< evaluation rescaled time, used when t is unset
  int L = 200;
  int mc_runs = 20;
  KernelSpec k_time{ KernelFamily::Uniform };
  KernelSpec k_space{ KernelFamily::Gaussian };
  std::optional<double> xi;
  std::optional<double> h;
  int d = 1;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  bool force_boundary = false;
  bool allow_signed_weights = false;

  std::vector<int> T_list;
  std::vector<double> u_grid;
  std::vector<double> sigmas;
  std::vector<double> cut_points;

  //! Test hook: builds the innovation stream of a synthetic replication from
  //! its derived seed. Unset means the family's own noise law.
  std::function<NoiseFn(std::uint64_t)> noise_override;

  //! Worker threads for Monte Carlo runs; 0 picks hardware concurrency.
  int threads = 0;

  //! xi if set, else 0.2/(d+1), or 0.3/(d+1) for the tvAR(2) families.
  double effective_xi() const;
  //! Explicit h if set, else T^-xi.
  double bandwidth_for(int length) const;
  //! Explicit t if set, else round(u * length) with u defaulting to 1/2.
  int time_index_for(int length) const;
  NwOptions nw_options() const { return { force_boundary, allow_signed_weights }; }
};

//! T^-xi for T >= 2 and 0 < xi < 1.
double bandwidth_from_exponent(int T, double xi);

//! Outcome of one replication experiment.
struct ReplicationResult
{
  //! Pointwise average of the L conditional CDFs, as a measure.
  DiscreteMeasure averaged_estimate;
  //! Empirical law of Y_t across replications.
  DiscreteMeasure empirical;
  double w1 = 0.0;
  double h = 0.0;
  int t = 0;
};

//! Shared core of both algorithms: replication l comes from
//! make_replication(l), and is a series of length T.
ReplicationResult run_replicated_estimate(
  const std::function<Series(int)>& make_replication,
  int T,
  int L,
  const ExperimentConfig& cfg);

//! Synthetic replication + NW + W1. Each replication conditions on its own
//! lag vector X_t^(l).
ReplicationResult run_algorithm1_detailed(const ExperimentConfig& cfg);
double run_algorithm1(const ExperimentConfig& cfg);

//! Same pipeline with replications base + N(0, sigma^2).
ReplicationResult run_algorithm2_detailed(const Series& base,
                                          const ExperimentConfig& cfg);
double run_algorithm2(const Series& base, const ExperimentConfig& cfg);

struct ConvergenceRow
{
  int T = 0;
  double u = 0.0;
  double h = 0.0;
  double mean_w1 = 0.0;
  double std_w1 = 0.0;
  int L = 0;
  int mc_runs = 0;
};

struct ConvergenceReport
{
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> notes;
};

//! mc_runs synthetic-replication runs per (T, u) cell; rows sorted by (T, u).
ConvergenceReport convergence_study(const ExperimentConfig& cfg);

struct FitReport
{
  double rmse = 0.0;
  double mae = 0.0;
  Eigen::VectorXi t;
  Eigen::VectorXd observed;
  Eigen::VectorXd fitted;
  //! Indices skipped because their kernel window was empty.
  std::vector<int> missing;
};

//! m-hat(t/T, X_t) at every t > d with t/T in I_h (all t when forced).
FitReport fit_report(const Series& s, const ExperimentConfig& cfg);

struct FitError
{
  double rmse = 0.0;
  double mae = 0.0;
};

//! Error of a fit against m*(t/T, X_t) of the generating process.
FitError fit_error_against_truth(const FitReport& fit,
                                 const Series& s,
                                 const ProcessSpec& spec);

struct SweepRow
{
  double sigma = 0.0;
  double cut = 0.0;
  int S = 0;
  int t = 0;
  double h = 0.0;
  double w1 = 0.0;
};

//! Smoothing replication on the first floor(cut * T) observations for every
//! (sigma, cut) pair.
std::vector<SweepRow> sigma_sweep(const Series& base, const ExperimentConfig& cfg);

//! Sample excess kurtosis; used to flag heavy-tailed inputs in reports.
double excess_kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x);

} // namespace lsnw
