#include "lsnw/harness.hpp"
#include "lsnw/error.hpp"
#include "lsnw/otmetrics.hpp"
#include "lsnw/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace lsnw {

namespace {

std::string cell_context(int T, double u, int run)
{
  std::ostringstream os;
  os << "T=" << T << ", u=" << u << ", run " << run;
  return os.str();
}

int worker_count(int requested, std::size_t tasks)
{
  unsigned n = requested > 0 ? static_cast<unsigned>(requested)
                             : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, n) on a pool of workers. Results are written by
// index, so reductions stay in a fixed order whatever the thread count.
template<class Body>
void parallel_for(std::size_t n, int threads, Body&& body)
{
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{ 0 };
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(threads, n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work);
    for (auto& th : pool)
      th.join();
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

template<class Fn>
auto with_context(const std::string& ctx, Fn&& fn) -> decltype(fn())
{
  try {
    return fn();
  } catch (const ComputationError& e) {
    e.rethrow_with(ctx);
    throw;
  } catch (const InputError& e) {
    throw InputError(ctx + ": " + e.what());
  }
}

void check_unit_interval(double u, const char* what)
{
  if (!(u > 0.0 && u <= 1.0))
    throw InputError(std::string(what) + " must lie in (0, 1]");
}

} // namespace

double ExperimentConfig::effective_xi() const
{
  if (xi)
    return *xi;
  const bool ar2 = process && process->lag_order() == 2;
  return (ar2 ? 0.3 : 0.2) / (d + 1.0);
}

double ExperimentConfig::bandwidth_for(int length) const
{
  if (h) {
    if (!(*h > 0.0) || !std::isfinite(*h))
      throw InputError("bandwidth h must be positive");
    return *h;
  }
  return bandwidth_from_exponent(length, effective_xi());
}

int ExperimentConfig::time_index_for(int length) const
{
  if (t)
    return *t;
  const double uu = u.value_or(0.5);
  check_unit_interval(uu, "rescaled time u");
  return std::max(1, static_cast<int>(std::lround(uu * length)));
}

double bandwidth_from_exponent(int T, double xi)
{
  if (T < 2)
    throw InputError("bandwidth rule needs T >= 2");
  if (!(xi > 0.0 && xi < 1.0))
    throw InputError("bandwidth exponent xi must lie in (0, 1)");
  return std::pow(static_cast<double>(T), -xi);
}

ReplicationResult run_replicated_estimate(
  const std::function<Series(int)>& make_replication,
  int T,
  int L,
  const ExperimentConfig& cfg)
{
  const int d = cfg.d;
  const int t = cfg.time_index_for(T);
  if (t <= d || t > T)
    throw InputError("evaluation index t = " + std::to_string(t) +
                     " must satisfy d < t <= T");
  const double h = cfg.bandwidth_for(T);
  const NwOptions opts{ cfg.force_boundary, false };
  if (!opts.force_boundary && !in_boundary_region(static_cast<double>(t) / T, h,
                                                  cfg.k_time))
    throw BoundaryRegion("t/T = " + std::to_string(static_cast<double>(t) / T) +
                         " outside I_h for h = " + std::to_string(h));

  std::vector<double> pooled_values;
  std::vector<double> pooled_weights;
  Eigen::VectorXd targets(L);
  for (int l = 0; l < L; ++l) {
    const Series s = make_replication(l);
    if (s.size() != T)
      throw InputError("replication has the wrong length");
    const LagEmbedding emb = lag_embed(s, d);
    const Eigen::VectorXd x = lag_vector(s, t, d);
    const WeightVector w = with_context("replication " + std::to_string(l), [&] {
      return nw_weights(emb, t, x, cfg.k_time, cfg.k_space, h, opts);
    });
    for (Eigen::Index a = 0; a < emb.rows(); ++a) {
      if (w.weights(a) > 0.0) {
        pooled_values.push_back(emb.y(a));
        pooled_weights.push_back(w.weights(a) / L);
      }
    }
    targets(l) = s.at(t);
  }

  ReplicationResult r;
  r.t = t;
  r.h = h;
  r.averaged_estimate = DiscreteMeasure::canonical(
    Eigen::Map<const Eigen::VectorXd>(pooled_values.data(), pooled_values.size()),
    Eigen::Map<const Eigen::VectorXd>(pooled_weights.data(), pooled_weights.size()));
  r.empirical = DiscreteMeasure::empirical(targets);
  r.w1 = w1_cdf(to_cdf(r.averaged_estimate), to_cdf(r.empirical));
  return r;
}

ReplicationResult run_algorithm1_detailed(const ExperimentConfig& cfg)
{
  if (!cfg.process)
    throw InputError("synthetic replication needs a synthetic process");
  if (cfg.L < 2)
    throw InputError("synthetic replication needs L >= 2 replications");
  const ProcessSpec spec = *cfg.process;
  const int T = cfg.T;
  auto make = [&](int l) {
    const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(l));
    if (cfg.noise_override)
      return simulate(spec, T, cfg.noise_override(s));
    return simulate(spec, T, s);
  };
  return run_replicated_estimate(make, T, cfg.L, cfg);
}

double run_algorithm1(const ExperimentConfig& cfg)
{
  return run_algorithm1_detailed(cfg).w1;
}

ReplicationResult run_algorithm2_detailed(const Series& base,
                                          const ExperimentConfig& cfg)
{
  if (!cfg.sigma)
    throw InputError("smoothing replication needs a smoothing sigma");
  if (!(*cfg.sigma > 0.0))
    throw InputError("smoothing sigma must be positive");
  if (cfg.L < 1)
    throw InputError("number of replications L must be at least 1");
  if (cfg.d < 1)
    throw InputError("lag order d must be at least 1");
  const double sigma = *cfg.sigma;
  auto make = [&](int l) {
    return smooth_replication(base, sigma, cfg.seed, static_cast<std::uint64_t>(l));
  };
  return run_replicated_estimate(make, static_cast<int>(base.size()), cfg.L, cfg);
}

double run_algorithm2(const Series& base, const ExperimentConfig& cfg)
{
  return run_algorithm2_detailed(base, cfg).w1;
}

ConvergenceReport convergence_study(const ExperimentConfig& cfg)
{
  if (!cfg.process)
    throw InputError("convergence study needs a synthetic process");
  std::vector<int> Ts = cfg.T_list;
  std::sort(Ts.begin(), Ts.end());
  Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());
  if (Ts.size() < 2)
    throw InputError("convergence study needs at least two sample sizes");
  std::vector<double> us = cfg.u_grid;
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  if (us.empty())
    throw InputError("convergence study needs a non-empty u grid");
  for (double u : us)
    check_unit_interval(u, "grid point u");
  if (cfg.mc_runs < 2)
    throw InputError("convergence study needs mc_runs >= 2");

  const std::size_t runs = static_cast<std::size_t>(cfg.mc_runs);
  const std::size_t cells = Ts.size() * us.size();
  std::vector<double> w1(cells * runs);

  parallel_for(cells * runs, cfg.threads, [&](std::size_t task) {
    const std::size_t cell = task / runs;
    const int run = static_cast<int>(task % runs);
    const int T = Ts[cell / us.size()];
    const std::size_t ui = cell % us.size();
    ExperimentConfig sub = cfg;
    sub.T = T;
    sub.t.reset();
    sub.u = us[ui];
    sub.seed = derive_seed(derive_seed(derive_seed(cfg.seed, T), ui), run);
    w1[task] = with_context(cell_context(T, us[ui], run),
                            [&] { return run_algorithm1(sub); });
  });

  ConvergenceReport report;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    ConvergenceRow row;
    row.T = Ts[cell / us.size()];
    row.u = us[cell % us.size()];
    row.h = cfg.bandwidth_for(row.T);
    row.L = cfg.L;
    row.mc_runs = cfg.mc_runs;
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r)
      sum += w1[cell * runs + r];
    row.mean_w1 = sum / runs;
    double ss = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double dv = w1[cell * runs + r] - row.mean_w1;
      ss += dv * dv;
    }
    row.std_w1 = std::sqrt(ss / (runs - 1));
    report.rows.push_back(row);
  }

  const Series pilot = simulate(*cfg.process, Ts.back(), derive_seed(cfg.seed, 0xfeed));
  if (excess_kurtosis(pilot.values) > 6.0)
    report.notes.push_back(
      "heavy tails: excess kurtosis of a pilot path exceeds 6; W1 is computed "
      "on the discrete measures as-is");
  return report;
}

FitReport fit_report(const Series& s, const ExperimentConfig& cfg)
{
  if (cfg.d < 1)
    throw InputError("fit needs lag order d >= 1");
  const int T = static_cast<int>(s.size());
  const LagEmbedding emb = lag_embed(s, cfg.d);
  const double h = cfg.bandwidth_for(T);
  const NwOptions opts{ true, cfg.allow_signed_weights };

  std::vector<int> ts;
  std::vector<double> obs;
  std::vector<double> fit;
  FitReport rep;
  for (int t = cfg.d + 1; t <= T; ++t) {
    if (!cfg.force_boundary &&
        !in_boundary_region(static_cast<double>(t) / T, h, cfg.k_time))
      continue;
    const Eigen::VectorXd x = lag_vector(s, t, cfg.d);
    try {
      const WeightVector w =
        nw_weights(emb, t, x, cfg.k_time, cfg.k_space, h, opts);
      fit.push_back(conditional_mean(w, emb.y));
      obs.push_back(s.at(t));
      ts.push_back(t);
    } catch (const EmptyNeighborhood&) {
      rep.missing.push_back(t);
    }
  }
  if (ts.empty())
    throw InputError("no time index inside the boundary region could be fitted");

  rep.t = Eigen::Map<const Eigen::VectorXi>(ts.data(), ts.size());
  rep.observed = Eigen::Map<const Eigen::VectorXd>(obs.data(), obs.size());
  rep.fitted = Eigen::Map<const Eigen::VectorXd>(fit.data(), fit.size());
  const Eigen::ArrayXd resid = rep.observed - rep.fitted;
  rep.rmse = std::sqrt(resid.square().mean());
  rep.mae = resid.abs().mean();
  return rep;
}

FitError fit_error_against_truth(const FitReport& fit,
                                 const Series& s,
                                 const ProcessSpec& spec)
{
  const int d = spec.lag_order();
  const double T = static_cast<double>(s.size());
  if (fit.t.size() == 0)
    throw InputError("empty fit report");
  Eigen::ArrayXd err(fit.t.size());
  for (Eigen::Index i = 0; i < fit.t.size(); ++i) {
    const int t = fit.t(i);
    const Eigen::VectorXd x = lag_vector(s, t, d);
    err(i) = fit.fitted(i) - true_conditional_mean(spec, t / T, x);
  }
  return { std::sqrt(err.square().mean()), err.abs().mean() };
}

std::vector<SweepRow> sigma_sweep(const Series& base, const ExperimentConfig& cfg)
{
  if (cfg.sigmas.empty() || cfg.cut_points.empty())
    throw InputError("sweep needs at least one sigma and one cut point");
  for (double s : cfg.sigmas)
    if (!(s > 0.0))
      throw InputError("sweep sigmas must be positive");
  for (double c : cfg.cut_points)
    check_unit_interval(c, "cut point");

  const int T = static_cast<int>(base.size());
  const double u = cfg.u ? *cfg.u
                         : (cfg.t ? static_cast<double>(*cfg.t) / T : 0.5);
  std::vector<SweepRow> rows;
  for (double sigma : cfg.sigmas) {
    for (double cut : cfg.cut_points) {
      const int S = static_cast<int>(std::floor(cut * T + 1e-9));
      std::ostringstream ctx;
      ctx << "sigma=" << sigma << ", S=" << S;
      const Series part = with_context(ctx.str(), [&] {
        return Series(base.values.head(std::max(S, 0)), base.name);
      });
      ExperimentConfig sub = cfg;
      sub.sigma = sigma;
      sub.t.reset();
      sub.u = u;
      const auto res =
        with_context(ctx.str(), [&] { return run_algorithm2_detailed(part, sub); });
      rows.push_back({ sigma, cut, S, res.t, res.h, res.w1 });
    }
  }
  return rows;
}

double excess_kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x)
{
  if (x.size() < 4)
    return 0.0;
  const double m = x.mean();
  const Eigen::ArrayXd c = x.array() - m;
  const double m2 = c.square().mean();
  if (m2 == 0.0)
    return 0.0;
  return c.square().square().mean() / (m2 * m2) - 3.0;
}

} // namespace lsnw
