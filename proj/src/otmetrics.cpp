#include "lsnw/otmetrics.hpp"
#include "lsnw/error.hpp"
#include "lsnw/random.hpp"

#include <cmath>
#include <vector>

namespace lsnw {

namespace {

// Cumulative weights closer than this are treated as one breakpoint.
constexpr double kBreakpointTolerance = 1e-15;

Eigen::VectorXd cumulative(const Eigen::VectorXd& w)
{
  Eigen::VectorXd c(w.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    acc += w(i);
    c(i) = acc;
  }
  c(c.size() - 1) = 1.0;
  return c;
}

template<class Cost>
double quantile_sweep(const DiscreteMeasure& mu,
                      const DiscreteMeasure& nu,
                      Cost&& cost)
{
  mu.validate();
  nu.validate();
  const Eigen::VectorXd cm = cumulative(mu.weights);
  const Eigen::VectorXd cn = cumulative(nu.weights);

  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double prev = 0.0;
  double total = 0.0;
  while (i < cm.size() && j < cn.size()) {
    const double next = std::min(cm(i), cn(j));
    if (next > prev)
      total += (next - prev) * cost(std::abs(mu.support(i) - nu.support(j)));
    prev = std::max(prev, next);
    const bool step_mu = cm(i) - next <= kBreakpointTolerance;
    const bool step_nu = cn(j) - next <= kBreakpointTolerance;
    i += step_mu;
    j += step_nu;
  }
  return total;
}

} // namespace

double w1_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu)
{
  return quantile_sweep(mu, nu, [](double d) { return d; });
}

double wr_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r)
{
  if (!(r >= 1.0) || !std::isfinite(r))
    throw InputError("Wasserstein order r must be >= 1");
  if (r == 1.0)
    return w1_discrete(mu, nu);
  const double s = quantile_sweep(mu, nu, [r](double d) { return std::pow(d, r); });
  return std::pow(s, 1.0 / r);
}

double w1_cdf(const StepCdf& F, const StepCdf& G)
{
  F.validate();
  G.validate();
  const auto& xf = F.jump_points;
  const auto& xg = G.jump_points;

  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double fv = 0.0;
  double gv = 0.0;
  double prev = 0.0;
  bool started = false;
  double total = 0.0;
  while (i < xf.size() || j < xg.size()) {
    double v;
    if (j >= xg.size() || (i < xf.size() && xf(i) <= xg(j)))
      v = xf(i);
    else
      v = xg(j);
    if (started)
      total += (v - prev) * std::abs(fv - gv);
    while (i < xf.size() && xf(i) == v)
      fv = F.cum_weights(i++);
    while (j < xg.size() && xg(j) == v)
      gv = G.cum_weights(j++);
    prev = v;
    started = true;
  }
  return total;
}

Eigen::MatrixXd sample_sphere(int q, int n, std::uint64_t seed)
{
  if (q < 1)
    throw InputError("sphere dimension q must be >= 1");
  if (n < 1)
    throw InputError("number of directions must be positive");
  NormalNoise gauss(seed);
  Eigen::MatrixXd dirs(q, n);
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    while (norm == 0.0) {
      for (int c = 0; c < q; ++c)
        dirs(c, k) = gauss();
      norm = dirs.col(k).norm();
    }
    dirs.col(k) /= norm;
  }
  return dirs;
}

DiscreteMeasure VectorMeasure::project(
  const Eigen::Ref<const Eigen::VectorXd>& theta) const
{
  if (theta.size() != dim())
    throw InputError("direction dimension does not match the measure");
  const Eigen::VectorXd values = support * theta;
  return DiscreteMeasure::canonical(values, weights);
}

SlicedEstimate sliced_w1(const VectorMeasure& mu,
                         const VectorMeasure& nu,
                         int n_directions,
                         std::uint64_t seed)
{
  if (mu.dim() != nu.dim())
    throw InputError("sliced W1 needs measures of equal dimension");
  if (mu.support.rows() != mu.weights.size() ||
      nu.support.rows() != nu.weights.size())
    throw InputError("vector measure has mismatched support and weights");
  if (n_directions < 2)
    throw InputError("sliced W1 needs at least 2 directions");

  const Eigen::MatrixXd dirs =
    sample_sphere(static_cast<int>(mu.dim()), n_directions, seed);
  Eigen::VectorXd per_dir(n_directions);
  for (int k = 0; k < n_directions; ++k)
    per_dir(k) = w1_discrete(mu.project(dirs.col(k)), nu.project(dirs.col(k)));

  SlicedEstimate est;
  est.n_directions = n_directions;
  est.seed = seed;
  est.value = per_dir.mean();
  const double ss = (per_dir.array() - est.value).square().sum();
  est.std_error = std::sqrt(ss / (n_directions - 1)) / std::sqrt(n_directions);
  return est;
}

} // namespace lsnw
