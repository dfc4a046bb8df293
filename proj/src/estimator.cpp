#include "lsnw/estimator.hpp"
#include "lsnw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace lsnw {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kUnitTolerance = 1e-9;

void check_lengths(const WeightVector& w, Eigen::Index n)
{
  if (w.weights.size() != n)
    throw InputError("weights have length " + std::to_string(w.weights.size()) +
                     " but responses have length " + std::to_string(n));
}

void check_probability_weights(const WeightVector& w)
{
  if (w.has_negative)
    throw SignedWeights(
      "weights contain negative entries; only conditional_mean is defined");
}

} // namespace

DiscreteMeasure DiscreteMeasure::canonical(
  const Eigen::Ref<const Eigen::VectorXd>& values,
  const Eigen::Ref<const Eigen::VectorXd>& weights)
{
  if (values.size() != weights.size())
    throw InputError("support and weights differ in length");

  std::vector<Eigen::Index> order;
  order.reserve(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i)) || !std::isfinite(weights(i)))
      throw InputError("measure has a non-finite atom or weight");
    if (weights(i) < 0.0)
      throw InputError("measure has a negative weight");
    if (weights(i) > 0.0)
      order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return values(a) < values(b);
  });

  std::vector<double> sup;
  std::vector<double> wts;
  sup.reserve(order.size());
  wts.reserve(order.size());
  for (auto i : order) {
    if (!sup.empty() && sup.back() == values(i)) {
      wts.back() += weights(i);
    } else {
      sup.push_back(values(i));
      wts.push_back(weights(i));
    }
  }

  DiscreteMeasure m;
  m.support = Eigen::Map<const Eigen::VectorXd>(sup.data(), sup.size());
  m.weights = Eigen::Map<const Eigen::VectorXd>(wts.data(), wts.size());
  return m;
}

DiscreteMeasure DiscreteMeasure::dirac(double at)
{
  DiscreteMeasure m;
  m.support = Eigen::VectorXd::Constant(1, at);
  m.weights = Eigen::VectorXd::Ones(1);
  return m;
}

DiscreteMeasure DiscreteMeasure::empirical(
  const Eigen::Ref<const Eigen::VectorXd>& values)
{
  if (values.size() == 0)
    throw InputError("empirical measure of an empty sample");
  const Eigen::VectorXd w =
    Eigen::VectorXd::Constant(values.size(), 1.0 / values.size());
  return canonical(values, w);
}

double DiscreteMeasure::mean() const
{
  double s = 0.0;
  for (Eigen::Index i = 0; i < support.size(); ++i)
    s += weights(i) * support(i);
  return s;
}

void DiscreteMeasure::validate() const
{
  if (support.size() == 0 || support.size() != weights.size())
    throw InputError("measure is empty or has mismatched weights");
  double total = 0.0;
  for (Eigen::Index i = 0; i < support.size(); ++i) {
    if (!std::isfinite(support(i)) || !(weights(i) >= 0.0))
      throw InputError("measure has a non-finite atom or negative weight");
    if (i > 0 && !(support(i) > support(i - 1)))
      throw InputError("measure support is not strictly increasing");
    total += weights(i);
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw InputError("measure weights sum to " + std::to_string(total));
}

double StepCdf::operator()(double y) const
{
  const auto* begin = jump_points.data();
  const auto* end = begin + jump_points.size();
  const auto* it = std::upper_bound(begin, end, y);
  if (it == begin)
    return 0.0;
  return cum_weights(static_cast<Eigen::Index>(it - begin) - 1);
}

void StepCdf::validate() const
{
  const auto n = jump_points.size();
  if (n == 0 || cum_weights.size() != n)
    throw InputError("step CDF is empty or has mismatched arrays");
  if (!(cum_weights(0) >= 0.0))
    throw InputError("step CDF starts below zero");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(jump_points(i) > jump_points(i - 1)))
      throw InputError("step CDF jump points are not strictly increasing");
    if (cum_weights(i) < cum_weights(i - 1))
      throw InputError("step CDF is decreasing");
  }
  if (std::abs(cum_weights(n - 1) - 1.0) > kMassTolerance)
    throw InputError("step CDF does not end at 1");
}

StepCdf to_cdf(const DiscreteMeasure& m)
{
  StepCdf F;
  F.jump_points = m.support;
  F.cum_weights.resize(m.weights.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.weights.size(); ++i) {
    acc += m.weights(i);
    F.cum_weights(i) = acc;
  }
  return F;
}

DiscreteMeasure to_measure(const StepCdf& F)
{
  DiscreteMeasure m;
  m.support = F.jump_points;
  m.weights.resize(F.cum_weights.size());
  double prev = 0.0;
  for (Eigen::Index i = 0; i < F.cum_weights.size(); ++i) {
    m.weights(i) = F.cum_weights(i) - prev;
    prev = F.cum_weights(i);
  }
  return m;
}

bool in_boundary_region(double u, double h, const KernelSpec& k_time)
{
  constexpr double eps = 1e-12;
  const double edge = k_time.effective_support_radius * h;
  return u >= edge - eps && u <= 1.0 - edge + eps;
}

Eigen::VectorXd kernel_products(const LagEmbedding& data,
                                int t_query,
                                const Eigen::Ref<const Eigen::VectorXd>& x_query,
                                const KernelSpec& k_time,
                                const KernelSpec& k_space,
                                double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw InputError("bandwidth h must be positive");
  if (x_query.size() != data.dim())
    throw InputError("query covariate has dimension " +
                     std::to_string(x_query.size()) + ", data has " +
                     std::to_string(data.dim()));
  if (!x_query.allFinite())
    throw InputError("query covariate must be finite");
  const double T = data.series_length;
  const double th = T * h;

  Eigen::VectorXd prod(data.rows());
  for (Eigen::Index a = 0; a < data.rows(); ++a) {
    double p = eval(k_time, (t_query - data.t(a)) / th);
    for (Eigen::Index j = 0; j < data.dim() && p != 0.0; ++j)
      p *= eval(k_space, (x_query(j) - data.X(a, j)) / h);
    prod(a) = p;
  }
  return prod;
}

WeightVector nw_weights(const LagEmbedding& data,
                        int t_query,
                        const Eigen::Ref<const Eigen::VectorXd>& x_query,
                        const KernelSpec& k_time,
                        const KernelSpec& k_space,
                        double h,
                        const NwOptions& opts)
{
  const int T = data.series_length;
  if (t_query < 1 || t_query > T)
    throw InputError("query index " + std::to_string(t_query) +
                     " outside 1.." + std::to_string(T));
  const double u = static_cast<double>(t_query) / T;
  if (!opts.force_boundary && !in_boundary_region(u, h, k_time))
    throw BoundaryRegion("t/T = " + std::to_string(u) + " outside [" +
                         std::to_string(k_time.effective_support_radius * h) +
                         ", " +
                         std::to_string(1 - k_time.effective_support_radius * h) +
                         "]");

  WeightVector w;
  w.weights = kernel_products(data, t_query, x_query, k_time, k_space, h);
  w.t_index = t_query;
  w.query_x = x_query;
  w.h = h;

  const double denom = w.weights.sum();
  if (denom == 0.0)
    throw EmptyNeighborhood("no observation in the kernel window at t = " +
                            std::to_string(t_query));
  w.weights /= denom;
  w.has_negative = (w.weights.array() < 0.0).any();
  if (w.has_negative && !opts.allow_signed_weights) {
    const bool space = !k_space.nonnegative();
    throw SignedWeights(std::string("kernel '") +
                        std::string(kernel_name(space ? k_space.family
                                                      : k_time.family)) +
                        "' produced negative weights");
  }
  return w;
}

DiscreteMeasure conditional_measure(const WeightVector& w,
                                    const Eigen::Ref<const Eigen::VectorXd>& responses)
{
  check_lengths(w, responses.size());
  check_probability_weights(w);
  return DiscreteMeasure::canonical(responses, w.weights);
}

StepCdf conditional_cdf(const WeightVector& w,
                        const Eigen::Ref<const Eigen::VectorXd>& responses)
{
  return to_cdf(conditional_measure(w, responses));
}

double conditional_mean(const WeightVector& w,
                        const Eigen::Ref<const Eigen::VectorXd>& responses)
{
  check_lengths(w, responses.size());
  double s = 0.0;
  for (Eigen::Index a = 0; a < responses.size(); ++a)
    s += w.weights(a) * responses(a);
  return s;
}

StepCdf projected_conditional_cdf(const WeightVector& w,
                                  const Eigen::Ref<const Eigen::MatrixXd>& responses,
                                  const Eigen::Ref<const Eigen::VectorXd>& theta)
{
  if (responses.cols() != theta.size())
    throw InputError("direction dimension does not match responses");
  if (std::abs(theta.norm() - 1.0) > kUnitTolerance)
    throw InputError("projection direction must have unit norm");
  const Eigen::VectorXd projected = responses * theta;
  return conditional_cdf(w, projected);
}

double density_diagnostic(const LagEmbedding& data,
                          int t_query,
                          const Eigen::Ref<const Eigen::VectorXd>& x_query,
                          const KernelSpec& k_time,
                          const KernelSpec& k_space,
                          double h)
{
  const Eigen::VectorXd p =
    kernel_products(data, t_query, x_query, k_time, k_space, h);
  if (data.rows() == 0)
    return 0.0;
  const double scale =
    static_cast<double>(data.rows()) * std::pow(h, data.dim() + 1.0);
  return p.sum() / scale;
}

} // namespace lsnw
