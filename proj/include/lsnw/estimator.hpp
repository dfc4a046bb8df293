#pragma once

#include "lsnw/kernels.hpp"
#include "lsnw/simulate.hpp"

#include <Eigen/Dense>

namespace lsnw {

struct NwOptions
{
  //! Estimate even when t/T falls outside [C1 h, 1 - C1 h].
  bool force_boundary = false;
  //! Accept negative kernel products (Silverman). Such weights only support
  //! conditional_mean.
  bool allow_signed_weights = false;
};

//! Normalized Nadaraya-Watson weights, one per row of a LagEmbedding.
struct WeightVector
{
  Eigen::VectorXd weights;
  int t_index = 0;
  Eigen::VectorXd query_x;
  double h = 0.0;
  bool has_negative = false;
};

//! Probability measure with finitely many atoms. Canonical form: support
//! strictly increasing, weights positive, summing to one.
struct DiscreteMeasure
{
  Eigen::VectorXd support;
  Eigen::VectorXd weights;

  //! Sorts, merges equal values and drops zero weights. Throws InputError on
  //! negative or non-finite input.
  static DiscreteMeasure canonical(const Eigen::Ref<const Eigen::VectorXd>& values,
                                   const Eigen::Ref<const Eigen::VectorXd>& weights);
  static DiscreteMeasure dirac(double at);
  //! Uniform weights 1/n on the given values.
  static DiscreteMeasure empirical(const Eigen::Ref<const Eigen::VectorXd>& values);

  Eigen::Index size() const noexcept { return support.size(); }
  double mean() const;
  //! Throws InputError unless canonical (weights sum to 1 within 1e-9).
  void validate() const;
};

//! Right-continuous step function F(y) = sum of weights of atoms <= y.
struct StepCdf
{
  Eigen::VectorXd jump_points;
  Eigen::VectorXd cum_weights;

  double operator()(double y) const;
  void validate() const;
};

StepCdf to_cdf(const DiscreteMeasure& m);
DiscreteMeasure to_measure(const StepCdf& F);

//! Unnormalized products K1((t - a)/(T h)) * prod_j K2((x^j - X_a^j)/h).
Eigen::VectorXd kernel_products(const LagEmbedding& data,
                                int t_query,
                                const Eigen::Ref<const Eigen::VectorXd>& x_query,
                                const KernelSpec& k_time,
                                const KernelSpec& k_space,
                                double h);

//! True when u lies in [C1 h, 1 - C1 h] with C1 the time kernel's radius.
bool in_boundary_region(double u, double h, const KernelSpec& k_time);

//! NW weights at rescaled time t_query/T and covariate x_query.
//!
//! Throws BoundaryRegion outside I_h (unless forced), EmptyNeighborhood when
//! every product vanishes, SignedWeights when a weight is negative and
//! signed weights are not allowed.
WeightVector nw_weights(const LagEmbedding& data,
                        int t_query,
                        const Eigen::Ref<const Eigen::VectorXd>& x_query,
                        const KernelSpec& k_time,
                        const KernelSpec& k_space,
                        double h,
                        const NwOptions& opts = {});

DiscreteMeasure conditional_measure(const WeightVector& w,
                                    const Eigen::Ref<const Eigen::VectorXd>& responses);
StepCdf conditional_cdf(const WeightVector& w,
                        const Eigen::Ref<const Eigen::VectorXd>& responses);
double conditional_mean(const WeightVector& w,
                        const Eigen::Ref<const Eigen::VectorXd>& responses);

//! CDF of theta' Y_a under the same weights. `responses` is T x q.
StepCdf projected_conditional_cdf(const WeightVector& w,
                                  const Eigen::Ref<const Eigen::MatrixXd>& responses,
                                  const Eigen::Ref<const Eigen::VectorXd>& theta);

//! J = (T h^(d+1))^-1 * sum of kernel products; 0 for an empty window.
double density_diagnostic(const LagEmbedding& data,
                          int t_query,
                          const Eigen::Ref<const Eigen::VectorXd>& x_query,
                          const KernelSpec& k_time,
                          const KernelSpec& k_space,
                          double h);

} // namespace lsnw
