#pragma once

#include "lsnw/estimator.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace lsnw {

//! Exact W1 between canonical measures by a merged sweep over the quantile
//! functions.
double w1_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

//! W_r = (int_0^1 |F_mu^-1(z) - F_nu^-1(z)|^r dz)^(1/r), r >= 1.
double wr_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r);

//! int |F(v) - G(v)| dv over the union of jump points.
double w1_cdf(const StepCdf& F, const StepCdf& G);

//! n directions uniform on S^(q-1), one per column (q x n).
Eigen::MatrixXd sample_sphere(int q, int n, std::uint64_t seed);

//! Measure on R^q: one atom per row of `support`.
struct VectorMeasure
{
  Eigen::MatrixXd support;
  Eigen::VectorXd weights;

  Eigen::Index dim() const noexcept { return support.cols(); }
  //! Canonical pushforward theta_# mu.
  DiscreteMeasure project(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
};

struct SlicedEstimate
{
  double value = 0.0;
  //! Sample std of per-direction W1 over sqrt(n_directions).
  double std_error = 0.0;
  int n_directions = 0;
  std::uint64_t seed = 0;
};

//! Monte Carlo sliced W1 over n_directions uniform directions (>= 2).
SlicedEstimate sliced_w1(const VectorMeasure& mu,
                         const VectorMeasure& nu,
                         int n_directions,
                         std::uint64_t seed);

} // namespace lsnw
