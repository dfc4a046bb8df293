#pragma once

#include <string>
#include <string_view>

namespace lsnw {

enum class KernelFamily
{
  Uniform,
  Rectangle,
  Triangle,
  Epanechnikov,
  Tricube,
  Gaussian,
  Silverman
};

//! A one-dimensional base kernel K plus its effective support radius C.
//!
//! Compact families vanish outside [-1, 1]; their radius defaults to 1.
//! Gaussian and Silverman have unbounded support and a nominal radius of 4,
//! which only enters the boundary rule I_h = [C h, 1 - C h] and never
//! truncates evaluation.
struct KernelSpec
{
  KernelFamily family = KernelFamily::Uniform;
  double effective_support_radius = 1.0;

  KernelSpec() = default;
  explicit KernelSpec(KernelFamily family);
  KernelSpec(KernelFamily family, double radius);

  bool compact() const noexcept;
  bool nonnegative() const noexcept { return family != KernelFamily::Silverman; }
};

//! K(z). Throws InputError on non-finite z.
double eval(const KernelSpec& k, double z);

//! K(z / h), without a 1/h factor.
double eval_scaled(const KernelSpec& k, double h, double z);

struct KernelMoments
{
  double m0;
  double m1;
  double m2;
};

//! Composite Simpson quadrature of K, zK and z^2 K. Pieces are split at the
//! kinks of each family (0 and the support edges) so the rule only sees
//! smooth integrands. Requires quad_points >= 64.
KernelMoments verify_moments(const KernelSpec& k, int quad_points);

//! Closed-form second moment kappa of the family.
double kernel_kappa(KernelFamily family);

KernelFamily parse_kernel(std::string_view name);
std::string_view kernel_name(KernelFamily family);

} // namespace lsnw
