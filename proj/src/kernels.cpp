#include "lsnw/kernels.hpp"
#include "lsnw/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace lsnw {

namespace {

constexpr double kUnboundedRadius = 4.0;

double raw_kernel(KernelFamily family, double z)
{
  const double a = std::abs(z);
  switch (family) {
    case KernelFamily::Uniform:
    case KernelFamily::Rectangle:
      return a <= 1.0 ? 0.5 : 0.0;
    case KernelFamily::Triangle:
      return a <= 1.0 ? 1.0 - a : 0.0;
    case KernelFamily::Epanechnikov:
      return a <= 1.0 ? 0.75 * (1.0 - a * a) : 0.0;
    case KernelFamily::Tricube: {
      if (a > 1.0)
        return 0.0;
      const double c = 1.0 - a * a * a;
      return (70.0 / 81.0) * c * c * c;
    }
    case KernelFamily::Gaussian:
      return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    case KernelFamily::Silverman: {
      const double s = a / std::numbers::sqrt2;
      return 0.5 * std::exp(-s) * std::sin(s + std::numbers::pi / 4.0);
    }
  }
  return 0.0;
}

// Simpson's rule on [lo, hi] with an even number of panels.
template<class F>
double simpson(F&& f, double lo, double hi, int panels)
{
  if (panels % 2 != 0)
    ++panels;
  const double step = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * step);
  return sum * step / 3.0;
}

// Integration range per family; the Silverman tail decays like
// exp(-|z|/sqrt2), so it needs a much wider window than the Gaussian.
double quadrature_radius(const KernelSpec& k)
{
  switch (k.family) {
    case KernelFamily::Gaussian:
      return std::max(k.effective_support_radius, 8.0);
    case KernelFamily::Silverman:
      return std::max(k.effective_support_radius, 40.0);
    default:
      return 1.0;
  }
}

} // namespace

KernelSpec::KernelSpec(KernelFamily f)
  : family(f)
  , effective_support_radius(f == KernelFamily::Gaussian ||
                                 f == KernelFamily::Silverman
                               ? kUnboundedRadius
                               : 1.0)
{}

KernelSpec::KernelSpec(KernelFamily f, double radius)
  : family(f)
  , effective_support_radius(radius)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InputError("kernel support radius must be positive and finite");
  if (compact() && radius < 1.0)
    throw InputError("radius of a compact kernel cannot be below 1");
}

bool KernelSpec::compact() const noexcept
{
  return family != KernelFamily::Gaussian && family != KernelFamily::Silverman;
}

double eval(const KernelSpec& k, double z)
{
  if (!std::isfinite(z))
    throw InputError("kernel argument must be finite");
  return raw_kernel(k.family, z);
}

double eval_scaled(const KernelSpec& k, double h, double z)
{
  if (!(h > 0.0))
    throw InputError("bandwidth must be positive");
  return eval(k, z / h);
}

KernelMoments verify_moments(const KernelSpec& k, int quad_points)
{
  if (quad_points < 64)
    throw InputError("verify_moments needs at least 64 quadrature points");

  const double r = quadrature_radius(k);
  // Split at the kink in 0 (|z| in every family) and integrate each half.
  const std::array<std::pair<double, double>, 2> pieces{ { { -r, 0.0 },
                                                           { 0.0, r } } };
  const int panels = quad_points / 2;

  KernelMoments m{ 0.0, 0.0, 0.0 };
  for (const auto& [lo, hi] : pieces) {
    m.m0 += simpson([&](double z) { return raw_kernel(k.family, z); }, lo, hi,
                    panels);
    m.m1 += simpson([&](double z) { return z * raw_kernel(k.family, z); }, lo,
                    hi, panels);
    m.m2 += simpson([&](double z) { return z * z * raw_kernel(k.family, z); },
                    lo, hi, panels);
  }
  return m;
}

double kernel_kappa(KernelFamily family)
{
  switch (family) {
    case KernelFamily::Uniform:
    case KernelFamily::Rectangle:
      return 1.0 / 3.0;
    case KernelFamily::Triangle:
      return 1.0 / 6.0;
    case KernelFamily::Epanechnikov:
      return 0.2;
    case KernelFamily::Tricube:
      return 35.0 / 243.0;
    case KernelFamily::Gaussian:
      return 1.0;
    case KernelFamily::Silverman:
      return 0.0;
  }
  return 0.0;
}

KernelFamily parse_kernel(std::string_view name)
{
  static constexpr std::array<KernelFamily, 7> all{
    KernelFamily::Uniform,      KernelFamily::Rectangle, KernelFamily::Triangle,
    KernelFamily::Epanechnikov, KernelFamily::Tricube,   KernelFamily::Gaussian,
    KernelFamily::Silverman
  };
  for (auto f : all)
    if (kernel_name(f) == name)
      return f;
  throw InputError("unknown kernel '" + std::string(name) + "'");
}

std::string_view kernel_name(KernelFamily family)
{
  switch (family) {
    case KernelFamily::Uniform:
      return "uniform";
    case KernelFamily::Rectangle:
      return "rectangle";
    case KernelFamily::Triangle:
      return "triangle";
    case KernelFamily::Epanechnikov:
      return "epanechnikov";
    case KernelFamily::Tricube:
      return "tricube";
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::Silverman:
      return "silverman";
  }
  return "unknown";
}

} // namespace lsnw
