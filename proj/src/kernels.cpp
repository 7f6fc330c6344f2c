#include "supdens/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace supdens {

namespace {

//! trapezoid of g over [-r, r] with the given step
double line_integral(const std::function<double(double)>& g, double r, double step) {
  const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * r / step));
  const double h = 2.0 * r / static_cast<double>(n);
  double s = 0.5 * (g(-r) + g(r));
  for (Eigen::Index i = 1; i < n; ++i) s += g(-r + h * static_cast<double>(i));
  return s * h;
}

Eigen::VectorXd kernel_moments(const std::function<double(double)>& k, double r, double step) {
  Eigen::VectorXd m(4);
  for (int p = 0; p < 4; ++p)
    m[p] = line_integral([&](double x) { return std::pow(x, p) * k(x); }, r, step);
  return m;
}

void verify_mass_and_vanishing(const KernelSpec& k, double mass_tol, double moment_tol) {
  if (std::abs(k.moments[0] - 1.0) > mass_tol)
    throw std::logic_error(k.name + ": kernel mass is not 1");
  for (int p = 1; p <= std::min(k.vanishing_up_to, 3); ++p)
    if (std::abs(k.moments[p]) > moment_tol)
      throw std::logic_error(k.name + ": declared vanishing moment is nonzero");
}

double bandlimited_transform(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double c = std::cos(0.5 * M_PI * (a - 1.0));
  return c * c;
}

//! Inverse transform of the taper in closed form:
//!   K(x) = pi (sin x + sin 2x) / (2 x (pi^2 - x^2)),
//! with removable singularities at x = 0 and |x| = pi handled by local
//! expansions.
double bandlimited_value(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    // (1/pi) * (M0 - M2 x^2 / 2), M_k = \int_0^2 t^k Ktilde(t) dt
    const double m0 = 1.5;
    const double m2 = 1.5 - 3.0 / (M_PI * M_PI);
    return (m0 - 0.5 * m2 * x * x) / M_PI;
  }
  if (std::abs(ax - M_PI) < 1e-2) {
    const double e = ax - M_PI;
    return -M_PI * (1.0 - 7.0 * e * e / 6.0) / (2.0 * (M_PI + e) * (2.0 * M_PI + e));
  }
  return M_PI * (std::sin(ax) + std::sin(2.0 * ax)) / (2.0 * ax * (M_PI * M_PI - ax * ax));
}

}  // namespace

KernelSpec gaussian_kernel() {
  KernelSpec k;
  k.name = "gaussian";
  k.evaluate = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  k.fourier = [](double t) { return std::exp(-0.5 * t * t); };
  k.l1_norm = 1.0;
  k.support_radius = 10.0;
  k.vanishing_up_to = 1;
  k.moments = kernel_moments(k.evaluate, k.support_radius, 1e-3);
  verify_mass_and_vanishing(k, 1e-8, 1e-10);
  return k;
}

KernelSpec laplace_kernel() {
  KernelSpec k;
  k.name = "laplace";
  k.evaluate = [](double x) { return 0.5 * std::exp(-std::abs(x)); };
  k.fourier = [](double t) { return 1.0 / (1.0 + t * t); };
  k.l1_norm = 1.0;
  k.support_radius = 38.0;
  k.vanishing_up_to = 1;
  // fine step: the kink at 0 costs the trapezoid O(step^2 / 12) mass
  k.moments = kernel_moments(k.evaluate, k.support_radius, 1e-4);
  verify_mass_and_vanishing(k, 1e-8, 1e-10);
  return k;
}

KernelSpec bandlimited_kernel(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("bandlimited_kernel: beta must be positive");
  KernelSpec k;
  k.name = "bandlimited:" + std::to_string(beta);
  k.evaluate = bandlimited_value;
  k.fourier = bandlimited_transform;
  k.support_radius = 400.0;
  k.vanishing_up_to = static_cast<int>(std::floor(beta));
  k.moments = kernel_moments(k.evaluate, k.support_radius, 5e-3);
  k.l1_norm =
      line_integral([&](double x) { return std::abs(bandlimited_value(x)); }, 400.0, 5e-3);
  // the spatial tail oscillates at O(x^-3); quadrature of x^2 K over a finite
  // window leaves an O(1/R) residue, hence the loose tolerance on moment 2
  if (std::abs(k.moments[0] - 1.0) > 1e-6 || std::abs(k.moments[1]) > 1e-8 ||
      std::abs(k.moments[2]) > 2e-2)
    throw std::logic_error("bandlimited_kernel: moment verification failed");
  k.moments[1] = 0.0;  // exact by symmetry
  k.moments[2] = 0.0;  // exact: transform is flat near 0
  k.moments[3] = 0.0;
  return k;
}

KernelSpec kernel_from_name(const std::string& name) {
  if (name == "gaussian") return gaussian_kernel();
  if (name == "laplace") return laplace_kernel();
  if (name.rfind("bandlimited:", 0) == 0) return bandlimited_kernel(std::stod(name.substr(12)));
  throw std::invalid_argument("unknown kernel: " + name);
}

}  // namespace supdens
