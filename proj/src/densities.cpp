#include "supdens/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "supdens/rng.hpp"

namespace supdens {

namespace {

double laplace_pdf(double x, double loc) { return 0.5 * std::exp(-std::abs(x - loc)); }

double laplace_cdf(double x, double loc) {
  const double u = x - loc;
  return u < 0.0 ? 0.5 * std::exp(u) : 1.0 - 0.5 * std::exp(-u);
}

//! normalizer of 1 + |x-1/2|^alpha - kappa_alpha on [0,1]
double holder_kappa(double alpha) { return std::pow(0.5, alpha) / (alpha + 1.0); }

//! \int_0^x |t-1/2|^alpha dt
double holder_abs_integral(double x, double alpha) {
  const double a1 = alpha + 1.0;
  const double half = std::pow(0.5, a1) / a1;
  if (x <= 0.5) return half - std::pow(0.5 - x, a1) / a1;
  return half + std::pow(x - 0.5, a1) / a1;
}

}  // namespace

DensitySpec::DensitySpec(Family f, std::string name, double alpha, Interval dom,
                         Eigen::VectorXd params)
    : family_(f), name_(std::move(name)), alpha_(alpha), domain_(dom), params_(std::move(params)) {}

DensitySpec DensitySpec::from_name(const std::string& name) {
  if (name == "uniform")
    return DensitySpec(Family::uniform, name, 1.0, {0.0, 1.0}, Eigen::VectorXd());
  if (name == "lipschitz-sine")
    return DensitySpec(Family::lipschitz_sine, name, 1.0, {0.0, 1.0}, Eigen::VectorXd());
  if (name.rfind("holder-", 0) == 0) {
    const double a = std::stod(name.substr(7));
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("holder density needs exponent in (0,1): " + name);
    Eigen::VectorXd p(1);
    p << a;
    return DensitySpec(Family::holder, name, a, {0.0, 1.0}, std::move(p));
  }
  if (name == "laplace")
    return DensitySpec(Family::laplace, name, 1.0, {-16.0, 16.0}, Eigen::VectorXd());
  if (name == "laplace-2atom") {
    Eigen::VectorXd p(1);
    p << 1.0;  // mixing support half-width a
    return DensitySpec(Family::laplace_two_atom, name, 1.0, {-9.0, 9.0}, std::move(p));
  }
  throw std::invalid_argument("unknown catalog density: " + name);
}

double DensitySpec::pdf(double x) const {
  switch (family_) {
    case Family::uniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case Family::lipschitz_sine:
      return (x >= 0.0 && x <= 1.0) ? 1.0 + 0.5 * std::sin(2.0 * M_PI * x) : 0.0;
    case Family::holder: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double a = params_[0];
      return 1.0 + std::pow(std::abs(x - 0.5), a) - holder_kappa(a);
    }
    case Family::laplace:
      return laplace_pdf(x, 0.0);
    case Family::laplace_two_atom:
      return 0.5 * (laplace_pdf(x, -1.0) + laplace_pdf(x, 1.0));
  }
  throw std::logic_error("unreachable");
}

double DensitySpec::cdf(double x) const {
  switch (family_) {
    case Family::uniform:
      return std::clamp(x, 0.0, 1.0);
    case Family::lipschitz_sine: {
      const double c = std::clamp(x, 0.0, 1.0);
      return c + (1.0 - std::cos(2.0 * M_PI * c)) / (4.0 * M_PI);
    }
    case Family::holder: {
      const double c = std::clamp(x, 0.0, 1.0);
      const double a = params_[0];
      return c * (1.0 - holder_kappa(a)) + holder_abs_integral(c, a);
    }
    case Family::laplace:
      return laplace_cdf(x, 0.0);
    case Family::laplace_two_atom:
      return 0.5 * (laplace_cdf(x, -1.0) + laplace_cdf(x, 1.0));
  }
  throw std::logic_error("unreachable");
}

Grid DensitySpec::default_grid(Eigen::Index m) const { return Grid(domain_.lo, domain_.hi, m); }

GridFunction DensitySpec::tabulate() const { return tabulate(default_grid()); }

GridFunction DensitySpec::tabulate(const Grid& grid) const {
  Eigen::VectorXd v(grid.m);
  for (Eigen::Index i = 0; i < grid.m; ++i) v[i] = pdf(grid.point(i));
  return GridFunction(grid, std::move(v));
}

SampleSet sample(const DensitySpec& spec, Eigen::Index n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("sample: n must be positive");

  constexpr Eigen::Index table_size = (1 << 16) + 1;
  const Grid tg(spec.domain().lo, spec.domain().hi, table_size);
  Eigen::VectorXd F(table_size);
  for (Eigen::Index i = 0; i < table_size; ++i) F[i] = spec.cdf(tg.point(i));
  // normalize away the (tiny) tail mass outside the working domain
  const double f0 = F[0], f1 = F[table_size - 1];
  F = (F.array() - f0) / (f1 - f0);

  Rng rng(seed);
  Eigen::VectorXd x(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double u = rng.uniform();
    // largest index with F[i] <= u
    Eigen::Index lo = 0, hi = table_size - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (F[mid] <= u ? lo : hi) = mid;
    }
    const double run = F[hi] - F[lo];
    const double frac = run > 0.0 ? (u - F[lo]) / run : 0.0;
    x[k] = tg.point(lo) + frac * tg.spacing();
  }
  return SampleSet{std::move(x), seed, spec.name()};
}

}  // namespace supdens
