#include "supdens/fourier.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace supdens {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

//! composite Simpson of f on [a, b] with log-spaced nodes
double simpson_log(const std::function<double(double)>& f, double a, double b,
                   int panels_per_decade = 4096) {
  const double ua = std::log(a), ub = std::log(b);
  auto n = static_cast<Eigen::Index>(std::ceil((ub - ua) / std::log(10.0))) *
           static_cast<Eigen::Index>(panels_per_decade);
  if (n % 2 != 0) ++n;
  const double du = (ub - ua) / static_cast<double>(n);
  auto g = [&](Eigen::Index j) {
    const double t = std::exp(ua + du * static_cast<double>(j));
    return f(t) * t;
  };
  double s = g(0) + g(n);
  for (Eigen::Index j = 1; j < n; j += 2) s += 4.0 * g(j);
  for (Eigen::Index j = 2; j < n; j += 2) s += 2.0 * g(j);
  return s * du / 3.0;
}

}  // namespace

CharFunction characteristic_function(const DensitySpec& spec) {
  if (spec.name() == "laplace")
    return {[](double t) { return std::complex<double>(1.0 / (1.0 + t * t), 0.0); }, true,
            spec.name()};
  if (spec.name() == "laplace-2atom")
    return {[](double t) { return std::complex<double>(std::cos(t) / (1.0 + t * t), 0.0); },
            true, spec.name()};
  if (spec.name() == "uniform")
    return {[](double t) {
              if (std::abs(t) < 1e-8)
                return std::complex<double>(1.0 - t * t / 24.0, t / 2.0);
              return (std::exp(kI * t) - 1.0) / (kI * t);
            },
            true, spec.name()};
  return characteristic_function(spec.tabulate());
}

CharFunction characteristic_function(const KernelSpec& kernel) {
  if (kernel.fourier) {
    auto f = kernel.fourier;
    return {[f](double t) { return std::complex<double>(f(t), 0.0); }, true, kernel.name};
  }
  const double r = kernel.support_radius;
  const Grid g(-r, r, (1 << 15) + 1);
  Eigen::VectorXd v(g.m);
  for (Eigen::Index i = 0; i < g.m; ++i) v[i] = kernel.evaluate(g.point(i));
  return characteristic_function(GridFunction(g, std::move(v)));
}

CharFunction characteristic_function(const GridFunction& f) {
  // trapezoid transform of the tabulated values; fine for |t| well below
  // the grid Nyquist frequency
  const auto values = std::make_shared<GridFunction>(f);
  return {[values](double t) {
            const Grid& g = values->grid;
            const double h = g.spacing();
            std::complex<double> s =
                0.5 * (values->values[0] * std::exp(kI * t * g.lo) +
                       values->values[g.m - 1] * std::exp(kI * t * g.hi));
            for (Eigen::Index j = 1; j < g.m - 1; ++j)
              s += values->values[j] * std::exp(kI * t * g.point(j));
            return s * h;
          },
          false, "tabulated"};
}

DecayEstimate estimate_decay(const CharFunction& cf, const Eigen::VectorXd& t_grid) {
  if (t_grid.size() < 3) throw std::invalid_argument("estimate_decay: need at least 3 points");
  const auto n = t_grid.size();
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = t_grid[i];
    if (!(t > 0.0)) throw std::invalid_argument("estimate_decay: abscissae must be positive");
    const double a = std::abs(cf.evaluate(t));
    if (!(a > 0.0)) throw std::runtime_error("estimate_decay: transform vanishes on the grid");
    x[i] = std::log(t);
    y[i] = std::log(a);
  }
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double rms =
      std::sqrt((y.array() - intercept - slope * x.array()).square().sum() / n);
  return DecayEstimate{-slope, std::exp(intercept), t_grid.minCoeff(), t_grid.maxCoeff(), rms};
}

double bias_integral(const CharFunction& h, double beta) {
  if (!(beta > 0.5)) throw std::invalid_argument("bias_integral: diverges for beta <= 1/2");

  auto one_minus = [&](double t) { return std::abs(1.0 - h.evaluate(t)); };
  // local exponent of |1 - h| at the origin decides integrability there
  const double q2 = one_minus(1e-2), q3 = one_minus(1e-3);
  if (!(q2 > 0.0 && q3 > 0.0))
    throw std::runtime_error("bias_integral: transform is 1 near the origin");
  const double gamma = std::log(q2 / q3) / std::log(10.0);
  if (gamma <= beta - 0.5 + 1e-2)
    throw std::invalid_argument("bias_integral: diverges at the origin (moment condition)");

  const double t0 = 1e-3, t_max = 1e4;
  const double c0 = q3 / std::pow(t0, gamma);
  const double head =
      c0 * c0 * std::pow(t0, 2.0 * gamma - 2.0 * beta + 1.0) / (2.0 * gamma - 2.0 * beta + 1.0);
  const double body = simpson_log(
      [&](double t) {
        const double d = one_minus(t);
        return d * d / std::pow(t, 2.0 * beta);
      },
      t0, t_max);
  const double dend = one_minus(t_max);
  const double tail = dend * dend * std::pow(t_max, 1.0 - 2.0 * beta) / (2.0 * beta - 1.0);
  return 2.0 * (head + body + tail);
}

std::pair<double, double> moment_limit_check(const KernelSpec& h, int r) {
  if (r < 2 || r > 3) throw std::invalid_argument("moment_limit_check: supports r in {2, 3}");
  for (int k = 1; k < r; ++k)
    if (std::abs(h.moments[k]) > 1e-8)
      throw std::invalid_argument("moment_limit_check: lower moments must vanish");

  const CharFunction cf = characteristic_function(h);
  auto g = [&](double t) {
    return (1.0 - cf.evaluate(t).real()) / std::pow(t, r);
  };
  // g(t) = L + c2 t^2 + c4 t^4 + ... for symmetric kernels; two Richardson
  // levels over the decade steps remove both correction terms
  double v[4];
  for (int k = 0; k < 4; ++k) v[k] = g(std::pow(10.0, -1.0 - k));
  double r1[3];
  for (int k = 0; k < 3; ++k) r1[k] = (100.0 * v[k + 1] - v[k]) / 99.0;
  const double limit = (10000.0 * r1[2] - r1[1]) / 9999.0;

  const double re_ir = (r % 4 == 0) ? 1.0 : (r % 4 == 2 ? -1.0 : 0.0);
  double factorial = 1.0;
  for (int k = 2; k <= r; ++k) factorial *= k;
  const double target = -re_ir / factorial * h.moments[r];
  return {limit, target};
}

std::vector<SmoothingRateRow> smoothing_rate_check(const DensitySpec& p, const KernelSpec& h,
                                                   double beta,
                                                   const Eigen::VectorXd& deltas) {
  const CharFunction cf_p = characteristic_function(p);
  const CharFunction cf_h = characteristic_function(h);

  Eigen::VectorXd fit_ts(200);
  for (Eigen::Index i = 0; i < fit_ts.size(); ++i)
    fit_ts[i] = 50.0 * std::pow(10.0, static_cast<double>(i) / 199.0);
  const DecayEstimate decay = estimate_decay(cf_p, fit_ts);
  if (std::abs(decay.beta - beta) > 0.1)
    throw std::invalid_argument("smoothing_rate_check: transform does not decay at degree beta");

  const double integral = bias_integral(cf_h, beta);
  const double limit_const = decay.B * decay.B * integral / (2.0 * M_PI);

  std::vector<SmoothingRateRow> rows;
  rows.reserve(deltas.size());
  for (Eigen::Index i = 0; i < deltas.size(); ++i) {
    const double delta = deltas[i];
    if (!(delta > 0.0)) throw std::invalid_argument("smoothing_rate_check: deltas must be > 0");
    const double t_max = std::max(1e4, 30.0 / delta);
    const double body = simpson_log(
        [&](double t) {
          const double pp = std::abs(cf_p.evaluate(t));
          const double d = std::abs(1.0 - cf_h.evaluate(delta * t));
          return pp * pp * d * d;
        },
        1e-4, t_max);
    const double dend = std::abs(1.0 - cf_h.evaluate(delta * t_max));
    const double tail = decay.B * decay.B * dend * dend *
                        std::pow(t_max, 1.0 - 2.0 * beta) / (2.0 * beta - 1.0);
    const double l2sq = (body + tail) / M_PI;
    const double ratio = l2sq / (std::pow(delta, 2.0 * beta - 1.0) * limit_const);
    rows.push_back({delta, l2sq, ratio});
  }
  return rows;
}

}  // namespace supdens
