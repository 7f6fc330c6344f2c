#include "supdens/quantile.hpp"

#include <cmath>
#include <stdexcept>

namespace supdens {

namespace {

//! cdf value at x by linear interpolation
double cdf_at(const CdfFunction& F, double x) {
  if (x <= F.grid.lo) return F.values[0];
  if (x >= F.grid.hi) return F.values[F.grid.m - 1];
  const double pos = (x - F.grid.lo) / F.grid.spacing();
  const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), F.grid.m - 2);
  const double frac = pos - static_cast<double>(i);
  return F.values[i] * (1.0 - frac) + F.values[i + 1] * frac;
}

}  // namespace

CdfFunction cdf(const GridFunction& p) {
  if ((p.values.array() < -1e-12).any())
    throw std::invalid_argument("cdf: density has negative values");
  const double h = p.grid.spacing();
  Eigen::VectorXd F(p.grid.m);
  F[0] = 0.0;
  for (Eigen::Index i = 1; i < p.grid.m; ++i)
    F[i] = F[i - 1] + 0.5 * h * (p.values[i - 1] + p.values[i]);
  for (Eigen::Index i = 0; i < p.grid.m; ++i) F[i] = std::clamp(F[i], 0.0, 1.0);
  return CdfFunction{p.grid, std::move(F)};
}

double quantile(const CdfFunction& F, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("quantile: tau must be in (0,1)");
  if (F.values[0] >= tau) return F.grid.lo;
  if (F.values[F.grid.m - 1] < tau) return F.grid.hi;
  // smallest node with F >= tau
  Eigen::Index lo = 0, hi = F.grid.m - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (F.values[mid] < tau ? lo : hi) = mid;
  }
  const double run = F.values[hi] - F.values[lo];
  if (run <= 0.0) return F.grid.point(hi);
  return F.grid.point(lo) + (tau - F.values[lo]) / run * F.grid.spacing();
}

double quantile_translation_residual(const GridFunction& p, const GridFunction& p0,
                                     double tau) {
  if (!(p.grid == p0.grid)) throw std::invalid_argument("grid mismatch");
  const CdfFunction F = cdf(p);
  const CdfFunction F0 = cdf(p0);
  const double q = quantile(F, tau);
  const double q0 = quantile(F0, tau);
  if (q == q0) return 0.0;

  const double a = std::min(q, q0), b = std::max(q, q0);
  const double slope = (cdf_at(F, q) - cdf_at(F, q0)) / (q - q0);

  // mean-value point: p is continuous piecewise linear, so p - slope has a
  // sign change on [a, b]; locate one and bisect
  auto g = [&](double x) { return interpolate(p, x) - slope; };
  const int scan = 256;
  double xa = a, xb = b;
  double ga = g(xa);
  bool bracketed = false;
  double min_p = interpolate(p, a);
  for (int k = 1; k <= scan; ++k) {
    const double x = a + (b - a) * static_cast<double>(k) / scan;
    min_p = std::min(min_p, interpolate(p, x));
    const double gx = g(x);
    if (!bracketed && ga * gx <= 0.0) {
      xb = x;
      bracketed = true;
      break;
    }
    xa = x;
    ga = gx;
  }
  if (min_p <= 0.0)
    throw std::runtime_error("quantile_translation_residual: density vanishes on the bracket");
  if (!bracketed) {
    // flat p on the bracket: every point is a mean-value point
    xa = a;
    xb = a;
  }
  for (int it = 0; it < 80 && xb - xa > 1e-14; ++it) {
    const double mid = 0.5 * (xa + xb);
    if (g(xa) * g(mid) <= 0.0)
      xb = mid;
    else
      xa = mid;
  }
  const double p_star = interpolate(p, 0.5 * (xa + xb));
  return std::abs(q - q0 + (cdf_at(F, q0) - tau) / p_star);
}

namespace {

//! deviation of the kernel cdf from the step: psi(v) = G(v) - 1{v > 0}
class KernelCdfDeviation {
 public:
  KernelCdfDeviation(const KernelSpec& K, double v_max) : step_(2e-3) {
    const auto n = static_cast<Eigen::Index>(std::ceil(v_max / step_)) + 2;
    tail_.resize(n);
    // cumulative trapezoid of K from the far end inward: tail(v) = int_v^inf K
    tail_[n - 1] = 0.0;
    for (Eigen::Index i = n - 2; i >= 0; --i) {
      const double v1 = step_ * static_cast<double>(i + 1);
      const double v0 = step_ * static_cast<double>(i);
      tail_[i] = tail_[i + 1] + 0.5 * step_ * (K.evaluate(v0) + K.evaluate(v1));
    }
  }

  double operator()(double v) const {
    if (v == 0.0) return 0.0;  // split the jump of the indicator
    const double a = std::abs(v);
    const double pos = a / step_;
    const auto i = static_cast<Eigen::Index>(pos);
    double t;
    if (i + 1 >= tail_.size()) {
      t = 0.0;
    } else {
      const double frac = pos - static_cast<double>(i);
      t = tail_[i] * (1.0 - frac) + tail_[i + 1] * frac;
    }
    return v > 0.0 ? -t : t;
  }

 private:
  double step_;
  Eigen::VectorXd tail_;
};

}  // namespace

CdfBiasDecomposition cdf_bias_decomposition(const GridFunction& p, const GridFunction& p0,
                                            double tau, double b, const KernelSpec& K,
                                            double alpha, double holder_radius, double zeta) {
  if (!(p.grid == p0.grid)) throw std::invalid_argument("grid mismatch");
  if (!(b > 0.0)) throw std::invalid_argument("cdf_bias_decomposition: b must be positive");
  const int needed = static_cast<int>(std::floor(alpha)) + 1;
  if (K.vanishing_up_to < needed)
    throw std::invalid_argument("cdf_bias_decomposition: kernel lacks vanishing moments");

  const Grid& g = p.grid;
  const double h = g.spacing();
  const double q0 = quantile(cdf(p0), tau);
  const auto i0 =
      std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::round((q0 - g.lo) / h)), 0, g.m - 1);
  const double x0 = g.point(i0);

  const double v_max = std::max(x0 - g.lo, g.hi - x0) / b + 1.0;
  const KernelCdfDeviation psi(K, v_max);

  // full-grid trapezoid against psi((x0 - u)/b)
  double t1 = 0.0, t3 = 0.0, psi_diff = 0.0;
  for (Eigen::Index j = 0; j < g.m; ++j) {
    const double w = (j == 0 || j == g.m - 1) ? 0.5 * h : h;
    const double pv = psi((x0 - g.point(j)) / b);
    t1 += w * p0.values[j] * pv;
    t3 -= w * p.values[j] * pv;
    psi_diff += w * (p.values[j] - p0.values[j]) * pv;
  }
  // cumulative trapezoid of (p - p0) up to the node x0
  double dF = 0.0;
  for (Eigen::Index j = 0; j < i0; ++j)
    dF += 0.5 * h * ((p.values[j] - p0.values[j]) + (p.values[j + 1] - p0.values[j + 1]));
  const double t2 = psi_diff + dF;

  // D = [R/(floor(alpha)+1)! + 2 zeta^-(alpha+1)] \int |x|^{alpha+1} |K|
  double fact = 1.0;
  for (int k = 2; k <= needed; ++k) fact *= k;
  double kernel_moment = 0.0;
  const double r = K.support_radius;
  const double ks = 5e-3;
  for (double x = -r; x <= r; x += ks)
    kernel_moment += ks * std::pow(std::abs(x), alpha + 1.0) * std::abs(K.evaluate(x));
  const double D =
      (holder_radius / fact + 2.0 * std::pow(zeta, -(alpha + 1.0))) * kernel_moment;

  return CdfBiasDecomposition{t1, t2, t3, x0, D * std::pow(b, alpha + 1.0)};
}

Eigen::VectorXd posterior_quantiles(const std::vector<GridFunction>& draws, double tau) {
  Eigen::VectorXd q(static_cast<Eigen::Index>(draws.size()));
  for (std::size_t i = 0; i < draws.size(); ++i)
    q[static_cast<Eigen::Index>(i)] = quantile(cdf(draws[i]), tau);
  return q;
}

Eigen::VectorXd posterior_quantiles_hist(const Eigen::MatrixXd& bin_values, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("quantile: tau must be in (0,1)");
  const auto nb = bin_values.cols();
  const double width = 1.0 / static_cast<double>(nb);
  Eigen::VectorXd q(bin_values.rows());
  for (Eigen::Index r = 0; r < bin_values.rows(); ++r) {
    double cum = 0.0;
    q[r] = 1.0;
    for (Eigen::Index l = 0; l < nb; ++l) {
      const double w = bin_values(r, l) * width;  // bin mass
      if (cum + w >= tau) {
        q[r] = width * static_cast<double>(l) + (tau - cum) / bin_values(r, l);
        break;
      }
      cum += w;
    }
  }
  return q;
}

QuantileReport quantile_report(const GridFunction& p, const GridFunction& p0, double tau) {
  const CdfFunction F = cdf(p);
  const double q_hat = quantile(F, tau);
  const double q0 = quantile(cdf(p0), tau);
  const double gap = std::abs(cdf_at(F, q0) - tau);
  const double a = std::min(q_hat, q0), b = std::max(q_hat, q0);
  double lb = interpolate(p, a);
  const int scan = 128;
  for (int k = 1; k <= scan; ++k)
    lb = std::min(lb, interpolate(p, a + (b - a) * static_cast<double>(k) / scan));
  return QuantileReport{tau, q_hat, q0, gap, lb};
}

}  // namespace supdens
