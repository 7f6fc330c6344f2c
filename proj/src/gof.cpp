#include "supdens/gof.hpp"

#include <cmath>
#include <stdexcept>

#include "supdens/histogram.hpp"
#include "supdens/rng.hpp"

namespace supdens {

namespace {

void validate(const TestConfig& cfg) {
  if (cfg.r == Norm::L2) throw std::invalid_argument("gof test: norm must be L1 or sup");
  if (!(cfg.M0 > 0.0 && cfg.eps_nr > 0.0 && cfg.phi_l1 > 0.0))
    throw std::invalid_argument("gof test: M0, eps_nr and phi_l1 must be positive");
}

}  // namespace

double test_statistic(const SampleSet& samples, const GridFunction& p0, const TestConfig& cfg) {
  validate(cfg);
  if (cfg.op.kind == OperatorKind::haar_projection) {
    const Eigen::VectorXi counts = cell_counts(samples, cfg.op.level);
    const double scale = std::ldexp(1.0, cfg.op.level);
    const Eigen::VectorXd vals =
        counts.cast<double>() * (scale / static_cast<double>(samples.values.size()));
    if (cfg.r == Norm::Sup) return sup_distance(vals, bin_extrema(p0, cfg.op.level));
    return l1_distance(vals, p0, cfg.op.level);
  }
  const GridFunction est = density_estimate(samples, cfg.op, p0.grid);
  return norm(est - p0, cfg.r);
}

double mcdiarmid_bound(Eigen::Index n, double t, double phi_l1) {
  if (!(t > 0.0)) throw std::invalid_argument("mcdiarmid_bound: t must be positive");
  const double nn = static_cast<double>(n);
  return 2.0 * std::exp(-nn * t * t / (2.0 * phi_l1 * phi_l1));
}

TestReport run_test(const SampleSet& samples, const GridFunction& p0, const TestConfig& cfg) {
  validate(cfg);
  const double stat = test_statistic(samples, p0, cfg);
  const double threshold = cfg.M0 * cfg.eps_nr;

  const GridFunction smoothed = smooth(p0, cfg.op);
  const GridFunction est = density_estimate(samples, cfg.op, p0.grid);
  const double h = norm(est - smoothed, Norm::L1);

  const double bias_r = norm(smoothed - p0, cfg.r);
  const double gap = threshold - bias_r;
  const double bound =
      gap > 0.0 ? mcdiarmid_bound(samples.values.size(), gap, cfg.phi_l1) : 2.0;
  return TestReport{stat, threshold, stat > threshold, h, bound};
}

std::pair<double, double> expectation_bound_check(const DensitySpec& p0, const TestConfig& cfg,
                                                  Eigen::Index n, int reps,
                                                  std::uint64_t seed) {
  validate(cfg);
  const Grid grid = p0.default_grid((1 << 12) + 1);
  const GridFunction p0_tab = p0.tabulate(grid);
  const GridFunction smoothed = smooth(p0_tab, cfg.op);

  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    const SampleSet s = sample(p0, n, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const GridFunction est = density_estimate(s, cfg.op, grid);
    acc += norm(est - smoothed, Norm::L1);
  }
  const double mean_h = acc / reps;

  // cap with s = 2: L = sqrt(2) ||Phi^2||_{L1(mu_2)}^{1/2} ||p0||_{L1(mu_2)}^{1/2}
  const DominatingKernel dom = dominating(cfg.op);
  double phi2_mu2 = 0.0;
  const double step = 1e-3;
  const double radius =
      cfg.op.kind == OperatorKind::convolution ? cfg.op.kernel->support_radius : 1.0;
  for (double x = -radius; x <= radius; x += step) {
    const double f = dom.phi(std::abs(x));
    phi2_mu2 += step * f * f * (1.0 + std::abs(x)) * (1.0 + std::abs(x));
  }
  const double p0_mu2 = weighted_l1_norm(p0_tab, 2.0);
  const double L = std::sqrt(2.0) * std::sqrt(phi2_mu2) * std::sqrt(p0_mu2);
  const double cap =
      L * std::sqrt(std::ldexp(1.0, cfg.op.level) / static_cast<double>(n));
  return {mean_h, cap};
}

std::pair<double, double> error_rates(const DensitySpec& p0, const DensitySpec& p1,
                                      const TestConfig& cfg, Eigen::Index n, int reps,
                                      std::uint64_t seed) {
  validate(cfg);
  const GridFunction p0_tab = p0.tabulate();
  int rejects = 0, accepts_under_p1 = 0;
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(r));
    const SampleSet s0 = sample(p0, n, rs);
    if (run_test(s0, p0_tab, cfg).reject) rejects++;
    const SampleSet s1 = sample(p1, n, rs);  // shared stream: p1 == p0 gives complements
    if (!run_test(s1, p0_tab, cfg).reject) accepts_under_p1++;
  }
  return {static_cast<double>(rejects) / reps, static_cast<double>(accepts_under_p1) / reps};
}

}  // namespace supdens
