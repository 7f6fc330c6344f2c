// Acceptance suite: runs every study-level requirement end to end and
// prints one pass/fail line per criterion (with its runtime bound).
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "supdens/approx.hpp"
#include "supdens/densities.hpp"
#include "supdens/dpm.hpp"
#include "supdens/fourier.hpp"
#include "supdens/gof.hpp"
#include "supdens/histogram.hpp"
#include "supdens/quantile.hpp"
#include "supdens/ratestudy.hpp"
#include "supdens/rng.hpp"

using namespace supdens;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  o.pass = false;
  o.detail += (o.detail.empty() ? "" : "; ") + why;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RateStudyConfig histogram_study_config() {
  RateStudyConfig cfg;
  cfg.model = StudyModel::histogram;
  cfg.truth = "lipschitz-sine";
  for (int k = 10; k <= 17; ++k) cfg.n_list.push_back(Eigen::Index(1) << k);
  cfg.reps = 50;
  cfg.alpha = 1.0;
  cfg.master_seed = 0x5eed0001;
  cfg.study_id = "acceptance";
  return cfg;
}

// 1. closed-form posterior mean, cross-checked by dirichlet monte carlo
Outcome criterion1() {
  Outcome o;
  Rng rng(31);
  const DensitySpec truth = DensitySpec::from_name("lipschitz-sine");
  for (int fixture = 0; fixture < 20; ++fixture) {
    const int J = static_cast<int>(rng.uniform(0.0, 6.99));
    const auto n = static_cast<Eigen::Index>(rng.uniform(0.0, 2000.0));
    const HistogramPosterior post =
        n > 0 ? fit_histogram(sample(truth, n, 100 + fixture), J)
              : HistogramPosterior{DyadicPartition(J),
                                   Eigen::VectorXi::Zero(Eigen::Index(1) << J), 0};
    const Eigen::VectorXd vals = bayes_mean_values(post);
    const double nb = static_cast<double>(post.partition.num_bins());
    for (Eigen::Index l = 0; l < post.counts.size(); ++l) {
      const double closed =
          (1.0 + post.counts[l]) / (nb + static_cast<double>(post.n)) * nb;
      if (std::abs(vals[l] - closed) > 1e-12) {
        fail(o, "closed form mismatch at fixture " + std::to_string(fixture));
        return o;
      }
    }
  }

  const HistogramPosterior post = fit_histogram(sample(truth, 200, 777), 3);
  const Eigen::MatrixXd draws = sample_posterior_values(post, 100000, 778);
  const Eigen::VectorXd closed = bayes_mean_values(post);
  double worst = 0.0;
  for (Eigen::Index l = 0; l < draws.cols(); ++l) {
    const double mean = draws.col(l).mean();
    const double sd =
        std::sqrt((draws.col(l).array() - mean).square().sum() / (draws.rows() - 1));
    const double z = std::abs(mean - closed[l]) / (sd / std::sqrt(double(draws.rows())));
    worst = std::max(worst, z);
  }
  if (worst >= 4.0) fail(o, "monte carlo z = " + std::to_string(worst));
  o.detail = "max |mc - closed| = " + std::to_string(worst) + " mc standard errors";
  return o;
}

// 2. sup-norm error rate of the histogram posterior mean
Outcome criterion2() {
  Outcome o;
  const StudyResult res = run_rate_study(histogram_study_config());
  std::ostringstream d;
  d << "slope " << res.fit.slope << " in [-0.43, -0.23], target -1/3";
  o.detail = d.str();
  if (!(res.fit.slope >= -0.43 && res.fit.slope <= -0.23)) fail(o, "slope outside band");
  return o;
}

// 3. posterior mass outside the calibrated sup-ball shrinks with n
Outcome criterion3() {
  Outcome o;
  // frozen calibration: finer-side resolution schedule, slowly varying
  // factor (log n)^{1/2} in the radius, M = 0.8, 16 data replications
  const double M = 0.8;
  const int R = 16;
  const std::uint64_t seed = 0xace0001;
  const DensitySpec truth = DensitySpec::from_name("lipschitz-sine");
  const GridFunction p0 = truth.tabulate(Grid::unit());
  std::vector<double> masses;
  std::ostringstream d;
  d << "masses";
  for (const int k : {12, 14, 16}) {
    const Eigen::Index n = Eigen::Index(1) << k;
    const double nn = static_cast<double>(n);
    const int J =
        static_cast<int>(std::ceil(std::log2(std::pow(nn / std::log(nn), 1.0 / 3.0))));
    const double radius = M * rate_point(n, 1.0, 0.5);
    double acc = 0.0;
    for (int r = 0; r < R; ++r) {
      const HistogramPosterior post = fit_histogram(sample(truth, n, derive_seed(seed, k, r)), J);
      acc += posterior_supnorm_mass(post, p0, radius, 2000, derive_seed(seed, k, 1000 + r));
    }
    masses.push_back(acc / R);
    d << " " << (acc / R);
  }
  o.detail = d.str() + " at n = 2^12, 2^14, 2^16 (M = 0.8)";
  if (!(masses[1] < 0.1)) fail(o, "mass at n = 2^14 not below 0.1");
  if (!(masses[0] > masses[1] && masses[1] > masses[2])) fail(o, "masses not decreasing");
  return o;
}

// 4. empirical concentration of h = ||estimate - smoothed null||_1
Outcome criterion4() {
  Outcome o;
  const DensitySpec uniform = DensitySpec::from_name("uniform");
  const GridFunction p0 = uniform.tabulate(Grid::unit(4097));
  const TestConfig cfg{Norm::L1, ApproxOperator::haar(3), 1.0, 1.0, 1.0};
  const Eigen::Index n = 500;
  const int reps = 2000;
  Eigen::VectorXd hs(reps);
  for (int r = 0; r < reps; ++r)
    hs[r] = test_statistic(sample(uniform, n, derive_seed(0x3cd, r)), p0, cfg);
  const double mean = hs.mean();
  double worst_gap = 1e9;
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.02 * k;
    const double tail =
        (hs.array() - mean).abs().unaryExpr([&](double v) { return v >= t ? 1.0 : 0.0; }).sum() /
        reps;
    const double bound = mcdiarmid_bound(n, t, cfg.phi_l1);
    const double sigma = std::sqrt(std::max(tail * (1.0 - tail), 1e-9) / reps);
    worst_gap = std::min(worst_gap, bound + 3.0 * sigma - tail);
    if (tail > bound + 3.0 * sigma) fail(o, "tail exceeds bound at t = " + std::to_string(t));
  }
  o.detail = "min (bound + 3 sigma - tail) over the grid = " + std::to_string(worst_gap);
  return o;
}

// 5. expectation bound on h with the explicit constant
Outcome criterion5() {
  Outcome o;
  const DensitySpec truth = DensitySpec::from_name("laplace-2atom");
  std::ostringstream d;
  for (int J = 2; J <= 6; ++J) {
    const TestConfig cfg{Norm::L1, ApproxOperator::convolution(gaussian_kernel(), J), 1.0, 1.0,
                         1.0};
    const auto [mean_h, cap] = expectation_bound_check(truth, cfg, 1000, 50, 0xcab + J);
    d << " J=" << J << ": " << mean_h << " <= " << cap;
    if (!(mean_h <= cap)) fail(o, "mean exceeds cap at J = " + std::to_string(J));
  }
  o.detail = "mean h vs cap:" + d.str();
  return o;
}

// 6. L2 smoothing-rate limit for the laplace/gaussian pair
Outcome criterion6() {
  Outcome o;
  Eigen::VectorXd deltas(3);
  deltas << 1e-2, std::pow(10.0, -2.5), 1e-3;
  const auto rows = smoothing_rate_check(DensitySpec::from_name("laplace"), gaussian_kernel(),
                                         2.0, deltas);
  Eigen::VectorXd x(3), y(3);
  for (int i = 0; i < 3; ++i) {
    x[i] = std::log(rows[i].delta);
    y[i] = std::log(rows[i].l2sq);
  }
  const double mx = x.mean(), my = y.mean();
  const double slope = ((x.array() - mx) * (y.array() - my)).sum() /
                       (x.array() - mx).square().sum();
  std::ostringstream d;
  d << "ratio(1e-2) = " << rows[0].ratio << ", slope = " << slope;
  o.detail = d.str();
  if (std::abs(rows[0].ratio - 1.0) > 0.1) fail(o, "ratio off by more than 10%");
  if (std::abs(slope - 3.0) > 0.05) fail(o, "decay slope outside 3 +- 0.05");
  return o;
}

// 7. moment limits of [1 - transform] / t^2
Outcome criterion7() {
  Outcome o;
  const auto [lg, tg] = moment_limit_check(gaussian_kernel(), 2);
  const auto [ll, tl] = moment_limit_check(laplace_kernel(), 2);
  std::ostringstream d;
  d << "gaussian " << lg << " vs " << tg << ", laplace " << ll << " vs " << tl;
  o.detail = d.str();
  if (std::abs(lg - tg) > 1e-3 || std::abs(tg - 0.5) > 1e-6) fail(o, "gaussian limit off");
  if (std::abs(ll - tl) > 1e-3 || std::abs(tl - 1.0) > 1e-4) fail(o, "laplace limit off");
  return o;
}

// 8. posterior-median quantile error rate
Outcome criterion8() {
  Outcome o;
  RateStudyConfig cfg = histogram_study_config();
  cfg.tau = 0.5;
  cfg.posterior_draws = 200;
  const StudyResult res = run_quantile_rate_study(cfg);
  std::ostringstream d;
  d << "slope " << res.fit.slope << " in [-0.82, -0.52], target -2/3";
  o.detail = d.str();
  if (!(res.fit.slope >= -0.82 && res.fit.slope <= -0.52)) fail(o, "slope outside band");
  return o;
}

// 9. laplace mixture posterior: structural bounds plus a shrinking error
Outcome criterion9() {
  Outcome o;
  const DensitySpec truth = DensitySpec::from_name("laplace-2atom");
  const Grid grid = Grid::mixture(1.0, (1 << 11) + 1);
  const GridFunction p0 = truth.tabulate(grid);
  const std::vector<Eigen::Index> ns = {250, 1000, 4000};
  const int reps = 10;

  std::vector<double> mean_sup(ns.size(), 0.0);
  std::vector<std::string> problems(ns.size() * reps);
  const auto task = [&](int idx) {
    const int ni = idx / reps, rep = idx % reps;
    const Eigen::Index n = ns[ni];
    const SampleSet s = sample(truth, n, derive_seed(0xd1ce, ni, rep));
    DPMixtureSpec spec;
    spec.kernel = MixtureKernel::laplace;
    spec.truncation = DPMixtureSpec::default_truncation(1.0, n);
    GibbsOptions opts;
    opts.iters = 2000;
    opts.burnin = 500;
    opts.thin = 10;
    const auto draws = fit_gibbs(s, spec, opts, derive_seed(0xd1ce, ni, 100 + rep));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.m);
    for (const auto& dr : draws) {
      const GridFunction p = mixture_density(dr.mixing, MixtureKernel::laplace, 1.0, grid);
      if (norm(p, Norm::Sup) > 0.5 + 1e-9) problems[idx] = "draw above 1/2";
      if (std::abs(trapezoid(p) - 1.0) > 1e-3) problems[idx] = "draw mass off";
      acc += p.values;
    }
    const GridFunction est(grid, acc / static_cast<double>(draws.size()));
    if (norm(est, Norm::Sup) > 0.5 + 1e-9) problems[idx] = "estimator above 1/2";
    if (std::abs(trapezoid(est) - 1.0) > 1e-3) problems[idx] = "estimator mass off";
    mean_sup[ni] += norm(est - p0, Norm::Sup) / reps;
  };
  {
    const int count = static_cast<int>(ns.size()) * reps;
    const unsigned workers = std::min(2u, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = static_cast<int>(w); i < count; i += static_cast<int>(workers)) task(i);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& p : problems)
    if (!p.empty()) {
      fail(o, p);
      break;
    }
  std::ostringstream d;
  d << "mean sup errors " << mean_sup[0] << " > " << mean_sup[1] << " > " << mean_sup[2];
  o.detail = d.str();
  if (!(mean_sup[0] > mean_sup[1] && mean_sup[1] > mean_sup[2]))
    fail(o, "errors not strictly decreasing");
  return o;
}

// 10. gaussian mixture bias under the spectral tail envelope
Outcome criterion10() {
  Outcome o;
  Eigen::VectorXd atoms(2), w(2);
  atoms << -1.0, 1.0;
  w << 0.5, 0.5;
  const MixingMeasure F{atoms, w};
  double worst = -1e300;
  for (const double sigma : {0.25, 0.5, 1.0})
    for (int J = 3; J <= 6; ++J) {
      const GaussianBiasCheck c = gaussian_bias_check(F, sigma, J);
      worst = std::max(worst, c.measured_sup_bias - c.envelope);
      if (c.measured_sup_bias > c.envelope + 1e-8) {
        std::ostringstream d;
        d << "violation at sigma " << sigma << ", J " << J;
        fail(o, d.str());
      }
    }
  std::ostringstream d;
  d << "max (measured - envelope) = " << worst << " over sigma {0.25, 0.5, 1}, J {3..6}";
  o.detail = d.str();
  return o;
}

// 11. interpolation inequality on randomized pairs
Outcome criterion11() {
  Outcome o;
  Rng rng(0x1234);
  const Grid g = Grid::unit(4097);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd kf(17), kg(17);
    for (int k = 0; k < 17; ++k) {
      kf[k] = rng.uniform(-2.0, 2.0);
      kg[k] = rng.uniform(-2.0, 2.0);
    }
    Eigen::VectorXd vf(g.m), vg(g.m);
    for (Eigen::Index i = 0; i < g.m; ++i) {
      const double pos = g.point(i) * 16.0;
      const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), 15);
      const double fr = pos - static_cast<double>(k);
      vf[i] = kf[k] * (1 - fr) + kf[k + 1] * fr;
      vg[i] = kg[k] * (1 - fr) + kg[k + 1] * fr;
    }
    const GridFunction f(g, vf), h(g, vg);
    for (const double s : {1.5, 2.0, 4.0})
      if (!interpolation_check(f, h, s)) violations++;
  }
  o.detail = std::to_string(violations) + " violations over 100 pairs x 3 exponents";
  if (violations != 0) fail(o, "interpolation inequality violated");
  return o;
}

// 12. byte-identical study output under a fixed master seed
Outcome criterion12() {
  Outcome o;
  const RateStudyConfig cfg = histogram_study_config();
  const StudyResult a = run_rate_study(cfg);
  const StudyResult b = run_rate_study(cfg);
  const fs::path dir = fs::temp_directory_path() / "supdens_acceptance";
  fs::remove_all(dir);
  const fs::path pa = emit(a, cfg, EmitFormat::csv, dir / "a").front();
  const fs::path pb = emit(b, cfg, EmitFormat::csv, dir / "b").front();
  const std::string ca = slurp(pa), cb = slurp(pb);
  std::ostringstream d;
  d << ca.size() << " bytes, sha1 " << sha1_hex(ca).substr(0, 12);
  o.detail = d.str();
  if (ca.empty() || ca != cb) fail(o, "csv bytes differ between runs");
  return o;
}

struct Criterion {
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"histogram posterior mean: closed form + monte carlo", 10.0, criterion1},
      {"histogram sup-norm error rate (target -1/3)", 300.0, criterion2},
      {"posterior sup-ball mass shrinks with n", 120.0, criterion3},
      {"bounded-differences concentration of h", 60.0, criterion4},
      {"expectation bound on h with the explicit constant", 60.0, criterion5},
      {"L2 smoothing-rate limit (ratio and slope 3)", 30.0, criterion6},
      {"moment limits of [1 - transform]/t^2", 5.0, criterion7},
      {"posterior-median quantile error rate (target -2/3)", 300.0, criterion8},
      {"laplace mixture posterior: bounds and shrinking error", 900.0, criterion9},
      {"gaussian mixture bias under the spectral envelope", 60.0, criterion10},
      {"interpolation inequality property suite", 10.0, criterion11},
      {"byte-identical rate-study output", 600.0, criterion12},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > criteria[i].limit_seconds) {
      o.pass = false;
      o.detail += "; runtime limit exceeded";
    }
    std::printf("[%2zu/12] %s  %s (%.1fs < %.0fs)\n        %s\n", i + 1,
                o.pass ? "PASS" : "FAIL", criteria[i].title, secs, criteria[i].limit_seconds,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) failures++;
  }
  if (failures == 0)
    std::printf("all 12 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
