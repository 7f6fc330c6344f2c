#include "supdens/dpm.hpp"

#include <cmath>
#include <stdexcept>

#include "supdens/kernels.hpp"
#include "supdens/rng.hpp"

namespace supdens {

namespace {

double log_kernel(MixtureKernel kernel, double x, double theta, double sigma) {
  if (kernel == MixtureKernel::laplace) return -std::abs(x - theta) - M_LN2;
  const double z = (x - theta) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
}

//! inverse-cdf sampler over a tabulated unnormalized density
class TabulatedSampler {
 public:
  TabulatedSampler(const std::function<double(double)>& density, double lo, double hi,
                   Eigen::Index m = 4097)
      : lo_(lo), hi_(hi), cdf_(m) {
    const double h = (hi - lo) / static_cast<double>(m - 1);
    double prev = density(lo);
    cdf_[0] = 0.0;
    for (Eigen::Index i = 1; i < m; ++i) {
      const double cur = density(lo + h * static_cast<double>(i));
      cdf_[i] = cdf_[i - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double total = cdf_[m - 1];
    if (!(total > 0.0)) throw std::invalid_argument("TabulatedSampler: zero mass");
    cdf_ /= total;
  }

  double draw(Rng& rng) const {
    const double u = rng.uniform();
    Eigen::Index lo = 0, hi = cdf_.size() - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (cdf_[mid] <= u ? lo : hi) = mid;
    }
    const double h = (hi_ - lo_) / static_cast<double>(cdf_.size() - 1);
    const double run = cdf_[hi] - cdf_[lo];
    const double frac = run > 0.0 ? (u - cdf_[lo]) / run : 0.0;
    return lo_ + h * (static_cast<double>(lo) + frac);
  }

 private:
  double lo_, hi_;
  Eigen::VectorXd cdf_;
};

double log_sigma_prior(const SigmaPrior& sp, double sigma) {
  // support (0, 1]
  if (!(sigma > 0.0 && sigma <= 1.0)) return -std::numeric_limits<double>::infinity();
  const double neg_log = -std::log(sigma);  // >= 0 on the support
  return -sp.s * std::log(sigma) - sp.D * std::pow(neg_log, sp.t) / sigma;
}

double log_base_density(const DPMixtureSpec& spec, double theta) {
  if (spec.kernel == MixtureKernel::laplace)
    return std::abs(theta) <= spec.a ? 0.0 : -std::numeric_limits<double>::infinity();
  return -spec.base_b * std::pow(std::abs(theta), spec.base_delta);
}

//! stick-breaking weights from the beta draws; the last weight absorbs the
//! remainder of the stick
Eigen::VectorXd stick_weights(Rng& rng, const Eigen::VectorXd& shape_a,
                              const Eigen::VectorXd& shape_b) {
  const auto T = shape_a.size() + 1;
  Eigen::VectorXd w(T);
  double stick = 1.0;
  for (Eigen::Index k = 0; k + 1 < T; ++k) {
    const double v = rng.beta(shape_a[k], shape_b[k]);
    w[k] = v * stick;
    stick *= (1.0 - v);
  }
  w[T - 1] = stick;
  return w;
}

}  // namespace

int DPMixtureSpec::default_truncation(double alpha_mass, Eigen::Index n) {
  const double t = 10.0 * alpha_mass * std::log(static_cast<double>(std::max<Eigen::Index>(n, 2)));
  return std::max(50, static_cast<int>(std::ceil(t)));
}

GridFunction mixture_density(const MixingMeasure& G, MixtureKernel kernel, double sigma,
                             const Grid& grid) {
  if (G.atoms.size() != G.weights.size() || G.atoms.size() == 0)
    throw std::invalid_argument("mixture_density: invalid mixing measure");
  if (kernel == MixtureKernel::gaussian && !(sigma > 0.0))
    throw std::invalid_argument("mixture_density: sigma must be positive");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.m);
  for (Eigen::Index k = 0; k < G.atoms.size(); ++k) {
    const double wk = G.weights[k];
    if (wk == 0.0) continue;
    const double th = G.atoms[k];
    if (kernel == MixtureKernel::laplace) {
      for (Eigen::Index i = 0; i < grid.m; ++i)
        out[i] += wk * 0.5 * std::exp(-std::abs(grid.point(i) - th));
    } else {
      const double c = wk / (sigma * std::sqrt(2.0 * M_PI));
      for (Eigen::Index i = 0; i < grid.m; ++i) {
        const double z = (grid.point(i) - th) / sigma;
        out[i] += c * std::exp(-0.5 * z * z);
      }
    }
  }
  return GridFunction(grid, std::move(out));
}

PosteriorDraw prior_draw(const DPMixtureSpec& spec, std::uint64_t seed) {
  if (spec.truncation < 1) throw std::invalid_argument("prior_draw: truncation must be >= 1");
  Rng rng(seed);
  const auto T = static_cast<Eigen::Index>(spec.truncation);

  Eigen::VectorXd w;
  if (T == 1) {
    w = Eigen::VectorXd::Ones(1);
  } else {
    w = stick_weights(rng, Eigen::VectorXd::Ones(T - 1),
                      Eigen::VectorXd::Constant(T - 1, spec.alpha_mass));
  }

  Eigen::VectorXd atoms(T);
  if (spec.kernel == MixtureKernel::laplace) {
    for (Eigen::Index k = 0; k < T; ++k) atoms[k] = rng.uniform(-spec.a, spec.a);
    return PosteriorDraw{MixingMeasure{std::move(atoms), std::move(w)}, 1.0};
  }
  const TabulatedSampler base(
      [&](double th) { return std::exp(log_base_density(spec, th)); }, -20.0, 20.0);
  for (Eigen::Index k = 0; k < T; ++k) atoms[k] = base.draw(rng);
  const TabulatedSampler sig(
      [&](double s) { return std::exp(log_sigma_prior(spec.sigma_prior, std::max(s, 1e-4))); },
      1e-4, 1.0);
  return PosteriorDraw{MixingMeasure{std::move(atoms), std::move(w)}, sig.draw(rng)};
}

std::vector<PosteriorDraw> fit_gibbs(const SampleSet& samples, const DPMixtureSpec& spec,
                                     const GibbsOptions& opts, std::uint64_t seed,
                                     GibbsDiagnostics* diag, GibbsState* final_state) {
  const auto n = samples.values.size();
  if (n == 0) throw std::invalid_argument("fit_gibbs: empty sample");
  if (opts.iters <= opts.burnin)
    throw std::invalid_argument("fit_gibbs: iters must exceed burnin");
  const auto T = static_cast<Eigen::Index>(spec.truncation);
  if (T < 10) throw std::invalid_argument("fit_gibbs: truncation must be at least 10");

  Rng rng(derive_seed(seed, 0xd1a1));
  const Eigen::VectorXd& x = samples.values;

  // initial state: prior draw unless an explicit start was given
  PosteriorDraw state = prior_draw(spec, derive_seed(seed, 0x1217));
  if (opts.init) {
    state.mixing = *opts.init;
    if (state.mixing.atoms.size() != T)
      throw std::invalid_argument("fit_gibbs: init truncation mismatch");
  }
  double sigma = state.sigma;
  Eigen::VectorXd atoms = state.mixing.atoms;
  Eigen::VectorXd w = state.mixing.weights;

  Eigen::VectorXi z(n);
  Eigen::VectorXi counts(T);
  Eigen::VectorXd logw(T), probs(T);
  std::vector<std::vector<Eigen::Index>> members(T);

  std::optional<TabulatedSampler> base_sampler;
  if (spec.kernel == MixtureKernel::gaussian)
    base_sampler.emplace([&](double th) { return std::exp(log_base_density(spec, th)); },
                         -20.0, 20.0);

  long atom_props = 0, atom_accs = 0, sigma_props = 0, sigma_accs = 0;
  std::vector<PosteriorDraw> draws;
  draws.reserve((opts.iters - opts.burnin) / opts.thin + 1);

  for (int it = 0; it < opts.iters; ++it) {
    // (1) assignments
    for (Eigen::Index k = 0; k < T; ++k)
      logw[k] = w[k] > 0.0 ? std::log(w[k]) : -std::numeric_limits<double>::infinity();
    counts.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < T; ++k) {
        probs[k] = logw[k] + log_kernel(spec.kernel, x[i], atoms[k], sigma);
        best = std::max(best, probs[k]);
      }
      for (Eigen::Index k = 0; k < T; ++k) probs[k] = std::exp(probs[k] - best);
      const Eigen::Index zi = rng.categorical(probs);
      z[i] = static_cast<int>(zi);
      counts[zi]++;
    }

    // (2) stick weights from the conjugate beta updates
    {
      Eigen::VectorXd sa(T - 1), sb(T - 1);
      long tail = 0;
      for (Eigen::Index k = 1; k < T; ++k) tail += counts[k];
      for (Eigen::Index k = 0; k + 1 < T; ++k) {
        sa[k] = 1.0 + counts[k];
        sb[k] = spec.alpha_mass + static_cast<double>(tail);
        tail -= counts[k + 1];
      }
      w = stick_weights(rng, sa, sb);
    }

    // (3) atoms by random-walk Metropolis within each cluster
    for (auto& v : members) v.clear();
    for (Eigen::Index i = 0; i < n; ++i) members[z[i]].push_back(i);
    const double step = opts.atom_step * spec.a;
    for (Eigen::Index k = 0; k < T; ++k) {
      if (members[k].empty()) {
        atoms[k] = spec.kernel == MixtureKernel::laplace ? rng.uniform(-spec.a, spec.a)
                                                         : base_sampler->draw(rng);
        continue;
      }
      auto cluster_loglik = [&](double th) {
        double s = 0.0;
        for (const Eigen::Index i : members[k]) s += log_kernel(spec.kernel, x[i], th, sigma);
        return s;
      };
      double cur = atoms[k];
      double cur_ll = cluster_loglik(cur) + log_base_density(spec, cur);
      for (int inner = 0; inner < opts.atom_inner_iters; ++inner) {
        const double prop = cur + step * rng.normal();
        const double prop_base = log_base_density(spec, prop);
        atom_props++;
        if (std::isinf(prop_base)) continue;  // outside the base support
        const double prop_ll = cluster_loglik(prop) + prop_base;
        if (std::log(rng.uniform()) < prop_ll - cur_ll) {
          cur = prop;
          cur_ll = prop_ll;
          atom_accs++;
        }
      }
      atoms[k] = cur;
    }

    // (4) scale by random-walk Metropolis on log sigma (gaussian kernel)
    if (spec.kernel == MixtureKernel::gaussian) {
      double ssr = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = x[i] - atoms[z[i]];
        ssr += d * d;
      }
      const double nn = static_cast<double>(n);
      auto log_target = [&](double s) {
        // prior + log-scale jacobian + gaussian likelihood profile
        return log_sigma_prior(spec.sigma_prior, s) + std::log(s) - nn * std::log(s) -
               0.5 * ssr / (s * s);
      };
      const double prop = sigma * std::exp(opts.sigma_step * rng.normal());
      sigma_props++;
      if (prop > 0.0 && prop <= 1.0 &&
          std::log(rng.uniform()) < log_target(prop) - log_target(sigma)) {
        sigma = prop;
        sigma_accs++;
      }
    }

    if (it >= opts.burnin && (it - opts.burnin) % opts.thin == 0) {
      draws.push_back(PosteriorDraw{MixingMeasure{atoms, w}, sigma});
      if (diag) {
        int occupied = 0;
        for (Eigen::Index k = 0; k < T; ++k)
          if (counts[k] > 0) occupied++;
        diag->cluster_count_trace.push_back(occupied);
      }
    }
  }

  if (diag) {
    diag->atom_acceptance = atom_props > 0 ? static_cast<double>(atom_accs) / atom_props : 0.0;
    diag->sigma_acceptance =
        sigma_props > 0 ? static_cast<double>(sigma_accs) / sigma_props : 0.0;
  }
  if (final_state)
    *final_state = GibbsState{z, MixingMeasure{atoms, w}, sigma, opts.iters, seed};
  return draws;
}

GridFunction bayes_estimator(const std::vector<PosteriorDraw>& draws, MixtureKernel kernel,
                             const Grid& grid) {
  if (draws.empty()) throw std::invalid_argument("bayes_estimator: needs at least one draw");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.m);
  for (const auto& d : draws)
    acc += mixture_density(d.mixing, kernel, d.sigma, grid).values;
  return GridFunction(grid, acc / static_cast<double>(draws.size()));
}

double laplace_rate(Eigen::Index n) {
  const double nn = static_cast<double>(n);
  return std::pow(nn / std::log(nn), -3.0 / 8.0);
}

GaussianBiasCheck gaussian_bias_check(const MixingMeasure& F, double sigma, int level) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_bias_check: sigma must be positive");
  const KernelSpec K = bandlimited_kernel(2.0);
  const double cut = std::ldexp(1.0, level);  // 2^J

  const double envelope = std::sqrt(2.0 / M_PI) / sigma * std::erfc(cut * sigma / M_SQRT2);

  // bias transform is (Ktilde(t / 2^J) - 1) phat(t), supported on |t| > 2^J;
  // integrate where the gaussian factor has any mass
  const double t_end = std::max(2.0 * cut, 40.0 / sigma);
  if (cut * sigma >= 40.0) return {0.0, envelope};

  const double span = F.atoms.maxCoeff() - F.atoms.minCoeff();
  const double x_lo = F.atoms.minCoeff() - 8.0 * sigma - 1.0;
  const double x_hi = F.atoms.maxCoeff() + 8.0 * sigma + 1.0;
  const auto nx = std::max<Eigen::Index>(
      257, static_cast<Eigen::Index>((x_hi - x_lo) * cut * 8.0 / M_PI));

  // Simpson nodes in t, fine enough for the cos(t (theta - x)) oscillation
  auto nt = std::max<Eigen::Index>(
      4096, static_cast<Eigen::Index>((t_end - cut) * (span + 16.0 * sigma + 2.0) * 4.0));
  if (nt % 2 != 0) ++nt;
  const double dt = (t_end - cut) / static_cast<double>(nt);

  double sup = 0.0;
  for (Eigen::Index ix = 0; ix <= nx; ++ix) {
    const double xx = x_lo + (x_hi - x_lo) * static_cast<double>(ix) / static_cast<double>(nx);
    double s = 0.0;
    for (Eigen::Index j = 0; j <= nt; ++j) {
      const double t = cut + dt * static_cast<double>(j);
      const double gw = std::exp(-0.5 * sigma * sigma * t * t);
      if (gw == 0.0) continue;
      double mix = 0.0;
      for (Eigen::Index k = 0; k < F.atoms.size(); ++k)
        mix += F.weights[k] * std::cos(t * (F.atoms[k] - xx));
      const double taper = K.fourier(t / cut) - 1.0;
      const double wj = (j == 0 || j == nt) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      s += wj * taper * gw * mix;
    }
    sup = std::max(sup, std::abs(s * dt / 3.0 / M_PI));
  }
  return {sup, envelope};
}

}  // namespace supdens
