#include "supdens/histogram.hpp"

#include <cmath>
#include <stdexcept>

#include "supdens/rng.hpp"

namespace supdens {

HistogramPosterior fit_histogram(const SampleSet& samples, int level) {
  const DyadicPartition part(level);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(part.num_bins());
  for (Eigen::Index i = 0; i < samples.values.size(); ++i)
    counts[part.bin_index(samples.values[i])]++;
  return HistogramPosterior{part, std::move(counts), samples.values.size()};
}

Eigen::VectorXd bayes_mean_values(const HistogramPosterior& post) {
  const double nb = static_cast<double>(post.partition.num_bins());
  const double denom = nb + static_cast<double>(post.n);
  return (post.counts.cast<double>().array() + 1.0) / denom * nb;
}

GridFunction bayes_mean(const HistogramPosterior& post, const Grid& grid) {
  return cells_to_grid(bayes_mean_values(post), grid);
}

Eigen::MatrixXd sample_posterior_values(const HistogramPosterior& post, Eigen::Index m,
                                        std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_posterior: m must be positive");
  Rng rng(seed);
  const Eigen::VectorXd params = post.dirichlet_params();
  const auto nb = post.partition.num_bins();
  const double scale = static_cast<double>(nb);
  Eigen::MatrixXd draws(m, nb);
  for (Eigen::Index r = 0; r < m; ++r)
    draws.row(r) = (rng.dirichlet(params) * scale).transpose();
  return draws;
}

std::vector<GridFunction> sample_posterior(const HistogramPosterior& post, Eigen::Index m,
                                           std::uint64_t seed, const Grid& grid) {
  const Eigen::MatrixXd draws = sample_posterior_values(post, m, seed);
  std::vector<GridFunction> out;
  out.reserve(m);
  for (Eigen::Index r = 0; r < m; ++r) out.push_back(cells_to_grid(draws.row(r), grid));
  return out;
}

int choose_resolution(Eigen::Index n, double alpha) {
  if (n < 2) throw std::invalid_argument("choose_resolution: n must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("choose_resolution: alpha must be in (0,1]");
  const double ratio = static_cast<double>(n) / std::log(static_cast<double>(n));
  const double target = std::pow(ratio, 1.0 / (2.0 * alpha + 1.0));
  const auto level = static_cast<int>(std::lround(std::log2(target)));
  return std::max(level, 0);
}

BinExtrema bin_extrema(const GridFunction& p0, int level) {
  if (p0.grid.lo != 0.0 || p0.grid.hi != 1.0)
    throw std::domain_error("bin_extrema: needs the unit-interval grid");
  const auto nb = Eigen::Index(1) << level;
  if ((p0.grid.m - 1) % nb != 0)
    throw std::domain_error("bin_extrema: grid does not align with bins");
  const Eigen::Index stride = (p0.grid.m - 1) / nb;
  BinExtrema ext{Eigen::VectorXd(nb), Eigen::VectorXd(nb)};
  for (Eigen::Index l = 0; l < nb; ++l) {
    const auto seg = p0.values.segment(l * stride, stride + 1);
    ext.lo[l] = seg.minCoeff();
    ext.hi[l] = seg.maxCoeff();
  }
  return ext;
}

double sup_distance(const Eigen::VectorXd& bin_values, const BinExtrema& ext) {
  if (bin_values.size() != ext.lo.size())
    throw std::invalid_argument("sup_distance: bin count mismatch");
  double s = 0.0;
  for (Eigen::Index l = 0; l < bin_values.size(); ++l)
    s = std::max(s, std::max(std::abs(bin_values[l] - ext.lo[l]),
                             std::abs(bin_values[l] - ext.hi[l])));
  return s;
}

double l1_distance(const Eigen::VectorXd& bin_values, const GridFunction& p0, int level) {
  const auto nb = Eigen::Index(1) << level;
  if ((p0.grid.m - 1) % nb != 0)
    throw std::domain_error("l1_distance: grid does not align with bins");
  const Eigen::Index stride = (p0.grid.m - 1) / nb;
  const double h = p0.grid.spacing();
  double total = 0.0;
  for (Eigen::Index l = 0; l < nb; ++l) {
    const Eigen::Index a = l * stride;
    double s = 0.5 * (std::abs(bin_values[l] - p0.values[a]) +
                      std::abs(bin_values[l] - p0.values[a + stride]));
    for (Eigen::Index j = 1; j < stride; ++j)
      s += std::abs(bin_values[l] - p0.values[a + j]);
    total += s * h;
  }
  return total;
}

double posterior_supnorm_mass(const HistogramPosterior& post, const GridFunction& p0,
                              double radius, Eigen::Index m, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("posterior_supnorm_mass: radius must be > 0");
  const BinExtrema ext = bin_extrema(p0, post.partition.level);
  const Eigen::MatrixXd draws = sample_posterior_values(post, m, seed);
  Eigen::Index hits = 0;
  for (Eigen::Index r = 0; r < m; ++r)
    if (sup_distance(draws.row(r), ext) >= radius) hits++;
  return static_cast<double>(hits) / static_cast<double>(m);
}

double prior_kl_ball_mass(int level, const GridFunction& p0, double eps, Eigen::Index m,
                          std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("prior_kl_ball_mass: eps must be > 0");
  if (p0.values.minCoeff() <= 0.0)
    throw std::invalid_argument("prior_kl_ball_mass: p0 must be positive on [0,1]");

  const DyadicPartition part(level);
  const auto nb = part.num_bins();

  // per-bin Simpson (33 nodes) of p0, p0 log p0 and p0 log^2 p0; the draw
  // loop then only touches per-bin totals
  constexpr int nodes = 33;
  Eigen::VectorXd mass(nb), s_log(nb), s_log2(nb);
  for (Eigen::Index l = 0; l < nb; ++l) {
    const double a = part.left(l), b = part.right(l);
    const double h = (b - a) / (nodes - 1);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double x = a + h * j;
      const double w = (j == 0 || j == nodes - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      const double p = std::max(interpolate(p0, x), 1e-300);
      const double lp = std::log(p);
      m0 += w * p;
      m1 += w * p * lp;
      m2 += w * p * lp * lp;
    }
    const double scale = h / 3.0;
    mass[l] = m0 * scale;
    s_log[l] = m1 * scale;
    s_log2[l] = m2 * scale;
  }

  Rng rng(seed);
  const Eigen::VectorXd prior_params = Eigen::VectorXd::Ones(nb);
  const double eps2 = eps * eps;
  Eigen::Index accept = 0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::VectorXd w = rng.dirichlet(prior_params);
    double kl = 0.0, kl2 = 0.0;
    for (Eigen::Index l = 0; l < nb; ++l) {
      const double logv = std::log(std::max(w[l] * static_cast<double>(nb), 1e-300));
      kl += s_log[l] - logv * mass[l];
      kl2 += logv * logv * mass[l] - 2.0 * logv * s_log[l] + s_log2[l];
    }
    if (kl <= eps2 && kl2 <= eps2) accept++;
  }
  return static_cast<double>(accept) / static_cast<double>(m);
}

}  // namespace supdens
