#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "supdens/approx.hpp"
#include "supdens/densities.hpp"
#include "supdens/grid.hpp"

namespace supdens {

//! Conjugate posterior over dyadic histogram weights: a flat Dirichlet prior
//! on the bin weights updated with the bin counts.
struct HistogramPosterior {
  DyadicPartition partition;
  Eigen::VectorXi counts;
  Eigen::Index n;

  //! posterior Dirichlet parameters (1 + N_1, ..., 1 + N_B)
  Eigen::VectorXd dirichlet_params() const {
    return counts.cast<double>().array() + 1.0;
  }
};

HistogramPosterior fit_histogram(const SampleSet& samples, int level);

//! posterior-mean density value per bin: (1 + N_l) / (B + n) * B
Eigen::VectorXd bayes_mean_values(const HistogramPosterior& post);
GridFunction bayes_mean(const HistogramPosterior& post, const Grid& grid);

//! posterior draws as per-bin density values (rows are draws)
Eigen::MatrixXd sample_posterior_values(const HistogramPosterior& post, Eigen::Index m,
                                        std::uint64_t seed);
std::vector<GridFunction> sample_posterior(const HistogramPosterior& post, Eigen::Index m,
                                           std::uint64_t seed, const Grid& grid);

//! resolution schedule: 2^J ~ (n / log n)^{1/(2 alpha + 1)}, rounded
int choose_resolution(Eigen::Index n, double alpha);

//! per-bin range of a tabulated function, for exact sup distances against
//! step functions (grid nodes on bin boundaries belong to both bins)
struct BinExtrema {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};
BinExtrema bin_extrema(const GridFunction& p0, int level);

double sup_distance(const Eigen::VectorXd& bin_values, const BinExtrema& ext);
double l1_distance(const Eigen::VectorXd& bin_values, const GridFunction& p0, int level);

//! fraction of m posterior draws at sup distance >= radius from p0
double posterior_supnorm_mass(const HistogramPosterior& post, const GridFunction& p0,
                              double radius, Eigen::Index m, std::uint64_t seed);

//! Monte Carlo mass the flat prior puts on the Kullback-Leibler
//! neighborhood { -\int p0 log(p/p0) <= eps^2, \int p0 log^2(p/p0) <= eps^2 }
double prior_kl_ball_mass(int level, const GridFunction& p0, double eps, Eigen::Index m,
                          std::uint64_t seed);

}  // namespace supdens
