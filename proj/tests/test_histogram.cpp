#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "supdens/histogram.hpp"
#include "supdens/ratestudy.hpp"
#include "supdens/rng.hpp"

using namespace supdens;

namespace {
SampleSet manual(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const double x : xs) v[i++] = x;
  return SampleSet{std::move(v), 0, "manual"};
}
}  // namespace

TEST_CASE("histogram fitting") {
  SUBCASE("empty sample gives zero counts") {
    const HistogramPosterior post = fit_histogram(SampleSet{Eigen::VectorXd(), 0, "m"}, 3);
    CHECK(post.counts.sum() == 0);
    CHECK(post.n == 0);
  }
  SUBCASE("hand binning at level 1") {
    const HistogramPosterior post = fit_histogram(manual({0.1, 0.4, 0.9}), 1);
    CHECK(post.counts[0] == 2);
    CHECK(post.counts[1] == 1);
  }
  SUBCASE("bins are closed on the right") {
    const HistogramPosterior post = fit_histogram(manual({0.5}), 1);
    CHECK(post.counts[0] == 1);
    CHECK(post.counts[1] == 0);
  }
  SUBCASE("points outside the unit interval are rejected") {
    CHECK_THROWS_AS(fit_histogram(manual({0.2, 1.4}), 2), std::domain_error);
  }
  SUBCASE("conjugacy: counts add over concatenated samples") {
    const SampleSet a = sample(DensitySpec::from_name("lipschitz-sine"), 500, 1);
    const SampleSet b = sample(DensitySpec::from_name("lipschitz-sine"), 300, 2);
    Eigen::VectorXd both(800);
    both << a.values, b.values;
    const auto pa = fit_histogram(a, 3), pb = fit_histogram(b, 3);
    const auto pc = fit_histogram(SampleSet{both, 0, "concat"}, 3);
    CHECK(pc.counts == pa.counts + pb.counts);
  }
}

TEST_CASE("posterior mean histogram") {
  SUBCASE("no data gives the uniform density") {
    const HistogramPosterior post = fit_histogram(SampleSet{Eigen::VectorXd(), 0, "m"}, 4);
    const Eigen::VectorXd vals = bayes_mean_values(post);
    CHECK((vals.array() - 1.0).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("closed form at level 1 with counts (2,0)") {
    const HistogramPosterior post = fit_histogram(manual({0.2, 0.3}), 1);
    const Eigen::VectorXd vals = bayes_mean_values(post);
    CHECK(vals[0] == doctest::Approx(1.5));
    CHECK(vals[1] == doctest::Approx(0.5));
  }
  SUBCASE("bounded by the number of bins") {
    const SampleSet s = sample(DensitySpec::from_name("lipschitz-sine"), 2000, 5);
    for (const int J : {1, 3, 5}) {
      const Eigen::VectorXd vals = bayes_mean_values(fit_histogram(s, J));
      CHECK(vals.maxCoeff() <= std::ldexp(1.0, J));
    }
  }
  SUBCASE("materialized mean integrates to one exactly") {
    const SampleSet s = sample(DensitySpec::from_name("lipschitz-sine"), 999, 6);
    const GridFunction f = bayes_mean(fit_histogram(s, 3), Grid::unit(1025));
    CHECK(trapezoid(f) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("matches the Monte Carlo mean of posterior draws") {
    const SampleSet s = sample(DensitySpec::from_name("lipschitz-sine"), 400, 7);
    const HistogramPosterior post = fit_histogram(s, 3);
    const Eigen::MatrixXd draws = sample_posterior_values(post, 20000, 8);
    const Eigen::VectorXd closed = bayes_mean_values(post);
    for (Eigen::Index l = 0; l < draws.cols(); ++l) {
      const double mean = draws.col(l).mean();
      const double sd =
          std::sqrt((draws.col(l).array() - mean).square().sum() / (draws.rows() - 1));
      CHECK(std::abs(mean - closed[l]) < 4.0 * sd / std::sqrt(double(draws.rows())));
    }
  }
}

TEST_CASE("posterior sampling") {
  const SampleSet s = sample(DensitySpec::from_name("lipschitz-sine"), 600, 9);
  const HistogramPosterior post = fit_histogram(s, 3);
  const Eigen::MatrixXd draws = sample_posterior_values(post, 20000, 10);
  const auto nb = post.partition.num_bins();

  SUBCASE("each draw is a density") {
    for (Eigen::Index r = 0; r < 50; ++r) {
      CHECK(draws.row(r).minCoeff() >= 0.0);
      CHECK(draws.row(r).sum() / static_cast<double>(nb) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("per-bin variance matches the dirichlet moments") {
    const Eigen::VectorXd params = post.dirichlet_params();
    const double a0 = params.sum();
    for (Eigen::Index l = 0; l < nb; ++l) {
      const Eigen::ArrayXd w = draws.col(l).array() / static_cast<double>(nb);
      const double mean = w.mean();
      const double var = (w - mean).square().sum() / (draws.rows() - 1);
      const double target = params[l] * (a0 - params[l]) / (a0 * a0 * (a0 + 1.0));
      // moment-based error of a variance estimate
      const double m4 = (w - mean).pow(4).sum() / draws.rows();
      const double mc_sigma = std::sqrt((m4 - var * var) / draws.rows());
      CHECK(std::abs(var - target) < 6.0 * mc_sigma);
    }
  }
  SUBCASE("deterministic per seed") {
    const Eigen::MatrixXd again = sample_posterior_values(post, 5, 10);
    CHECK(again == draws.topRows(5));
  }
  SUBCASE("grid materialization matches the bin values") {
    const auto fns = sample_posterior(post, 3, 11, Grid::unit(1025));
    CHECK(fns.size() == 3);
    for (const auto& f : fns) CHECK(trapezoid(f) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("resolution schedule") {
  CHECK(choose_resolution(4096, 1.0) == 3);
  CHECK(choose_resolution(1 << 17, 1.0) == 4);
  CHECK(choose_resolution(1024, 0.5) == 4);
  SUBCASE("monotone in n") {
    int prev = 0;
    for (Eigen::Index n = 64; n <= (1 << 20); n *= 2) {
      const int J = choose_resolution(n, 1.0);
      CHECK(J >= prev);
      prev = J;
    }
  }
  CHECK_THROWS_AS(choose_resolution(1, 1.0), std::invalid_argument);
}

TEST_CASE("posterior sup-norm mass") {
  const DensitySpec spec = DensitySpec::from_name("lipschitz-sine");
  const GridFunction p0 = spec.tabulate(Grid::unit());
  const Eigen::Index n = 4096;
  const int J = choose_resolution(n, 1.0);
  const HistogramPosterior post = fit_histogram(sample(spec, n, 21), J);

  SUBCASE("extreme radii") {
    CHECK(posterior_supnorm_mass(post, p0, 1e6, 500, 1) == 0.0);
    CHECK(posterior_supnorm_mass(post, p0, 1e-12, 500, 1) == 1.0);
  }
  SUBCASE("monotone nonincreasing in the radius for a fixed stream") {
    double prev = 1.0;
    for (const double radius : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      const double mass = posterior_supnorm_mass(post, p0, radius, 2000, 2);
      CHECK(mass <= prev + 1e-12);
      prev = mass;
    }
  }
  SUBCASE("small mass outside three rate-radii") {
    const double eps = rate_point(n, 1.0);
    CHECK(posterior_supnorm_mass(post, p0, 3.0 * eps, 2000, 3) < 0.1);
  }
}

TEST_CASE("prior mass of the KL neighborhood") {
  const Grid g = Grid::unit(4097);
  const GridFunction uniform(g, Eigen::VectorXd::Ones(g.m));

  SUBCASE("huge ball captures the whole simplex") {
    CHECK(prior_kl_ball_mass(2, uniform, 10.0, 4000, 4) == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("two-bin case matches a one-dimensional integral oracle") {
    const double eps = 0.1;
    // w ~ U(0,1); p = (2w, 2(1-w)); acceptance region by midpoint rule
    const Eigen::Index nn = 400000;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double w = (static_cast<double>(i) + 0.5) / static_cast<double>(nn);
      const double kl = -0.5 * (std::log(2.0 * w) + std::log(2.0 * (1.0 - w)));
      const double kl2 = 0.5 * (std::pow(std::log(2.0 * w), 2) + std::pow(std::log(2.0 * (1.0 - w)), 2));
      if (kl <= eps * eps && kl2 <= eps * eps) acc += 1.0;
    }
    const double oracle = acc / static_cast<double>(nn);
    const Eigen::Index m = 40000;
    const double mass = prior_kl_ball_mass(1, uniform, eps, m, 5);
    const double mc_sigma = std::sqrt(std::max(oracle * (1 - oracle), 1e-12) / double(m));
    CHECK(std::abs(mass - oracle) < 3.0 * mc_sigma);
  }
  SUBCASE("nonincreasing as the ball shrinks, same stream") {
    double prev = 1.0;
    for (const double eps : {1.0, 0.5, 0.2, 0.1}) {
      const double mass = prior_kl_ball_mass(1, uniform, eps, 20000, 6);
      CHECK(mass <= prev + 1e-12);
      prev = mass;
    }
  }
  SUBCASE("rejects nonpositive truths") {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(g.m);
    v[5] = 0.0;
    CHECK_THROWS_AS(prior_kl_ball_mass(1, GridFunction(g, v), 0.1, 10, 7),
                    std::invalid_argument);
  }
}
