#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "supdens/approx.hpp"
#include "supdens/fourier.hpp"

using namespace supdens;

TEST_CASE("characteristic functions") {
  SUBCASE("closed forms") {
    const CharFunction lap = characteristic_function(DensitySpec::from_name("laplace"));
    CHECK(lap.evaluate(1.0).real() == doctest::Approx(0.5));
    CHECK(lap.evaluate(0.0).real() == doctest::Approx(1.0));
    const CharFunction two = characteristic_function(DensitySpec::from_name("laplace-2atom"));
    CHECK(two.evaluate(0.0).real() == doctest::Approx(1.0));
    const CharFunction uni = characteristic_function(DensitySpec::from_name("uniform"));
    CHECK(std::abs(uni.evaluate(0.0) - 1.0) < 1e-9);
  }
  SUBCASE("numeric transform of the tabulated laplace matches the closed form") {
    const DensitySpec lap = DensitySpec::from_name("laplace");
    const CharFunction num = characteristic_function(lap.tabulate());
    double sup = 0.0;
    for (double t = -20.0; t <= 20.0; t += 0.25)
      sup = std::max(sup, std::abs(num.evaluate(t) - std::complex<double>(1.0 / (1.0 + t * t))));
    CHECK(sup < 1e-4);
  }
  SUBCASE("any density transform is 1 at zero") {
    for (const char* name : {"uniform", "lipschitz-sine", "holder-0.5", "laplace-2atom"}) {
      const CharFunction cf = characteristic_function(DensitySpec::from_name(name));
      CHECK(std::abs(cf.evaluate(0.0) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("algebraic decay estimation") {
  Eigen::VectorXd ts(60);
  for (Eigen::Index i = 0; i < ts.size(); ++i)
    ts[i] = 50.0 * std::pow(10.0, static_cast<double>(i) / 59.0);

  SUBCASE("laplace decays at degree 2 with constant 1") {
    const DecayEstimate d =
        estimate_decay(characteristic_function(DensitySpec::from_name("laplace")), ts);
    CHECK(std::abs(d.beta - 2.0) < 0.02);
    CHECK(std::abs(d.B - 1.0) < 0.02);
    CHECK(d.residual < 1e-3);
  }
  SUBCASE("laplace convolved with itself decays at degree 4") {
    const CharFunction sq{[](double t) {
                            const double v = 1.0 / (1.0 + t * t);
                            return std::complex<double>(v * v, 0.0);
                          },
                          true, "laplace*laplace"};
    const DecayEstimate d = estimate_decay(sq, ts);
    CHECK(std::abs(d.beta - 4.0) < 0.05);
  }
  SUBCASE("synthetic |t|^-beta inputs are recovered to 1e-6") {
    for (const double beta : {0.7, 1.3, 2.37}) {
      const CharFunction cf{[beta](double t) {
                              return std::complex<double>(std::pow(std::abs(t), -beta), 0.0);
                            },
                            true, "synthetic"};
      const DecayEstimate d = estimate_decay(cf, ts);
      CHECK(std::abs(d.beta - beta) < 1e-6);
    }
  }
  SUBCASE("gaussian decay is flagged as non-algebraic") {
    const CharFunction g{[](double t) { return std::complex<double>(std::exp(-t * t / 2), 0.0); },
                         true, "gaussian"};
    Eigen::VectorXd lo(20), hi(20);
    for (Eigen::Index i = 0; i < 20; ++i) {
      lo[i] = 2.0 + 8.0 * static_cast<double>(i) / 19.0;
      hi[i] = 5.0 + 10.0 * static_cast<double>(i) / 19.0;
    }
    const DecayEstimate dl = estimate_decay(g, lo);
    const DecayEstimate dh = estimate_decay(g, hi);
    CHECK(dh.beta > dl.beta + 5.0);  // estimate drifts upward with the window
    CHECK(dh.residual > 0.1);
  }
}

TEST_CASE("bias integral") {
  const CharFunction gauss{[](double t) { return std::complex<double>(std::exp(-t * t / 2), 0.0); },
                           true, "gaussian"};
  SUBCASE("matches a brute-force riemann sum within 0.1%") {
    const double val = bias_integral(gauss, 2.0);
    const double ref = oracles::riemann(
        [](double t) {
          const double d = 1.0 - std::exp(-t * t / 2);
          return d * d / (t * t * t * t);
        },
        -100.0, 100.0, 1000000);
    CHECK(val == doctest::Approx(ref).epsilon(1e-3));
  }
  SUBCASE("beta at or below one half diverges") {
    CHECK_THROWS_AS(bias_integral(gauss, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(bias_integral(gauss, 0.5), std::invalid_argument);
  }
  SUBCASE("integrand at the origin scales like variance squared") {
    auto smoothed = [](double v) {
      return CharFunction{[v](double t) {
                            return std::complex<double>(std::exp(-v * t * t / 2), 0.0);
                          },
                          true, "gaussian-v"};
    };
    auto origin_value = [&](double v) {
      const double t = 1e-3;
      const double d = std::abs(1.0 - smoothed(v).evaluate(t));
      return d * d / (t * t * t * t);
    };
    const double r = origin_value(1e-2) / origin_value(1e-3);
    CHECK(r == doctest::Approx(100.0).epsilon(1e-3));
    CHECK(bias_integral(smoothed(1e-2), 2.0) < 1e-2);
  }
  SUBCASE("tail part is pointwise nonincreasing in beta") {
    // t^{-2 beta} decreases in beta only for |t| >= 1; the origin part can
    // grow, so monotonicity is asserted on the split tail integral
    auto tail = [&](double beta) {
      return oracles::riemann(
          [&](double t) {
            const double d = 1.0 - std::exp(-t * t / 2);
            return d * d * std::pow(t, -2.0 * beta);
          },
          1.0, 300.0, 400000);
    };
    double prev = std::numeric_limits<double>::infinity();
    for (const double beta : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      CHECK(bias_integral(gauss, beta) >= 0.0);
      const double v = tail(beta);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("moment limits of [1 - transform] / t^r") {
  SUBCASE("gaussian second moment") {
    const auto [limit, target] = moment_limit_check(gaussian_kernel(), 2);
    CHECK(target == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(limit - target) < 1e-3);
  }
  SUBCASE("laplace second moment") {
    const auto [limit, target] = moment_limit_check(laplace_kernel(), 2);
    CHECK(target == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(limit - target) < 1e-3);
  }
  SUBCASE("nonvanishing lower moments are rejected") {
    CHECK_THROWS_AS(moment_limit_check(gaussian_kernel(), 3), std::invalid_argument);
  }
}

TEST_CASE("L2 smoothing-rate limit") {
  const DensitySpec lap = DensitySpec::from_name("laplace");
  const KernelSpec gauss = gaussian_kernel();

  SUBCASE("ratio near one and monotone over shrinking bandwidths") {
    Eigen::VectorXd deltas(4);
    deltas << 1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5);
    const auto rows = smoothing_rate_check(lap, gauss, 2.0, deltas);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio > rows[i - 1].ratio);
    CHECK(std::abs(rows[2].ratio - 1.0) < 0.1);  // delta = 1e-2
    CHECK(rows[3].ratio < 1.0 + 1e-6);
  }
  SUBCASE("log-log slope of the squared error recovers 2(beta - 1/2) = 3") {
    Eigen::VectorXd deltas(3);
    deltas << 1e-2, std::pow(10.0, -2.5), 1e-3;
    const auto rows = smoothing_rate_check(lap, gauss, 2.0, deltas);
    Eigen::VectorXd x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = std::log(rows[i].delta);
      y[i] = std::log(rows[i].l2sq);
    }
    const auto [slope, icpt] = oracles::least_squares(x, y);
    CHECK(std::abs(slope - 3.0) < 0.05);
  }
  SUBCASE("non-algebraic truths are refused") {
    CHECK_THROWS(smoothing_rate_check(DensitySpec::from_name("uniform"), gauss, 2.0,
                                      Eigen::VectorXd::Constant(1, 1e-2)));
  }
}

TEST_CASE("parseval consistency of the squared smoothing error") {
  // space route: smooth() at level 2 is convolution with bandwidth 1/4
  const DensitySpec lap = DensitySpec::from_name("laplace");
  const GridFunction p = lap.tabulate();
  const GridFunction sm = smooth(p, ApproxOperator::convolution(gaussian_kernel(), 2));
  const double space = std::pow(norm(sm - p, Norm::L2), 2);

  Eigen::VectorXd deltas(1);
  deltas << 0.25;
  const auto rows = smoothing_rate_check(lap, gaussian_kernel(), 2.0, deltas);
  CHECK(space == doctest::Approx(rows[0].l2sq).epsilon(5e-3));
}
