#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "supdens/approx.hpp"
#include "supdens/densities.hpp"
#include "supdens/grid.hpp"

namespace supdens {

//! Configuration of the goodness-of-fit test: reject when the estimator is
//! farther than M0 * eps_nr from the null density in the chosen norm.
struct TestConfig {
  Norm r;                // L1 or Sup
  ApproxOperator op;     // estimator operator (its level plays the role of J)
  double M0;             // threshold multiplier
  double eps_nr;         // rate point the threshold scales with
  double phi_l1;         // L1 norm of the dominating kernel
};

struct TestReport {
  double statistic;  // distance of the estimate from the null
  double threshold;  // M0 * eps_nr
  bool reject;
  double h_value;    // ||estimate - smoothed null||_1, the concentrating statistic
  double mcdiarmid_bound_at_threshold;
};

//! distance of the estimator from the null density in the configured norm
double test_statistic(const SampleSet& samples, const GridFunction& p0, const TestConfig& cfg);

//! two-sided bounded-differences tail 2 exp(-n t^2 / (2 phi_l1^2))
double mcdiarmid_bound(Eigen::Index n, double t, double phi_l1);

TestReport run_test(const SampleSet& samples, const GridFunction& p0, const TestConfig& cfg);

//! Monte Carlo mean of h = ||estimate - smoothed null||_1 against the
//! explicit cap L sqrt(2^J / n) with
//! L = sqrt(2/(s-1)) ||Phi^2||_{L1(mu_s)}^{1/2} ||p0||_{L1(mu_s)}^{1/2}, s = 2.
//! Returns (mean, cap).
std::pair<double, double> expectation_bound_check(const DensitySpec& p0, const TestConfig& cfg,
                                                  Eigen::Index n, int reps, std::uint64_t seed);

//! empirical rejection rate under p0 and acceptance rate under p1, with a
//! shared replication seed stream. Returns (type I, type II).
std::pair<double, double> error_rates(const DensitySpec& p0, const DensitySpec& p1,
                                      const TestConfig& cfg, Eigen::Index n, int reps,
                                      std::uint64_t seed);

}  // namespace supdens
