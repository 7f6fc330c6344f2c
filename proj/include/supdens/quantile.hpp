#pragma once

#include <vector>

#include <Eigen/Core>

#include "supdens/grid.hpp"
#include "supdens/kernels.hpp"

namespace supdens {

//! cumulative distribution tabulated on a grid, clamped to [0, 1]
struct CdfFunction {
  Grid grid;
  Eigen::VectorXd values;
};

CdfFunction cdf(const GridFunction& p);

//! smallest grid-interpolated x with F(x) >= tau
double quantile(const CdfFunction& F, double tau);

//! Residual of the quantile translation identity
//!   q - q0 = -[F(q0) - tau] / p(q*),
//! where q* between q0 and q solves F(q) - F(q0) = p(q*)(q - q0) and is
//! found by bisection.
double quantile_translation_residual(const GridFunction& p, const GridFunction& p0, double tau);

//! Decomposition of F(x0) - F0(x0) at x0 near the tau-quantile of p0 into
//!   T1 = \int_{-inf}^{x0} [K_b * p0 - p0],
//!   T2 = \int_{-inf}^{x0} [K_b * (p - p0)],
//!   T3 = \int_{-inf}^{x0} [p - K_b * p],
//! evaluated at the grid node closest to the quantile (the telescoping
//! identity T1 + T2 + T3 = F(x0) - F0(x0) holds at any x0).
struct CdfBiasDecomposition {
  double T1, T2, T3;
  double x0;        // evaluation point (snapped quantile of p0)
  double T1_bound;  // D b^{alpha+1} with the explicit constant D
};

CdfBiasDecomposition cdf_bias_decomposition(const GridFunction& p, const GridFunction& p0,
                                            double tau, double b, const KernelSpec& K,
                                            double alpha, double holder_radius, double zeta);

//! tau-quantile of every draw
Eigen::VectorXd posterior_quantiles(const std::vector<GridFunction>& draws, double tau);

//! exact quantiles for dyadic-histogram draws given as per-bin density
//! values (rows are draws); linear interpolation inside the active bin
Eigen::VectorXd posterior_quantiles_hist(const Eigen::MatrixXd& bin_values, double tau);

struct QuantileReport {
  double tau;
  double q_hat;
  double q0;
  double F_gap;         // |F(q0) - tau|
  double p_at_star_lb;  // inf of p between the two quantiles
};

QuantileReport quantile_report(const GridFunction& p, const GridFunction& p0, double tau);

}  // namespace supdens
