#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "supdens/densities.hpp"
#include "supdens/grid.hpp"
#include "supdens/kernels.hpp"

namespace supdens {

//! characteristic function / Fourier transform, closed form when available
struct CharFunction {
  std::function<std::complex<double>(double)> evaluate;
  bool closed_form;
  std::string source;
};

CharFunction characteristic_function(const DensitySpec& spec);
CharFunction characteristic_function(const KernelSpec& kernel);
//! numerical transform of a tabulated function
CharFunction characteristic_function(const GridFunction& f);

//! fitted algebraic tail |cf(t)| ~ B |t|^-beta over [t_lo, t_hi]
struct DecayEstimate {
  double beta;
  double B;
  double t_lo;
  double t_hi;
  double residual;  // rms residual of the log-log fit
};

//! least-squares fit of log|cf| against log|t| on the given abscissae
DecayEstimate estimate_decay(const CharFunction& cf, const Eigen::VectorXd& t_grid);

//! \int |1 - h(t)|^2 / |t|^{2 beta} dt for a transform h; the constant in
//! the L2 smoothing-rate limit below. Needs beta > 1/2 and an integrable
//! origin, i.e. |1 - h(t)| ~ c t^gamma with gamma > beta - 1/2.
double bias_integral(const CharFunction& h, double beta);

//! Richardson-extrapolated limit of [1 - h(t)] / t^r as t -> 0 against the
//! moment value -Re(i^r)/r! \int x^r h(x) dx
std::pair<double, double> moment_limit_check(const KernelSpec& h, int r);

struct SmoothingRateRow {
  double delta;
  double l2sq;   // ||p - p * h_delta||_2^2 via Parseval quadrature
  double ratio;  // against delta^{2 beta - 1} (2 pi)^{-1} B^2 bias_integral
};

//! verifies the L2 smoothing-rate limit
//!   delta^{-(2 beta - 1)} ||p - p*h_delta||_2^2 -> (2 pi)^{-1} B^2 I[h]
//! for a density whose transform decays algebraically of degree beta
std::vector<SmoothingRateRow> smoothing_rate_check(const DensitySpec& p, const KernelSpec& h,
                                                   double beta, const Eigen::VectorXd& deltas);

}  // namespace supdens
