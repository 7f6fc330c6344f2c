#pragma once

#include <Eigen/Core>

namespace supdens {

enum class Norm { L1, L2, Sup };

//! Uniform grid on [lo, hi] with m nodes.
struct Grid {
  double lo;
  double hi;
  Eigen::Index m;

  Grid(double lo_, double hi_, Eigen::Index m_);

  double spacing() const { return (hi - lo) / static_cast<double>(m - 1); }
  double point(Eigen::Index i) const { return lo + spacing() * static_cast<double>(i); }
  Eigen::VectorXd points() const { return Eigen::VectorXd::LinSpaced(m, lo, hi); }

  bool operator==(const Grid& o) const { return lo == o.lo && hi == o.hi && m == o.m; }

  static constexpr Eigen::Index default_points = (1 << 14) + 1;
  //! default grid for studies on [0, 1]
  static Grid unit(Eigen::Index m = default_points) { return Grid(0.0, 1.0, m); }
  //! default grid for mixtures with mixing support [-a, a]
  static Grid mixture(double a, Eigen::Index m = default_points) {
    return Grid(-a - 8.0, a + 8.0, m);
  }
};

//! A function tabulated on a uniform grid; the common currency for
//! densities, estimators and biases.
struct GridFunction {
  Grid grid;
  Eigen::VectorXd values;

  GridFunction(Grid g, Eigen::VectorXd v);
};

GridFunction operator+(const GridFunction& f, const GridFunction& g);
GridFunction operator-(const GridFunction& f, const GridFunction& g);
GridFunction operator*(double a, const GridFunction& f);

//! composite trapezoid of the tabulated values
double trapezoid(const GridFunction& f);

//! L1/L2 norms by composite trapezoid, sup-norm as max of |values|
double norm(const GridFunction& f, Norm which);

//! \int |f(x)| (1+|x|)^s dx
double weighted_l1_norm(const GridFunction& f, double s);

//! L^s norm, trapezoid of |f|^s then s-th root; requires 1 < s < inf
double lp_norm(const GridFunction& f, double s);

//! whether ||f-g||_s <= max(||f-g||_1, ||f-g||_inf) + 1e-9
bool interpolation_check(const GridFunction& f, const GridFunction& g, double s);

bool is_density(const GridFunction& f, double tol = 1e-8);

//! linear interpolation; 0 outside the grid
double interpolate(const GridFunction& f, double x);

}  // namespace supdens
