#include "supdens/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace supdens {

Grid::Grid(double lo_, double hi_, Eigen::Index m_) : lo(lo_), hi(hi_), m(m_) {
  if (!(lo < hi)) throw std::invalid_argument("Grid: lo must be smaller than hi");
  if (m < 2) throw std::invalid_argument("Grid: needs at least two points");
}

GridFunction::GridFunction(Grid g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.m)
    throw std::invalid_argument("GridFunction: value count does not match grid");
  if (!values.allFinite()) throw std::invalid_argument("GridFunction: values must be finite");
}

namespace {
void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
}
}  // namespace

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  return GridFunction(f.grid, f.values + g.values);
}

GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  return GridFunction(f.grid, f.values - g.values);
}

GridFunction operator*(double a, const GridFunction& f) {
  return GridFunction(f.grid, a * f.values);
}

double trapezoid(const GridFunction& f) {
  const double h = f.grid.spacing();
  const Eigen::Index m = f.grid.m;
  double s = f.values.segment(1, m - 2).sum();
  s += 0.5 * (f.values[0] + f.values[m - 1]);
  return s * h;
}

double norm(const GridFunction& f, Norm which) {
  switch (which) {
    case Norm::L1:
      return trapezoid(GridFunction(f.grid, f.values.cwiseAbs()));
    case Norm::L2:
      return std::sqrt(trapezoid(GridFunction(f.grid, f.values.cwiseAbs2())));
    case Norm::Sup:
      return f.values.cwiseAbs().maxCoeff();
  }
  throw std::invalid_argument("norm: unknown kind");
}

double weighted_l1_norm(const GridFunction& f, double s) {
  if (s < 0.0) throw std::invalid_argument("weighted_l1_norm: s must be nonnegative");
  const Eigen::VectorXd x = f.grid.points();
  Eigen::VectorXd w =
      f.values.cwiseAbs().cwiseProduct((1.0 + x.cwiseAbs().array()).pow(s).matrix());
  return trapezoid(GridFunction(f.grid, std::move(w)));
}

double lp_norm(const GridFunction& f, double s) {
  if (!(s > 1.0) || std::isinf(s)) throw std::invalid_argument("lp_norm: need 1 < s < inf");
  Eigen::VectorXd w = f.values.cwiseAbs().array().pow(s).matrix();
  return std::pow(trapezoid(GridFunction(f.grid, std::move(w))), 1.0 / s);
}

bool interpolation_check(const GridFunction& f, const GridFunction& g, double s) {
  require_same_grid(f, g);
  const GridFunction d = f - g;
  const double ls = lp_norm(d, s);
  return ls <= std::max(norm(d, Norm::L1), norm(d, Norm::Sup)) + 1e-9;
}

bool is_density(const GridFunction& f, double tol) {
  if ((f.values.array() < -1e-12).any()) return false;
  return std::abs(trapezoid(f) - 1.0) <= tol;
}

double interpolate(const GridFunction& f, double x) {
  if (x < f.grid.lo || x > f.grid.hi) return 0.0;
  const double h = f.grid.spacing();
  const double pos = (x - f.grid.lo) / h;
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), f.grid.m - 2);
  const double frac = pos - static_cast<double>(i);
  return f.values[i] * (1.0 - frac) + f.values[i + 1] * frac;
}

}  // namespace supdens
