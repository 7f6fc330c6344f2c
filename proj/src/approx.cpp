#include "supdens/approx.hpp"

#include <cmath>
#include <stdexcept>

namespace supdens {

DyadicPartition::DyadicPartition(int level_) : level(level_) {
  if (level < 0) throw std::invalid_argument("DyadicPartition: level must be nonnegative");
}

Eigen::Index DyadicPartition::bin_index(double x) const {
  if (x < 0.0 || x > 1.0) throw std::domain_error("DyadicPartition: point outside [0,1]");
  const auto nb = num_bins();
  // ceil(2^J x) lands boundary points in the bin closed on the right
  auto l = static_cast<Eigen::Index>(std::ceil(x * static_cast<double>(nb)));
  return std::clamp<Eigen::Index>(l - 1, 0, nb - 1);
}

ApproxOperator ApproxOperator::convolution(KernelSpec k, int level) {
  if (level < 0) throw std::invalid_argument("ApproxOperator: level must be nonnegative");
  return ApproxOperator{OperatorKind::convolution, level, std::move(k)};
}

ApproxOperator ApproxOperator::haar(int level) {
  if (level < 0) throw std::invalid_argument("ApproxOperator: level must be nonnegative");
  return ApproxOperator{OperatorKind::haar_projection, level, std::nullopt};
}

double evaluate(const ApproxOperator& op, double x, double y) {
  const double scale = std::ldexp(1.0, op.level);  // 2^j
  if (op.kind == OperatorKind::convolution) return scale * op.kernel->evaluate(scale * (x - y));
  const DyadicPartition part(op.level);
  return part.bin_index(x) == part.bin_index(y) ? scale : 0.0;
}

namespace {

//! checks that the dyadic cells at `level` align with the grid nodes
Eigen::Index cell_stride(const Grid& grid, int level) {
  if (grid.lo != 0.0 || grid.hi != 1.0)
    throw std::domain_error("haar operator needs the unit-interval grid");
  const Eigen::Index nb = Eigen::Index(1) << level;
  if ((grid.m - 1) % nb != 0)
    throw std::domain_error("grid does not align with the dyadic cells");
  return (grid.m - 1) / nb;
}

}  // namespace

GridFunction cells_to_grid(const Eigen::VectorXd& cell_values, const Grid& grid) {
  const auto nb = cell_values.size();
  int level = 0;
  while ((Eigen::Index(1) << level) < nb) ++level;
  if ((Eigen::Index(1) << level) != nb)
    throw std::invalid_argument("cells_to_grid: cell count must be a power of two");
  const Eigen::Index stride = cell_stride(grid, level);
  Eigen::VectorXd out(grid.m);
  for (Eigen::Index l = 0; l < nb; ++l)
    out.segment(l * stride, stride).setConstant(cell_values[l]);
  out[grid.m - 1] = cell_values[nb - 1];
  for (Eigen::Index l = 1; l < nb; ++l)
    out[l * stride] = 0.5 * (cell_values[l - 1] + cell_values[l]);
  return GridFunction(grid, std::move(out));
}

Eigen::VectorXd cell_means(const GridFunction& p, int level) {
  const Eigen::Index stride = cell_stride(p.grid, level);
  const auto nb = Eigen::Index(1) << level;
  const double h = p.grid.spacing();
  const double width = 1.0 / static_cast<double>(nb);
  Eigen::VectorXd means(nb);
  for (Eigen::Index l = 0; l < nb; ++l) {
    const Eigen::Index a = l * stride;
    if (stride >= 4) {
      // trapezoid over the interior window [a+h, b-h]; centered, so it is
      // second-order for smooth p and exact for cell-materialized step
      // functions whose boundary nodes carry two-sided averages
      double s = 0.5 * (p.values[a + 1] + p.values[a + stride - 1]);
      s += p.values.segment(a + 2, stride - 3).sum();
      means[l] = s / static_cast<double>(stride - 2);
    } else {
      double s = 0.5 * (p.values[a] + p.values[a + stride]);
      s += p.values.segment(a + 1, stride - 1).sum();
      means[l] = s * h / width;
    }
  }
  return means;
}

Eigen::VectorXi cell_counts(const SampleSet& samples, int level) {
  const DyadicPartition part(level);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(part.num_bins());
  for (Eigen::Index i = 0; i < samples.values.size(); ++i)
    counts[part.bin_index(samples.values[i])]++;
  return counts;
}

GridFunction density_estimate(const SampleSet& samples, const ApproxOperator& op,
                              const Grid& grid) {
  const auto n = samples.values.size();
  if (n < 1) throw std::invalid_argument("density_estimate: empty sample");

  if (op.kind == OperatorKind::haar_projection) {
    const Eigen::VectorXi counts = cell_counts(samples, op.level);
    const double scale = std::ldexp(1.0, op.level);
    const Eigen::VectorXd vals =
        counts.cast<double>() * (scale / static_cast<double>(n));
    return cells_to_grid(vals, grid);
  }

  const KernelSpec& k = *op.kernel;
  const double scale = std::ldexp(1.0, op.level);
  const double h = grid.spacing();
  const double radius = k.support_radius / scale;
  const auto window = static_cast<Eigen::Index>(std::ceil(radius / h));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.m);
  const double w = scale / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = samples.values[i];
    const auto center = static_cast<Eigen::Index>(std::round((xi - grid.lo) / h));
    const Eigen::Index a = std::max<Eigen::Index>(0, center - window);
    const Eigen::Index b = std::min<Eigen::Index>(grid.m - 1, center + window);
    for (Eigen::Index j = a; j <= b; ++j)
      out[j] += w * k.evaluate(scale * (grid.point(j) - xi));
  }
  return GridFunction(grid, std::move(out));
}

GridFunction smooth(const GridFunction& p, const ApproxOperator& op) {
  if (op.kind == OperatorKind::haar_projection)
    return cells_to_grid(cell_means(p, op.level), p.grid);

  const KernelSpec& k = *op.kernel;
  const double scale = std::ldexp(1.0, op.level);
  const Grid& g = p.grid;
  const double h = g.spacing();
  const double radius = k.support_radius / scale;
  const auto window = static_cast<Eigen::Index>(std::ceil(radius / h));
  Eigen::VectorXd out(g.m);
  for (Eigen::Index i = 0; i < g.m; ++i) {
    const Eigen::Index a = std::max<Eigen::Index>(0, i - window);
    const Eigen::Index b = std::min<Eigen::Index>(g.m - 1, i + window);
    double s = 0.0;
    for (Eigen::Index j = a; j <= b; ++j) {
      double term = k.evaluate(scale * (g.point(i) - g.point(j))) * p.values[j];
      if (j == 0 || j == g.m - 1) term *= 0.5;
      s += term;
    }
    out[i] = s * scale * h;
  }
  return GridFunction(g, std::move(out));
}

double approximation_bias(const GridFunction& p, const ApproxOperator& op, Norm which) {
  return norm(smooth(p, op) - p, which);
}

DominatingKernel dominating(const ApproxOperator& op) {
  if (op.kind == OperatorKind::convolution) {
    const KernelSpec k = *op.kernel;
    return DominatingKernel{[k](double u) { return std::abs(k.evaluate(u)); }, k.l1_norm};
  }
  // |K(x,y)| <= 1{|x-y| < 1}; the unit-mass majorant matches the exact
  // L1 bound ||K_j(., x)||_1 = 1 of the projection
  return DominatingKernel{[](double u) { return std::abs(u) <= 1.0 ? 1.0 : 0.0; }, 1.0};
}

}  // namespace supdens
