#pragma once

#include <optional>

#include <Eigen/Core>

#include "supdens/densities.hpp"
#include "supdens/grid.hpp"
#include "supdens/kernels.hpp"

namespace supdens {

//! Dyadic partition of [0,1] at a given level: bin 1 is [0, 2^-J], bin l is
//! ((l-1) 2^-J, l 2^-J] for l >= 2 (bins closed on the right).
struct DyadicPartition {
  int level;

  explicit DyadicPartition(int level_);
  Eigen::Index num_bins() const { return Eigen::Index(1) << level; }
  double width() const { return 1.0 / static_cast<double>(num_bins()); }
  double left(Eigen::Index l) const { return width() * static_cast<double>(l); }
  double right(Eigen::Index l) const { return width() * static_cast<double>(l + 1); }
  //! zero-based bin index; throws for x outside [0,1]
  Eigen::Index bin_index(double x) const;
};

enum class OperatorKind { convolution, haar_projection };

//! Scaled family of smoothing operators at resolution 2^level: either
//! convolution with a kernel or the projection onto dyadic step functions.
struct ApproxOperator {
  OperatorKind kind;
  int level;
  std::optional<KernelSpec> kernel;  // convolution kind only

  static ApproxOperator convolution(KernelSpec k, int level);
  static ApproxOperator haar(int level);
};

//! operator value at (x, y): 2^j K(2^j(x-y)) or the dyadic cell indicator
double evaluate(const ApproxOperator& op, double x, double y);

//! sample-average estimate: mean over i of the operator at (., X_i)
GridFunction density_estimate(const SampleSet& samples, const ApproxOperator& op,
                              const Grid& grid);

//! applies the operator to a tabulated density
GridFunction smooth(const GridFunction& p, const ApproxOperator& op);

//! norm of smooth(p, op) - p
double approximation_bias(const GridFunction& p, const ApproxOperator& op, Norm which);

DominatingKernel dominating(const ApproxOperator& op);

//! per-cell averages 2^j \int_cell p (requires p on [0,1] with aligned grid)
Eigen::VectorXd cell_means(const GridFunction& p, int level);

//! per-cell counts of the sample
Eigen::VectorXi cell_counts(const SampleSet& samples, int level);

//! Materializes per-cell density values on a grid over [0,1]. Nodes on cell
//! boundaries take the two-sided average so the grid trapezoid reproduces
//! the exact integral of the step function.
GridFunction cells_to_grid(const Eigen::VectorXd& cell_values, const Grid& grid);

}  // namespace supdens
