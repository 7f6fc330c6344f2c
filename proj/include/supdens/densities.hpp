#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "supdens/grid.hpp"

namespace supdens {

struct Interval {
  double lo;
  double hi;
};

//! A catalog density with known regularity: evaluable pdf and cdf, declared
//! Hoelder exponent, and a fixed working domain.
//!
//! Catalog names: "uniform", "lipschitz-sine", "holder-<alpha>" (e.g.
//! "holder-0.5"), "laplace", "laplace-2atom".
class DensitySpec {
 public:
  static DensitySpec from_name(const std::string& name);

  const std::string& name() const { return name_; }
  double alpha() const { return alpha_; }
  Interval domain() const { return domain_; }
  const Eigen::VectorXd& params() const { return params_; }

  double pdf(double x) const;
  double cdf(double x) const;

  Grid default_grid(Eigen::Index m = Grid::default_points) const;
  GridFunction tabulate() const;
  GridFunction tabulate(const Grid& grid) const;

 private:
  enum class Family { uniform, lipschitz_sine, holder, laplace, laplace_two_atom };

  DensitySpec(Family f, std::string name, double alpha, Interval dom, Eigen::VectorXd params);

  Family family_;
  std::string name_;
  double alpha_;
  Interval domain_;
  Eigen::VectorXd params_;
};

//! i.i.d. draws from a catalog density; reproducible per (source, n, seed)
struct SampleSet {
  Eigen::VectorXd values;
  std::uint64_t seed;
  std::string source;
};

//! inverse-cdf sampling on a tabulated cdf with monotone linear interpolation
SampleSet sample(const DensitySpec& spec, Eigen::Index n, std::uint64_t seed);

}  // namespace supdens
