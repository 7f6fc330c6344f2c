#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace supdens {

//! A convolution kernel: pointwise evaluation, Fourier transform when a
//! closed form exists (all catalog kernels are symmetric, so the transform
//! is real), L1 norm, polynomial moments and the verified number of
//! vanishing moments.
struct KernelSpec {
  std::string name;
  std::function<double(double)> evaluate;
  std::function<double(double)> fourier;  // empty when no closed form
  double l1_norm = 1.0;
  Eigen::VectorXd moments;  // \int x^k K(x) dx for k = 0..3
  int vanishing_up_to = 0;
  double support_radius = 10.0;  // |K| negligible beyond this
};

KernelSpec gaussian_kernel();
KernelSpec laplace_kernel();

//! Kernel built in the Fourier domain: the transform equals 1 on |t| <= 1,
//! tapers as cos^2(pi(|t|-1)/2) on [1, 2] and vanishes beyond. Since the
//! transform is flat near 0, every polynomial moment above order 0
//! vanishes; beta only records the order the caller relies on.
KernelSpec bandlimited_kernel(double beta);

//! "gaussian", "laplace", "bandlimited:<beta>"
KernelSpec kernel_from_name(const std::string& name);

//! nonnegative convolution majorant: |K_j(x,y)| <= 2^j phi(2^j |x-y|)
struct DominatingKernel {
  std::function<double(double)> phi;
  double l1_norm;
};

}  // namespace supdens
