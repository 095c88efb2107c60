#pragma once

#include <complex>

#include <Eigen/Core>

namespace wcgpr {

/// Complex Gaussian measurement noise with E[|e|^2] = sigma2 and
/// E[e^2] = rho * sigma2, i.i.d. across samples.
struct NoiseModel {
  double sigma2 = 0.0;
  std::complex<double> rho{0.0, 0.0};

  /// Throws StructuralError unless sigma2 >= 0 and |rho| <= 1.
  void validate() const;

  std::complex<double> pseudo_variance() const { return rho * sigma2; }
  /// Covariance of (Re e, Im e).
  Eigen::Matrix2d composite_covariance() const;
};

}  // namespace wcgpr
