#include "wcgpr/noise.hpp"

#include <cmath>
#include <string>

#include "wcgpr/errors.hpp"

namespace wcgpr {

void NoiseModel::validate() const {
  if (!std::isfinite(sigma2) || sigma2 < 0.0) {
    throw StructuralError("noise variance must be finite and non-negative, got " + std::to_string(sigma2));
  }
  if (!(std::abs(rho) <= 1.0 + 1e-15)) {
    throw StructuralError("complementary coefficient must satisfy |rho| <= 1, got |rho| = " +
                          std::to_string(std::abs(rho)));
  }
}

Eigen::Matrix2d NoiseModel::composite_covariance() const {
  Eigen::Matrix2d c;
  c << sigma2 * (1.0 + rho.real()) / 2.0, sigma2 * rho.imag() / 2.0,
       sigma2 * rho.imag() / 2.0, sigma2 * (1.0 - rho.real()) / 2.0;
  return c;
}

}  // namespace wcgpr
