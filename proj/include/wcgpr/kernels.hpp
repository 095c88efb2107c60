#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "wcgpr/augmented.hpp"
#include "wcgpr/synthesis.hpp"

namespace wcgpr {

/// m points of dimension d, stored as the columns of a d x m matrix.
class ComplexInputSet {
 public:
  ComplexInputSet() : points_(1, 0) {}
  /// Throws StructuralError for d < 1 or non-finite coordinates.
  explicit ComplexInputSet(Eigen::MatrixXcd points);

  /// d = 1 set from a list of complex scalars.
  static ComplexInputSet from_scalars(const Eigen::VectorXcd& values);

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }
  const Eigen::MatrixXcd& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.col(i); }

  ComplexInputSet subset(const std::vector<Eigen::Index>& indices) const;

 private:
  Eigen::MatrixXcd points_;
};

using KernelArg = Eigen::Ref<const Eigen::VectorXcd>;
using KernelFunction = std::function<cdouble(const KernelArg&, const KernelArg&)>;

/// Covariance k(x, x') = E[f(x) conj(f(x'))] and pseudo-covariance
/// k~(x, x') = E[f(x) f(x')] of a zero-mean complex process.
struct KernelPair {
  KernelFunction k;
  KernelFunction k_tilde;  // empty when the pair is proper
  nlohmann::json descriptor;

  bool is_proper() const { return !k_tilde; }
};

struct GramPair {
  Eigen::MatrixXcd k;
  Eigen::MatrixXcd k_tilde;
};

GramPair gram(const KernelPair& kp, const ComplexInputSet& x, const ComplexInputSet& x2);
/// [[K, K~], [conj(K~), conj(K)]] between x and x2.
AugmentedMatrix augmented_gram(const KernelPair& kp, const ComplexInputSet& x,
                               const ComplexInputSet& x2);
/// Real covariance blocks of (Re f, Im f) between x and x2.
CompositeBlocks composite_gram(const KernelPair& kp, const ComplexInputSet& x,
                               const ComplexInputSet& x2);

/// Pair with k~ identically zero.
KernelPair proper_pair(KernelFunction k, nlohmann::json descriptor = {});

/// k(x, x') = signal_variance * exp(-|x - x'|^2 / (2 length_scale^2)) and
/// k~ = pseudo_ratio * k. Valid for |pseudo_ratio| <= 1.
KernelPair squared_exponential_pair(double signal_variance, double length_scale,
                                    cdouble pseudo_ratio = {0.0, 0.0});

/// Exact second-order functions of the process synthesized from `filters`.
/// Both are stationary in the lag x - x' and are tabulated at the integer grid
/// lags by direct 2-D cross-correlation; other lags interpolate bilinearly and
/// lags beyond the correlation support evaluate to zero. Inputs must have d = 1.
KernelPair filter_induced_kernel(const DiscreteFilters& filters, double re_spacing,
                                 double im_spacing);
KernelPair filter_induced_kernel(const DiscreteFilters& filters);
KernelPair filter_induced_kernel(const WidelyLinearFilterModel& model);

/// Rebuilds a pair from its descriptor (see README for the schema).
KernelPair kernel_from_descriptor(const nlohmann::json& descriptor);

struct KernelValidation {
  double hermitian_residual = 0.0;
  double symmetry_residual = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool passed = false;
};

/// Residuals are relative to the largest Gram entry. Never throws for a
/// failing pair; the report carries the failure.
KernelValidation validate_kernel_pair(const KernelPair& kp, const ComplexInputSet& x,
                                      double tol = kStructureTolerance);

}  // namespace wcgpr
