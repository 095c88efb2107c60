#pragma once

// Widely linear and strictly linear MMSE estimation, and Gaussian process
// regression for complex outputs in three forms: composite (real bivariate),
// widely complex (kernel plus pseudo-kernel through the augmented
// covariance) and strictly complex (kernel only).

#include <Eigen/Core>

#include "wcgpr/augmented.hpp"
#include "wcgpr/kernels.hpp"
#include "wcgpr/linalg.hpp"
#include "wcgpr/noise.hpp"

namespace wcgpr {

/// Second-order description of a zero-mean signal f (p entries) and
/// measurement y (n entries).
struct SecondOrderStats {
  Eigen::MatrixXcd cross_cov;         // E[f y^H], p x n
  Eigen::MatrixXcd cross_pseudo_cov;  // E[f y^T], p x n
  Eigen::MatrixXcd meas_cov;          // E[y y^H], n x n
  Eigen::MatrixXcd meas_pseudo_cov;   // E[y y^T], n x n
  Eigen::MatrixXcd signal_cov;        // E[f f^H], p x p

  Eigen::Index signal_size() const { return cross_cov.rows(); }
  Eigen::Index measurement_size() const { return meas_cov.rows(); }
  /// Shape checks only; throws StructuralError.
  void validate() const;
};

struct WlmmseResult {
  Eigen::VectorXcd estimate;
  Eigen::MatrixXcd error_cov;
};

/// Widely linear estimate W1 y + W2 conj(y) written through the Schur
/// complement P = R_yy - R~_yy conj(R_yy)^{-1} conj(R~_yy), together with the
/// error covariance E[e e^H].
WlmmseResult wlmmse(const SecondOrderStats& stats, const Eigen::VectorXcd& y,
                    const JitterPolicy& jitter = {});

/// Strictly linear estimate R_fy R_yy^{-1} y.
Eigen::VectorXcd lmmse(const SecondOrderStats& stats, const Eigen::VectorXcd& y,
                       const JitterPolicy& jitter = {});
/// R_ff - R_fy R_yy^{-1} R_fy^H.
Eigen::MatrixXcd lmmse_error_cov(const SecondOrderStats& stats, const JitterPolicy& jitter = {});

/// R~_fy - R_fy R_yy^{-1} R~_yy. Zero exactly when the widely and strictly
/// linear estimators coincide.
Eigen::MatrixXcd reduction_residual(const SecondOrderStats& stats, const JitterPolicy& jitter = {});

struct PredictiveDistribution {
  Eigen::VectorXcd mean;
  Eigen::MatrixXcd cov;         // Hermitian
  Eigen::MatrixXcd pseudo_cov;  // symmetric
};

struct CompositePredictive {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Real bivariate GP prediction of [Re f*; Im f*]:
///   mean = K(X*, X) C^{-1} y,  cov = K(X*, X*) - K(X*, X) C^{-1} K(X, X*),
/// with C = K(X, X) + noise_cov.
CompositePredictive composite_gpr_predict(const CompositeBlocks& train_train,
                                          const Eigen::MatrixXd& noise_cov,
                                          const CompositeVector& y,
                                          const CompositeBlocks& test_train,
                                          const CompositeBlocks& test_test,
                                          const JitterPolicy& jitter = {});

/// Augmented noise covariance (sigma2 I, rho sigma2 I) for n samples.
AugmentedMatrix augmented_noise_cov(const NoiseModel& noise, Eigen::Index n);

/// Widely complex GPR conditioned on training data. The augmented covariance
/// of the observations is factorized once at construction; the object is
/// immutable afterwards and may be queried concurrently.
class WidelyGpr {
 public:
  WidelyGpr(KernelPair kernel, const NoiseModel& noise, ComplexInputSet x, const Eigen::VectorXcd& y,
            const JitterPolicy& jitter = {});

  Eigen::VectorXcd mean(const ComplexInputSet& x_star) const;
  PredictiveDistribution predict(const ComplexInputSet& x_star) const;
  /// Weights alpha in [alpha; conj(alpha)] = C_aug^{-1} [y; conj(y)].
  const Eigen::VectorXcd& weights() const { return alpha_; }

 private:
  KernelPair kernel_;
  ComplexInputSet x_;
  AugmentedFactorization factorization_;
  Eigen::VectorXcd alpha_;
};

PredictiveDistribution wcgpr_predict(const KernelPair& kp, const NoiseModel& noise,
                                     const ComplexInputSet& x, const Eigen::VectorXcd& y,
                                     const ComplexInputSet& x_star, const JitterPolicy& jitter = {});

/// Strictly complex GPR: ignores every pseudo-covariance, C = K(X, X) + sigma2 I.
class ProperGpr {
 public:
  ProperGpr(KernelFunction k, double noise_sigma2, ComplexInputSet x, const Eigen::VectorXcd& y,
            const JitterPolicy& jitter = {});

  Eigen::VectorXcd mean(const ComplexInputSet& x_star) const;
  /// pseudo_cov is reported as zero.
  PredictiveDistribution predict(const ComplexInputSet& x_star) const;

 private:
  KernelPair kernel_;
  ComplexInputSet x_;
  JitteredCholesky<Eigen::MatrixXcd> chol_;
  Eigen::VectorXcd alpha_;
};

PredictiveDistribution proper_cgpr_predict(const KernelFunction& k, double noise_sigma2,
                                           const ComplexInputSet& x, const Eigen::VectorXcd& y,
                                           const ComplexInputSet& x_star,
                                           const JitterPolicy& jitter = {});

/// K~(X*, X) - K(X*, X) C^{-1} C~, with C = K + sigma2 I and C~ = K~ + rho sigma2 I.
Eigen::MatrixXcd properness_residual(const KernelPair& kp, const NoiseModel& noise,
                                     const ComplexInputSet& x, const ComplexInputSet& x_star,
                                     const JitterPolicy& jitter = {});

/// Log density of [Re y; Im y] under N(0, C_comp), C_comp the composite form
/// of the augmented observation covariance.
double log_marginal_likelihood(const KernelPair& kp, const NoiseModel& noise,
                               const ComplexInputSet& x, const Eigen::VectorXcd& y,
                               const JitterPolicy& jitter = {});

}  // namespace wcgpr
