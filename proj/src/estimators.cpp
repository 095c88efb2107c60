#include "wcgpr/estimators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wcgpr/errors.hpp"

namespace wcgpr {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw StructuralError(what);
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

Eigen::MatrixXcd symmetric_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

void check_blocks(const CompositeBlocks& b, Eigen::Index rows, Eigen::Index cols, const char* name) {
  for (const Eigen::MatrixXd* m : {&b.rr, &b.ri, &b.ir, &b.ii}) {
    require(m->rows() == rows && m->cols() == cols,
            std::string(name) + " blocks must be " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void SecondOrderStats::validate() const {
  const Eigen::Index p = cross_cov.rows();
  const Eigen::Index n = cross_cov.cols();
  require(cross_pseudo_cov.rows() == p && cross_pseudo_cov.cols() == n,
          "cross pseudo-covariance must match the cross covariance shape");
  require(meas_cov.rows() == n && meas_cov.cols() == n, "measurement covariance must be n x n");
  require(meas_pseudo_cov.rows() == n && meas_pseudo_cov.cols() == n,
          "measurement pseudo-covariance must be n x n");
  require(signal_cov.rows() == p && signal_cov.cols() == p, "signal covariance must be p x p");
}

WlmmseResult wlmmse(const SecondOrderStats& stats, const Eigen::VectorXcd& y, const JitterPolicy& jitter) {
  stats.validate();
  require(y.size() == stats.measurement_size(), "measurement length does not match the statistics");
  const auto& r_fy = stats.cross_cov;
  const auto& rt_fy = stats.cross_pseudo_cov;
  const auto& r_yy = stats.meas_cov;
  const auto& rt_yy = stats.meas_pseudo_cov;

  const auto chol_r = cholesky_with_jitter(hermitian_part(r_yy), jitter, "measurement covariance");
  // R^{-1} R~; its conjugate is R^{-*} R~*.
  const Eigen::MatrixXcd r_inv_rt = chol_r.llt.solve(rt_yy);
  const Eigen::MatrixXcd schur = hermitian_part(r_yy - rt_yy * r_inv_rt.conjugate());
  const auto chol_p = cholesky_with_jitter(schur, jitter, "Schur complement P_yy");

  const Eigen::MatrixXcd g1 = r_fy - rt_fy * r_inv_rt.conjugate();
  const Eigen::MatrixXcd g2 = rt_fy - r_fy * r_inv_rt;

  // P^{-*} y* = conj(P^{-1} y).
  const Eigen::VectorXcd u = chol_p.llt.solve(y);
  WlmmseResult out;
  out.estimate = g1 * u + g2 * u.conjugate();

  const Eigen::MatrixXcd p_inv_rfh = chol_p.llt.solve(r_fy.adjoint());
  const Eigen::MatrixXcd p_inv_rtft = chol_p.llt.solve(rt_fy.transpose());
  out.error_cov = hermitian_part(stats.signal_cov - g1 * p_inv_rfh - g2 * p_inv_rtft.conjugate());
  return out;
}

Eigen::VectorXcd lmmse(const SecondOrderStats& stats, const Eigen::VectorXcd& y, const JitterPolicy& jitter) {
  stats.validate();
  require(y.size() == stats.measurement_size(), "measurement length does not match the statistics");
  const auto chol = cholesky_with_jitter(hermitian_part(stats.meas_cov), jitter, "measurement covariance");
  return stats.cross_cov * chol.llt.solve(y);
}

Eigen::MatrixXcd lmmse_error_cov(const SecondOrderStats& stats, const JitterPolicy& jitter) {
  stats.validate();
  const auto chol = cholesky_with_jitter(hermitian_part(stats.meas_cov), jitter, "measurement covariance");
  return hermitian_part(stats.signal_cov - stats.cross_cov * chol.llt.solve(stats.cross_cov.adjoint()));
}

Eigen::MatrixXcd reduction_residual(const SecondOrderStats& stats, const JitterPolicy& jitter) {
  stats.validate();
  const auto chol = cholesky_with_jitter(hermitian_part(stats.meas_cov), jitter, "measurement covariance");
  return stats.cross_pseudo_cov - stats.cross_cov * chol.llt.solve(stats.meas_pseudo_cov);
}

CompositePredictive composite_gpr_predict(const CompositeBlocks& train_train,
                                          const Eigen::MatrixXd& noise_cov, const CompositeVector& y,
                                          const CompositeBlocks& test_train,
                                          const CompositeBlocks& test_test, const JitterPolicy& jitter) {
  const Eigen::Index n = train_train.block_rows();
  const Eigen::Index m = test_test.block_rows();
  check_blocks(train_train, n, n, "training covariance");
  check_blocks(test_train, m, n, "test/training covariance");
  check_blocks(test_test, m, m, "test covariance");
  require(noise_cov.rows() == 2 * n && noise_cov.cols() == 2 * n, "noise covariance must be 2n x 2n");
  require(y.half_size() == n, "composite observations must have length 2n");

  const Eigen::MatrixXd c = symmetric_part(Eigen::MatrixXd(train_train.assemble() + noise_cov));
  const auto chol = cholesky_with_jitter(c, jitter, "composite observation covariance");
  const Eigen::MatrixXd cross = test_train.assemble();

  CompositePredictive out;
  out.mean = cross * chol.llt.solve(y.data());
  out.cov = symmetric_part(Eigen::MatrixXd(test_test.assemble() - cross * chol.llt.solve(cross.transpose())));
  return out;
}

AugmentedMatrix augmented_noise_cov(const NoiseModel& noise, Eigen::Index n) {
  noise.validate();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  return {noise.sigma2 * eye, noise.pseudo_variance() * eye};
}

namespace {

AugmentedMatrix observation_cov(const KernelPair& kp, const NoiseModel& noise, const ComplexInputSet& x) {
  return augmented_gram(kp, x, x) + augmented_noise_cov(noise, x.size());
}

}  // namespace

WidelyGpr::WidelyGpr(KernelPair kernel, const NoiseModel& noise, ComplexInputSet x,
                     const Eigen::VectorXcd& y, const JitterPolicy& jitter)
    : kernel_(std::move(kernel)),
      x_(std::move(x)),
      factorization_(observation_cov(kernel_, noise, x_), jitter) {
  require(y.size() == x_.size(), "training outputs and inputs differ in count");
  require(y.allFinite(), "training outputs must be finite");
  alpha_ = factorization_.solve(AugmentedVector(y)).top();
}

Eigen::VectorXcd WidelyGpr::mean(const ComplexInputSet& x_star) const {
  const GramPair cross = gram(kernel_, x_star, x_);
  return cross.k * alpha_ + cross.k_tilde * alpha_.conjugate();
}

PredictiveDistribution WidelyGpr::predict(const ComplexInputSet& x_star) const {
  const GramPair cross = gram(kernel_, x_star, x_);
  const GramPair prior = gram(kernel_, x_star, x_star);
  // K_aug(X, X*) = K_aug(X*, X)^H.
  const AugmentedMatrix train_test(cross.k.adjoint(), cross.k_tilde.transpose());
  const AugmentedMatrix solved = factorization_.solve(train_test);

  PredictiveDistribution out;
  out.mean = cross.k * alpha_ + cross.k_tilde * alpha_.conjugate();
  out.cov = hermitian_part(prior.k - (cross.k * solved.upper_left() +
                                      cross.k_tilde * solved.upper_right().conjugate()));
  out.pseudo_cov = symmetric_part(Eigen::MatrixXcd(
      prior.k_tilde - (cross.k * solved.upper_right() + cross.k_tilde * solved.upper_left().conjugate())));
  return out;
}

PredictiveDistribution wcgpr_predict(const KernelPair& kp, const NoiseModel& noise,
                                     const ComplexInputSet& x, const Eigen::VectorXcd& y,
                                     const ComplexInputSet& x_star, const JitterPolicy& jitter) {
  return WidelyGpr(kp, noise, x, y, jitter).predict(x_star);
}

ProperGpr::ProperGpr(KernelFunction k, double noise_sigma2, ComplexInputSet x, const Eigen::VectorXcd& y,
                     const JitterPolicy& jitter)
    : kernel_(proper_pair(std::move(k))), x_(std::move(x)) {
  require(noise_sigma2 >= 0.0, "noise variance must be non-negative");
  require(y.size() == x_.size(), "training outputs and inputs differ in count");
  require(y.allFinite(), "training outputs must be finite");
  Eigen::MatrixXcd c = gram(kernel_, x_, x_).k;
  c.diagonal().array() += noise_sigma2;
  chol_ = cholesky_with_jitter(hermitian_part(c), jitter, "proper observation covariance");
  alpha_ = chol_.llt.solve(y);
}

Eigen::VectorXcd ProperGpr::mean(const ComplexInputSet& x_star) const {
  return gram(kernel_, x_star, x_).k * alpha_;
}

PredictiveDistribution ProperGpr::predict(const ComplexInputSet& x_star) const {
  const Eigen::MatrixXcd cross = gram(kernel_, x_star, x_).k;
  const Eigen::MatrixXcd prior = gram(kernel_, x_star, x_star).k;
  PredictiveDistribution out;
  out.mean = cross * alpha_;
  out.cov = hermitian_part(prior - cross * chol_.llt.solve(cross.adjoint()));
  out.pseudo_cov = Eigen::MatrixXcd::Zero(x_star.size(), x_star.size());
  return out;
}

PredictiveDistribution proper_cgpr_predict(const KernelFunction& k, double noise_sigma2,
                                           const ComplexInputSet& x, const Eigen::VectorXcd& y,
                                           const ComplexInputSet& x_star, const JitterPolicy& jitter) {
  return ProperGpr(k, noise_sigma2, x, y, jitter).predict(x_star);
}

Eigen::MatrixXcd properness_residual(const KernelPair& kp, const NoiseModel& noise,
                                     const ComplexInputSet& x, const ComplexInputSet& x_star,
                                     const JitterPolicy& jitter) {
  const AugmentedMatrix c = observation_cov(kp, noise, x);
  const auto chol = cholesky_with_jitter(hermitian_part(c.upper_left()), jitter, "observation covariance C");
  const GramPair cross = gram(kp, x_star, x);
  return cross.k_tilde - cross.k * chol.llt.solve(c.upper_right());
}

double log_marginal_likelihood(const KernelPair& kp, const NoiseModel& noise, const ComplexInputSet& x,
                               const Eigen::VectorXcd& y, const JitterPolicy& jitter) {
  require(y.size() == x.size(), "training outputs and inputs differ in count");
  const AugmentedFactorization factorization(observation_cov(kp, noise, x), jitter);
  const Eigen::VectorXd y_comp = CompositeVector::from_complex(y).data();
  const double quad = y_comp.dot(factorization.solve_composite(y_comp));
  const double n = static_cast<double>(x.size());
  return -0.5 * quad - 0.5 * factorization.composite_log_det() - n * std::log(2.0 * std::numbers::pi);
}

}  // namespace wcgpr
