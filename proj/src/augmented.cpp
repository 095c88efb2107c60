#include "wcgpr/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "wcgpr/errors.hpp"

namespace wcgpr {

namespace {

constexpr cdouble kJ{0.0, 1.0};

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double relative(double residual, double scale) {
  return scale > 0.0 ? residual / scale : residual;
}

}  // namespace

CompositeVector::CompositeVector(Eigen::VectorXd data) : data_(std::move(data)) {
  if (data_.size() % 2 != 0) {
    throw StructuralError("composite vector must have even length, got " +
                          std::to_string(data_.size()));
  }
  if (!data_.allFinite()) throw StructuralError("composite vector has non-finite entries");
}

CompositeVector CompositeVector::from_complex(const Eigen::VectorXcd& z) {
  Eigen::VectorXd data(2 * z.size());
  data.head(z.size()) = z.real();
  data.tail(z.size()) = z.imag();
  return CompositeVector(std::move(data));
}

Eigen::VectorXcd CompositeVector::to_complex() const {
  const Eigen::Index n = half_size();
  Eigen::VectorXcd z(n);
  z.real() = data_.head(n);
  z.imag() = data_.tail(n);
  return z;
}

AugmentedVector AugmentedVector::from_stacked(const Eigen::VectorXcd& stacked, double rel_tol) {
  if (stacked.size() % 2 != 0) {
    throw StructuralError("augmented vector must have even length, got " +
                          std::to_string(stacked.size()));
  }
  const Eigen::Index n = stacked.size() / 2;
  const double scale = stacked.size() == 0 ? 0.0 : stacked.cwiseAbs().maxCoeff();
  const double mismatch =
      n == 0 ? 0.0 : (stacked.tail(n) - stacked.head(n).conjugate()).cwiseAbs().maxCoeff();
  if (mismatch > rel_tol * scale) {
    throw StructuralError("bottom half of augmented vector is not the conjugate of the top half");
  }
  return AugmentedVector(stacked.head(n));
}

Eigen::VectorXcd AugmentedVector::materialize() const {
  Eigen::VectorXcd out(2 * top_.size());
  out.head(top_.size()) = top_;
  out.tail(top_.size()) = top_.conjugate();
  return out;
}

AugmentedMatrix::AugmentedMatrix(Eigen::MatrixXcd upper_left, Eigen::MatrixXcd upper_right)
    : a_(std::move(upper_left)), b_(std::move(upper_right)) {
  if (a_.rows() != b_.rows() || a_.cols() != b_.cols()) {
    throw StructuralError("augmented blocks differ in shape: " + std::to_string(a_.rows()) + "x" +
                          std::to_string(a_.cols()) + " vs " + std::to_string(b_.rows()) + "x" +
                          std::to_string(b_.cols()));
  }
}

Eigen::MatrixXcd AugmentedMatrix::materialize() const {
  const Eigen::Index n = a_.rows();
  const Eigen::Index m = a_.cols();
  Eigen::MatrixXcd out(2 * n, 2 * m);
  out.topLeftCorner(n, m) = a_;
  out.topRightCorner(n, m) = b_;
  out.bottomLeftCorner(n, m) = b_.conjugate();
  out.bottomRightCorner(n, m) = a_.conjugate();
  return out;
}

AugmentedMatrix AugmentedMatrix::operator+(const AugmentedMatrix& other) const {
  return {a_ + other.a_, b_ + other.b_};
}

AugmentedMatrix AugmentedMatrix::operator-(const AugmentedMatrix& other) const {
  return {a_ - other.a_, b_ - other.b_};
}

AugmentedMatrix AugmentedMatrix::operator*(const AugmentedMatrix& other) const {
  if (a_.cols() != other.a_.rows()) throw StructuralError("augmented product: inner sizes differ");
  return {a_ * other.a_ + b_ * other.b_.conjugate(), a_ * other.b_ + b_ * other.a_.conjugate()};
}

AugmentedVector AugmentedMatrix::operator*(const AugmentedVector& v) const {
  if (a_.cols() != v.half_size()) throw StructuralError("augmented product: inner sizes differ");
  return AugmentedVector(a_ * v.top() + b_ * v.top().conjugate());
}

AugmentedMatrix AugmentedMatrix::adjoint() const {
  return {a_.adjoint(), b_.transpose()};
}

Eigen::MatrixXd CompositeBlocks::assemble() const {
  const Eigen::Index n = rr.rows();
  const Eigen::Index m = rr.cols();
  Eigen::MatrixXd out(2 * n, 2 * m);
  out.topLeftCorner(n, m) = rr;
  out.topRightCorner(n, m) = ri;
  out.bottomLeftCorner(n, m) = ir;
  out.bottomRightCorner(n, m) = ii;
  return out;
}

Eigen::MatrixXcd transform_matrix(Eigen::Index n) {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd t(2 * n, 2 * n);
  t.topLeftCorner(n, n) = eye;
  t.topRightCorner(n, n) = kJ * eye;
  t.bottomLeftCorner(n, n) = eye;
  t.bottomRightCorner(n, n) = -kJ * eye;
  return t;
}

AugmentedVector augmented_from_half(const Eigen::VectorXcd& z) { return AugmentedVector(z); }

AugmentedVector to_augmented(const CompositeVector& v) { return AugmentedVector(v.to_complex()); }

CompositeVector to_composite(const AugmentedVector& z) { return CompositeVector::from_complex(z.top()); }

CompositeVector to_composite(const Eigen::VectorXcd& stacked, double rel_tol) {
  const AugmentedVector checked = AugmentedVector::from_stacked(stacked, rel_tol);
  const Eigen::Index n = checked.half_size();
  // (1/2) T^H z, evaluated literally so that round-off in the bottom half is averaged in.
  Eigen::VectorXd out(2 * n);
  out.head(n) = (0.5 * (stacked.head(n) + stacked.tail(n))).real();
  out.tail(n) = (0.5 * (-kJ * stacked.head(n) + kJ * stacked.tail(n))).real();
  return CompositeVector(std::move(out));
}

AugmentedMatrix augmented_from_blocks(Eigen::MatrixXcd a, Eigen::MatrixXcd b) {
  return {std::move(a), std::move(b)};
}

AugmentedMatrix augmented_from_composite(const CompositeBlocks& c) {
  Eigen::MatrixXcd a(c.rr.rows(), c.rr.cols());
  Eigen::MatrixXcd b(c.rr.rows(), c.rr.cols());
  a.real() = c.rr + c.ii;
  a.imag() = c.ir - c.ri;
  b.real() = c.rr - c.ii;
  b.imag() = c.ir + c.ri;
  return {std::move(a), std::move(b)};
}

CompositeBlocks composite_blocks(const AugmentedMatrix& m, double rel_tol) {
  const Eigen::MatrixXcd& a = m.upper_left();
  const Eigen::MatrixXcd& b = m.upper_right();
  if (a.rows() == a.cols()) {
    const double scale = std::max(max_abs(a), max_abs(b));
    const double herm = a.size() == 0 ? 0.0 : (a - a.adjoint()).cwiseAbs().maxCoeff();
    const double sym = b.size() == 0 ? 0.0 : (b - b.transpose()).cwiseAbs().maxCoeff();
    if (herm > rel_tol * scale || sym > rel_tol * scale) {
      throw StructuralError(
          "composite matrix would have an asymmetric residual: augmented covariance needs "
          "Hermitian upper-left and symmetric upper-right blocks");
    }
  }
  CompositeBlocks c;
  c.rr = 0.5 * (a + b).real();
  c.ii = 0.5 * (a - b).real();
  c.ir = 0.5 * (a + b).imag();
  c.ri = 0.5 * (b - a).imag();
  return c;
}

Eigen::MatrixXd composite_matrix(const AugmentedMatrix& m, double rel_tol) {
  return composite_blocks(m, rel_tol).assemble();
}

AugmentedValidation validate_augmented_covariance(const AugmentedMatrix& m, double rel_tol) {
  AugmentedValidation report;
  const Eigen::MatrixXcd& a = m.upper_left();
  const Eigen::MatrixXcd& b = m.upper_right();
  report.square = a.rows() == a.cols();
  if (!report.square) return report;
  if (a.size() == 0) {
    report.passed = true;
    return report;
  }
  const double scale = std::max(max_abs(a), max_abs(b));
  report.hermitian_residual = relative((a - a.adjoint()).cwiseAbs().maxCoeff(), scale);
  report.symmetry_residual = relative((b - b.transpose()).cwiseAbs().maxCoeff(), scale);

  const Eigen::MatrixXcd full = m.materialize();
  const Eigen::MatrixXcd herm = 0.5 * (full + full.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.max_eigenvalue = eig.eigenvalues().maxCoeff();

  const double psd_floor = -rel_tol * std::max(report.max_eigenvalue, 0.0);
  report.passed = report.hermitian_residual < rel_tol && report.symmetry_residual < rel_tol &&
                  report.min_eigenvalue >= psd_floor;
  return report;
}

AugmentedFactorization::AugmentedFactorization(const AugmentedMatrix& m, const JitterPolicy& jitter,
                                               double rel_tol)
    : n_(m.block_rows()) {
  if (m.block_rows() != m.block_cols()) {
    throw StructuralError("augmented covariance must be square");
  }
  const Eigen::MatrixXd composite = composite_matrix(m, rel_tol);
  chol_ = cholesky_with_jitter(composite, jitter, "augmented covariance");
}

Eigen::VectorXd AugmentedFactorization::solve_composite(const Eigen::VectorXd& b) const {
  if (b.size() != 2 * n_) throw StructuralError("composite right-hand side has the wrong length");
  return chol_.llt.solve(b);
}

Eigen::MatrixXcd AugmentedFactorization::solve_complex_rhs(const Eigen::MatrixXcd& rhs) const {
  Eigen::MatrixXcd out(rhs.rows(), rhs.cols());
  out.real() = chol_.llt.solve(rhs.real().eval());
  out.imag() = chol_.llt.solve(rhs.imag().eval());
  return out;
}

AugmentedVector AugmentedFactorization::solve(const AugmentedVector& rhs) const {
  if (rhs.half_size() != n_) throw StructuralError("augmented right-hand side has the wrong size");
  // x = T C^{-1} T^H r / 4 and T^H r = 2 [Re r; Im r].
  const Eigen::VectorXd u = chol_.llt.solve(CompositeVector::from_complex(rhs.top()).data());
  Eigen::VectorXcd top(n_);
  top.real() = 0.5 * u.head(n_);
  top.imag() = 0.5 * u.tail(n_);
  return AugmentedVector(std::move(top));
}

AugmentedMatrix AugmentedFactorization::solve(const AugmentedMatrix& rhs) const {
  if (rhs.block_rows() != n_) throw StructuralError("augmented right-hand side has the wrong size");
  const Eigen::MatrixXcd& a = rhs.upper_left();
  const Eigen::MatrixXcd& b = rhs.upper_right();
  const Eigen::Index m = rhs.block_cols();

  // Columns of the left half are [A; conj(B)], of the right half [B; conj(A)].
  auto solve_half = [&](const Eigen::MatrixXcd& top, const Eigen::MatrixXcd& bottom) {
    Eigen::MatrixXcd u(2 * n_, m);
    u.topRows(n_) = top + bottom;
    u.bottomRows(n_) = kJ * (bottom - top);
    const Eigen::MatrixXcd y = solve_complex_rhs(u);
    return Eigen::MatrixXcd(0.25 * (y.topRows(n_) + kJ * y.bottomRows(n_)));
  };
  return {solve_half(a, b.conjugate()), solve_half(b, a.conjugate())};
}

double AugmentedFactorization::composite_log_det() const {
  if (n_ == 0) return 0.0;
  return 2.0 * chol_.llt.matrixLLT().diagonal().array().log().sum();
}

AugmentedVector solve_augmented(const AugmentedMatrix& m, const AugmentedVector& rhs,
                                const JitterPolicy& jitter) {
  return AugmentedFactorization(m, jitter).solve(rhs);
}

}  // namespace wcgpr
