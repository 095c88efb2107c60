#pragma once

// Composite (real-stacked) and augmented (conjugate-stacked) representations
// of complex vectors and matrices, related by the fixed transform
//
//   T = [[I,  jI],
//        [I, -jI]],      T T^H = T^H T = 2 I.
//
// A composite vector v = [Re z; Im z] maps to the augmented vector
// T v = [z; conj(z)], and a real composite covariance C maps to the augmented
// covariance T C T^H = [[A, B], [conj(B), conj(A)]].

#include <complex>

#include <Eigen/Core>

#include "wcgpr/linalg.hpp"

namespace wcgpr {

using cdouble = std::complex<double>;

inline constexpr double kStructureTolerance = 1e-10;

/// Real vector [Re z; Im z] of even length 2n.
class CompositeVector {
 public:
  CompositeVector() = default;
  /// Throws StructuralError for odd length or non-finite entries.
  explicit CompositeVector(Eigen::VectorXd data);

  static CompositeVector from_complex(const Eigen::VectorXcd& z);

  const Eigen::VectorXd& data() const { return data_; }
  Eigen::Index half_size() const { return data_.size() / 2; }
  Eigen::VectorXcd to_complex() const;

 private:
  Eigen::VectorXd data_;
};

/// Augmented vector [z; conj(z)]. Only z is stored, so the conjugate-stack
/// invariant holds exactly.
class AugmentedVector {
 public:
  AugmentedVector() = default;
  explicit AugmentedVector(Eigen::VectorXcd top) : top_(std::move(top)) {}

  /// Validates a full 2n stacked vector. The bottom half must equal the
  /// conjugate of the top half within `rel_tol` times the largest magnitude.
  static AugmentedVector from_stacked(const Eigen::VectorXcd& stacked,
                                      double rel_tol = 1e-12);

  const Eigen::VectorXcd& top() const { return top_; }
  Eigen::Index half_size() const { return top_.size(); }
  Eigen::VectorXcd materialize() const;

 private:
  Eigen::VectorXcd top_;
};

/// 2n x 2m matrix [[A, B], [conj(B), conj(A)]] stored as its generating blocks.
class AugmentedMatrix {
 public:
  AugmentedMatrix() = default;
  AugmentedMatrix(Eigen::MatrixXcd upper_left, Eigen::MatrixXcd upper_right);

  const Eigen::MatrixXcd& upper_left() const { return a_; }
  const Eigen::MatrixXcd& upper_right() const { return b_; }
  Eigen::Index block_rows() const { return a_.rows(); }
  Eigen::Index block_cols() const { return a_.cols(); }

  Eigen::MatrixXcd materialize() const;

  AugmentedMatrix operator+(const AugmentedMatrix& other) const;
  AugmentedMatrix operator-(const AugmentedMatrix& other) const;
  AugmentedMatrix operator*(const AugmentedMatrix& other) const;
  AugmentedVector operator*(const AugmentedVector& v) const;
  /// Conjugate transpose, which keeps the augmented pattern.
  AugmentedMatrix adjoint() const;

 private:
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd b_;
};

/// The four real blocks of a composite matrix [[rr, ri], [ir, ii]].
struct CompositeBlocks {
  Eigen::MatrixXd rr, ri, ir, ii;

  Eigen::MatrixXd assemble() const;
  Eigen::Index block_rows() const { return rr.rows(); }
  Eigen::Index block_cols() const { return rr.cols(); }
};

/// Dense T for block size n.
Eigen::MatrixXcd transform_matrix(Eigen::Index n);

AugmentedVector augmented_from_half(const Eigen::VectorXcd& z);

/// T v.
AugmentedVector to_augmented(const CompositeVector& v);
/// (1/2) T^H z.
CompositeVector to_composite(const AugmentedVector& z);
CompositeVector to_composite(const Eigen::VectorXcd& stacked, double rel_tol = 1e-12);

/// Throws StructuralError when the block dimensions differ.
AugmentedMatrix augmented_from_blocks(Eigen::MatrixXcd a, Eigen::MatrixXcd b);

/// Augmented image T_n C T_m^H of a real composite matrix.
AugmentedMatrix augmented_from_composite(const CompositeBlocks& c);

/// Blocks of (1/4) T_n^H M T_m. For square M the upper-left block must be
/// Hermitian and the upper-right symmetric within `rel_tol`, otherwise the
/// composite matrix would not be real symmetric and StructuralError is thrown.
CompositeBlocks composite_blocks(const AugmentedMatrix& m, double rel_tol = kStructureTolerance);
Eigen::MatrixXd composite_matrix(const AugmentedMatrix& m, double rel_tol = kStructureTolerance);

struct AugmentedValidation {
  bool square = false;
  double hermitian_residual = 0.0;  // max |A - A^H| / max |entry|
  double symmetry_residual = 0.0;   // max |B - B^T| / max |entry|
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool passed = false;
};

/// Checks that a square augmented matrix is a valid covariance: Hermitian A,
/// symmetric B and a positive semidefinite materialization
/// (min eigenvalue >= -rel_tol * max eigenvalue).
AugmentedValidation validate_augmented_covariance(const AugmentedMatrix& m,
                                                  double rel_tol = kStructureTolerance);

/// Factorization of an augmented covariance through its real composite form.
/// Immutable after construction.
class AugmentedFactorization {
 public:
  explicit AugmentedFactorization(const AugmentedMatrix& m, const JitterPolicy& jitter = {},
                                  double rel_tol = kStructureTolerance);

  Eigen::Index block_size() const { return n_; }
  double jitter() const { return chol_.jitter; }

  AugmentedVector solve(const AugmentedVector& rhs) const;
  /// M^{-1} R for an augmented right-hand side with block_rows == block_size.
  AugmentedMatrix solve(const AugmentedMatrix& rhs) const;
  /// Solves the composite system C x = b.
  Eigen::VectorXd solve_composite(const Eigen::VectorXd& b) const;
  /// log det of the composite matrix (jitter included).
  double composite_log_det() const;

 private:
  Eigen::MatrixXcd solve_complex_rhs(const Eigen::MatrixXcd& rhs) const;

  Eigen::Index n_ = 0;
  JitteredCholesky<Eigen::MatrixXd> chol_;
};

/// Solves M x = rhs for a valid augmented covariance M.
AugmentedVector solve_augmented(const AugmentedMatrix& m, const AugmentedVector& rhs,
                                const JitterPolicy& jitter = {});

}  // namespace wcgpr
