#pragma once

#include <array>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "wcgpr/errors.hpp"

namespace wcgpr {

/// Diagonal loading applied when a Cholesky factorization fails. Each factor
/// is multiplied by the mean of the diagonal and added to it; attempts stop at
/// the first success.
struct JitterPolicy {
  bool enabled = true;
  std::array<double, 3> factors{1e-12, 1e-10, 1e-8};

  static JitterPolicy disabled() {
    JitterPolicy p;
    p.enabled = false;
    return p;
  }
};

template <typename MatrixType>
struct JitteredCholesky {
  Eigen::LLT<MatrixType> llt;
  double jitter = 0.0;  // absolute amount added to the diagonal
};

/// Cholesky of a Hermitian (or real symmetric) positive definite matrix,
/// escalating diagonal jitter on failure. Throws SingularMatrixError naming
/// `what` after the last attempt.
template <typename MatrixType>
JitteredCholesky<MatrixType> cholesky_with_jitter(const MatrixType& m, const JitterPolicy& policy,
                                                  const std::string& what) {
  JitteredCholesky<MatrixType> out;
  if (m.rows() != m.cols()) throw StructuralError(what + ": matrix is not square");
  out.llt.compute(m);
  if (out.llt.info() == Eigen::Success) return out;
  if (!policy.enabled) throw SingularMatrixError(what + ": Cholesky factorization failed (jitter disabled)");

  const double diag_mean = std::real(m.diagonal().mean());
  const double scale = diag_mean > 0.0 ? diag_mean : 1.0;
  for (double factor : policy.factors) {
    MatrixType loaded = m;
    const double jitter = factor * scale;
    loaded.diagonal().array() += jitter;
    out.llt.compute(loaded);
    if (out.llt.info() == Eigen::Success) {
      out.jitter = jitter;
      return out;
    }
  }
  throw SingularMatrixError(what + ": Cholesky factorization failed after jitter escalation");
}

}  // namespace wcgpr
