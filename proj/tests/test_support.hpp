#pragma once

// Random instance generators and independent oracles shared by the unit and
// acceptance suites. Nothing here calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wcgpr/augmented.hpp"
#include "wcgpr/estimators.hpp"
#include "wcgpr/kernels.hpp"
#include "wcgpr/synthesis.hpp"

namespace wcgpr::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::MatrixXcd random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = {re, im};
    }
  }
  return m;
}

inline std::complex<double> random_in_disc(Rng& rng, double radius) {
  return std::polar(radius * std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, 0.0, 2.0 * M_PI));
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// max |a - b| / max(max |b|, floor).
template <typename A, typename B>
double rel_error(const A& a, const B& b, double floor = 1e-300) {
  const Eigen::MatrixXcd ca = a.template cast<std::complex<double>>();
  const Eigen::MatrixXcd cb = b.template cast<std::complex<double>>();
  if (ca.size() == 0) return 0.0;
  return (ca - cb).cwiseAbs().maxCoeff() / std::max(cb.cwiseAbs().maxCoeff(), floor);
}

/// Augmented covariance of z = G w + H conj(w), w proper white: always valid.
struct RandomAugmentedCov {
  Eigen::MatrixXcd cov;
  Eigen::MatrixXcd pseudo;
};

inline RandomAugmentedCov random_augmented_cov(Rng& rng, Eigen::Index dim, Eigen::Index sources) {
  const Eigen::MatrixXcd g = random_complex(rng, dim, sources);
  const Eigen::MatrixXcd h = random_complex(rng, dim, sources, uniform(rng, 0.1, 0.9));
  return {g * g.adjoint() + h * h.adjoint(), g * h.transpose() + h * g.transpose()};
}

/// Joint (f, y) second-order statistics with p signal and n measurement entries.
inline SecondOrderStats random_stats(Rng& rng, Eigen::Index p, Eigen::Index n) {
  const Eigen::Index dim = p + n;
  const RandomAugmentedCov joint = random_augmented_cov(rng, dim, 2 * dim + 2);
  SecondOrderStats s;
  s.signal_cov = joint.cov.topLeftCorner(p, p);
  s.cross_cov = joint.cov.topRightCorner(p, n);
  s.cross_pseudo_cov = joint.pseudo.topRightCorner(p, n);
  s.meas_cov = joint.cov.bottomRightCorner(n, n);
  s.meas_pseudo_cov = joint.pseudo.bottomRightCorner(n, n);
  return s;
}

inline Eigen::MatrixXcd augment(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return AugmentedMatrix(a, b).materialize();
}

/// Dense (1/4) T^H M T, computed by explicit multiplication.
inline Eigen::MatrixXd dense_composite(const Eigen::MatrixXcd& full) {
  const Eigen::Index n = full.rows() / 2;
  const Eigen::Index m = full.cols() / 2;
  const Eigen::MatrixXcd c = 0.25 * transform_matrix(n).adjoint() * full * transform_matrix(m);
  return c.real();
}

inline ComplexInputSet random_inputs(Rng& rng, Eigen::Index d, Eigen::Index m, double spread = 2.0) {
  return ComplexInputSet(random_complex(rng, d, m, spread));
}

/// A valid improper pair for inputs of any dimension: the sum of two
/// squared-exponential pairs with independent pseudo ratios.
inline KernelPair random_improper_pair(Rng& rng) {
  const KernelPair a = squared_exponential_pair(uniform(rng, 0.5, 2.0), uniform(rng, 0.6, 1.5),
                                                random_in_disc(rng, 0.95));
  const KernelPair b = squared_exponential_pair(uniform(rng, 0.2, 1.0), uniform(rng, 1.5, 3.0),
                                                random_in_disc(rng, 0.95));
  KernelPair out;
  out.k = [a, b](const KernelArg& x, const KernelArg& y) { return a.k(x, y) + b.k(x, y); };
  out.k_tilde = [a, b](const KernelArg& x, const KernelArg& y) { return a.k_tilde(x, y) + b.k_tilde(x, y); };
  out.descriptor = {{"type", "sum"}};
  return out;
}

/// Small grid with the default filter shapes for Monte-Carlo checks.
inline WidelyLinearFilterModel small_model(std::array<double, 4> amplitudes = {4.0, 5.0, 1.0, -3.0},
                                           Eigen::Index count = 9, double half_width = 0.8) {
  WidelyLinearFilterModel m;
  m.gamma = 0.6;
  m.amplitudes = amplitudes;
  m.grid.re = {-half_width, half_width, count};
  m.grid.im = {-half_width, half_width, count};
  m.normalize = true;
  return m;
}

/// Mean of a complex sample and its per-component standard errors.
struct MeanWithError {
  std::complex<double> mean;
  double se_re = 0.0;
  double se_im = 0.0;

  bool within(std::complex<double> expected, double k = 3.0) const {
    return std::abs(mean.real() - expected.real()) <= k * se_re + 1e-15 &&
           std::abs(mean.imag() - expected.imag()) <= k * se_im + 1e-15;
  }
};

inline MeanWithError mean_with_error(const std::vector<std::complex<double>>& samples) {
  const double count = static_cast<double>(samples.size());
  std::complex<double> mean{0.0, 0.0};
  for (auto s : samples) mean += s;
  mean /= count;
  double var_re = 0.0, var_im = 0.0;
  for (auto s : samples) {
    var_re += (s.real() - mean.real()) * (s.real() - mean.real());
    var_im += (s.imag() - mean.imag()) * (s.imag() - mean.imag());
  }
  var_re /= (count - 1.0);
  var_im /= (count - 1.0);
  return {mean, std::sqrt(var_re / count), std::sqrt(var_im / count)};
}

/// Brute-force lag correlation sum_q a[q] conj?(b[q - lag]) over all taps.
inline std::complex<double> naive_correlation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                              Eigen::Index lr, Eigen::Index lc, bool conj_b) {
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const Eigen::Index br = r - lr;
      const Eigen::Index bc = c - lc;
      if (br < 0 || bc < 0 || br >= b.rows() || bc >= b.cols()) continue;
      acc += a(r, c) * (conj_b ? std::conj(b(br, bc)) : b(br, bc));
    }
  }
  return acc;
}

/// Minimum eigenvalue over maximum of a Hermitian matrix.
inline std::pair<double, double> eig_range(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

}  // namespace wcgpr::testing
