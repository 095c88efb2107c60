#include "wcgpr/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "rng.hpp"
#include "wcgpr/errors.hpp"

namespace wcgpr {

namespace {

constexpr double kTapTruncation = 1e-12;

void validate_axis(const AxisSpec& axis, const char* name) {
  if (axis.count < 1) throw StructuralError(std::string(name) + " axis needs at least one node");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || axis.max < axis.min) {
    throw StructuralError(std::string(name) + " axis has an invalid range");
  }
}

}  // namespace

Eigen::VectorXcd GridSpec::nodes() const {
  Eigen::VectorXcd out(size());
  for (Eigen::Index i = 0; i < re.count; ++i) {
    for (Eigen::Index l = 0; l < im.count; ++l) out(i * im.count + l) = node(i, l);
  }
  return out;
}

void GridSpec::validate() const {
  validate_axis(re, "real");
  validate_axis(im, "imaginary");
}

void WidelyLinearFilterModel::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw StructuralError("filter width gamma must be positive, got " + std::to_string(gamma));
  }
  for (double v : amplitudes) {
    if (!std::isfinite(v)) throw StructuralError("filter amplitudes must be finite");
  }
  grid.validate();
}

Eigen::MatrixXd exponential_filter_taps(double v, double gamma, const GridSpec& grid) {
  if (!(gamma > 0.0)) throw StructuralError("filter width gamma must be positive");
  grid.validate();
  Eigen::MatrixXd taps(grid.re.count, grid.im.count);
  for (Eigen::Index i = 0; i < grid.re.count; ++i) {
    for (Eigen::Index l = 0; l < grid.im.count; ++l) {
      taps(i, l) = v * std::exp(-std::norm(grid.node(i, l)) / gamma);
    }
  }
  return taps;
}

DiscreteFilters discretize_filters(const WidelyLinearFilterModel& model) {
  model.validate();
  const auto& v = model.amplitudes;
  const Eigen::MatrixXd profile = exponential_filter_taps(1.0, model.gamma, model.grid);

  Eigen::MatrixXcd h1(profile.rows(), profile.cols());
  Eigen::MatrixXcd h2(profile.rows(), profile.cols());
  h1.real() = v[0] * profile;
  h1.imag() = v[1] * profile;
  h2.real() = v[2] * profile;
  h2.imag() = v[3] * profile;
  if (model.normalize) {
    const double n1 = h1.norm();
    const double n2 = h2.norm();
    if (n1 > 0.0) h1 /= n1;
    if (n2 > 0.0) h2 /= n2;
  }

  const Eigen::MatrixXd magnitude = h1.cwiseAbs().cwiseMax(h2.cwiseAbs());
  const double peak = magnitude.size() == 0 ? 0.0 : magnitude.maxCoeff();
  Eigen::Index r0 = magnitude.rows(), r1 = -1, c0 = magnitude.cols(), c1 = -1;
  for (Eigen::Index i = 0; i < magnitude.rows(); ++i) {
    for (Eigen::Index l = 0; l < magnitude.cols(); ++l) {
      if (peak > 0.0 && magnitude(i, l) >= kTapTruncation * peak) {
        r0 = std::min(r0, i);
        r1 = std::max(r1, i);
        c0 = std::min(c0, l);
        c1 = std::max(c1, l);
      }
    }
  }

  DiscreteFilters out;
  out.re_spacing = model.grid.re.spacing();
  out.im_spacing = model.grid.im.spacing();
  if (r1 < 0) {
    // All-zero model: a single zero tap keeps the shapes well defined.
    out.h1 = Eigen::MatrixXcd::Zero(1, 1);
    out.h2 = Eigen::MatrixXcd::Zero(1, 1);
    return out;
  }
  out.h1 = h1.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1);
  out.h2 = h2.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1);
  return out;
}

Eigen::VectorXcd GridSampleFunction::flattened() const {
  Eigen::VectorXcd out(values.size());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index l = 0; l < values.cols(); ++l) out(i * values.cols() + l) = values(i, l);
  }
  return out;
}

GridSampleFunction generate_improper_gp(const WidelyLinearFilterModel& model, std::uint64_t seed) {
  return generate_improper_gp(discretize_filters(model), model.grid, seed);
}

GridSampleFunction generate_improper_gp(const DiscreteFilters& filters, const GridSpec& grid,
                                        std::uint64_t seed) {
  grid.validate();
  const Eigen::Index nr = grid.re.count;
  const Eigen::Index ni = grid.im.count;
  const Eigen::Index br = filters.h1.rows();
  const Eigen::Index bi = filters.h1.cols();

  // Proper unit-variance driving noise over the padded support.
  auto engine = detail::make_engine(seed, detail::kDrivingNoise);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd s(nr + br - 1, ni + bi - 1);
  for (Eigen::Index c = 0; c < s.cols(); ++c) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      s(r, c) = {re, im};
    }
  }
  const Eigen::MatrixXcd s_conj = s.conjugate();

  // f[p] = sum_q h1[q] S[p - q] + h2[q] conj(S[p - q]) in padded coordinates.
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(nr, ni);
  for (Eigen::Index a = 0; a < br; ++a) {
    for (Eigen::Index b = 0; b < bi; ++b) {
      const Eigen::Index r = br - 1 - a;
      const Eigen::Index c = bi - 1 - b;
      f.noalias() += filters.h1(a, b) * s.block(r, c, nr, ni);
      f.noalias() += filters.h2(a, b) * s_conj.block(r, c, nr, ni);
    }
  }

  GridSampleFunction out;
  out.values = std::move(f);
  out.grid = grid;
  out.seed = seed;
  return out;
}

Eigen::VectorXcd generate_improper_noise(const NoiseModel& noise, Eigen::Index n,
                                         std::uint64_t seed) {
  noise.validate();
  if (n < 0) throw StructuralError("noise length must be non-negative");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  if (noise.sigma2 == 0.0) return out;

  // Lower Cholesky factor of the 2x2 composite covariance, tolerating |rho| = 1.
  const Eigen::Matrix2d c = noise.composite_covariance();
  const double l11 = std::sqrt(std::max(c(0, 0), 0.0));
  const double l21 = l11 > 0.0 ? c(1, 0) / l11 : 0.0;
  const double l22 = std::sqrt(std::max(c(1, 1) - l21 * l21, 0.0));

  auto engine = detail::make_engine(seed, detail::kMeasurementNoise);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = normal(engine);
    const double z2 = normal(engine);
    out(i) = {l11 * z1, l21 * z1 + l22 * z2};
  }
  return out;
}

EmpiricalMoments empirical_second_order(const std::vector<Eigen::VectorXcd>& draws) {
  if (draws.size() < 2) throw StructuralError("empirical moments need at least two draws");
  const Eigen::Index len = draws.front().size();
  EmpiricalMoments m{Eigen::MatrixXcd::Zero(len, len), Eigen::MatrixXcd::Zero(len, len)};
  for (const auto& z : draws) {
    if (z.size() != len) throw StructuralError("empirical moments need draws of equal length");
    m.covariance.noalias() += z * z.adjoint();
    m.pseudo_covariance.noalias() += z * z.transpose();
  }
  const double inv = 1.0 / static_cast<double>(draws.size());
  m.covariance *= inv;
  m.pseudo_covariance *= inv;
  return m;
}

void write_sample_csv(std::ostream& out, const GridSampleFunction& sample) {
  const auto old_precision = out.precision(17);
  out << "re_x,im_x,re_f,im_f\n";
  for (Eigen::Index i = 0; i < sample.values.rows(); ++i) {
    for (Eigen::Index l = 0; l < sample.values.cols(); ++l) {
      const auto x = sample.grid.node(i, l);
      const auto f = sample.values(i, l);
      out << x.real() << ',' << x.imag() << ',' << f.real() << ',' << f.imag() << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace wcgpr
