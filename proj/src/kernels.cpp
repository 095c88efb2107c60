#include "wcgpr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "wcgpr/errors.hpp"

namespace wcgpr {

namespace {

void check_dims(const ComplexInputSet& x, const ComplexInputSet& x2) {
  if (x.dim() != x2.dim()) {
    throw StructuralError("input dimensions differ: " + std::to_string(x.dim()) + " vs " +
                          std::to_string(x2.dim()));
  }
}

// Correlations of the discrete filters at every integer lag, indexed
// (lag_re + half_re, lag_im + half_im).
struct LagTable {
  Eigen::MatrixXcd k;
  Eigen::MatrixXcd k_tilde;
  Eigen::Index half_re = 0;
  Eigen::Index half_im = 0;
  double re_spacing = 1.0;
  double im_spacing = 1.0;

  cdouble at(const Eigen::MatrixXcd& table, Eigen::Index r, Eigen::Index c) const {
    if (r < 0 || c < 0 || r >= table.rows() || c >= table.cols()) return {0.0, 0.0};
    return table(r, c);
  }

  cdouble interpolate(const Eigen::MatrixXcd& table, cdouble lag) const {
    const double t = lag.real() / re_spacing + static_cast<double>(half_re);
    const double s = lag.imag() / im_spacing + static_cast<double>(half_im);
    const double t0 = std::floor(t);
    const double s0 = std::floor(s);
    const double ft = t - t0;
    const double fs = s - s0;
    // Beyond the table the blend fades to zero; guard against huge lags first.
    if (t0 < -1.0 || s0 < -1.0 || t0 > static_cast<double>(table.rows()) ||
        s0 > static_cast<double>(table.cols())) {
      return {0.0, 0.0};
    }
    const auto r = static_cast<Eigen::Index>(t0);
    const auto c = static_cast<Eigen::Index>(s0);
    return (1.0 - ft) * (1.0 - fs) * at(table, r, c) + ft * (1.0 - fs) * at(table, r + 1, c) +
           (1.0 - ft) * fs * at(table, r, c + 1) + ft * fs * at(table, r + 1, c + 1);
  }
};

// sum_q a[q] * b[q - lag] over the overlap, with b optionally conjugated.
cdouble correlate_at(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::Index lr,
                     Eigen::Index lc, bool conjugate_b) {
  const Eigen::Index r0 = std::max<Eigen::Index>(0, lr);
  const Eigen::Index r1 = std::min<Eigen::Index>(a.rows(), b.rows() + lr);
  const Eigen::Index c0 = std::max<Eigen::Index>(0, lc);
  const Eigen::Index c1 = std::min<Eigen::Index>(a.cols(), b.cols() + lc);
  if (r1 <= r0 || c1 <= c0) return {0.0, 0.0};
  const auto block_a = a.block(r0, c0, r1 - r0, c1 - c0);
  const auto block_b = b.block(r0 - lr, c0 - lc, r1 - r0, c1 - c0);
  if (conjugate_b) return block_a.cwiseProduct(block_b.conjugate()).sum();
  return block_a.cwiseProduct(block_b).sum();
}

std::shared_ptr<const LagTable> build_lag_table(const DiscreteFilters& filters, double re_spacing,
                                                double im_spacing) {
  const Eigen::MatrixXcd& h1 = filters.h1;
  const Eigen::MatrixXcd& h2 = filters.h2;
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols() || h1.size() == 0) {
    throw StructuralError("filter taps must be non-empty and share one support");
  }
  auto table = std::make_shared<LagTable>();
  table->half_re = h1.rows() - 1;
  table->half_im = h1.cols() - 1;
  table->re_spacing = re_spacing;
  table->im_spacing = im_spacing;
  const Eigen::Index rows = 2 * h1.rows() - 1;
  const Eigen::Index cols = 2 * h1.cols() - 1;
  table->k.resize(rows, cols);
  table->k_tilde.resize(rows, cols);

  const bool proper = h2.cwiseAbs().maxCoeff() == 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Index lr = r - table->half_re;
      const Eigen::Index lc = c - table->half_im;
      // Hermitian symmetry k(-lag) = conj(k(lag)) fills the mirrored half.
      const Eigen::Index mr = rows - 1 - r;
      const Eigen::Index mc = cols - 1 - c;
      if (mr * cols + mc < r * cols + c) {
        table->k(r, c) = std::conj(table->k(mr, mc));
        table->k_tilde(r, c) = table->k_tilde(mr, mc);
        continue;
      }
      table->k(r, c) = correlate_at(h1, h1, lr, lc, true) + correlate_at(h2, h2, lr, lc, true);
      table->k_tilde(r, c) =
          proper ? cdouble{0.0, 0.0}
                 : correlate_at(h1, h2, lr, lc, false) + correlate_at(h2, h1, lr, lc, false);
    }
  }
  return table;
}

cdouble scalar_input(const KernelArg& x) {
  if (x.size() != 1) {
    throw StructuralError("filter-induced kernels take scalar complex inputs, got dimension " +
                          std::to_string(x.size()));
  }
  return x(0);
}

nlohmann::json complex_to_json(cdouble z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

ComplexInputSet::ComplexInputSet(Eigen::MatrixXcd points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw StructuralError("input dimension must be at least 1");
  if (!points_.allFinite()) throw StructuralError("input coordinates must be finite");
}

ComplexInputSet ComplexInputSet::from_scalars(const Eigen::VectorXcd& values) {
  return ComplexInputSet(Eigen::MatrixXcd(values.transpose()));
}

ComplexInputSet ComplexInputSet::subset(const std::vector<Eigen::Index>& indices) const {
  Eigen::MatrixXcd out(dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= size()) throw StructuralError("subset index out of range");
    out.col(static_cast<Eigen::Index>(i)) = points_.col(indices[i]);
  }
  return ComplexInputSet(std::move(out));
}

GramPair gram(const KernelPair& kp, const ComplexInputSet& x, const ComplexInputSet& x2) {
  check_dims(x, x2);
  GramPair g{Eigen::MatrixXcd(x.size(), x2.size()), Eigen::MatrixXcd::Zero(x.size(), x2.size())};
  for (Eigen::Index l = 0; l < x2.size(); ++l) {
    for (Eigen::Index i = 0; i < x.size(); ++i) g.k(i, l) = kp.k(x.point(i), x2.point(l));
  }
  if (!kp.is_proper()) {
    for (Eigen::Index l = 0; l < x2.size(); ++l) {
      for (Eigen::Index i = 0; i < x.size(); ++i) g.k_tilde(i, l) = kp.k_tilde(x.point(i), x2.point(l));
    }
  }
  return g;
}

AugmentedMatrix augmented_gram(const KernelPair& kp, const ComplexInputSet& x,
                               const ComplexInputSet& x2) {
  GramPair g = gram(kp, x, x2);
  return {std::move(g.k), std::move(g.k_tilde)};
}

CompositeBlocks composite_gram(const KernelPair& kp, const ComplexInputSet& x,
                               const ComplexInputSet& x2) {
  return composite_blocks(augmented_gram(kp, x, x2), std::numeric_limits<double>::infinity());
}

KernelPair proper_pair(KernelFunction k, nlohmann::json descriptor) {
  return {std::move(k), {}, std::move(descriptor)};
}

KernelPair squared_exponential_pair(double signal_variance, double length_scale, cdouble pseudo_ratio) {
  if (!(signal_variance > 0.0) || !(length_scale > 0.0)) {
    throw StructuralError("squared-exponential kernel needs positive variance and length scale");
  }
  if (std::abs(pseudo_ratio) > 1.0) {
    throw StructuralError("pseudo-kernel ratio must satisfy |c| <= 1 for a valid pair");
  }
  const double inv_two_l2 = 1.0 / (2.0 * length_scale * length_scale);
  KernelFunction k = [signal_variance, inv_two_l2](const KernelArg& a, const KernelArg& b) {
    return cdouble{signal_variance * std::exp(-(a - b).squaredNorm() * inv_two_l2), 0.0};
  };
  nlohmann::json descriptor = {{"type", "squared_exponential"},
                               {"signal_variance", signal_variance},
                               {"length_scale", length_scale},
                               {"pseudo_ratio", complex_to_json(pseudo_ratio)}};
  if (pseudo_ratio == cdouble{0.0, 0.0}) return proper_pair(std::move(k), std::move(descriptor));
  KernelFunction kt = [k, pseudo_ratio](const KernelArg& a, const KernelArg& b) {
    return pseudo_ratio * k(a, b);
  };
  return {std::move(k), std::move(kt), std::move(descriptor)};
}

KernelPair filter_induced_kernel(const DiscreteFilters& filters, double re_spacing, double im_spacing) {
  if (!(re_spacing > 0.0) || !(im_spacing > 0.0)) {
    throw StructuralError("filter-induced kernel needs positive grid spacing on both axes");
  }
  auto table = build_lag_table(filters, re_spacing, im_spacing);
  KernelPair kp;
  kp.k = [table](const KernelArg& a, const KernelArg& b) {
    return table->interpolate(table->k, scalar_input(a) - scalar_input(b));
  };
  if (filters.h2.cwiseAbs().maxCoeff() > 0.0) {
    kp.k_tilde = [table](const KernelArg& a, const KernelArg& b) {
      return table->interpolate(table->k_tilde, scalar_input(a) - scalar_input(b));
    };
  }
  kp.descriptor = {{"type", "filter_induced"},
                   {"support", {filters.h1.rows(), filters.h1.cols()}},
                   {"spacing", {re_spacing, im_spacing}}};
  return kp;
}

KernelPair filter_induced_kernel(const DiscreteFilters& filters) {
  return filter_induced_kernel(filters, filters.re_spacing, filters.im_spacing);
}

KernelPair filter_induced_kernel(const WidelyLinearFilterModel& model) {
  KernelPair kp = filter_induced_kernel(discretize_filters(model));
  kp.descriptor = {{"type", "filter_induced"},
                   {"gamma", model.gamma},
                   {"amplitudes", model.amplitudes},
                   {"grid",
                    {{"re", {model.grid.re.min, model.grid.re.max, model.grid.re.count}},
                     {"im", {model.grid.im.min, model.grid.im.max, model.grid.im.count}}}},
                   {"normalize", model.normalize}};
  return kp;
}

KernelPair kernel_from_descriptor(const nlohmann::json& descriptor) {
  const std::string type = descriptor.value("type", std::string{});
  if (type == "squared_exponential") {
    const auto ratio = descriptor.value("pseudo_ratio", std::vector<double>{0.0, 0.0});
    if (ratio.size() != 2) throw StructuralError("pseudo_ratio must be [re, im]");
    return squared_exponential_pair(descriptor.at("signal_variance").get<double>(),
                                    descriptor.at("length_scale").get<double>(),
                                    {ratio[0], ratio[1]});
  }
  if (type == "filter_induced") {
    WidelyLinearFilterModel model;
    model.gamma = descriptor.value("gamma", model.gamma);
    model.amplitudes = descriptor.value("amplitudes", model.amplitudes);
    model.normalize = descriptor.value("normalize", model.normalize);
    if (descriptor.contains("grid")) {
      for (const char* axis : {"re", "im"}) {
        const auto spec = descriptor.at("grid").at(axis).get<std::vector<double>>();
        if (spec.size() != 3) throw StructuralError("grid axes are [min, max, count]");
        AxisSpec& a = std::string(axis) == "re" ? model.grid.re : model.grid.im;
        a = {spec[0], spec[1], static_cast<Eigen::Index>(spec[2])};
      }
    }
    return filter_induced_kernel(model);
  }
  throw StructuralError("unknown kernel type '" + type + "'");
}

KernelValidation validate_kernel_pair(const KernelPair& kp, const ComplexInputSet& x, double tol) {
  KernelValidation report;
  const AugmentedValidation v = validate_augmented_covariance(augmented_gram(kp, x, x), tol);
  report.hermitian_residual = v.hermitian_residual;
  report.symmetry_residual = v.symmetry_residual;
  report.min_eigenvalue = v.min_eigenvalue;
  report.max_eigenvalue = v.max_eigenvalue;
  report.passed = v.passed;
  return report;
}

}  // namespace wcgpr
