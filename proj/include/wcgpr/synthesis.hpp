#pragma once

// Sample functions of proper and improper complex Gaussian processes over a
// 2-D grid of complex inputs, generated by widely linear filtering
//
//   f = h1 * S + h2 * conj(S),   h1 = h_r1 + j h_j1,  h2 = h_r2 + j h_j2,
//
// of proper white noise S with E|S|^2 = 1.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "wcgpr/noise.hpp"

namespace wcgpr {

struct AxisSpec {
  double min = -5.0;
  double max = 5.0;
  Eigen::Index count = 100;

  double spacing() const { return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0; }
  double node(Eigen::Index i) const { return min + spacing() * static_cast<double>(i); }
};

/// Axis definitions over (Re x, Im x). Node (i, l) sits at re.node(i) + j im.node(l);
/// flattened node indices are i * im.count + l.
struct GridSpec {
  AxisSpec re;
  AxisSpec im;

  Eigen::Index size() const { return re.count * im.count; }
  std::complex<double> node(Eigen::Index i, Eigen::Index l) const { return {re.node(i), im.node(l)}; }
  /// All nodes in flattened order.
  Eigen::VectorXcd nodes() const;
  void validate() const;
};

struct WidelyLinearFilterModel {
  double gamma = 0.6;
  /// Amplitudes of h_r1, h_j1, h_r2, h_j2.
  std::array<double, 4> amplitudes{4.0, 5.0, 1.0, -3.0};
  GridSpec grid;
  bool normalize = true;

  void validate() const;
};

/// v exp(-|x|^2 / gamma) at every grid node, indexed (re, im).
Eigen::MatrixXd exponential_filter_taps(double v, double gamma, const GridSpec& grid);

/// The complex filters h1 and h2 on the grid, normalized to unit l2 norm when
/// requested and cropped to the bounding box of taps whose magnitude is at
/// least 1e-12 of the peak. Both filters share the box.
struct DiscreteFilters {
  Eigen::MatrixXcd h1;
  Eigen::MatrixXcd h2;
  double re_spacing = 0.0;
  double im_spacing = 0.0;
};

DiscreteFilters discretize_filters(const WidelyLinearFilterModel& model);

struct GridSampleFunction {
  Eigen::MatrixXcd values;  // indexed (re, im)
  GridSpec grid;
  std::uint64_t seed = 0;

  /// Values in flattened node order.
  Eigen::VectorXcd flattened() const;
};

/// Draws the white noise over the padded support, so every grid node sees the
/// full filter and the output is exactly stationary.
GridSampleFunction generate_improper_gp(const WidelyLinearFilterModel& model, std::uint64_t seed);
GridSampleFunction generate_improper_gp(const DiscreteFilters& filters, const GridSpec& grid,
                                        std::uint64_t seed);

Eigen::VectorXcd generate_improper_noise(const NoiseModel& noise, Eigen::Index n,
                                         std::uint64_t seed);

struct EmpiricalMoments {
  Eigen::MatrixXcd covariance;         // mean of z z^H
  Eigen::MatrixXcd pseudo_covariance;  // mean of z z^T
};

EmpiricalMoments empirical_second_order(const std::vector<Eigen::VectorXcd>& draws);

/// One row per node: re_x,im_x,re_f,im_f.
void write_sample_csv(std::ostream& out, const GridSampleFunction& sample);

}  // namespace wcgpr
