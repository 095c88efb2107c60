#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wcgpr/augmented.hpp"
#include "wcgpr/errors.hpp"
#include "wcgpr/estimators.hpp"
#include "wcgpr/experiment.hpp"
#include "wcgpr/kernels.hpp"
#include "wcgpr/synthesis.hpp"

namespace py = pybind11;
using namespace wcgpr;

namespace {

// 1-D arrays are read as m scalar inputs, 2-D arrays as d x m.
ComplexInputSet inputs(const Eigen::MatrixXcd& x) {
  if (x.cols() == 1) return ComplexInputSet::from_scalars(x.col(0));
  return ComplexInputSet(x);
}

SecondOrderStats stats(Eigen::MatrixXcd cross_cov, Eigen::MatrixXcd cross_pseudo_cov, Eigen::MatrixXcd meas_cov,
                       Eigen::MatrixXcd meas_pseudo_cov, Eigen::MatrixXcd signal_cov) {
  return {std::move(cross_cov), std::move(cross_pseudo_cov), std::move(meas_cov), std::move(meas_pseudo_cov),
          std::move(signal_cov)};
}

py::tuple predictive(const PredictiveDistribution& p) { return py::make_tuple(p.mean, p.cov, p.pseudo_cov); }

py::dict report_to_dict(const ExperimentReport& r) {
  py::list rows, summary;
  for (const auto& row : r.rows) {
    py::dict d;
    d["trial"] = row.trial;
    d["predictor"] = row.predictor;
    d["n"] = row.n;
    d["mse"] = row.mse;
    d["mse_db"] = row.mse_db;
    rows.append(d);
  }
  for (const auto& s : r.summary) {
    py::dict d;
    d["predictor"] = s.predictor;
    d["n"] = s.n;
    d["trials"] = s.trials;
    d["mean_mse"] = s.mean_mse;
    d["mean_mse_db"] = s.mean_mse_db;
    summary.append(d);
  }
  py::dict out;
  out["config"] = r.config.dump();
  out["rows"] = rows;
  out["summary"] = summary;
  return out;
}

ExperimentConfig config_from(const std::string& json_text) {
  return ExperimentConfig::from_json(json_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(json_text));
}

WidelyLinearFilterModel filter_model(double gamma, std::array<double, 4> amplitudes, std::array<double, 3> re,
                                     std::array<double, 3> im, bool normalize) {
  WidelyLinearFilterModel m;
  m.gamma = gamma;
  m.amplitudes = amplitudes;
  m.grid.re = {re[0], re[1], static_cast<Eigen::Index>(re[2])};
  m.grid.im = {im[0], im[1], static_cast<Eigen::Index>(im[2])};
  m.normalize = normalize;
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Widely linear complex Gaussian process regression";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<ExperimentError>(m, "ExperimentError", PyExc_RuntimeError);

  m.def("to_augmented", [](const Eigen::VectorXd& v) { return to_augmented(CompositeVector(v)).materialize(); },
        py::arg("composite"));
  m.def("to_composite", [](const Eigen::VectorXcd& z) { return to_composite(z).data(); }, py::arg("augmented"));
  m.def("transform_matrix", &transform_matrix, py::arg("n"));
  m.def("augmented_matrix", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return AugmentedMatrix(a, b).materialize();
  }, py::arg("a"), py::arg("b"));
  m.def("composite_matrix", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return composite_matrix(AugmentedMatrix(a, b));
  }, py::arg("a"), py::arg("b"));
  m.def("solve_augmented", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const Eigen::VectorXcd& rhs,
                              bool jitter) {
    return solve_augmented(AugmentedMatrix(a, b), AugmentedVector(rhs),
                           jitter ? JitterPolicy{} : JitterPolicy::disabled()).top();
  }, py::arg("a"), py::arg("b"), py::arg("rhs"), py::arg("jitter") = true,
        "Solves [[A, B], [B*, A*]] [x; x*] = [rhs; rhs*] and returns x.");

  py::class_<KernelPair>(m, "KernelPair")
      .def_property_readonly("is_proper", &KernelPair::is_proper)
      .def_property_readonly("descriptor", [](const KernelPair& kp) { return kp.descriptor.dump(); })
      .def("gram", [](const KernelPair& kp, const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& x2) {
        const GramPair g = gram(kp, inputs(x), inputs(x2));
        return py::make_tuple(g.k, g.k_tilde);
      }, py::arg("x"), py::arg("x2"))
      .def("validate", [](const KernelPair& kp, const Eigen::MatrixXcd& x, double tol) {
        const KernelValidation v = validate_kernel_pair(kp, inputs(x), tol);
        py::dict d;
        d["hermitian_residual"] = v.hermitian_residual;
        d["symmetry_residual"] = v.symmetry_residual;
        d["min_eigenvalue"] = v.min_eigenvalue;
        d["max_eigenvalue"] = v.max_eigenvalue;
        d["passed"] = v.passed;
        return d;
      }, py::arg("x"), py::arg("tol") = kStructureTolerance);

  m.def("squared_exponential_pair", &squared_exponential_pair, py::arg("signal_variance"), py::arg("length_scale"),
        py::arg("pseudo_ratio") = cdouble{0.0, 0.0});
  m.def("filter_induced_kernel", [](double gamma, std::array<double, 4> amplitudes, std::array<double, 3> re,
                                    std::array<double, 3> im, bool normalize) {
    return filter_induced_kernel(filter_model(gamma, amplitudes, re, im, normalize));
  }, py::arg("gamma") = 0.6, py::arg("amplitudes") = std::array<double, 4>{4.0, 5.0, 1.0, -3.0},
        py::arg("re") = std::array<double, 3>{-5.0, 5.0, 100}, py::arg("im") = std::array<double, 3>{-5.0, 5.0, 100},
        py::arg("normalize") = true);
  m.def("kernel_from_descriptor", [](const std::string& text) { return kernel_from_descriptor(nlohmann::json::parse(text)); },
        py::arg("descriptor"));

  m.def("wlmmse", [](Eigen::MatrixXcd r_fy, Eigen::MatrixXcd rt_fy, Eigen::MatrixXcd r_yy, Eigen::MatrixXcd rt_yy,
                     Eigen::MatrixXcd r_ff, const Eigen::VectorXcd& y) {
    const WlmmseResult r = wlmmse(stats(r_fy, rt_fy, r_yy, rt_yy, r_ff), y);
    return py::make_tuple(r.estimate, r.error_cov);
  }, py::arg("cross_cov"), py::arg("cross_pseudo_cov"), py::arg("meas_cov"), py::arg("meas_pseudo_cov"),
        py::arg("signal_cov"), py::arg("y"));
  m.def("lmmse", [](Eigen::MatrixXcd r_fy, Eigen::MatrixXcd r_yy, const Eigen::VectorXcd& y) {
    const Eigen::Index n = r_yy.rows();
    const Eigen::Index p = r_fy.rows();
    return lmmse(stats(r_fy, Eigen::MatrixXcd::Zero(p, n), r_yy, Eigen::MatrixXcd::Zero(n, n),
                       Eigen::MatrixXcd::Zero(p, p)), y);
  }, py::arg("cross_cov"), py::arg("meas_cov"), py::arg("y"));
  m.def("reduction_residual", [](Eigen::MatrixXcd r_fy, Eigen::MatrixXcd rt_fy, Eigen::MatrixXcd r_yy,
                                 Eigen::MatrixXcd rt_yy) {
    const Eigen::Index p = r_fy.rows();
    return reduction_residual(stats(r_fy, rt_fy, r_yy, rt_yy, Eigen::MatrixXcd::Zero(p, p)));
  }, py::arg("cross_cov"), py::arg("cross_pseudo_cov"), py::arg("meas_cov"), py::arg("meas_pseudo_cov"));

  m.def("wcgpr_predict", [](const KernelPair& kp, double sigma2, cdouble rho, const Eigen::MatrixXcd& x,
                            const Eigen::VectorXcd& y, const Eigen::MatrixXcd& x_star) {
    return predictive(wcgpr_predict(kp, {sigma2, rho}, inputs(x), y, inputs(x_star)));
  }, py::arg("kernel"), py::arg("sigma2"), py::arg("rho"), py::arg("x"), py::arg("y"), py::arg("x_star"),
        "Returns (mean, cov, pseudo_cov).");
  m.def("proper_cgpr_predict", [](const KernelPair& kp, double sigma2, const Eigen::MatrixXcd& x,
                                  const Eigen::VectorXcd& y, const Eigen::MatrixXcd& x_star) {
    return predictive(proper_cgpr_predict(kp.k, sigma2, inputs(x), y, inputs(x_star)));
  }, py::arg("kernel"), py::arg("sigma2"), py::arg("x"), py::arg("y"), py::arg("x_star"),
        "Uses only the kernel's covariance function. Returns (mean, cov, pseudo_cov).");
  m.def("properness_residual", [](const KernelPair& kp, double sigma2, cdouble rho, const Eigen::MatrixXcd& x,
                                  const Eigen::MatrixXcd& x_star) {
    return properness_residual(kp, {sigma2, rho}, inputs(x), inputs(x_star));
  }, py::arg("kernel"), py::arg("sigma2"), py::arg("rho"), py::arg("x"), py::arg("x_star"));
  m.def("log_marginal_likelihood", [](const KernelPair& kp, double sigma2, cdouble rho, const Eigen::MatrixXcd& x,
                                      const Eigen::VectorXcd& y) {
    return log_marginal_likelihood(kp, {sigma2, rho}, inputs(x), y);
  }, py::arg("kernel"), py::arg("sigma2"), py::arg("rho"), py::arg("x"), py::arg("y"));

  m.def("generate_improper_gp", [](std::uint64_t seed, double gamma, std::array<double, 4> amplitudes,
                                   std::array<double, 3> re, std::array<double, 3> im, bool normalize) {
    return generate_improper_gp(filter_model(gamma, amplitudes, re, im, normalize), seed).values;
  }, py::arg("seed"), py::arg("gamma") = 0.6, py::arg("amplitudes") = std::array<double, 4>{4.0, 5.0, 1.0, -3.0},
        py::arg("re") = std::array<double, 3>{-5.0, 5.0, 100}, py::arg("im") = std::array<double, 3>{-5.0, 5.0, 100},
        py::arg("normalize") = true, "Sample function on the grid, indexed (re, im).");
  m.def("generate_improper_noise", [](double sigma2, cdouble rho, Eigen::Index n, std::uint64_t seed) {
    return generate_improper_noise({sigma2, rho}, n, seed);
  }, py::arg("sigma2"), py::arg("rho"), py::arg("n"), py::arg("seed"));

  m.def("mse_db", &mse_db, py::arg("estimate"), py::arg("truth"));
  m.def("run_single", [](const std::string& config) { return report_to_dict(run_single(config_from(config))); },
        py::arg("config") = std::string{}, "Runs an experiment from a JSON configuration string.");
  m.def("run_sweep", [](const std::string& config) { return report_to_dict(run_sweep(config_from(config))); },
        py::arg("config"));
}
