#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "fraclab/experiments.hpp"
#include "fraclab/fracops.hpp"
#include "fraclab/nonlocal_ops.hpp"

namespace py = pybind11;
using namespace fraclab;

namespace {

ExteriorSet to_set(const std::vector<std::pair<double, double>>& pieces) {
  std::vector<Interval> v;
  for (const auto& [lo, hi] : pieces) v.push_back({lo, hi});
  return ExteriorSet(std::move(v));
}

py::dict record_dict(const ExperimentRecord& r) {
  py::dict d;
  d["k"] = r.k;
  d["param"] = r.param;
  d["lambda1"] = r.lambda1;
  d["baseline"] = r.baseline;
  d["gap"] = r.gap;
  d["measN"] = r.measN;
  d["measD"] = r.measD;
  d["condC"] = r.condC_finite ? r.condC : INFINITY;
  d["sep"] = r.sep;
  d["gauss_res"] = r.gauss_res;
  d["iters"] = r.iters;
  d["h"] = r.h;
  d["L"] = r.L;
  d["ms"] = r.ms;
  d["farfield_slope"] = r.farfield_slope;
  d["error"] = r.error.empty() ? py::none() : py::cast(r.error);
  return d;
}

}  // namespace

PYBIND11_MODULE(_fraclab, m) {
  m.doc() = "Mixed Dirichlet-Neumann eigenvalues of the 1D fractional Laplacian";

  static py::exception<Error> error_type(m, "FraclabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error_type(e.what());
    }
  });

  m.def(
      "normalization_constant",
      [](int dimension, double s) {
        NormalizationReport r = normalization_constant(dimension, s);
        return py::dict(py::arg("value") = r.value, py::arg("gamma_form") = r.gamma_form, py::arg("ratio") = r.ratio);
      },
      py::arg("dimension"), py::arg("s"));

  m.def(
      "solve",
      [](double s, std::pair<double, double> omega, std::optional<std::vector<std::pair<double, double>>> dirichlet,
         std::optional<std::vector<std::pair<double, double>>> neumann, double h, double L, const std::string& scheme) {
        if (dirichlet.has_value() == neumann.has_value())
          throw Error(ErrorCode::BadParameters, "give exactly one of dirichlet and neumann");
        const Domain1D om(omega.first, omega.second);
        const ExteriorPartition p = dirichlet ? ExteriorPartition::with_dirichlet(om, to_set(*dirichlet))
                                              : ExteriorPartition::with_neumann(om, to_set(*neumann));
        DiscParams d;
        d.h = h;
        d.L = L;
        d.scheme = scheme_from_string(scheme);
        EigenResult r = solve_mixed(p, FractionalOrder(1, s), d, {});
        const Discretization& disc = *r.system->disc;
        Eigen::VectorXd x(disc.num_free());
        for (int i = 0; i < disc.num_free(); ++i) x(i) = disc.dof_coord[i];
        py::dict out;
        out["lambda1"] = r.lambda1;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["gauss_residual"] = r.gauss_residual;
        out["condC"] = r.condition_c_finite ? r.condition_c : INFINITY;
        out["x"] = x;
        out["u"] = r.full_vector();
        return out;
      },
      py::arg("s"), py::arg("omega") = std::pair{-1.0, 1.0}, py::arg("dirichlet") = py::none(),
      py::arg("neumann") = py::none(), py::arg("h") = 0.02, py::arg("L") = 8.0, py::arg("scheme") = "P1");

  m.def(
      "run_config",
      [](const std::string& config_json, int jobs) {
        const ExperimentConfig c = parse_config(nlohmann::json::parse(config_json));
        std::vector<ExperimentRecord> recs;
        {
          py::gil_scoped_release release;
          recs = run(c, jobs);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("config_json"), py::arg("jobs") = 1);

  m.def(
      "richardson_baseline",
      [](double s, std::pair<double, double> omega, double h0, int levels) {
        Extrapolation e = richardson_baseline(Domain1D(omega.first, omega.second), s, h0, levels);
        return py::dict(py::arg("h") = e.h, py::arg("lambda") = e.lambda, py::arg("order") = e.order,
                        py::arg("value") = e.value);
      },
      py::arg("s"), py::arg("omega") = std::pair{-1.0, 1.0}, py::arg("h0") = 0.04, py::arg("levels") = 3);

  m.def(
      "identity_suite",
      [](double s, std::pair<double, double> omega, int functions) {
        IdentitySuite v = identity_suite(Domain1D(omega.first, omega.second), s, functions);
        return py::dict(py::arg("gauss_rel") = v.gauss_rel, py::arg("parts_rel") = v.parts_rel,
                        py::arg("quad_rel_p0") = v.quad_rel_p0, py::arg("quad_rel_p1") = v.quad_rel_p1,
                        py::arg("pass") = v.pass());
      },
      py::arg("s"), py::arg("omega") = std::pair{-1.0, 1.0}, py::arg("functions") = 10);

  m.def("e_of_r", &e_of_r, py::arg("r"), py::arg("s"), py::arg("dimension") = 2, py::arg("tol") = 1e-10);

  m.def(
      "dini_power",
      [](double beta, double alpha) {
        DiniResult r = dini_check(ModulusOfContinuity::power(beta), KernelOrder::power(alpha));
        return r.finite() ? py::cast(r.value) : py::none();
      },
      py::arg("beta"), py::arg("alpha"), "Value of the Dini integral, or None when it diverges.");

  m.def(
      "indicator_identity",
      [](std::vector<std::pair<double, double>> omega, double alpha) {
        std::vector<Interval> v;
        for (const auto& [lo, hi] : omega) v.push_back({lo, hi});
        IdentityReport r = indicator_seminorm_identity(v, alpha);
        return std::pair{r.lhs, r.rhs};
      },
      py::arg("omega"), py::arg("alpha"));
}
