#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stiffkit/bench.hpp"

namespace py = pybind11;
using namespace stiffkit;

namespace {

std::vector<Vec> matrix_rows(const RealMatrix& m) {
  std::vector<Vec> rows(m.rows(), Vec(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

RealMatrix matrix_from_rows(const std::vector<Vec>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  RealMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw DimensionMismatch("matrix rows must have equal length");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rhs wrap_rhs(const py::function& f) {
  return [f](double t, const Vec& y) { return f(t, y).cast<Vec>(); };
}

py::dict residual_dict(const std::vector<Residual>& residuals) {
  py::dict out;
  for (const auto& r : residuals) out[py::str(r.name)] = r.value;
  return out;
}

py::dict run_dict(const IntegrationRun& run) {
  py::dict out;
  out["method"] = run.method;
  out["problem"] = run.problem;
  out["w_strategy"] = run.w_strategy;
  out["h"] = run.h;
  out["t0"] = run.t0;
  out["tf"] = run.tf;
  out["steps"] = run.steps;
  out["factorizations"] = run.factorizations;
  out["rhs_evals"] = run.rhs_evals;
  out["wall_seconds"] = run.wall_seconds;
  out["y_final"] = run.y_final;
  return out;
}

}  // namespace

PYBIND11_MODULE(_stiffkit, m) {
  m.doc() = "Stage-wise stabilized explicit Runge-Kutta methods for stiff ODEs";

  py::register_exception<Error>(m, "StiffkitError");

  py::class_<MSRKTASEMethod>(m, "Method")
      .def_property_readonly("name", [](const MSRKTASEMethod& x) { return x.name; })
      .def_property_readonly("declared_order",
                             [](const MSRKTASEMethod& x) { return x.declared_order; })
      .def_property_readonly("alpha", [](const MSRKTASEMethod& x) { return x.operators.alpha; })
      .def_property_readonly("stages", [](const MSRKTASEMethod& x) { return x.tableau.s; })
      .def_property_readonly("depth", [](const MSRKTASEMethod& x) { return x.operators.r; })
      .def_property_readonly("a", [](const MSRKTASEMethod& x) { return matrix_rows(x.tableau.a); })
      .def_property_readonly("b", [](const MSRKTASEMethod& x) { return x.tableau.b; })
      .def_property_readonly("c", [](const MSRKTASEMethod& x) { return x.tableau.c; })
      .def_property_readonly("beta",
                             [](const MSRKTASEMethod& x) { return matrix_rows(x.operators.beta); })
      .def("card_json", &method_card_json)
      .def("__repr__", [](const MSRKTASEMethod& x) { return "<Method " + x.name + ">"; });

  py::class_<WTableau>(m, "WTableau")
      .def_property_readonly("n", [](const WTableau& w) { return w.n; })
      .def_property_readonly("alpha", [](const WTableau& w) { return w.alpha; })
      .def_property_readonly("bhat", [](const WTableau& w) { return w.bhat; })
      .def_property_readonly("chat", [](const WTableau& w) { return w.chat; })
      .def_property_readonly("ahat", [](const WTableau& w) { return matrix_rows(w.ahat); })
      .def_property_readonly("l", [](const WTableau& w) { return matrix_rows(w.l); });

  m.def("catalog", [] { return catalog(); });
  m.def("catalog_method", &catalog_method, py::arg("name"));
  m.def("method_from_card_json", &method_card_from_json, py::arg("text"));
  m.def("derive_msrktase2", &derive_msrktase2, py::arg("alpha"));
  m.def("derive_msrktase3", &derive_msrktase3, py::arg("alpha"), py::arg("beta22"),
        py::arg("beta32"), py::arg("c2") = 0.5, py::arg("c3") = 0.75);
  m.def("solve_beta32_linfinity", &solve_beta32_linfinity, py::arg("alpha"), py::arg("beta22"));
  m.def("beta22_vanishing_d41", &beta22_vanishing_d41, py::arg("alpha"));
  m.def("singly_tase_betas", &singly_tase_betas, py::arg("p"), py::arg("alpha"));
  m.def("general_tase_betas", &general_tase_betas, py::arg("p"), py::arg("alphas"));

  m.def("to_wmethod", &to_wmethod, py::arg("method"));
  m.def("order_residuals_w",
        [](const WTableau& w, int up_to) { return residual_dict(order_residuals_w(w, up_to)); },
        py::arg("w"), py::arg("up_to"));
  m.def("order_residuals_rosenbrock",
        [](const WTableau& w, int up_to) {
          return residual_dict(order_residuals_rosenbrock(w, up_to));
        },
        py::arg("w"), py::arg("up_to"));
  m.def("error_norm_c", &error_norm_c, py::arg("w"), py::arg("p"));
  m.def("error_norm_d", &error_norm_d, py::arg("w"), py::arg("p"));
  m.def("error_coefficients_c", &error_coefficients_c, py::arg("w"), py::arg("p"));
  m.def("error_coefficients_d", &error_coefficients_d, py::arg("w"), py::arg("p"));
  m.def("r_infinity", &r_infinity, py::arg("w"));
  m.def("stability_function", &stability_function, py::arg("w"), py::arg("z"));
  m.def("stability_angle", &stability_angle, py::arg("w"),
        py::arg("angular_resolution_deg") = 0.25, py::arg("radial_samples") = 400);
  m.def("stability_boundary", &stability_boundary, py::arg("w"), py::arg("rays"));

  m.def("msrktase_step",
        [](const MSRKTASEMethod& method, const py::function& f, const std::vector<Vec>& w,
           double t, const Vec& y, double h) {
          return msrktase_step(method, wrap_rhs(f), matrix_from_rows(w), t, y, h);
        },
        py::arg("method"), py::arg("f"), py::arg("w"), py::arg("t"), py::arg("y"), py::arg("h"));
  m.def("wmethod_step",
        [](const WTableau& w_tab, const py::function& f, const std::vector<Vec>& w, double t,
           const Vec& y, double h) {
          return wmethod_step(w_tab, wrap_rhs(f), matrix_from_rows(w), t, y, h);
        },
        py::arg("w_tableau"), py::arg("f"), py::arg("w"), py::arg("t"), py::arg("y"),
        py::arg("h"));
  m.def("sdirk3_step",
        [](const py::function& f, const std::vector<Vec>& w, double t, const Vec& y, double h,
           double newton_tol, int max_iters) {
          return sdirk3_step(wrap_rhs(f), matrix_from_rows(w), t, y, h,
                             SdirkOptions{newton_tol, max_iters});
        },
        py::arg("f"), py::arg("w"), py::arg("t"), py::arg("y"), py::arg("h"),
        py::arg("newton_tol") = 1e-10, py::arg("max_iters") = 25);

  m.def("grid_points", &grid_points, py::arg("n"));
  m.def("pulse_initial_state", &pulse_initial_state, py::arg("n"));
  m.def("d2_symbol_periodic4", &d2_symbol_periodic4, py::arg("n"), py::arg("theta"));

  m.def("integrate_problem",
        [](const std::string& method, const std::string& problem, int n, double h, double t0,
           double tf, const std::string& w_strategy, bool compute_error) {
          const SemiDiscreteProblem prob = problem_for_name(problem, n);
          const IntegrationRun run = integrate(stepper_for_name(method), prob, t0, tf, h,
                                               wstrategy_from_string(w_strategy));
          py::dict out = run_dict(run);
          if (compute_error && tf > t0) {
            const Vec reference = reference_state(prob, t0, tf, run.h / 64.0);
            Vec diff = run.y_final;
            axpy(-1.0, reference, diff);
            out["error"] = norm2(diff);
          }
          return out;
        },
        py::arg("method"), py::arg("problem"), py::arg("n") = 64, py::arg("h") = 0.01,
        py::arg("t0") = 0.0, py::arg("tf") = 1.0,
        py::arg("w_strategy") = "jacobian-every-step", py::arg("compute_error") = true);

  m.attr("__version__") = "0.1.0";
}
