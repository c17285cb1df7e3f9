#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "medsolve/baselines.hpp"
#include "medsolve/certificates.hpp"
#include "medsolve/io.hpp"
#include "medsolve/rotation_map.hpp"

namespace py = pybind11;
using namespace medsolve;

namespace {

Method method_from(const std::string& name) {
  if (name == "newton") return Method::Newton;
  if (name == "homotopy") return Method::Homotopy;
  throw MedError(ErrorKind::ParseError, "unknown method '" + name + "'");
}

py::dict certificate_dict(const Certificate& c) {
  py::dict d;
  d["passed"] = c.passed;
  d["projectivity_residual"] = c.projectivity_residual;
  d["completeness_residual"] = c.completeness_residual;
  d["rank_ok"] = c.rank_ok;
  d["stationarity_residual"] = c.stationarity_residual;
  d["z_min_eigenvalue"] = c.z_min_eigenvalue;
  d["global_min_eigenvalue"] = c.global_min_eigenvalue;
  d["p_success"] = c.p_success;
  return d;
}

}  // namespace

PYBIND11_MODULE(_medsolve, m) {
  m.doc() = "Minimum-error discrimination of linearly independent quantum ensembles.";

  static py::exception<MedError> error(m, "MedError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MedError& e) {
      const std::string msg = std::string(kind_name(e.kind())) + ": " + e.detail();
      py::object inst = py::reinterpret_borrow<py::object>(error)(msg);
      inst.attr("kind") = std::string(kind_name(e.kind()));
      inst.attr("detail") = e.detail();
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  py::class_<Ensemble>(m, "Ensemble")
      .def(py::init(&Ensemble::from_states), py::arg("priors"), py::arg("states"))
      .def_readonly("priors", &Ensemble::priors)
      .def_readonly("states", &Ensemble::states)
      .def_property_readonly("profile", [](const Ensemble& e) { return e.profile.ranks(); })
      .def_property_readonly("dim", &Ensemble::dim)
      .def("average", &Ensemble::average)
      .def("to_json", [](const Ensemble& e) { return ensemble_to_json(e).dump(); })
      .def_static("from_json", [](const std::string& s) { return ensemble_from_json(parse_json(s)); });

  m.def("random_ensemble",
        [](const std::vector<int>& ranks, std::uint64_t seed) {
          return random_ensemble(RankProfile(ranks), seed);
        },
        py::arg("profile"), py::arg("seed") = 0);

  m.def("validate", [](const Ensemble& e, double tol) {
    const auto rep = validate(e, tol);
    py::dict d;
    d["passed"] = rep.passed;
    d["failures"] = rep.failures;
    d["numerical_ranks"] = rep.numerical_ranks;
    return d;
  }, py::arg("ensemble"), py::arg("tol") = 1e-8);

  m.def("solve",
        [](const Ensemble& e, const std::string& method, double tol, int max_iters) {
          SolverConfig cfg;
          cfg.tol = tol;
          cfg.max_iters = max_iters;
          const auto r = solve_ensemble(e, method_from(method), cfg);
          py::dict d;
          d["povm"] = r.povm.elements;
          d["p_success"] = r.p_success;
          d["residual"] = r.solution.residual;
          d["iterations"] = r.solution.iterations;
          d["d"] = r.solution.d;
          d["m"] = r.solution.m;
          d["gram"] = r.gram.matrix;
          return d;
        },
        py::arg("ensemble"), py::arg("method") = "newton", py::arg("tol") = 1e-12,
        py::arg("max_iters") = 200);

  m.def("success_probability", [](const Ensemble& e, const std::vector<ComplexMatrix>& povm) {
    return success_probability(e, Povm{e.profile, povm});
  });

  m.def("check_optimal",
        [](const Ensemble& e, const std::vector<ComplexMatrix>& povm, double tol) {
          return certificate_dict(check_optimal(e, Povm{e.profile, povm}, tol));
        },
        py::arg("ensemble"), py::arg("povm"), py::arg("tol") = 1e-8);

  m.def("pgm", [](const Ensemble& e) { return pgm(e).elements; });
  m.def("pgm_is_optimal", &pgm_is_optimal, py::arg("ensemble"), py::arg("tol") = 1e-8);

  m.def("map_r", [](const Ensemble& e) {
    const auto r = solve_ensemble(e);
    return map_r(e, r.solution, r.decomposition).ensemble;
  });
  m.def("map_r_inverse", &map_r_inverse);

  m.def("helstrom_two_state", [](const Ensemble& e) {
    const auto h = helstrom_two_state(e);
    return py::make_tuple(h.povm.elements, h.p_success);
  });

  m.def("barrier_solve", [](const Ensemble& e) {
    const auto b = barrier_solve(e);
    return py::make_tuple(b.z, b.p_success_upper);
  });

  m.def("ensemble_distance", &ensemble_distance);
}
