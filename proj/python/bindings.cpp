#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "besq/acceptance.hpp"
#include "besq/bessel_sim.hpp"
#include "besq/equilibrium.hpp"
#include "besq/error.hpp"
#include "besq/measures.hpp"
#include "besq/model.hpp"
#include "besq/polyzeros.hpp"
#include "besq/symbol.hpp"

namespace py = pybind11;
using namespace besq;

namespace {

DensityGrid measure_grid(const std::string& name, const ScaledParams& sp, double arg) {
    if (name == "mu1") return mu1_grid(sp, arg);
    if (name == "mu2") return mu2_grid(sp, arg);
    if (name == "nu1") return nu1_grid(sp, arg);
    if (name == "nu2") return nu2_grid(sp, arg);
    if (name == "sigma") return sigma_grid(sp);
    throw ValidationError("unknown measure " + name);
}

py::dict report_dict(const VariationalReport& r) {
    py::dict d;
    d["ell"] = r.ell;
    d["max_equality_residual"] = r.max_equality_residual;
    d["min_inequality_margin"] = r.min_inequality_margin;
    d["max_extended_residual"] = r.max_extended_residual;
    d["constraint_active"] = r.constraint_active;
    d["grid"] = r.grid;
    d["residuals"] = r.residuals;
    d["off_grid"] = r.off_grid;
    d["margins"] = r.margins;
    d["violations"] = r.violations;
    d["passed"] = r.passed();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<Error>(m, "BesqError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    py::class_<FiniteParams>(m, "FiniteParams")
        .def(py::init([](double a, double alpha, double t, double T) {
                 FiniteParams fp{a, alpha, t, T};
                 fp.validate();
                 return fp;
             }),
             py::arg("a") = 1.0, py::arg("alpha") = 0.0, py::arg("t") = 0.5, py::arg("T") = 1.0)
        .def_readonly("a", &FiniteParams::a)
        .def_readonly("alpha", &FiniteParams::alpha)
        .def_readonly("t", &FiniteParams::t)
        .def_readonly("T", &FiniteParams::T);

    py::class_<ScaledParams>(m, "ScaledParams")
        .def(py::init<double, double, double>(), py::arg("a") = 1.0, py::arg("t") = 0.2, py::arg("p") = 0.0)
        .def_property_readonly("a", &ScaledParams::a)
        .def_property_readonly("t", &ScaledParams::t)
        .def_property_readonly("p", &ScaledParams::p)
        .def_property_readonly("t_star", &ScaledParams::t_star)
        .def_property_readonly("s_star", &ScaledParams::s_star)
        .def_property_readonly("x0", &ScaledParams::x0);

    py::class_<CoeffTriple>(m, "CoeffTriple")
        .def_readonly("b", &CoeffTriple::b)
        .def_readonly("c", &CoeffTriple::c)
        .def_readonly("d", &CoeffTriple::d)
        .def("__iter__", [](const CoeffTriple& c) { return py::iter(py::make_tuple(c.b, c.c, c.d)); });

    py::class_<EdgeCurves>(m, "EdgeCurves")
        .def_readonly("beta", &EdgeCurves::beta)
        .def_readonly("gamma", &EdgeCurves::gamma)
        .def_readonly("eta", &EdgeCurves::eta);

    m.def("recurrence_coeffs_finite", &recurrence_coeffs_finite, py::arg("params"), py::arg("k"));
    m.def("recurrence_coeffs_scaled", &recurrence_coeffs_scaled, py::arg("params"), py::arg("k"), py::arg("n"));
    m.def("limit_coeffs", &limit_coeffs, py::arg("params"), py::arg("s"));
    m.def("edge_curves", &edge_curves, py::arg("params"), py::arg("s"));
    m.def(
        "symbol_roots",
        [](const ScaledParams& sp, double s, std::complex<double> x) {
            const auto r = solve_symbol(sp, s, x);
            return std::vector<std::complex<double>>(r.z.begin(), r.z.end());
        },
        py::arg("params"), py::arg("s"), py::arg("x"));

    m.def(
        "zeros",
        [](const ScaledParams& sp, std::size_t n, std::size_t k) {
            return zeros_interlaced(Recurrence::scaled(sp, n, k + 1), k).zeros;
        },
        py::arg("params"), py::arg("n"), py::arg("k"));
    m.def("toeplitz_spectrum", &toeplitz_spectrum, py::arg("params"), py::arg("s"), py::arg("n"));

    m.def("mu1_density", &mu1_density, py::arg("params"), py::arg("s"), py::arg("x"));
    m.def("mu2_density", &mu2_density, py::arg("params"), py::arg("s"), py::arg("x"));
    m.def("nu1_density", &nu1_density, py::arg("params"), py::arg("xi"), py::arg("x"));
    m.def("nu2_density", &nu2_density, py::arg("params"), py::arg("xi"), py::arg("x"));
    m.def("nu1_cdf", &nu1_cdf, py::arg("params"), py::arg("xi"), py::arg("x"));
    m.def("sigma", &sigma_closed, py::arg("params"), py::arg("x"));
    m.def("field", &V_closed, py::arg("params"), py::arg("x"));
    m.def("field_numeric", &V_numeric, py::arg("params"), py::arg("x"));
    m.def("mp_density", &mp_density, py::arg("t"), py::arg("p"), py::arg("x"));
    m.def(
        "measure_mass",
        [](const std::string& name, const ScaledParams& sp, double arg) {
            const auto g = measure_grid(name, sp, arg);
            return std::isfinite(g.mass) ? total_mass(g) : g.mass;
        },
        py::arg("name"), py::arg("params"), py::arg("arg") = 1.0);
    m.def(
        "measure_support",
        [](const std::string& name, const ScaledParams& sp, double arg) {
            const auto g = measure_grid(name, sp, arg);
            return std::pair{g.lower(), g.upper()};
        },
        py::arg("name"), py::arg("params"), py::arg("arg") = 1.0);

    m.def(
        "check_variational_mu",
        [](const ScaledParams& sp, double s) {
            const auto r = check_variational_mu(sp, s);
            return std::pair{report_dict(r.first), report_dict(r.second)};
        },
        py::arg("params"), py::arg("s"));
    m.def(
        "check_variational_nu",
        [](const ScaledParams& sp, double xi) {
            const auto r = check_variational_nu(sp, xi);
            return std::pair{report_dict(r.first), report_dict(r.second)};
        },
        py::arg("params"), py::arg("xi") = 1.0);
    m.def(
        "energy",
        [](const ScaledParams& sp, double xi) {
            return energy(interpolated(nu1_grid(sp, xi)), interpolated(nu2_grid(sp, xi)), sp, xi);
        },
        py::arg("params"), py::arg("xi") = 1.0);

    m.def(
        "simulate",
        [](std::size_t n, long alpha, double a, std::size_t steps, std::uint64_t seed, std::size_t replica) {
            py::gil_scoped_release release;
            const auto e = simulate(n, alpha, a, SimConfig{steps, seed, 1}, replica);
            std::vector<double> taus;
            for (std::size_t i = 0; i < e.times.size(); ++i) taus.push_back(e.tau(i));
            return std::pair{taus, e.positions};
        },
        py::arg("n"), py::arg("alpha") = 0, py::arg("a") = 1.0, py::arg("steps") = 200, py::arg("seed") = 0,
        py::arg("replica") = 0);

    m.def(
        "run_criterion",
        [](int id) {
            py::gil_scoped_release release;
            const auto r = run_criterion(id);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            return d;
        },
        py::arg("id"));
}
