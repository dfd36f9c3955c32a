#include "berryphase/errors.hpp"
#include "berryphase/multiphoton.hpp"
#include "berryphase/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace berry;

namespace {

ParamPoint make_point(double m, double omega, cplx alpha, cplx beta) {
    ParamPoint p;
    p.m = m;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    p.validate();
    return p;
}

EngineOptions engine_options(bool check_convergence) {
    EngineOptions o;
    o.check_convergence = check_convergence;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Berry phases of the generalized harmonic oscillator";
    m.attr("__version__") = cli::version();

    auto base_error = py::register_exception<Error>(m, "BerryError");
    py::register_exception<ValidationError>(m, "ValidationError", base_error.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgumentError", base_error.ptr());

    py::enum_<Coordinate>(m, "Coordinate")
        .value("lambda_", Coordinate::lambda)
        .value("log_m", Coordinate::log_m)
        .value("log_omega", Coordinate::log_omega)
        .value("alpha1", Coordinate::alpha1)
        .value("alpha2", Coordinate::alpha2)
        .value("beta1", Coordinate::beta1)
        .value("beta2", Coordinate::beta2);

    py::class_<ParamPoint>(m, "ParamPoint")
        .def(py::init(&make_point), py::arg("m") = 1.0, py::arg("omega") = 1.0, py::arg("alpha") = cplx{},
             py::arg("beta") = cplx{})
        .def_readwrite("m", &ParamPoint::m)
        .def_readwrite("omega", &ParamPoint::omega)
        .def_readwrite("alpha", &ParamPoint::alpha)
        .def_readwrite("beta", &ParamPoint::beta)
        .def_property_readonly("lambda_", &ParamPoint::lambda)
        .def("__repr__", [](const ParamPoint& p) {
            return "ParamPoint(m=" + std::to_string(p.m) + ", omega=" + std::to_string(p.omega) + ")";
        });

    py::class_<Wave>(m, "Wave")
        .def(py::init([](Coordinate c, double center, double amplitude, int frequency, double phase) {
                 return Wave{c, center, amplitude, frequency, phase};
             }),
             py::arg("coordinate"), py::arg("center"), py::arg("amplitude"), py::arg("frequency") = 1,
             py::arg("phase") = 0.0);

    py::class_<ParamLoop>(m, "ParamLoop")
        .def(py::init<std::vector<ParamPoint>, std::string>(), py::arg("points"), py::arg("description") = "")
        .def_property_readonly("segments", &ParamLoop::segments)
        .def_property_readonly("points", &ParamLoop::points)
        .def("reversed", &ParamLoop::reversed);

    m.def("circle_loop", &make_circle_loop, py::arg("base"), py::arg("x"), py::arg("y"), py::arg("center_x"),
          py::arg("center_y"), py::arg("radius"), py::arg("segments"));
    m.def(
        "wave_loop",
        [](const ParamPoint& base, const std::vector<Wave>& waves, int segments) {
            return make_wave_loop(base, waves, segments);
        },
        py::arg("base"), py::arg("waves"), py::arg("segments"));
    m.def(
        "polyline_loop",
        [](const ParamPoint& base, const std::vector<Coordinate>& coords, const std::vector<std::vector<double>>& pts,
           int segments) { return make_polyline_loop(base, coords, pts, segments); },
        py::arg("base"), py::arg("coords"), py::arg("points"), py::arg("segments"));
    m.def(
        "compose_loops", [](const std::vector<ParamLoop>& loops, int tether) { return compose_loops(loops, tether); },
        py::arg("loops"), py::arg("tether_segments") = 10);

    py::class_<PhaseReport>(m, "PhaseReport")
        .def_readonly("n", &PhaseReport::n)
        .def_readonly("gamma_wilson", &PhaseReport::gamma_wilson)
        .def_readonly("gamma_closed", &PhaseReport::gamma_closed)
        .def_readonly("gamma_d", &PhaseReport::gamma_d)
        .def_readonly("gamma_s", &PhaseReport::gamma_s)
        .def_readonly("discrepancy", &PhaseReport::discrepancy)
        .def_readonly("dim", &PhaseReport::dim)
        .def_readonly("segments", &PhaseReport::segments)
        .def_readonly("converged", &PhaseReport::converged);

    m.def(
        "wilson_loop_phases",
        [](const std::vector<int>& levels, const ParamLoop& loop, int dim) {
            return wilson_loop_phases(levels, loop, dim, engine_options(false));
        },
        py::arg("levels"), py::arg("loop"), py::arg("dim") = 80);
    m.def(
        "total_phases",
        [](const std::vector<int>& levels, const ParamLoop& loop, int dim, bool check_convergence) {
            return total_phases(levels, loop, dim, engine_options(check_convergence));
        },
        py::arg("levels"), py::arg("loop"), py::arg("dim") = 80, py::arg("check_convergence") = true);
    m.def("closed_form_displacement_phase", &closed_form_displacement_phase, py::arg("loop"));
    m.def("closed_form_squeeze_phase", &closed_form_squeeze_phase, py::arg("n"), py::arg("loop"));
    m.def(
        "hannay_angle",
        [](const ParamLoop& loop, int dim) { return hannay_angle(loop, dim, engine_options(false)); },
        py::arg("loop"), py::arg("dim") = 80);
    m.def(
        "beta_curvature", [](const ParamPoint& r, int n) { return curvature_at(r, CurvaturePlane::beta, n); },
        py::arg("point"), py::arg("n"));
    m.def(
        "multiphoton_phases",
        [](const std::vector<int>& levels, const ParamLoop& loop, int dim) {
            return multiphoton_berry_phases(levels, loop, dim, engine_options(false));
        },
        py::arg("levels"), py::arg("loop"), py::arg("dim") = 80);
    m.def(
        "squeezed_vacuum_eigenvalue",
        [](cplx beta, int dim) { return squeezed_vacuum_eigen_check(beta, dim).eigenvalue; }, py::arg("beta"),
        py::arg("dim") = 80);
    m.def(
        "gamma0_grid", [](const ParamLoop& loop) { return gamma0_grid(loop, GridSpec{}); }, py::arg("loop"));

    m.def(
        "run_config",
        [](const std::string& path, std::optional<int> dim, std::optional<int> segments) {
            const auto result = cli::run(cli::load_config(path), {dim, segments, false});
            return py::make_tuple(cli::phases_csv(result.report), cli::report_json(result.report),
                                  result.report.passed());
        },
        py::arg("path"), py::arg("dim") = py::none(), py::arg("segments") = py::none(),
        "Returns (phases_csv, report_json, passed).");
    m.def(
        "verify",
        [](const std::string& suite) {
            std::vector<py::tuple> out;
            for (const auto& c : cli::verify(cli::parse_suite(suite))) {
                out.push_back(py::make_tuple(c.suite, c.name, c.measured, c.threshold, c.passed));
            }
            return out;
        },
        py::arg("suite") = "all", "List of (suite, name, measured, threshold, passed).");
}
