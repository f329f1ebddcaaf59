#include "regulab/bfheat/bfheat.hpp"
#include "regulab/burgers/burgers.hpp"
#include "regulab/cli/config.hpp"
#include "regulab/cli/experiments.hpp"
#include "regulab/core/errors.hpp"
#include "regulab/core/weak_form.hpp"
#include "regulab/greenlink/greenlink.hpp"
#include "regulab/noise/noise.hpp"
#include "regulab/peridyn/peridyn.hpp"
#include "regulab/rdnonlocal/rdnonlocal.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace regulab;

namespace {

std::vector<double> values_of(const Field& f) { return {f.values().begin(), f.values().end()}; }

py::list trajectory_to_list(const Trajectory& tr)
{
    py::list out;
    for (const auto& s : tr) out.append(py::make_tuple(s.t, values_of(s.u)));
    return out;
}

py::dict kernel_to_dict(const greenlink::Kernel& k)
{
    py::dict d;
    std::vector<double> offsets(k.values.size());
    for (std::size_t j = 0; j < offsets.size(); ++j) offsets[j] = greenlink::signed_offset(k.grid, j);
    d["offsets"] = offsets;
    d["values"] = k.values;
    d["mass"] = k.mass;
    d["support_radius"] = k.support_radius;
    return d;
}

greenlink::KernelSampling sampling_from(const std::string& s)
{
    if (s == "auto") return greenlink::KernelSampling::Auto;
    if (s == "cell-average") return greenlink::KernelSampling::CellAverage;
    if (s == "point") return greenlink::KernelSampling::Point;
    if (s == "kink-corrected") return greenlink::KernelSampling::KinkCorrected;
    throw ValidationError("unknown kernel sampling '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_regulab, m)
{
    m.doc() = "Regularization experiments for ill-posed and nonlocal 1-D PDEs";
    m.attr("__version__") = cli::tool_version();

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<CflError>(m, "CflError", PyExc_RuntimeError);
    py::register_exception<StabilityError>(m, "StabilityError", PyExc_RuntimeError);

    py::enum_<Boundary>(m, "Boundary")
        .value("Periodic", Boundary::Periodic)
        .value("Dirichlet0", Boundary::Dirichlet0)
        .value("Neumann0", Boundary::Neumann0);

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<double, double, std::size_t, Boundary>(), py::arg("x_min"), py::arg("x_max"),
             py::arg("n"), py::arg("bc"))
        .def_property_readonly("dx", &Grid1D::dx)
        .def_property_readonly("size", &Grid1D::size)
        .def_property_readonly("bc", &Grid1D::bc)
        .def("nodes", &Grid1D::nodes);

    py::class_<Field>(m, "Field")
        .def(py::init<Grid1D, std::vector<double>>(), py::arg("grid"), py::arg("values"))
        .def_static("sample", &Field::sample, py::arg("grid"), py::arg("f"))
        .def_property_readonly("grid", &Field::grid)
        .def_property_readonly("values", &values_of)
        .def("__len__", &Field::size);

    py::class_<StepControl>(m, "StepControl")
        .def(py::init([](double dt, double t_end, std::size_t store_every) {
                 return StepControl{dt, t_end, store_every};
             }),
             py::arg("dt"), py::arg("t_end"), py::arg("store_every") = 1)
        .def_readwrite("dt", &StepControl::dt)
        .def_readwrite("t_end", &StepControl::t_end)
        .def_readwrite("store_every", &StepControl::store_every);

    // burgers
    m.def("godunov_flux", &burgers::godunov_flux, py::arg("left"), py::arg("right"));
    m.def(
        "burgers_solve",
        [](const Field& u0, double eps, const StepControl& step, double theta) {
            return trajectory_to_list(burgers::solve(u0, eps, step, theta));
        },
        py::arg("u0"), py::arg("epsilon"), py::arg("step"), py::arg("theta") = 0.5,
        "List of (t, values); epsilon = 0 runs the Godunov scheme.");
    m.def(
        "vanishing_viscosity_sweep",
        [](const Field& u0, const std::vector<double>& eps, const StepControl& step) {
            const auto r = burgers::vanishing_viscosity_sweep(u0, eps, step);
            py::list members;
            for (const auto& mm : r.members) {
                py::dict d;
                d["epsilon"] = mm.epsilon;
                d["u_final"] = values_of(mm.u_final);
                d["l1_distance"] = mm.l1_distance;
                d["max_gradient"] = mm.max_gradient;
                members.append(d);
            }
            py::dict out;
            out["reference"] = values_of(r.reference);
            out["members"] = members;
            out["distances_nonincreasing"] = r.distances_nonincreasing;
            out["profiles_steepen"] = r.profiles_steepen;
            return out;
        },
        py::arg("u0"), py::arg("epsilons"), py::arg("step"));

    // bfheat
    py::class_<bfheat::FluxFunction>(m, "FluxFunction")
        .def_static("linear", &bfheat::FluxFunction::linear, py::arg("slope"))
        .def_static("cubic", &bfheat::FluxFunction::cubic)
        .def_static("piecewise_linear", &bfheat::FluxFunction::piecewise_linear,
                    py::arg("breakpoints"), py::arg("slopes"))
        .def("value", &bfheat::FluxFunction::value)
        .def("slope", &bfheat::FluxFunction::slope)
        .def("energy", &bfheat::FluxFunction::energy);
    m.def("step_biharmonic", &bfheat::step_biharmonic, py::arg("u"), py::arg("phi"),
          py::arg("epsilon"), py::arg("dt"));
    m.def("step_pseudoparabolic", &bfheat::step_pseudoparabolic, py::arg("u"), py::arg("phi"),
          py::arg("epsilon"), py::arg("dt"));
    m.def(
        "regularized_run",
        [](const std::string& kind, const Field& u0, const bfheat::FluxFunction& phi, double eps,
           const StepControl& step, std::size_t bins) {
            if (kind != "biharmonic" && kind != "pseudoparabolic")
                throw ValidationError("kind must be 'biharmonic' or 'pseudoparabolic'");
            const auto r = bfheat::run(kind == "biharmonic" ? bfheat::Regularization::Biharmonic
                                                            : bfheat::Regularization::Pseudoparabolic,
                                       u0, phi, eps, step, bins);
            const auto b = bfheat::bimodality(r.histogram);
            py::dict d;
            d["u_final"] = values_of(r.u_final);
            d["bin_edges"] = r.histogram.edges;
            d["counts"] = r.histogram.counts;
            d["energy"] = r.energy;
            d["max_energy_increase"] = r.max_energy_increase;
            d["bimodal"] = b.has_two_peaks;
            d["peaks"] = py::make_tuple(b.negative_peak, b.positive_peak);
            return d;
        },
        py::arg("kind"), py::arg("u0"), py::arg("phi"), py::arg("epsilon"), py::arg("step"),
        py::arg("bins") = 64);

    // greenlink
    m.def(
        "exp_kernel",
        [](double eps, const Grid1D& grid, const std::string& sampling) {
            return kernel_to_dict(greenlink::exp_kernel(eps, grid, sampling_from(sampling)));
        },
        py::arg("epsilon"), py::arg("grid"), py::arg("sampling") = "auto");
    m.def(
        "spectral_kernel",
        [](const std::vector<double>& coeffs, const Grid1D& grid) {
            return kernel_to_dict(greenlink::spectral_kernel({coeffs}, grid));
        },
        py::arg("coeffs"), py::arg("grid"));
    m.def("dispersion", &greenlink::dispersion, py::arg("k"), py::arg("epsilon"));
    m.def(
        "equivalence_report",
        [](const Field& u0, const Field& v0, double eps, const StepControl& step) {
            const auto r = greenlink::equivalence_report(u0, v0, eps, step);
            py::dict d;
            d["difference"] = r.difference;
            d["coarse_difference"] = r.coarse_difference;
            d["observed_order"] = r.observed_order;
            d["kernel_deficit"] = r.kernel_deficit;
            d["tolerance"] = r.tolerance;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("u0"), py::arg("v0"), py::arg("epsilon"), py::arg("step"));

    // rdnonlocal
    py::class_<rdnonlocal::RDParams>(m, "RDParams")
        .def(py::init<>())
        .def_readwrite("g", &rdnonlocal::RDParams::g)
        .def_readwrite("h", &rdnonlocal::RDParams::h)
        .def_readwrite("f", &rdnonlocal::RDParams::f)
        .def_readwrite("xi", &rdnonlocal::RDParams::xi)
        .def_readwrite("D", &rdnonlocal::RDParams::D)
        .def_readwrite("tau", &rdnonlocal::RDParams::tau)
        .def("sigma", &rdnonlocal::RDParams::sigma)
        .def("s", &rdnonlocal::RDParams::s);
    m.def(
        "asym_kernel",
        [](const rdnonlocal::RDParams& p, const Grid1D& grid) {
            return kernel_to_dict(rdnonlocal::asym_kernel(p, grid));
        },
        py::arg("params"), py::arg("grid"));
    m.def(
        "tau_limit_report",
        [](const Field& u0, const rdnonlocal::RDParams& p, const std::vector<double>& taus,
           const StepControl& step) {
            const auto r = rdnonlocal::tau_limit_report(u0, std::nullopt, p, taus, step);
            py::dict d;
            std::vector<double> e;
            for (const auto& mm : r.members) e.push_back(mm.discrepancy);
            d["taus"] = taus;
            d["discrepancies"] = e;
            d["coupling"] = r.coupling;
            d["nonincreasing"] = r.nonincreasing;
            return d;
        },
        py::arg("u0"), py::arg("params"), py::arg("taus"), py::arg("step"));

    // peridyn
    py::class_<peridyn::Micromodulus> mu(m, "Micromodulus");
    py::enum_<peridyn::Micromodulus::Kind>(mu, "Kind")
        .value("Constant", peridyn::Micromodulus::Kind::Constant)
        .value("Triangular", peridyn::Micromodulus::Kind::Triangular);
    mu.def(py::init([](peridyn::Micromodulus::Kind kind, double lambda0, double delta) {
              peridyn::Micromodulus out{kind, lambda0, delta};
              out.validate();
              return out;
          }),
           py::arg("kind"), py::arg("lambda0"), py::arg("delta"))
        .def("__call__", &peridyn::Micromodulus::operator());
    m.def("raw_moment", &peridyn::raw_moment, py::arg("mu"), py::arg("p"));
    m.def("raw_moment_quadrature", &peridyn::raw_moment_quadrature, py::arg("mu"), py::arg("p"));
    m.def("apply_nonlocal", &peridyn::apply_nonlocal_1d, py::arg("u"), py::arg("mu"));
    m.def(
        "moment_tensor_3d",
        [](const peridyn::Micromodulus& mm) {
            const auto t = peridyn::moment_tensor_3d(mm);
            py::dict d;
            d["xxxx"] = t.xxxx;
            d["xxyy"] = t.xxyy;
            d["xyxy"] = t.xyxy;
            d["isotropy_deviation"] = t.isotropy_deviation;
            d["mu"] = t.mu;
            d["lambda"] = t.lambda_lame;
            d["bulk"] = t.bulk;
            return d;
        },
        py::arg("mu"));

    // noise
    m.def("splitmix64", &noise::splitmix64, py::arg("x"));
    m.def(
        "heat_ensemble",
        [](const Grid1D& grid, std::size_t n_samples, double amp, const StepControl& step,
           std::uint64_t seed) {
            noise::HeatConfig cfg{Field::zeros(grid), {}, amp, step};
            const auto s = noise::heat_ensemble(n_samples, cfg, seed);
            py::dict d;
            d["mean"] = values_of(s.mean);
            d["variance"] = values_of(s.variance);
            d["n_samples"] = s.n_samples;
            return d;
        },
        py::arg("grid"), py::arg("n_samples"), py::arg("noise_amp"), py::arg("step"), py::arg("seed"));

    // weak residual of a trajectory given as [(t, values), ...]
    m.def(
        "weak_residual",
        [](const Grid1D& grid, const std::vector<std::pair<double, std::vector<double>>>& snaps,
           const std::string& equation, double a, double b) {
            Trajectory tr;
            for (const auto& [t, v] : snaps) tr.push_back({t, Field(grid, v)});
            const auto eq = equation == "burgers" ? WeakEquation::burgers() : WeakEquation::heat(1.0);
            return weak_residual(tr, eq, TestFunction(TestFunction::Kind::PolynomialBump, a, b));
        },
        py::arg("grid"), py::arg("snapshots"), py::arg("equation"), py::arg("support_begin"),
        py::arg("support_end"));

    // experiment runner
    m.def("experiment_ids", &cli::experiment_ids);
    m.def(
        "parse_config",
        [](const std::string& text, const std::string& experiment) {
            const auto r = cli::parse_config(text, experiment);
            return py::make_tuple(r.ok(), r.errors);
        },
        py::arg("text"), py::arg("experiment") = "",
        "Returns (ok, errors); every problem in the document is listed.");
    m.def(
        "_run_experiment",
        [](const std::string& id, const std::string& text, const std::string& out, bool svg,
           std::optional<std::uint64_t> seed) {
            const auto r = cli::parse_config(text, id);
            if (!r.ok()) {
                std::string msg;
                for (const auto& e : r.errors) msg += (msg.empty() ? "" : "; ") + e;
                throw ValidationError(msg);
            }
            py::gil_scoped_release release;
            return cli::run_experiment(*r.config, {out, svg, seed}).to_json();
        });
}
