#include "regulab/cli/experiments.hpp"

#include "regulab/bfheat/bfheat.hpp"
#include "regulab/burgers/burgers.hpp"
#include "regulab/core/errors.hpp"
#include "regulab/core/stencil.hpp"
#include "regulab/core/weak_form.hpp"
#include "regulab/greenlink/greenlink.hpp"
#include "regulab/noise/noise.hpp"
#include "regulab/peridyn/peridyn.hpp"
#include "regulab/rdnonlocal/rdnonlocal.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#ifndef REGULAB_VERSION
#define REGULAB_VERSION "0.0.0"
#endif

namespace regulab::cli {

namespace {

constexpr double pi = std::numbers::pi;

/// Runs f and prefixes any error with the operation that failed.
template <class F>
auto stage(const std::string& operation, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(operation + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(operation + ": " + e.what());
    }
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Context {
    const ExperimentConfig& config;
    const RunOptions& options;
    OutputSink& sink;
    RunManifest& manifest;

    void check(std::string name, double measured, std::string criterion, bool pass)
    {
        manifest.checks.push_back({std::move(name), measured, std::move(criterion), pass});
    }
    void csv(const std::string& name, const CsvTable& t) { sink.write(name, t.render()); }
    void svg(const std::string& name, const std::vector<Series>& s, const PlotStyle& style)
    {
        if (options.svg) sink.write(name, emit_plot(s, style));
    }
};

Boundary boundary_from(const std::string& s)
{
    if (s == "periodic") return Boundary::Periodic;
    if (s == "neumann0") return Boundary::Neumann0;
    return Boundary::Dirichlet0;
}

std::string eps_label(double e) { return "\xCE\xB5 = " + num(e); }

// ---------------------------------------------------------------- burgers

void run_burgers(Context& ctx)
{
    const auto& c = ctx.config;
    const Grid1D grid(c.real("grid.x_min"), c.real("grid.x_max"), c.count("grid.n"),
                      boundary_from(c.choice("grid.boundary")));
    const std::string& shape = c.choice("model.initial");
    const Field u0 = Field::sample(grid, [&](double x) {
        if (shape == "riemann") return x < 0.0 ? 1.0 : 0.0;
        if (shape == "sine") return std::sin(pi * x);
        return 1.0 - x * x;
    });
    const auto& eps = c.list("model.epsilons");
    const StepControl step{c.real("time.dt"), c.real("time.t_end"), 1000000000};
    const auto report = stage("vanishing_viscosity_sweep", [&] {
        return burgers::vanishing_viscosity_sweep(u0, eps, step, c.real("time.theta"));
    });

    CsvTable profiles{{"epsilon", "x", "u_final"}, {}};
    CsvTable distances{{"epsilon", "l1_distance", "max_gradient"}, {}};
    std::vector<Series> plot;
    for (const auto& m : report.members) {
        Series s{eps_label(m.epsilon), grid.nodes(), {}};
        for (std::size_t j = 0; j < grid.size(); ++j) {
            profiles.add({m.epsilon, grid.x(j), m.u_final[j]});
            s.y.push_back(m.u_final[j]);
        }
        distances.add({m.epsilon, m.l1_distance, m.max_gradient});
        plot.push_back(std::move(s));
    }
    Series ref{"Godunov (\xCE\xB5 = 0)", grid.nodes(), {}};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        profiles.add({0.0, grid.x(j), report.reference[j]});
        ref.y.push_back(report.reference[j]);
    }
    plot.push_back(std::move(ref));
    ctx.csv("profiles.csv", profiles);
    ctx.csv("distances.csv", distances);
    ctx.svg("profiles.svg", plot, {"Burgers profiles at t = " + num(step.t_end), "x", "u"});

    double worst_rise = -INFINITY, worst_steepening = INFINITY;
    for (std::size_t i = 1; i < report.members.size(); ++i) {
        worst_rise = std::max(worst_rise, report.members[i].l1_distance -
                                              report.members[i - 1].l1_distance);
        worst_steepening = std::min(worst_steepening, report.members[i].max_gradient /
                                                          report.members[i - 1].max_gradient);
    }
    if (report.members.size() < 2) worst_rise = 0.0, worst_steepening = INFINITY;
    ctx.check("L1 distance to Godunov nonincreasing as epsilon decreases", worst_rise,
              "largest increase <= 0", report.distances_nonincreasing);
    ctx.check("max gradient increases as epsilon decreases", worst_steepening,
              "smallest ratio > 1", report.profiles_steepen);
}

// ---------------------------------------------------------------- bfheat

bfheat::FluxFunction flux_from(const ExperimentConfig& c)
{
    const std::string& kind = c.choice("model.flux");
    if (kind == "linear") return bfheat::FluxFunction::linear(c.real("model.slope"));
    if (kind == "piecewise") return bfheat::FluxFunction::piecewise_linear({-0.5, 0.5}, {1.0, -0.5, 1.0});
    return bfheat::FluxFunction::cubic();
}

void run_bfheat(Context& ctx)
{
    const auto& c = ctx.config;
    const double length = c.real("grid.length");
    const Grid1D grid(0.0, length, c.count("grid.n"), boundary_from(c.choice("grid.boundary")));
    const double amp = c.real("model.gradient_amplitude");
    const Field u0 = Field::sample(
        grid, [&](double x) { return amp * length / (2.0 * pi) * std::sin(2.0 * pi * x / length); });
    const auto phi = flux_from(c);

    // Gradients settle near the stable branches, so the slope bound covers
    // somewhat more than the initial range.
    const double range = std::max(1.5, 1.5 * amp);
    const double dt_limit = grid.dx() * grid.dx() / (2.0 * phi.max_abs_slope(-range, range));
    const double t_end = c.real("time.t_end");
    const double steps = std::ceil(t_end / (c.real("time.cfl") * dt_limit));
    const StepControl step{t_end / steps, t_end, c.count("time.energy_every")};
    const auto bins = c.count("model.bins");
    const auto report = stage("regularisation_comparison", [&] {
        return bfheat::regularisation_comparison(u0, phi, c.list("model.epsilons"), step, bins);
    });

    CsvTable profiles{{"epsilon", "regularization", "x", "u_final"}, {}};
    CsvTable histogram{{"epsilon", "regularization", "bin_center", "count"}, {}};
    CsvTable energy{{"epsilon", "regularization", "t", "E"}, {}};
    std::vector<Series> plot;
    const bool nonmonotone = c.choice("model.flux") != "linear";
    for (const auto& m : report.members) {
        for (int kind = 0; kind < 2; ++kind) {
            const auto& run = kind == 0 ? m.biharmonic : m.pseudoparabolic;
            const std::string name = kind == 0 ? "biharmonic" : "pseudoparabolic";
            for (std::size_t j = 0; j < grid.size(); ++j)
                profiles.add({m.epsilon, double(kind), grid.x(j), run.u_final[j]});
            Series s{name + ", " + eps_label(m.epsilon), {}, {}};
            for (std::size_t i = 0; i < run.histogram.bins(); ++i) {
                histogram.add({m.epsilon, double(kind), run.histogram.center(i),
                               double(run.histogram.counts[i])});
                s.x.push_back(run.histogram.center(i));
                s.y.push_back(double(run.histogram.counts[i]));
            }
            plot.push_back(std::move(s));
            for (const auto& [t, e] : run.energy) energy.add({m.epsilon, double(kind), t, e});

            const std::string tag = name + " eps=" + num(m.epsilon);
            const double e0 = std::abs(run.energy.front().second);
            ctx.check(tag + ": energy nonincreasing", run.max_energy_increase,
                      "largest step increase <= 1e-12 * |E0|",
                      run.max_energy_increase <= 1e-12 * std::max(e0, 1e-300));
            if (grid.periodic()) {
                const double drift = std::abs(mass(run.u_final) - mass(u0));
                ctx.check(tag + ": mass conserved", drift, "<= 1e-10", drift <= 1e-10);
            }
            if (nonmonotone) {
                const auto b = bfheat::bimodality(run.histogram);
                ctx.check(tag + ": gradient histogram bimodal", b.has_two_peaks ? 1.0 : 0.0,
                          "two separated peaks", b.has_two_peaks);
                const bool inside = b.has_two_peaks && b.negative_peak >= -1.2 &&
                                    b.negative_peak <= -0.8 && b.positive_peak >= 0.8 &&
                                    b.positive_peak <= 1.2;
                ctx.check(tag + ": peaks in [-1.2,-0.8] and [0.8,1.2]",
                          std::max(std::abs(b.negative_peak + 1.0), std::abs(b.positive_peak - 1.0)),
                          "largest peak offset from +-1 <= 0.2", inside);
            }
        }
    }
    ctx.csv("profiles.csv", profiles);
    ctx.csv("histogram.csv", histogram);
    ctx.csv("energy.csv", energy);
    ctx.svg("histogram.svg", plot, {"Gradient histograms at t = " + num(t_end), "u_x", "count"});
}

// ---------------------------------------------------------------- greenlink

greenlink::KernelSampling sampling_from(const std::string& s)
{
    using greenlink::KernelSampling;
    if (s == "cell-average") return KernelSampling::CellAverage;
    if (s == "point") return KernelSampling::Point;
    if (s == "kink-corrected") return KernelSampling::KinkCorrected;
    return KernelSampling::Auto;
}

const char* sampling_name(greenlink::KernelSampling s)
{
    switch (s) {
    case greenlink::KernelSampling::CellAverage: return "cell-average";
    case greenlink::KernelSampling::Point: return "point";
    case greenlink::KernelSampling::KinkCorrected: return "kink-corrected";
    default: return "auto";
    }
}

CsvTable kernel_table(const greenlink::Kernel& k)
{
    CsvTable t{{"x", "G"}, {}};
    const std::size_t n = k.grid.size();
    // Ascending offsets: the negative half first.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + (n + 1) / 2) % n;
        t.add({greenlink::signed_offset(k.grid, j), k.values[j]});
    }
    return t;
}

void run_greenlink(Context& ctx)
{
    const auto& c = ctx.config;
    const double hw = c.real("grid.half_width");
    const Grid1D grid(-hw, hw, c.count("grid.n"), Boundary::Periodic);
    const double eps = c.real("model.epsilon");
    const auto requested = sampling_from(c.choice("model.sampling"));
    const Field u0 = Field::sample(grid, [](double x) { return std::exp(-x * x); });
    const Field v0 = Field::zeros(grid);
    const StepControl step{c.real("time.cfl") * grid.dx(), c.real("time.t_end"), 1};

    const auto report = stage("equivalence_report", [&] {
        return greenlink::equivalence_report(u0, v0, eps, step, 0.15, requested);
    });
    const auto kernel = stage("exp_kernel", [&] { return greenlink::exp_kernel(eps, grid, report.sampling); });
    ctx.csv("kernel.csv", kernel_table(kernel));

    StepControl stored = step;
    stored.store_every = c.count("time.store_every");
    const auto nonlocal = stage("nonlocal_wave_solve", [&] {
        return greenlink::nonlocal_wave_solve({u0, v0}, kernel, stored);
    });
    const auto regular = stage("regularized_wave_solve", [&] {
        return greenlink::regularized_wave_solve({u0, v0}, eps, stored);
    });
    CsvTable traj{{"t", "x", "u"}, {}};
    for (const auto& s : nonlocal)
        for (std::size_t j = 0; j < grid.size(); ++j) traj.add({s.t, grid.x(j), s.u[j]});
    ctx.csv("trajectory.csv", traj);
    ctx.svg("final.svg",
            {{"nonlocal wave", grid.nodes(), std::vector<double>(nonlocal.back().u.values().begin(),
                                                                 nonlocal.back().u.values().end())},
             {"regularized wave", grid.nodes(),
              std::vector<double>(regular.back().u.values().begin(), regular.back().u.values().end())}},
            {"Wave profiles at t = " + num(step.t_end), "x", "u"});

    const double tol = c.real("model.tolerance");
    ctx.check("equivalence <= tolerance", report.difference, "<= " + num(tol),
              report.difference <= tol);
    ctx.check("gap within discretization bound", report.difference,
              "<= 0.15 (dx^2 + |kernel deficit|) = " + num(report.tolerance), report.pass);

    // Dispersion: cosine modes on [0, 8 pi], frequency read from u(0, t).
    const Grid1D wide(0.0, 8.0 * pi, c.count("dispersion.n"), Boundary::Periodic);
    const StepControl dstep{0.5 * wide.dx(), c.real("dispersion.t_end"), 1};
    const auto wide_kernel = stage("exp_kernel", [&] { return greenlink::exp_kernel(eps, wide, requested); });
    const double dtol = c.real("dispersion.tolerance");
    CsvTable disp{{"k", "predicted", "nonlocal", "regularized"}, {}};
    std::ostringstream dispersion_text;
    for (double k : c.list("dispersion.modes")) {
        const Field m0 = Field::sample(wide, [&](double x) { return std::cos(k * x); });
        const auto a = stage("nonlocal_wave_solve", [&] {
            return greenlink::nonlocal_wave_solve({m0, Field::zeros(wide)}, wide_kernel, dstep);
        });
        const auto b = stage("regularized_wave_solve", [&] {
            return greenlink::regularized_wave_solve({m0, Field::zeros(wide)}, eps, dstep);
        });
        std::vector<double> t, ya, yb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            t.push_back(a[i].t);
            ya.push_back(a[i].u[0]);
            yb.push_back(b[i].u[0]);
        }
        const double predicted = greenlink::dispersion(k, eps);
        const double wa = stage("oscillation_frequency", [&] { return greenlink::oscillation_frequency(t, ya); });
        const double wb = stage("oscillation_frequency", [&] { return greenlink::oscillation_frequency(t, yb); });
        disp.add({k, predicted, wa, wb});
        const double ea = std::abs(wa / predicted - 1.0), eb = std::abs(wb / predicted - 1.0);
        ctx.check("dispersion k=" + num(k) + " nonlocal", ea, "relative error <= " + num(dtol), ea <= dtol);
        ctx.check("dispersion k=" + num(k) + " regularized", eb, "relative error <= " + num(dtol), eb <= dtol);
        dispersion_text << "k = " << num(k) << ": predicted " << num(predicted) << ", nonlocal "
                        << num(wa) << " (" << (ea <= dtol ? "PASS" : "FAIL") << "), regularized "
                        << num(wb) << " (" << (eb <= dtol ? "PASS" : "FAIL") << ")\n";
    }
    ctx.csv("dispersion.csv", disp);

    std::ostringstream os;
    os << "equivalence report\n"
       << "epsilon = " << num(eps) << "\n"
       << "dx = " << num(report.dx) << "\n"
       << "kernel sampling = " << sampling_name(report.sampling) << "\n"
       << "kernel mass deficit = " << num(report.kernel_deficit) << "\n"
       << "max-in-time L-inf gap = " << num(report.difference) << "\n"
       << "gap at half resolution = " << num(report.coarse_difference) << "\n"
       << "measured order = " << num(report.observed_order) << "\n"
       << "equivalence <= " << num(tol) << ": " << (report.difference <= tol ? "PASS" : "FAIL") << "\n"
       << "discretization bound " << num(report.tolerance) << ": " << (report.pass ? "PASS" : "FAIL")
       << "\n\ndispersion\n"
       << dispersion_text.str();
    ctx.sink.write("equivalence.txt", os.str());
}

// ---------------------------------------------------------------- rdnonlocal

void run_rd(Context& ctx)
{
    const auto& c = ctx.config;
    const double length = c.real("grid.length");
    const Grid1D grid(-0.5 * length, 0.5 * length, c.count("grid.n"), Boundary::Periodic);
    rdnonlocal::RDParams p;
    p.g = c.real("model.g");
    p.h = c.real("model.h");
    p.f = c.real("model.f");
    p.xi = c.real("model.xi");
    p.D = c.real("model.D");
    stage("RDParams", [&] { p.validate(); return 0; });
    const double amp = c.real("model.amplitude");
    const Field u0 = Field::sample(grid, [&](double x) { return amp * std::exp(-x * x); });
    std::optional<Field> w0;
    if (c.choice("model.w0") == "zero") w0 = Field::zeros(grid);
    const StepControl step{c.real("time.dt"), c.real("time.t_end"), 1000000000};
    const auto& taus = c.list("model.taus");

    const auto kernel = stage("inhibitor_green", [&] { return rdnonlocal::inhibitor_green(p, grid); });
    const auto report = stage("tau_limit_report", [&] {
        return rdnonlocal::tau_limit_report(u0, w0, p, taus, step);
    });

    CsvTable tau{{"tau", "l2_discrepancy"}, {}};
    CsvTable fields{{"tau", "x", "u_final"}, {}};
    std::vector<Series> plot;
    Series limit{"scalar limit", grid.nodes(), {}};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        fields.add({0.0, grid.x(j), report.scalar_final[j]});
        limit.y.push_back(report.scalar_final[j]);
    }
    for (const auto& m : report.members) {
        tau.add({m.tau, m.discrepancy});
        Series s{"\xCF\x84 = " + num(m.tau), grid.nodes(), {}};
        for (std::size_t j = 0; j < grid.size(); ++j) {
            fields.add({m.tau, grid.x(j), m.u_final[j]});
            s.y.push_back(m.u_final[j]);
        }
        plot.push_back(std::move(s));
    }
    plot.push_back(std::move(limit));
    ctx.csv("tau.csv", tau);
    ctx.csv("fields.csv", fields);
    ctx.csv("kernel.csv", kernel_table(kernel));
    ctx.svg("fields.svg", plot, {"Activator at t = " + num(step.t_end), "x", "u"});

    const double mass_gap = std::abs(kernel.mass - 1.0);
    ctx.check("kernel mass within 1e-6 of 1", mass_gap, "<= 1e-6", mass_gap <= 1e-6);
    double worst = -INFINITY;
    for (std::size_t i = 1; i < report.members.size(); ++i)
        worst = std::max(worst, report.members[i].discrepancy - report.members[i - 1].discrepancy);
    if (report.members.size() < 2) worst = 0.0;
    ctx.check("discrepancy nonincreasing as tau decreases", worst, "largest increase <= 0",
              report.nonincreasing);
    const double bound = c.real("model.max_final_discrepancy");
    const double last = report.members.back().discrepancy;
    ctx.check("discrepancy at smallest tau", last, "<= " + num(bound), last <= bound);
}

// ---------------------------------------------------------------- peridyn

peridyn::Micromodulus::Kind micromodulus_from(const std::string& s)
{
    return s == "triangular" ? peridyn::Micromodulus::Kind::Triangular
                             : peridyn::Micromodulus::Kind::Constant;
}

void run_peridyn_study(Context& ctx)
{
    const auto& c = ctx.config;
    const double w = 2.0 * pi * c.real("model.wavenumber");
    peridyn::StudyConfig cfg;
    cfg.u = {[w](double x) { return std::sin(w * x); },
             [w](double x) { return -w * w * std::sin(w * x); },
             [w](double x) { return w * w * w * w * std::sin(w * x); }};
    cfg.kind = micromodulus_from(c.choice("model.micromodulus"));
    cfg.lambda0 = c.real("model.lambda0");
    cfg.deltas = c.list("model.deltas");
    cfg.normalization = c.choice("model.normalization") == "raw" ? peridyn::Normalization::Raw
                                                                  : peridyn::Normalization::FixedC2;
    cfg.surrogate_order = static_cast<unsigned>(c.integer("model.surrogate_order"));
    cfg.dx = c.real("grid.dx");
    cfg.sample_nodes = c.count("grid.sample_nodes");
    const auto report = stage("convergence_study", [&] { return peridyn::convergence_study(cfg); });

    CsvTable t{{"delta", "lambda0", "interior_error", "boundary_error", "observed_order"}, {}};
    std::vector<Series> plot(1, Series{"interior error", {}, {}});
    for (const auto& r : report.rows) {
        t.add({r.delta, r.lambda0, r.interior_error, r.boundary_error, report.observed_order});
        plot[0].x.push_back(std::log10(r.delta));
        plot[0].y.push_back(std::log10(r.interior_error));
    }
    ctx.csv("study.csv", t);
    ctx.svg("study.svg", plot, {"Interior error against horizon", "log10 delta", "log10 error"});

    if (cfg.normalization == peridyn::Normalization::FixedC2 && cfg.deltas.size() >= 2) {
        const double lo = cfg.surrogate_order == 2 ? 1.8 : 3.6;
        const double hi = cfg.surrogate_order == 2 ? 2.2 : 4.4;
        ctx.check("interior order against m=" + std::to_string(cfg.surrogate_order) + " surrogate",
                  report.observed_order, "in [" + num(lo) + ", " + num(hi) + "]",
                  report.observed_order >= lo && report.observed_order <= hi);
    }
}

void run_peridyn_moments(Context& ctx)
{
    const auto& c = ctx.config;
    const peridyn::Micromodulus mu{micromodulus_from(c.choice("model.micromodulus")),
                                   c.real("model.lambda0"), c.real("model.delta")};
    stage("Micromodulus", [&] { mu.validate(); return 0; });

    CsvTable t{{"order", "closed_form", "quadrature", "difference"}, {}};
    double odd = 0.0, even_rel = 0.0;
    for (unsigned p = 0; p <= static_cast<unsigned>(c.integer("model.max_order")); ++p) {
        const double exact = peridyn::raw_moment(mu, p);
        const double quad = peridyn::raw_moment_quadrature(mu, p);
        t.add({double(p), exact, quad, quad - exact});
        if (p % 2) odd = std::max(odd, std::abs(quad));
        else even_rel = std::max(even_rel, std::abs(quad - exact) / std::abs(exact));
    }
    ctx.csv("moments.csv", t);

    // Operator checks on a grid four horizons wide either side of the centre.
    const double dx = c.real("grid.dx");
    const double half = 4.0 * mu.delta;
    const auto nodes = static_cast<std::size_t>(std::llround(2.0 * half / dx)) + 1;
    const Grid1D grid(-half, half, nodes, Boundary::Neumann0);
    const std::size_t mid = nodes / 2;
    const auto on_constant = stage("apply_nonlocal_at", [&] {
        return peridyn::apply_nonlocal_at(Field::constant(grid, 3.0), mu, {0, 1, mid, nodes - 1});
    });
    double constant_gap = 0.0;
    for (double v : on_constant) constant_gap = std::max(constant_gap, std::abs(v));
    const auto on_quadratic = stage("apply_nonlocal_at", [&] {
        return peridyn::apply_nonlocal_at(Field::sample(grid, [](double x) { return x * x; }), mu, {mid});
    });
    const double quad_gap = std::abs(on_quadratic[0] - peridyn::raw_moment(mu, 4));
    const auto tensor = stage("moment_tensor_3d", [&] { return peridyn::moment_tensor_3d(mu); });
    const double ratio_gap = std::abs(tensor.xxxx / tensor.xxyy - 3.0);
    const double lame_gap = std::abs(tensor.mu - tensor.lambda_lame) / std::abs(tensor.mu);
    const double bulk_gap = std::abs(tensor.mu - 0.6 * tensor.bulk) / std::abs(tensor.mu);

    ctx.check("odd moments vanish", odd, "<= 1e-14", odd <= 1e-14);
    ctx.check("even moments quadrature vs closed form", even_rel, "relative <= 1e-12", even_rel <= 1e-12);
    ctx.check("operator annihilates constants", constant_gap, "<= 1e-13", constant_gap <= 1e-13);
    ctx.check("operator on x^2 equals 4th moment", quad_gap, "<= 1e-6", quad_gap <= 1e-6);
    ctx.check("3-D moment tensor isotropy deviation", tensor.isotropy_deviation, "<= 1e-10",
              tensor.isotropy_deviation <= 1e-10);
    ctx.check("M_xxxx / M_xxyy = 3", ratio_gap, "within 1e-8", ratio_gap <= 1e-8);
    ctx.check("mu = lambda", lame_gap, "relative <= 1e-12", lame_gap <= 1e-12);
    ctx.check("mu = 3K/5", bulk_gap, "relative <= 1e-12", bulk_gap <= 1e-12);

    std::ostringstream os;
    os.precision(17);
    os << "moment report\n"
       << "micromodulus = " << c.choice("model.micromodulus") << ", lambda0 = " << mu.lambda0
       << ", delta = " << mu.delta << "\n"
       << "M_xxxx = " << tensor.xxxx << "\nM_xxyy = " << tensor.xxyy << "\nM_xyxy = " << tensor.xyxy
       << "\nisotropic coefficient c = " << tensor.c << "\nisotropy deviation = "
       << tensor.isotropy_deviation << "\nsymmetry deviation = " << tensor.symmetry_deviation
       << "\nmu = " << tensor.mu << "\nlambda = " << tensor.lambda_lame << "\nK = " << tensor.bulk
       << "\nmu - 3K/5 = " << tensor.mu - 0.6 * tensor.bulk << "\nL(const) max = " << constant_gap
       << "\nL(x^2) - 4th moment = " << on_quadratic[0] - peridyn::raw_moment(mu, 4) << "\n";
    ctx.sink.write("moments.txt", os.str());
}

// ---------------------------------------------------------------- noise

void run_noise_heat(Context& ctx)
{
    const auto& c = ctx.config;
    const Grid1D grid(0.0, 1.0, c.count("grid.n"), Boundary::Dirichlet0);
    const double forcing = c.real("model.forcing");
    const double amp = c.real("model.noise_amp");
    noise::HeatConfig cfg{Field::zeros(grid), {}, amp, {c.real("time.dt"), c.real("time.t_end"), 1}};
    if (forcing != 0.0) cfg.f = [forcing](double, double) { return forcing; };
    const std::uint64_t seed = ctx.manifest.seed;
    const auto stats = stage("heat_ensemble", [&] {
        return noise::heat_ensemble(c.count("model.samples"), cfg, seed);
    });

    CsvTable t{{"x", "mean", "variance", "n", "seed"}, {}};
    Series measured{"sample variance", grid.nodes(), {}};
    Series exact{"amp^2 x(1-x)/2", grid.nodes(), {}};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        t.add({grid.x(j), stats.mean[j], stats.variance[j], double(stats.n_samples), double(seed)});
        measured.y.push_back(stats.variance[j]);
        exact.y.push_back(amp * amp * grid.x(j) * (1.0 - grid.x(j)) / 2.0);
    }
    ctx.csv("stats.csv", t);
    ctx.svg("variance.svg", {measured, exact}, {"Stationary variance, seed " + std::to_string(seed), "x", "variance"});

    const double tol = c.real("model.tolerance");
    const std::size_t mid = grid.size() / 2;
    double worst = 0.0;
    for (std::size_t j = mid - 2; j <= mid + 2; ++j) {
        const double target = amp * amp * grid.x(j) * (1.0 - grid.x(j)) / 2.0;
        worst = std::max(worst, target > 0.0 ? std::abs(stats.variance[j] / target - 1.0)
                                             : std::abs(stats.variance[j]));
    }
    ctx.check("stationary variance at the 5 central nodes", worst, "relative error <= " + num(tol),
              worst <= tol);

    // With the noise off the stochastic path must reproduce the deterministic solver.
    noise::HeatConfig quiet = cfg;
    quiet.u0 = Field::sample(grid, [](double x) { return std::sin(pi * x); });
    quiet.noise_amp = 0.0;
    noise::SeededRng rng(seed, 0);
    const auto path = stage("spde_heat_path", [&] { return noise::spde_heat_path(quiet, rng); });
    const ThetaStepper heat(diff2_matrix(grid), 0.5);
    NonlinearRhs rhs;
    if (forcing != 0.0)
        rhs = [&](const Field& u) {
            std::vector<double> r(u.size(), forcing);
            r.front() = r.back() = 0.0;
            return r;
        };
    auto [reference, unused] = march(quiet.step, quiet.u0,
                                     [&](const Field& u, double dt) { return heat.step(u, rhs, dt); },
                                     [](const Field&) { return 0; });
    const double gap = max_abs_diff(path.back().u.values(), reference.values());
    ctx.check("noise_amp = 0 matches the deterministic solver", gap, "<= 1e-12", gap <= 1e-12);
}

noise::DriftField drift_from(const ExperimentConfig& c)
{
    const std::string& kind = c.choice("model.drift");
    const double v = c.real("model.drift_value");
    if (kind == "constant") return noise::DriftField::constant(v);
    if (kind == "smooth") return noise::DriftField::from([v](double x) { return v * std::sin(x); });
    if (kind == "sqrt") return noise::DriftField::square_root();
    return noise::DriftField::constant(0.0);
}

void run_noise_transport(Context& ctx)
{
    const auto& c = ctx.config;
    const Grid1D grid(c.real("grid.x_min"), c.real("grid.x_max"), c.count("grid.n"), Boundary::Neumann0);
    const std::uint64_t seed = ctx.manifest.seed;
    noise::TransportConfig cfg;
    cfg.u0 = [](double x) { return std::exp(-x * x); };
    cfg.b = drift_from(c);
    cfg.t = c.real("time.t_end");
    cfg.dt = c.real("time.dt");
    cfg.n_samples = c.count("model.samples");
    cfg.heun = c.flag("model.heun");
    const auto est = stage("stochastic_transport_mean", [&] {
        return noise::stochastic_transport_mean(grid, cfg, seed);
    });

    // Constant drift c: X(t) = x - c t + W(t), so the mean is the Gaussian
    // datum smoothed by heat flow with diffusivity 1/2, shifted by c t.
    const bool has_oracle = c.choice("model.drift") == "zero" || c.choice("model.drift") == "constant";
    const double shift = c.choice("model.drift") == "constant" ? c.real("model.drift_value") * cfg.t : 0.0;
    auto oracle = [&](double x) {
        const double s = 1.0 + 2.0 * cfg.t;
        return std::exp(-(x - shift) * (x - shift) / s) / std::sqrt(s);
    };

    CsvTable t{{"x", "mean", "std_error", "n", "seed"}, {}};
    Series mean{"Monte Carlo mean", grid.nodes(), {}};
    Series ref{"heat oracle", grid.nodes(), {}};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        t.add({grid.x(j), est.mean[j], est.standard_error[j], double(est.used[j]), double(seed)});
        mean.y.push_back(est.mean[j]);
        ref.y.push_back(oracle(grid.x(j)));
    }
    ctx.csv("transport.csv", t);
    std::vector<Series> plot{mean};
    if (has_oracle) plot.push_back(ref);
    ctx.svg("transport.svg", plot, {"Transport mean at t = " + num(cfg.t) + ", seed " + std::to_string(seed), "x", "E u"});

    if (has_oracle) {
        double worst = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double allowed = 3.0 * est.standard_error[j] + 0.1 * cfg.dt;
            worst = std::max(worst, std::abs(est.mean[j] - oracle(grid.x(j))) / allowed);
        }
        ctx.check("mean within 3 standard errors + 0.1 dt of the heat oracle", worst,
                  "largest ratio <= 1", worst <= 1.0);
    }
    noise::TransportConfig flat = cfg;
    flat.u0 = [](double) { return 0.7; };
    flat.n_samples = 64;
    const auto flat_est = stage("stochastic_transport_mean", [&] {
        return noise::stochastic_transport_mean(grid, flat, seed);
    });
    double flat_gap = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (flat_est.used[j] > 0) flat_gap = std::max(flat_gap, std::abs(flat_est.mean[j] - 0.7));
    ctx.check("constant datum preserved exactly", flat_gap, "== 0", flat_gap == 0.0);

    const auto co = stage("coalescence_diagnostic", [&] {
        return noise::coalescence_diagnostic(noise::DriftField::square_root(), c.count("coalescence.paths"),
                                             c.real("coalescence.half_width"), c.real("coalescence.t_end"),
                                             c.real("coalescence.dt"), seed);
    });
    std::ostringstream os;
    os.precision(10);
    os << "characteristics report (seed " << seed << ")\n"
       << "drift = " << c.choice("model.drift") << ", samples = " << cfg.n_samples
       << ", dt = " << cfg.dt << ", t = " << cfg.t << ", heun = " << (cfg.heun ? "true" : "false") << "\n"
       << "escaped path-node pairs = " << est.escapes << "\n\n"
       << "coalescence diagnostic (qualitative): b(x) = sign(x) sqrt|x|, " << c.count("coalescence.paths")
       << " starts in [-" << c.real("coalescence.half_width") << ", " << c.real("coalescence.half_width")
       << "], t = " << c.real("coalescence.t_end") << "\n"
       << "endpoint spread without noise = " << co.spread_without_noise << "\n"
       << "endpoint spread with unit noise = " << co.spread_with_noise << "\n";
    ctx.sink.write("characteristics.txt", os.str());
}

// ---------------------------------------------------------------- weak residual

void run_weak_residual(Context& ctx)
{
    const auto& c = ctx.config;
    const std::size_t levels = c.count("levels");
    CsvTable t{{"case", "n", "dx", "dt", "residual", "ratio"}, {}};

    const TestFunction heat_phi(TestFunction::Kind::PolynomialBump, 0.2, 0.7);
    const double heat_end = c.real("heat.t_end");
    double prev = 0.0;
    for (std::size_t l = 0; l < levels; ++l) {
        const std::size_t n = (c.count("heat.base_nodes") - 1) * (std::size_t{1} << l) + 1;
        const Grid1D grid(0.0, 1.0, n, Boundary::Dirichlet0);
        const auto steps = std::max<long long>(3, std::llround(heat_end / (c.real("heat.cfl") * grid.dx())));
        const double dt = heat_end / double(steps);
        Trajectory exact;
        for (long long k = 0; k <= steps; ++k) {
            const double time = double(k) * dt;
            exact.push_back({time, Field::sample(grid, [&](double x) {
                                 return std::exp(-pi * pi * time) * std::sin(pi * x);
                             })});
        }
        const double r = stage("weak_residual", [&] {
            return weak_residual(exact, WeakEquation::heat(1.0), heat_phi);
        });
        const double ratio = l ? prev / r : 0.0;
        t.add({0.0, double(n), grid.dx(), dt, r, ratio});
        if (l)
            ctx.check("heat residual ratio n=" + std::to_string(n), ratio, "in [3.2, 4.8]",
                      ratio >= 3.2 && ratio <= 4.8);
        prev = r;
    }

    const TestFunction shock_phi(TestFunction::Kind::PolynomialBump, -0.4, 0.9);
    prev = 0.0;
    for (std::size_t l = 0; l < levels; ++l) {
        const std::size_t n = (c.count("shock.base_nodes") - 1) * (std::size_t{1} << l) + 1;
        const Grid1D grid(-1.0, 1.0, n, Boundary::Neumann0);
        const double dt = c.real("shock.cfl") * grid.dx();
        const Field u0 = Field::sample(grid, [](double x) { return x < 0.0 ? 1.0 : 0.0; });
        const auto traj = stage("burgers::solve", [&] {
            return burgers::solve(u0, 0.0, {dt, c.real("shock.t_end"), 1});
        });
        const double r = stage("weak_residual", [&] {
            return weak_residual(traj, WeakEquation::burgers(), shock_phi);
        });
        const double ratio = l ? prev / r : 0.0;
        t.add({1.0, double(n), grid.dx(), dt, r, ratio});
        if (l)
            ctx.check("shock residual ratio n=" + std::to_string(n), ratio, "in [1.6, 2.4]",
                      ratio >= 1.6 && ratio <= 2.4);
        prev = r;
    }
    ctx.csv("residuals.csv", t);
}

using Runner = void (*)(Context&);

Runner runner_for(const std::string& id)
{
    if (id == "burgers-sweep") return run_burgers;
    if (id == "bfheat-compare") return run_bfheat;
    if (id == "greenlink-equiv") return run_greenlink;
    if (id == "rd-tau-limit") return run_rd;
    if (id == "peridyn-study") return run_peridyn_study;
    if (id == "peridyn-moments") return run_peridyn_moments;
    if (id == "noise-heat") return run_noise_heat;
    if (id == "noise-transport") return run_noise_transport;
    if (id == "weak-residual") return run_weak_residual;
    throw ValidationError("unknown experiment '" + id + "'");
}

}  // namespace

const char* tool_version() noexcept { return REGULAB_VERSION; }

RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    const Runner runner = runner_for(config.experiment);
    ExperimentConfig effective = config;
    if (options.seed) effective.seed = *options.seed;

    RunManifest manifest;
    manifest.experiment = effective.experiment;
    manifest.config_echo = effective.echo();
    manifest.tool_version = tool_version();
    manifest.seed = effective.seed;

    OutputSink sink(options.out_dir);
    Context ctx{effective, options, sink, manifest};
    const auto start = std::chrono::steady_clock::now();
    runner(ctx);
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.files = sink.files();
    sink.write("manifest.json", manifest.to_json());
    return manifest;
}

}  // namespace regulab::cli
