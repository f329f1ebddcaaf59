#include "regulab/cli/config.hpp"

#include "regulab/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace regulab::cli {

namespace {

constexpr double kInf = 1e300;

KeySpec real(std::string key, std::string def, std::string doc, double lo = -kInf,
             double hi = kInf, bool lo_open = false)
{
    return {std::move(key), ValueType::Real, std::move(def), std::move(doc), lo, hi, lo_open, {}};
}

KeySpec positive(std::string key, std::string def, std::string doc, double hi = kInf)
{
    return real(std::move(key), std::move(def), std::move(doc), 0.0, hi, true);
}

KeySpec integer(std::string key, std::string def, std::string doc, double lo, double hi = 1e9)
{
    return {std::move(key), ValueType::Integer, std::move(def), std::move(doc), lo, hi, false, {}};
}

KeySpec positive_list(std::string key, std::string def, std::string doc)
{
    return {std::move(key), ValueType::RealList, std::move(def), std::move(doc), 0.0, kInf, true, {}};
}

KeySpec choice(std::string key, std::string def, std::string doc, std::vector<std::string> options)
{
    return {std::move(key), ValueType::Choice, std::move(def), std::move(doc), 0, 0, false,
            std::move(options)};
}

KeySpec flag(std::string key, std::string def, std::string doc)
{
    return {std::move(key), ValueType::Flag, std::move(def), std::move(doc), 0, 0, false, {}};
}

const std::map<std::string, std::vector<KeySpec>, std::less<>>& schemas()
{
    static const std::map<std::string, std::vector<KeySpec>, std::less<>> table = {
        {"burgers-sweep",
         {integer("grid.n", "512", "grid nodes", 16),
          real("grid.x_min", "-1", "left end"),
          real("grid.x_max", "1", "right end"),
          choice("grid.boundary", "dirichlet0", "boundary closure",
                 {"dirichlet0", "neumann0", "periodic"}),
          choice("model.initial", "parabola", "u0: 1 - x^2, a unit step at 0, or sin(pi x)",
                 {"parabola", "riemann", "sine"}),
          positive_list("model.epsilons", "0.1, 0.01, 0.001", "viscosities, strictly decreasing"),
          positive("time.dt", "1e-3", "time step"),
          positive("time.t_end", "0.6", "final time"),
          real("time.theta", "0.5", "implicitness of the viscous term", 0.5, 1.0)}},
        {"bfheat-compare",
         {integer("grid.n", "128", "grid nodes", 16),
          positive("grid.length", "1", "domain length"),
          choice("grid.boundary", "periodic", "boundary closure", {"periodic", "dirichlet0"}),
          choice("model.flux", "cubic", "flux function", {"cubic", "linear", "piecewise"}),
          real("model.slope", "1", "slope of the linear flux"),
          positive("model.gradient_amplitude", "0.82", "max |u_x| of the sine initial datum"),
          positive_list("model.epsilons", "1e-4", "regularization strengths, strictly decreasing"),
          integer("model.bins", "32", "histogram bins", 8, 4096),
          positive("time.cfl", "0.9", "dt as a fraction of the explicit flux limit", 1.0),
          positive("time.t_end", "0.5", "final time"),
          integer("time.energy_every", "100", "steps between energy samples", 1)}},
        {"greenlink-equiv",
         {integer("grid.n", "512", "grid nodes", 16),
          positive("grid.half_width", "8", "domain is [-half_width, half_width]"),
          positive("model.epsilon", "0.1", "regularization strength"),
          choice("model.sampling", "auto", "kernel sampling",
                 {"auto", "cell-average", "point", "kink-corrected"}),
          positive("model.tolerance", "1e-4", "bound on the max-in-time L-infinity gap"),
          positive("time.cfl", "0.5", "dt / dx", 1.0),
          positive("time.t_end", "2", "final time"),
          integer("time.store_every", "8", "steps between stored trajectory snapshots", 1),
          integer("dispersion.n", "512", "grid nodes on [0, 8 pi]", 16),
          positive("dispersion.t_end", "20", "observation window"),
          positive_list("dispersion.modes", "1, 2, 3", "integer wavenumbers"),
          positive("dispersion.tolerance", "0.01", "relative frequency error bound")}},
        {"rd-tau-limit",
         {integer("grid.n", "1024", "grid nodes", 16),
          positive("grid.length", "40", "periodic domain length"),
          positive("model.g", "0.5", "inhibitor feedback on u"),
          positive("model.h", "1", "activator production of w"),
          positive("model.f", "1", "inhibitor decay"),
          real("model.xi", "0.2", "inhibitor drift"),
          positive("model.D", "0.25", "inhibitor diffusivity"),
          positive("model.amplitude", "0.5", "u0 = amplitude exp(-x^2)"),
          choice("model.w0", "slaved", "inhibitor initial datum", {"slaved", "zero"}),
          positive_list("model.taus", "0.1, 0.01, 0.001", "relaxation times, strictly decreasing"),
          positive("model.max_final_discrepancy", "1e-2", "bound on e at the smallest tau"),
          positive("time.dt", "1.25e-4", "time step"),
          positive("time.t_end", "1", "final time")}},
        {"peridyn-study",
         {choice("model.micromodulus", "constant", "radial profile", {"constant", "triangular"}),
          positive("model.lambda0", "1", "amplitude at the first horizon"),
          positive_list("model.deltas", "0.2, 0.1, 0.05", "horizons, strictly decreasing"),
          integer("model.surrogate_order", "2", "2 or 4", 2, 4),
          choice("model.normalization", "fixed-c2", "horizon scaling", {"fixed-c2", "raw"}),
          positive("model.wavenumber", "1", "u = sin(2 pi k x)"),
          positive("grid.dx", "1.25e-5", "quadrature spacing"),
          integer("grid.sample_nodes", "101", "evaluation nodes per region", 3)}},
        {"peridyn-moments",
         {choice("model.micromodulus", "constant", "radial profile", {"constant", "triangular"}),
          positive("model.lambda0", "1", "amplitude"),
          positive("model.delta", "1", "horizon"),
          integer("model.max_order", "8", "highest 1-D moment tabulated", 2, 40),
          positive("grid.dx", "5e-4", "spacing of the quadratic-profile check")}},
        {"noise-heat",
         {integer("grid.n", "65", "grid nodes on [0, 1]", 5),
          integer("model.samples", "10000", "ensemble size", 2),
          real("model.noise_amp", "1", "noise amplitude", 0.0),
          real("model.forcing", "0", "constant forcing f"),
          positive("model.tolerance", "0.05", "relative variance bound at the central nodes"),
          positive("time.dt", "0.02", "time step"),
          positive("time.t_end", "2", "final time")}},
        {"noise-transport",
         {integer("grid.n", "41", "evaluation nodes", 2),
          real("grid.x_min", "-2", "left end"),
          real("grid.x_max", "2", "right end"),
          choice("model.drift", "zero", "drift b", {"zero", "constant", "smooth", "sqrt"}),
          real("model.drift_value", "0", "value of the constant drift"),
          integer("model.samples", "10000", "Monte Carlo samples", 2),
          flag("model.heun", "false", "predictor-corrector in the drift"),
          positive("time.dt", "0.01", "time step"),
          positive("time.t_end", "0.5", "final time"),
          integer("coalescence.paths", "64", "forward paths", 2),
          real("coalescence.half_width", "1e-6", "starts spread over [-w, w]", 0.0),
          positive("coalescence.dt", "1e-3", "time step"),
          positive("coalescence.t_end", "1", "final time")}},
        {"weak-residual",
         {integer("heat.base_nodes", "33", "coarsest grid nodes", 5),
          positive("heat.cfl", "0.8", "dt / dx"),
          positive("heat.t_end", "0.4", "final time"),
          integer("shock.base_nodes", "201", "coarsest grid nodes", 5),
          positive("shock.cfl", "0.5", "dt / dx", 1.0),
          positive("shock.t_end", "0.5", "final time"),
          integer("levels", "4", "number of grids, each halving dx", 2, 8)}},
    };
    return table;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_real(const std::string& s)
{
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::int64_t> to_integer(const std::string& s)
{
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string format_real(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string range_text(const KeySpec& s)
{
    std::string lo = s.min <= -kInf ? "-inf" : format_real(s.min);
    std::string hi = s.max >= kInf ? "inf" : format_real(s.max);
    return (s.min_exclusive ? "(" : "[") + lo + ", " + hi + "]";
}

bool in_range(const KeySpec& s, double v)
{
    if (s.min_exclusive ? !(v > s.min) : !(v >= s.min)) return false;
    return v <= s.max;
}

/// Converts text to a typed value or appends an error naming the key.
std::optional<Value> convert(const KeySpec& s, const std::string& text, const std::string& where,
                             std::vector<std::string>& errors)
{
    switch (s.type) {
    case ValueType::Real: {
        const auto v = to_real(text);
        if (!v) {
            errors.push_back(where + s.key + ": expected a finite number, got '" + text + "'");
            return std::nullopt;
        }
        if (!in_range(s, *v)) {
            errors.push_back(where + s.key + ": value " + text + " outside " + range_text(s));
            return std::nullopt;
        }
        return Value{*v};
    }
    case ValueType::Integer: {
        const auto v = to_integer(text);
        if (!v) {
            errors.push_back(where + s.key + ": expected an integer, got '" + text + "'");
            return std::nullopt;
        }
        if (!in_range(s, static_cast<double>(*v))) {
            errors.push_back(where + s.key + ": value " + text + " outside " + range_text(s));
            return std::nullopt;
        }
        return Value{*v};
    }
    case ValueType::RealList: {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        bool bad = false;
        while (std::getline(ss, item, ',')) {
            const auto v = to_real(trim(item));
            if (!v) {
                errors.push_back(where + s.key + ": '" + trim(item) + "' is not a finite number");
                bad = true;
            } else if (!in_range(s, *v)) {
                errors.push_back(where + s.key + ": entry " + trim(item) + " outside " +
                                 range_text(s));
                bad = true;
            } else {
                out.push_back(*v);
            }
        }
        if (!bad && out.empty()) {
            errors.push_back(where + s.key + ": empty list");
            bad = true;
        }
        if (bad) return std::nullopt;
        return Value{std::move(out)};
    }
    case ValueType::Choice:
        if (std::find(s.choices.begin(), s.choices.end(), text) == s.choices.end()) {
            std::string opts;
            for (const auto& c : s.choices) opts += (opts.empty() ? "" : " | ") + c;
            errors.push_back(where + s.key + ": '" + text + "' is not one of " + opts);
            return std::nullopt;
        }
        return Value{text};
    case ValueType::Flag:
        if (text == "true") return Value{true};
        if (text == "false") return Value{false};
        errors.push_back(where + s.key + ": expected true or false, got '" + text + "'");
        return std::nullopt;
    }
    return std::nullopt;
}

const KeySpec* find_key(const std::vector<KeySpec>& specs, const std::string& key)
{
    for (const auto& s : specs)
        if (s.key == key) return &s;
    return nullptr;
}

void check_decreasing(const ExperimentConfig& c, const std::string& key,
                      std::vector<std::string>& errors)
{
    const auto it = c.values.find(key);
    if (it == c.values.end()) return;
    const auto& v = std::get<std::vector<double>>(it->second);
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) {
            errors.push_back(key + ": entries must be strictly decreasing");
            return;
        }
}

void cross_checks(const ExperimentConfig& c, std::vector<std::string>& errors)
{
    const auto has = [&](const char* k) { return c.values.count(k) > 0; };
    if (has("grid.x_min") && has("grid.x_max") && !(c.real("grid.x_max") > c.real("grid.x_min")))
        errors.push_back("grid.x_max: must exceed grid.x_min");
    for (const char* k : {"model.epsilons", "model.taus", "model.deltas"})
        if (has(k)) check_decreasing(c, k, errors);
    for (const char* prefix : {"time", "coalescence"}) {
        const std::string dt = std::string(prefix) + ".dt";
        const std::string te = std::string(prefix) + ".t_end";
        if (has(dt.c_str()) && has(te.c_str()) && c.real(dt) > c.real(te))
            errors.push_back(dt + ": must not exceed " + te);
    }
    if (c.experiment == "noise-heat" && c.real("time.dt") > 1e-2 * c.real("time.t_end") * (1 + 1e-12))
        errors.push_back("time.dt: must be at most 1e-2 * time.t_end");
    if (c.experiment == "peridyn-study") {
        const auto m = c.integer("model.surrogate_order");
        if (m != 2 && m != 4) errors.push_back("model.surrogate_order: must be 2 or 4");
    }
    if (c.experiment == "greenlink-equiv") {
        for (double k : c.list("dispersion.modes"))
            if (k != std::round(k)) {
                errors.push_back("dispersion.modes: entries must be integers");
                break;
            }
    }
}

}  // namespace

double ExperimentConfig::real(const std::string& key) const
{
    return std::get<double>(values.at(key));
}

std::int64_t ExperimentConfig::integer(const std::string& key) const
{
    return std::get<std::int64_t>(values.at(key));
}

std::size_t ExperimentConfig::count(const std::string& key) const
{
    return static_cast<std::size_t>(integer(key));
}

const std::vector<double>& ExperimentConfig::list(const std::string& key) const
{
    return std::get<std::vector<double>>(values.at(key));
}

const std::string& ExperimentConfig::choice(const std::string& key) const
{
    return std::get<std::string>(values.at(key));
}

bool ExperimentConfig::flag(const std::string& key) const { return std::get<bool>(values.at(key)); }

std::string ExperimentConfig::echo() const
{
    std::ostringstream os;
    os << "experiment = " << experiment << "\nseed = " << seed << "\n";
    for (const auto& [key, value] : values) {
        os << key << " = ";
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    os << format_real(v);
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    for (std::size_t i = 0; i < v.size(); ++i)
                        os << (i ? ", " : "") << format_real(v[i]);
                } else if constexpr (std::is_same_v<T, bool>) {
                    os << (v ? "true" : "false");
                } else {
                    os << v;
                }
            },
            value);
        os << "\n";
    }
    return os.str();
}

const std::vector<std::string>& experiment_ids()
{
    static const std::vector<std::string> ids = {
        "burgers-sweep",   "bfheat-compare", "greenlink-equiv", "rd-tau-limit",  "peridyn-study",
        "peridyn-moments", "noise-heat",     "noise-transport", "weak-residual"};
    return ids;
}

bool is_experiment(std::string_view id) { return schemas().count(id) > 0; }

const std::vector<KeySpec>& schema(std::string_view experiment)
{
    const auto it = schemas().find(experiment);
    if (it == schemas().end())
        throw ValidationError("unknown experiment '" + std::string(experiment) + "'");
    return it->second;
}

ParseResult parse_config(std::string_view text, std::string_view experiment_hint)
{
    struct Entry {
        std::string key;
        std::string value;
        std::size_t line;
    };
    std::vector<std::string> errors;
    std::vector<Entry> entries;
    std::string section;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                errors.push_back(where + "syntax error: malformed section header");
                continue;
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + "syntax error: expected 'key = value'");
            continue;
        }
        const std::string name = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (name.empty() || value.empty()) {
            errors.push_back(where + "syntax error: empty key or value");
            continue;
        }
        const std::string key = section.empty() ? name : section + "." + name;
        for (const auto& e : entries)
            if (e.key == key) {
                errors.push_back(where + "duplicate key '" + key + "' (first set on line " +
                                 std::to_string(e.line) + ")");
                break;
            }
        entries.push_back({key, value, line_no});
    }

    std::string experiment(experiment_hint);
    for (const auto& e : entries) {
        if (e.key != "experiment") continue;
        if (!experiment.empty() && experiment != e.value)
            errors.push_back("line " + std::to_string(e.line) + ": experiment '" + e.value +
                             "' does not match the requested '" + experiment + "'");
        else
            experiment = e.value;
    }
    if (experiment.empty()) {
        errors.push_back("missing experiment id");
        return {std::nullopt, errors};
    }
    if (!is_experiment(experiment)) {
        errors.push_back("unknown experiment '" + experiment + "'");
        return {std::nullopt, errors};
    }

    ExperimentConfig config;
    config.experiment = experiment;
    const auto& specs = schema(experiment);
    for (const auto& s : specs) {
        std::vector<std::string> internal;
        auto v = convert(s, s.default_text, "default ", internal);
        if (!v) throw std::logic_error("bad default for " + s.key);
        config.values[s.key] = *v;
    }
    for (const auto& e : entries) {
        const std::string where = "line " + std::to_string(e.line) + ": ";
        if (e.key == "experiment") continue;
        if (e.key == "seed") {
            std::uint64_t seed = 0;
            const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), seed);
            if (ec != std::errc() || p != e.value.data() + e.value.size())
                errors.push_back(where + "seed: expected an unsigned 64-bit integer");
            else
                config.seed = seed;
            continue;
        }
        const KeySpec* s = find_key(specs, e.key);
        if (!s) {
            errors.push_back(where + "unknown key '" + e.key + "' for experiment " + experiment);
            continue;
        }
        if (auto v = convert(*s, e.value, where, errors)) config.values[e.key] = std::move(*v);
    }
    if (errors.empty()) cross_checks(config, errors);
    if (!errors.empty()) return {std::nullopt, errors};
    return {std::move(config), {}};
}

std::string grammar_reference()
{
    std::ostringstream os;
    for (const auto& id : experiment_ids()) {
        os << "### " << id << "\n\n| key | default | range / choices | meaning |\n|---|---|---|---|\n";
        for (const auto& s : schema(id)) {
            std::string range;
            if (s.type == ValueType::Choice) {
                for (const auto& c : s.choices) range += (range.empty() ? "" : ", ") + c;
            } else if (s.type == ValueType::Flag) {
                range = "true, false";
            } else {
                range = range_text(s);
            }
            os << "| `" << s.key << "` | " << s.default_text << " | " << range << " | " << s.doc
               << " |\n";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace regulab::cli
