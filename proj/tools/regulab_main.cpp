#include "regulab/cli/config.hpp"
#include "regulab/cli/experiments.hpp"
#include "regulab/core/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kValidation = 2, kRuntime = 3 };

std::string experiment_list()
{
    std::string s;
    for (const auto& id : regulab::cli::experiment_ids()) s += (s.empty() ? "" : ", ") + id;
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace regulab::cli;

    CLI::App app{"Regularization experiments for ill-posed and nonlocal 1-D PDEs.\n"
                 "Set REGULAB_THREADS to cap the worker pool."};
    std::string experiment, config_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool svg = false, print_grammar = false;
    app.add_option("experiment", experiment, "one of: " + experiment_list());
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_flag("--svg", svg, "also write SVG plots");
    app.add_flag("--grammar", print_grammar, "print every experiment's keys and exit");
    app.set_version_flag("--version", tool_version());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kValidation;
    }
    if (print_grammar) {
        std::cout << grammar_reference();
        return kPass;
    }
    if (experiment.empty() || config_path.empty()) {
        std::cerr << "usage: regulab <experiment-id> --config <path> [--out <dir>] [--seed <u64>] [--svg]\n";
        return kValidation;
    }
    if (!is_experiment(experiment)) {
        std::cerr << "error: unknown experiment '" << experiment << "' (expected " << experiment_list()
                  << ")\n";
        return kValidation;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        return kValidation;
    }
    std::stringstream text;
    text << in.rdbuf();
    const ParseResult parsed = parse_config(text.str(), experiment);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::cerr << config_path << ": " << e << "\n";
        return kValidation;
    }

    try {
        const RunManifest m = run_experiment(*parsed.config, {out_dir, svg, seed});
        std::cout << m.experiment << " (seed " << m.seed << ")\n";
        for (const auto& c : m.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.measured << " ("
                      << c.criterion << ")\n";
        for (const auto& f : m.files) std::cout << "wrote " << f.name << " " << f.sha256 << "\n";
        return m.all_pass() ? kPass : kCheckFailure;
    } catch (const regulab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kRuntime;
    }
}
