#pragma once

#include "regulab/cli/config.hpp"
#include "regulab/cli/output.hpp"

#include <filesystem>
#include <optional>

namespace regulab::cli {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    bool svg = false;
    std::optional<std::uint64_t> seed;  // overrides the config seed
};

const char* tool_version() noexcept;

/// Executes one experiment, writes its outputs and manifest.json into
/// options.out_dir and returns the manifest. Module errors are rethrown with
/// the failing operation prefixed; ValidationError keeps its type.
RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options);

}  // namespace regulab::cli
