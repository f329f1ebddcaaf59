#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace regulab::cli {

enum class ValueType { Real, Integer, RealList, Choice, Flag };

/// One documented key of an experiment. Keys are "section.name"; top-level
/// keys have no section.
struct KeySpec {
    std::string key;
    ValueType type;
    std::string default_text;
    std::string doc;
    double min = -1e300;        // applies to Real, Integer and each RealList entry
    double max = 1e300;
    bool min_exclusive = false;
    std::vector<std::string> choices;  // Choice only
};

using Value = std::variant<double, std::int64_t, std::vector<double>, std::string, bool>;

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::map<std::string, Value> values;  // every schema key, defaults filled

    double real(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    const std::string& choice(const std::string& key) const;
    bool flag(const std::string& key) const;

    /// Canonical "key = value" text of the full config, sorted by key.
    std::string echo() const;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;  // all problems found, in line order

    bool ok() const noexcept { return config.has_value(); }
};

const std::vector<std::string>& experiment_ids();
bool is_experiment(std::string_view id);

/// Documented keys of an experiment (throws ValidationError for unknown ids).
const std::vector<KeySpec>& schema(std::string_view experiment);

/// Parses the key = value / [section] format. The experiment id comes from
/// the top-level `experiment` key or from `experiment_hint`; if both are
/// given they must agree.
ParseResult parse_config(std::string_view text, std::string_view experiment_hint = {});

/// Markdown table of every experiment's keys, used to keep docs in sync.
std::string grammar_reference();

}  // namespace regulab::cli
