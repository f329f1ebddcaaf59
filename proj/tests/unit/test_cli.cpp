#include "regulab/cli/config.hpp"
#include "regulab/cli/experiments.hpp"
#include "regulab/cli/output.hpp"
#include "regulab/core/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace regulab;
using namespace regulab::cli;
namespace fs = std::filesystem;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

bool any_contains(const std::vector<std::string>& lines, const std::string& needle)
{
    for (const auto& l : lines)
        if (l.find(needle) != std::string::npos) return true;
    return false;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("regulab_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST(Config, MinimalFileGetsDocumentedDefaults)
{
    const auto r = parse_config("experiment = burgers-sweep\n");
    ASSERT_TRUE(r.ok());
    const auto& c = *r.config;
    EXPECT_EQ(c.real("time.theta"), 0.5);
    EXPECT_EQ(c.real("time.t_end"), 0.6);
    EXPECT_EQ(c.count("grid.n"), 512u);
    EXPECT_EQ(c.list("model.epsilons"), (std::vector<double>{0.1, 0.01, 0.001}));
    for (const auto& id : experiment_ids()) {
        EXPECT_TRUE(parse_config("", id).ok()) << id;
        EXPECT_EQ(parse_config("", id).config->values.size(), schema(id).size()) << id;
    }
}

TEST(Config, OutOfRangeValueNamesTheField)
{
    const auto r = parse_config("experiment = burgers-sweep\n[model]\nepsilons = -1\n");
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_NE(r.errors[0].find("model.epsilons"), std::string::npos);
    EXPECT_NE(r.errors[0].find("line 3"), std::string::npos);
}

TEST(Config, EveryProblemIsReportedTogether)
{
    const auto r = parse_config("experiment = burgers-sweep\n[grid]\nn = 2\n[time]\ntheta = 0.2\nbogus = 1\n");
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.errors.size(), 3u);
    EXPECT_TRUE(any_contains(r.errors, "grid.n"));
    EXPECT_TRUE(any_contains(r.errors, "time.theta"));
    EXPECT_TRUE(any_contains(r.errors, "unknown key 'time.bogus'"));
}

TEST(Config, SyntaxAndCrossFieldErrors)
{
    auto r = parse_config("experiment = burgers-sweep\n\n[time\n");
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(any_contains(r.errors, "line 3"));
    r = parse_config("experiment = burgers-sweep\nno equals sign here\n");
    EXPECT_TRUE(any_contains(r.errors, "line 2"));
    r = parse_config("experiment = burgers-sweep\n[time]\ndt = 1\nt_end = 0.5\n");
    EXPECT_FALSE(r.ok());
    r = parse_config("experiment = burgers-sweep\n[model]\nepsilons = 0.01, 0.1\n");
    EXPECT_FALSE(r.ok());
    r = parse_config("experiment = burgers-sweep\n[grid]\nn = 64\nn = 65\n");
    EXPECT_TRUE(any_contains(r.errors, "line 4"));
    r = parse_config("experiment = burgers-sweep\n", "noise-heat");
    EXPECT_FALSE(r.ok());
    r = parse_config("experiment = nonsense\n");
    EXPECT_FALSE(r.ok());
    EXPECT_THROW(schema("nonsense"), ValidationError);
}

TEST(Config, SeedAndEchoRoundTrip)
{
    const auto r = parse_config("# comment\nexperiment = noise-heat\nseed = 18446744073709551615\n");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.config->seed, 18446744073709551615ULL);
    const auto again = parse_config(r.config->echo());
    ASSERT_TRUE(again.ok()) << again.errors.front();
    EXPECT_EQ(again.config->echo(), r.config->echo());
    EXPECT_NE(grammar_reference().find("noise-transport"), std::string::npos);
}

TEST(Output, CsvCellsCarrySeventeenSignificantDigits)
{
    EXPECT_EQ(format_cell(0.1), "1.0000000000000001e-01");
    EXPECT_EQ(std::stod(format_cell(1.0 / 3.0)), 1.0 / 3.0);
    CsvTable t{{"x", "u"}, {}};
    t.add({1.0, -2.5});
    EXPECT_EQ(t.render(), "x,u\n1.0000000000000000e+00,-2.5000000000000000e+00\n");
    EXPECT_THROW(t.add({1.0}), std::logic_error);
}

TEST(Output, Sha256KnownAnswer)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Plot, SingleSeriesGivesOnePolyline)
{
    const auto svg = emit_plot({{"u", {0, 1, 2}, {0, 1, 4}}}, {"profile"});
    EXPECT_EQ(occurrences(svg, "<polyline"), 1u);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("profile"), std::string::npos);
    EXPECT_EQ(svg, emit_plot({{"u", {0, 1, 2}, {0, 1, 4}}}, {"profile"}));
}

TEST(Plot, LegendHasOneEntryPerSeries)
{
    std::vector<Series> s;
    for (const char* e : {"0.1", "0.01", "0.001"}) s.push_back({std::string("ε = ") + e, {0, 1}, {1, 0}});
    const auto svg = emit_plot(s, {"sweep"});
    EXPECT_EQ(occurrences(svg, "<polyline"), 3u);
    EXPECT_EQ(occurrences(svg, "ε = "), 3u);
}

TEST(Plot, RejectsEmptyRaggedAndNonFiniteInput)
{
    EXPECT_THROW(emit_plot({}, {}), ValidationError);
    EXPECT_THROW(emit_plot({{"a", {}, {}}}, {}), ValidationError);
    EXPECT_THROW(emit_plot({{"a", {0, 1}, {0}}}, {}), ValidationError);
    EXPECT_THROW(emit_plot({{"a", {0, 1}, {0, std::nan("")}}}, {}), ValidationError);
}

TEST(Run, ManifestListsEveryFileWithItsDigest)
{
    const auto dir = scratch("manifest");
    const auto cfg = *parse_config("experiment = peridyn-moments\nseed = 5\n").config;
    const auto m = run_experiment(cfg, {dir, true, std::nullopt});
    EXPECT_TRUE(m.all_pass());
    EXPECT_EQ(m.seed, 5u);
    EXPECT_EQ(m.tool_version, std::string(tool_version()));
    EXPECT_EQ(m.config_echo, cfg.echo());
    ASSERT_FALSE(m.files.empty());
    for (const auto& f : m.files) {
        const auto bytes = slurp(dir / f.name);
        EXPECT_EQ(bytes.size(), f.bytes) << f.name;
        EXPECT_EQ(sha256_hex(bytes), f.sha256) << f.name;
    }
    const auto json = slurp(dir / "manifest.json");
    for (const char* key : {"\"experiment\"", "\"config\"", "\"version\"", "\"seed\"", "\"checks\"", "\"files\""})
        EXPECT_NE(json.find(key), std::string::npos) << key;
    fs::remove_all(dir);
}

TEST(Run, RepeatedRunsAreByteIdentical)
{
    for (const char* id : {"burgers-sweep", "noise-transport"}) {
        auto cfg = *parse_config(std::string("experiment = ") + id + "\n").config;
        if (std::string(id) == "noise-transport") cfg.values["model.samples"] = std::int64_t{500};
        const auto a = run_experiment(cfg, {scratch("a"), true, 7});
        const auto b = run_experiment(cfg, {scratch("b"), true, 7});
        const auto c = run_experiment(cfg, {scratch("c"), true, 8});
        ASSERT_EQ(a.files.size(), b.files.size());
        for (std::size_t i = 0; i < a.files.size(); ++i) EXPECT_EQ(a.files[i].sha256, b.files[i].sha256) << a.files[i].name;
        EXPECT_EQ(c.seed, 8u);
    }
    for (const char* n : {"a", "b", "c"}) fs::remove_all(scratch(n));
}

TEST(Run, ModuleErrorsArePrefixedAndKeepTheirType)
{
    auto cfg = *parse_config("experiment = greenlink-equiv\n[grid]\nn = 64\nhalf_width = 0.2\n").config;
    try {
        run_experiment(cfg, {scratch("err"), false, std::nullopt});
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find(":"), std::string::npos);
    }
    fs::remove_all(scratch("err"));
}
