#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace regulab::cli {

/// Column-oriented table; every cell is written with 17 significant digits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    std::string render() const;
};

std::string format_cell(double v);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    int width = 640;
    int height = 400;
};

/// Self-contained line plot with axes, labels and a legend. Coordinates are
/// printed with fixed precision, so identical input gives identical bytes.
std::string emit_plot(const std::vector<Series>& series, const PlotStyle& style);

struct CheckRow {
    std::string name;
    double measured;
    std::string criterion;
    bool pass;
};

struct FileRecord {
    std::string name;
    std::string sha256;
    std::size_t bytes;
};

struct RunManifest {
    std::string experiment;
    std::string config_echo;
    std::string tool_version;
    std::uint64_t seed = 0;
    double duration_seconds = 0.0;
    std::vector<CheckRow> checks;
    std::vector<FileRecord> files;

    bool all_pass() const;
    std::string to_json() const;
};

/// Writes files into one output directory and records their digests.
class OutputSink {
public:
    explicit OutputSink(std::filesystem::path dir);

    void write(const std::string& name, const std::string& bytes);
    const std::vector<FileRecord>& files() const noexcept { return files_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<FileRecord> files_;
};

}  // namespace regulab::cli
