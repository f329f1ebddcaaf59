#include "regulab/cli/output.hpp"

#include "regulab/core/errors.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace regulab::cli {

void CsvTable::add(std::vector<double> row)
{
    if (row.size() != header.size()) throw std::logic_error("csv: row width differs from header");
    rows.push_back(std::move(row));
}

std::string format_cell(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string CsvTable::render() const
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

std::string fixed(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string emit_plot(const std::vector<Series>& series, const PlotStyle& style)
{
    if (series.empty()) throw ValidationError("plot: no series");
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw ValidationError("plot: series '" + s.label + "' is empty or ragged");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw ValidationError("plot: series '" + s.label + "' has a non-finite value");
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double left = 70, right = 160, top = 40, bottom = 50;
    const double w = style.width, h = style.height;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
       << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"15\">" << escape(style.title) << "</text>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    os << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\""
       << fixed(left + pw) << "\" y2=\"" << fixed(top + ph) << "\"/>\n";
    os << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
       << "\" y2=\"" << fixed(top + ph) << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
        os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(top + ph + 16)
           << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(py(yv) + 4)
           << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(h - 10)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << escape(style.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
       << fixed(top + ph / 2) << ")\">" << escape(style.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[k].x.size(); ++i)
            os << (i ? " " : "") << fixed(px(series[k].x[i])) << ',' << fixed(py(series[k].y[i]));
        os << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << fixed(left + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
           << fixed(left + pw + 34) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(left + pw + 40) << "\" y=\"" << fixed(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[k].label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

bool RunManifest::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

std::string RunManifest::to_json() const
{
    nlohmann::ordered_json j;
    j["tool"] = "regulab";
    j["version"] = tool_version;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["config"] = config_echo;
    j["duration_seconds"] = duration_seconds;
    j["all_pass"] = all_pass();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"measured", std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured)
                                                                       : nlohmann::ordered_json()},
                               {"criterion", c.criterion},
                               {"result", c.pass ? "PASS" : "FAIL"}});
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files)
        j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return j.dump(2) + "\n";
}

OutputSink::OutputSink(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

void OutputSink::write(const std::string& name, const std::string& bytes)
{
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed for " + (dir_ / name).string());
    files_.push_back({name, sha256_hex(bytes), bytes.size()});
}

}  // namespace regulab::cli
