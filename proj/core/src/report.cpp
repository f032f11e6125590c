#include "odmd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace odmd {

namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string cell_stem(const RunCell& cell) {
    std::ostringstream name;
    name << method_name(cell.method);
    if (cell.p0 >= 0.0) name << "_p0" << fmt_short(cell.p0);
    name << "_eps" << fmt_short(cell.eps) << "_delta" << fmt_short(cell.delta) << "_seed"
         << cell.seed;
    return name.str();
}

void write_file(const fs::path& path, const std::string& bytes, FileManifest& manifest,
                const fs::path& root) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("failed while writing: " + path.string());
    manifest.files.push_back({fs::relative(path, root).string(), fnv1a_hex(bytes)});
}

std::string aggregate_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "method,p0,eps,delta,seed,steps_to_target,observables_to_target,"
           "stabilization_step,final_energy,final_abs_error,converged,in_window,failed\n";
    for (const auto& cell : report.cells) {
        out << method_name(cell.method) << ',';
        if (cell.p0 >= 0.0) out << fmt_double(cell.p0);
        out << ',' << fmt_double(cell.eps) << ',' << fmt_double(cell.delta) << ',' << cell.seed
            << ',';
        if (cell.steps_to_target >= 0) out << cell.steps_to_target;
        out << ',';
        if (cell.observables_to_target >= 0) out << cell.observables_to_target;
        out << ',';
        if (cell.stabilization_step >= 0) out << cell.stabilization_step;
        out << ',';
        if (!cell.failed)
            out << fmt_double(cell.final_energy) << ',' << fmt_double(cell.final_abs_error);
        else
            out << ',';
        out << ',' << (cell.converged ? 1 : 0) << ',' << (cell.in_window ? 1 : 0) << ','
            << (cell.failed ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string trace_file(const SweepReport& report, const RunCell& cell) {
    std::ostringstream out;
    out << "# label=" << report.config.label << '\n';
    out << "# method=" << method_name(cell.method) << '\n';
    out << "# eps=" << fmt_double(cell.eps) << '\n';
    out << "# delta=" << fmt_double(cell.delta) << '\n';
    out << "# seed=" << cell.seed << '\n';
    if (cell.p0 >= 0.0) out << "# p0=" << fmt_double(cell.p0) << '\n';
    out << "# dt=" << fmt_double(report.dt) << '\n';
    out << "# reference_energy=" << fmt_double(report.reference_energy) << '\n';
    std::ostringstream body;
    write_trace_csv(cell.trace, body);
    out << body.str();
    return out.str();
}

struct PlotGeometry {
    static constexpr double width = 720, height = 480;
    static constexpr double left = 70, right = 700, top = 24, bottom = 432;
};

const char* series_color(std::size_t i) {
    static const char* palette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                    "#66ccee", "#aa3377", "#bbbbbb"};
    return palette[i % 7];
}

/// One chart per (p0, eps, delta, seed) group, one series per method.
std::string chart_svg(const SweepReport& report, const std::vector<const RunCell*>& cells) {
    const PlotGeometry g;

    double err_lo = report.config.target_accuracy, err_hi = report.config.target_accuracy;
    long obs_hi = 1;
    bool any = false;
    for (const RunCell* cell : cells)
        for (const auto& row : cell->trace.rows) {
            if (row.skipped || !(row.abs_error > 0.0)) continue;
            err_lo = std::min(err_lo, row.abs_error);
            err_hi = std::max(err_hi, row.abs_error);
            obs_hi = std::max(obs_hi, row.n_observables);
            any = true;
        }
    const double log_lo = std::floor(std::log10(err_lo)) - (any ? 0.0 : 1.0);
    const double log_hi = std::ceil(std::log10(err_hi)) + (any ? 0.0 : 1.0);

    const auto x_of = [&](double obs) {
        return g.left + (g.right - g.left) * obs / static_cast<double>(obs_hi);
    };
    const auto y_of = [&](double err) {
        const double t = (std::log10(err) - log_lo) / std::max(1.0, log_hi - log_lo);
        return g.bottom - (g.bottom - g.top) * t;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g.width << "\" height=\""
        << g.height << "\" viewBox=\"0 0 " << g.width << " " << g.height << "\">\n";
    svg << "  <g class=\"axis x-axis\">\n";
    svg << "    <line x1=\"" << g.left << "\" y1=\"" << g.bottom << "\" x2=\"" << g.right
        << "\" y2=\"" << g.bottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const long obs = static_cast<long>(std::llround(obs_hi * i / 5.0));
        svg << "    <text class=\"tick\" x=\"" << x_of(static_cast<double>(obs)) << "\" y=\""
            << g.bottom + 18 << "\" text-anchor=\"middle\" font-size=\"12\">" << obs
            << "</text>\n";
    }
    svg << "    <text class=\"label\" x=\"" << 0.5 * (g.left + g.right) << "\" y=\""
        << g.bottom + 36 << "\" text-anchor=\"middle\" font-size=\"12\">observables</text>\n";
    svg << "  </g>\n";

    svg << "  <g class=\"axis y-axis\">\n";
    svg << "    <line x1=\"" << g.left << "\" y1=\"" << g.top << "\" x2=\"" << g.left
        << "\" y2=\"" << g.bottom << "\" stroke=\"black\"/>\n";
    const int decades = static_cast<int>(log_hi - log_lo);
    const int stride = std::max(1, (decades + 11) / 12);
    for (int e = static_cast<int>(log_lo); e <= static_cast<int>(log_hi); e += stride) {
        svg << "    <text class=\"tick\" x=\"" << g.left - 8 << "\" y=\""
            << y_of(std::pow(10.0, e)) + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e" << e
            << "</text>\n";
    }
    svg << "    <text class=\"label\" x=\"16\" y=\"" << 0.5 * (g.top + g.bottom)
        << "\" font-size=\"12\" transform=\"rotate(-90 16 " << 0.5 * (g.top + g.bottom)
        << ")\" text-anchor=\"middle\">absolute error</text>\n";
    svg << "  </g>\n";

    const double target_y = y_of(report.config.target_accuracy);
    svg << "  <line class=\"target-rule\" x1=\"" << g.left << "\" y1=\"" << target_y
        << "\" x2=\"" << g.right << "\" y2=\"" << target_y
        << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\" data-target=\""
        << fmt_double(report.config.target_accuracy) << "\"/>\n";

    std::size_t color = 0;
    for (const RunCell* cell : cells) {
        svg << "  <polyline class=\"series\" data-method=\"" << method_name(cell->method)
            << "\" fill=\"none\" stroke=\"" << series_color(color++) << "\" points=\"";
        bool first = true;
        for (const auto& row : cell->trace.rows) {
            if (row.skipped || !(row.abs_error > 0.0)) continue;
            if (!first) svg << ' ';
            svg << fmt_short(x_of(static_cast<double>(row.n_observables))) << ','
                << fmt_short(y_of(row.abs_error));
            first = false;
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

FileManifest emit_report(const SweepReport& report, const std::string& out_dir, bool csv,
                         bool svg) {
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir + ": " + ec.message());

    FileManifest manifest;
    if (csv) {
        for (const auto& cell : report.cells)
            write_file(root / ("trace_" + cell_stem(cell) + ".csv"), trace_file(report, cell),
                       manifest, root);
    }
    write_file(root / "aggregate.csv", aggregate_csv(report), manifest, root);

    if (svg) {
        // Group cells sharing (p0, eps, delta, seed); one chart each.
        std::map<std::string, std::vector<const RunCell*>> groups;
        for (const auto& cell : report.cells) {
            std::ostringstream key;
            if (cell.p0 >= 0.0) key << "p0" << fmt_short(cell.p0) << '_';
            key << "eps" << fmt_short(cell.eps) << "_delta" << fmt_short(cell.delta) << "_seed"
                << cell.seed;
            groups[key.str()].push_back(&cell);
        }
        for (const auto& [key, cells] : groups)
            write_file(root / ("chart_" + key + ".svg"), chart_svg(report, cells), manifest, root);
    }

    std::sort(manifest.files.begin(), manifest.files.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    std::ostringstream mf;
    for (const auto& entry : manifest.files) mf << entry.hash << "  " << entry.path << '\n';
    std::ofstream out(root / "manifest.txt", std::ios::binary);
    if (!out) throw io_error("cannot write manifest");
    out << mf.str();
    return manifest;
}

} // namespace odmd
