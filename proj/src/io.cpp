#include "plankton/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace plankton {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& text, const std::string& path, size_t line_no) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(line_no) + ": malformed number '" + text + "'");
    }
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
    auto out = open_out(path);
    out << "t";
    for (int i = 0; i < trajectory.grid.n; ++i) {
        out << ",y=" << format_double(trajectory.grid.node(i));
    }
    out << "\n";
    for (size_t k = 0; k < trajectory.times.size(); ++k) {
        out << format_double(trajectory.times[k]);
        for (double v : trajectory.snapshots[k].values) out << "," << format_double(v);
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_diagnostics_csv(const std::string& path, const Trajectory& trajectory) {
    auto out = open_out(path);
    out << "t,total_mass,sup_norm,min,period_residual\n";
    const double T = trajectory.period;
    for (const auto& d : trajectory.diagnostics) {
        out << format_double(d.t) << "," << format_double(d.mass) << ","
            << format_double(d.sup) << "," << format_double(d.min) << ",";
        const double periods = d.t / T;
        const long k = std::lround(periods);
        if (k >= 1 && std::abs(periods - static_cast<double>(k)) < 1e-9 &&
            static_cast<size_t>(k) <= trajectory.period_residuals.size()) {
            out << format_double(trajectory.period_residuals[static_cast<size_t>(k - 1)]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

TrajectoryTable read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trajectory CSV '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    TrajectoryTable table;
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t") {
        throw IoError(path + ":1: expected header 't,y=...,...'");
    }
    for (size_t i = 1; i < header.size(); ++i) {
        if (header[i].rfind("y=", 0) != 0) {
            throw IoError(path + ":1: malformed node column '" + header[i] + "'");
        }
        table.nodes.push_back(parse_double(header[i].substr(2), path, 1));
    }

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(header.size()) + " cells, got " +
                          std::to_string(cells.size()));
        }
        table.times.push_back(parse_double(cells[0], path, line_no));
        std::vector<double> frame;
        frame.reserve(cells.size() - 1);
        for (size_t i = 1; i < cells.size(); ++i) {
            frame.push_back(parse_double(cells[i], path, line_no));
        }
        table.frames.push_back(std::move(frame));
    }
    if (table.times.empty()) throw IoError(path + ": no data rows");
    return table;
}

void append_r0_report_csv(const std::string& path, const std::string& label,
                          const R0Report& report) {
    const bool exists = static_cast<bool>(std::ifstream(path));
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open '" + path + "' for appending");
    if (!exists) {
        out << "label,r0,lambda0,multiplier_residual,r2,r1,r0_star,lower_bound,"
               "power_iterations,bisections\n";
    }
    out << label << "," << format_double(report.r0) << "," << format_double(report.lambda0)
        << "," << format_double(report.multiplier_residual) << ",";
    if (report.bounds) {
        out << format_double(report.bounds->lower.value()) << ","
            << format_double(report.bounds->upper.value());
    } else {
        out << ",";
    }
    out << "," << format_double(report.r0_star.value()) << ","
        << format_double(report.lower_bound.value()) << "," << report.power_iterations << ","
        << report.bisections << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<SweepRow>& rows) {
    auto out = open_out(path);
    out << parameter << ",r0,lambda0,residual,status\n";
    for (const auto& row : rows) {
        std::string status = row.status;
        std::replace(status.begin(), status.end(), ',', ';');
        out << format_double(row.value) << "," << format_double(row.r0) << ","
            << format_double(row.lambda0) << "," << format_double(row.residual) << "," << status
            << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

PlotMode plot_mode_from_string(const std::string& name) {
    if (name == "heatmap") return PlotMode::heatmap;
    if (name == "cross-section") return PlotMode::cross_section;
    if (name == "contour") return PlotMode::contour;
    throw ConfigError("unknown plot mode '" + name + "' (heatmap, cross-section, contour)");
}

namespace {

void emit_heatmap(const TrajectoryTable& table, std::ofstream& out) {
    out << "t,y,value\n";
    for (size_t k = 0; k < table.times.size(); ++k) {
        for (size_t i = 0; i < table.nodes.size(); ++i) {
            out << format_double(table.times[k]) << "," << format_double(table.nodes[i]) << ","
                << format_double(table.frames[k][i]) << "\n";
        }
    }
}

void emit_cross_section(const TrajectoryTable& table, std::ofstream& out) {
    const size_t n = table.nodes.size();
    const size_t mid = (n - 1) / 2;
    out << "t,z_surface,z_mid,z_bottom\n";
    for (size_t k = 0; k < table.times.size(); ++k) {
        out << format_double(table.times[k]) << "," << format_double(table.frames[k][0]) << ","
            << format_double(table.frames[k][mid]) << ","
            << format_double(table.frames[k][n - 1]) << "\n";
    }
}

struct ContourPoint {
    double t, y;
};

using Segment = std::pair<ContourPoint, ContourPoint>;

// Marching squares over the (t, y) raster for one level.
std::vector<Segment> level_segments(const TrajectoryTable& table, double level) {
    std::vector<Segment> segments;
    const size_t nt = table.times.size();
    const size_t ny = table.nodes.size();
    auto cross = [&](double a, double b) { return (a - level) * (b - level) < 0.0; };
    auto lerp = [&](double x0, double x1, double v0, double v1) {
        return x0 + (level - v0) / (v1 - v0) * (x1 - x0);
    };
    for (size_t k = 0; k + 1 < nt; ++k) {
        for (size_t i = 0; i + 1 < ny; ++i) {
            const double v00 = table.frames[k][i], v10 = table.frames[k + 1][i];
            const double v01 = table.frames[k][i + 1], v11 = table.frames[k + 1][i + 1];
            const double t0 = table.times[k], t1 = table.times[k + 1];
            const double y0 = table.nodes[i], y1 = table.nodes[i + 1];

            std::vector<ContourPoint> hits;
            if (cross(v00, v10)) hits.push_back({lerp(t0, t1, v00, v10), y0});   // bottom edge
            if (cross(v01, v11)) hits.push_back({lerp(t0, t1, v01, v11), y1});   // top edge
            if (cross(v00, v01)) hits.push_back({t0, lerp(y0, y1, v00, v01)});   // left edge
            if (cross(v10, v11)) hits.push_back({t1, lerp(y0, y1, v10, v11)});   // right edge

            if (hits.size() == 2) {
                segments.push_back({hits[0], hits[1]});
            } else if (hits.size() == 4) {
                // Saddle cell: pair crossings by the cell-center value.
                const double center = 0.25 * (v00 + v10 + v01 + v11);
                if ((center > level) == (v00 > level)) {
                    segments.push_back({hits[0], hits[3]});
                    segments.push_back({hits[1], hits[2]});
                } else {
                    segments.push_back({hits[0], hits[2]});
                    segments.push_back({hits[1], hits[3]});
                }
            }
        }
    }
    return segments;
}

std::string point_key(const ContourPoint& p) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g|%.12g", p.t, p.y);
    return buf;
}

// Chains segments into polylines by walking shared endpoints.
std::vector<std::vector<ContourPoint>> chain_segments(const std::vector<Segment>& segments) {
    std::multimap<std::string, size_t> by_endpoint;
    for (size_t s = 0; s < segments.size(); ++s) {
        by_endpoint.insert({point_key(segments[s].first), s});
        by_endpoint.insert({point_key(segments[s].second), s});
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<std::vector<ContourPoint>> polylines;

    auto next_unused_at = [&](const ContourPoint& p, size_t exclude) -> long {
        auto [lo, hi] = by_endpoint.equal_range(point_key(p));
        for (auto it = lo; it != hi; ++it) {
            if (!used[it->second] && it->second != exclude) return static_cast<long>(it->second);
        }
        return -1;
    };

    for (size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<ContourPoint> line{segments[s].first, segments[s].second};
        // Extend forward from the tail, then backward from the head.
        for (int pass = 0; pass < 2; ++pass) {
            while (true) {
                const ContourPoint& tip = line.back();
                const long nxt = next_unused_at(tip, static_cast<size_t>(-1));
                if (nxt < 0) break;
                used[nxt] = true;
                const auto& seg = segments[static_cast<size_t>(nxt)];
                line.push_back(point_key(seg.first) == point_key(tip) ? seg.second : seg.first);
            }
            std::reverse(line.begin(), line.end());
        }
        polylines.push_back(std::move(line));
    }
    return polylines;
}

void emit_contour(const TrajectoryTable& table, std::ofstream& out) {
    double lo = table.frames[0][0], hi = lo;
    for (const auto& frame : table.frames) {
        for (double v : frame) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    out << "level,polyline,t,y\n";
    if (!(hi > lo)) return;  // flat field has no level sets
    for (int k = 1; k <= 10; ++k) {
        const double level = lo + (hi - lo) * k / 11.0;
        const auto polylines = chain_segments(level_segments(table, level));
        for (size_t p = 0; p < polylines.size(); ++p) {
            for (const auto& pt : polylines[p]) {
                out << format_double(level) << "," << p << "," << format_double(pt.t) << ","
                    << format_double(pt.y) << "\n";
            }
        }
    }
}

}  // namespace

void emit_plotdata(const std::string& trajectory_csv_path, PlotMode mode,
                   const std::string& out_path) {
    const TrajectoryTable table = read_trajectory_csv(trajectory_csv_path);
    auto out = open_out(out_path);
    switch (mode) {
        case PlotMode::heatmap: emit_heatmap(table, out); break;
        case PlotMode::cross_section: emit_cross_section(table, out); break;
        case PlotMode::contour: emit_contour(table, out); break;
    }
    if (!out) throw IoError("write failed for '" + out_path + "'");
}

}  // namespace plankton
