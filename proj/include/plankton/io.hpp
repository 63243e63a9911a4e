#pragma once

#include <string>
#include <vector>

#include "plankton/floquet.hpp"
#include "plankton/timestep.hpp"

namespace plankton {

/// Wide-format trajectory table: header `t,y=<y0>,y=<y1>,...`, one row per
/// recorded time, full double precision, LF line endings.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

/// Header `t,total_mass,sup_norm,min,period_residual`; the residual column is
/// populated only on period-boundary rows.
void write_diagnostics_csv(const std::string& path, const Trajectory& trajectory);

/// Trajectory data as read back from a trajectory CSV.
struct TrajectoryTable {
    std::vector<double> nodes;                // y coordinates from the header
    std::vector<double> times;
    std::vector<std::vector<double>> frames;  // one value row per time
};

TrajectoryTable read_trajectory_csv(const std::string& path);

/// Appends one machine-readable row (creating the file with a header first).
void append_r0_report_csv(const std::string& path, const std::string& label,
                          const R0Report& report);

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<SweepRow>& rows);

enum class PlotMode { heatmap, cross_section, contour };

PlotMode plot_mode_from_string(const std::string& name);

/// Transforms a trajectory CSV into plot-ready data:
///   heatmap       long-format (t, y, value) triples,
///   cross-section value against t at the surface, middle and bottom nodes,
///   contour       marching-squares polylines at 10 evenly spaced levels.
void emit_plotdata(const std::string& trajectory_csv_path, PlotMode mode,
                   const std::string& out_path);

/// Shortest-round-trip-safe formatting used by every CSV writer.
std::string format_double(double value);

}  // namespace plankton
