#pragma once

#include <string>

namespace btb {

enum class PlotLayout {
    dc_currents, // v_dc; i_dc_m; i_dc_g
    powers,      // v_dc; p_g; p_m
};

// Self-contained matplotlib script with three stacked panels. Validates that
// csv_path exists and carries the versioned schema before emitting.
std::string make_plot_script(const std::string& csv_path, PlotLayout layout);
void emit_plot_script(const std::string& csv_path, const std::string& out_path, PlotLayout layout);

} // namespace btb
