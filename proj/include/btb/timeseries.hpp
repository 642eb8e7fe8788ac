#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace btb {

// One logged instant. Powers are PCC injections (converter into network);
// i_dc_* follow the DC-link sign convention (positive discharges the
// capacitor); angles in radians; e_*_d/q are the filter-capacitor voltages in
// each converter's own frame.
struct OutputRow {
    double t = 0.0;
    double v_dc = 0.0;
    double i_dc_g = 0.0;
    double i_dc_m = 0.0;
    double p_g = 0.0;
    double q_g = 0.0;
    double p_m = 0.0;
    double q_m = 0.0;
    double v_g_mag = 0.0;
    double v_g_ang = 0.0;
    double v_m_mag = 0.0;
    double v_m_ang = 0.0;
    double e_g_d = 0.0;
    double e_g_q = 0.0;
    double e_m_d = 0.0;
    double e_m_q = 0.0;
};

inline constexpr int kOutputColumns = 16;

// Versioned schema: the comment line and the header line are both fixed.
inline constexpr const char* kCsvSchemaLine = "# btb-timeseries-v1";
inline constexpr const char* kCsvHeaderLine =
    "t,v_dc,i_dc_g,i_dc_m,p_g,q_g,p_m,q_m,"
    "v_g_mag,v_g_ang,v_m_mag,v_m_ang,e_g_d,e_g_q,e_m_d,e_m_q";

extern const char* const kColumnNames[kOutputColumns];

double output_column(const OutputRow& row, int col);

struct TimeSeries {
    std::vector<OutputRow> rows;
};

using RowSink = std::function<void(const OutputRow&)>;

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const OutputRow& row); // 9 significant digits
void write_csv(std::ostream& os, const TimeSeries& series);

} // namespace btb
