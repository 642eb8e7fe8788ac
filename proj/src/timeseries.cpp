#include "btb/timeseries.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace btb {

const char* const kColumnNames[kOutputColumns] = {
    "t",       "v_dc",    "i_dc_g",  "i_dc_m", "p_g",   "q_g",   "p_m",   "q_m",
    "v_g_mag", "v_g_ang", "v_m_mag", "v_m_ang", "e_g_d", "e_g_q", "e_m_d", "e_m_q"};

double output_column(const OutputRow& r, int col) {
    switch (col) {
        case 0: return r.t;
        case 1: return r.v_dc;
        case 2: return r.i_dc_g;
        case 3: return r.i_dc_m;
        case 4: return r.p_g;
        case 5: return r.q_g;
        case 6: return r.p_m;
        case 7: return r.q_m;
        case 8: return r.v_g_mag;
        case 9: return r.v_g_ang;
        case 10: return r.v_m_mag;
        case 11: return r.v_m_ang;
        case 12: return r.e_g_d;
        case 13: return r.e_g_q;
        case 14: return r.e_m_d;
        case 15: return r.e_m_q;
    }
    throw std::out_of_range("output_column");
}

void write_csv_header(std::ostream& os) {
    os << kCsvSchemaLine << "\n" << kCsvHeaderLine << "\n";
}

void write_csv_row(std::ostream& os, const OutputRow& row) {
    char buf[32];
    for (int c = 0; c < kOutputColumns; ++c) {
        std::snprintf(buf, sizeof buf, "%.9g", output_column(row, c));
        if (c) os << ',';
        os << buf;
    }
    os << '\n';
}

void write_csv(std::ostream& os, const TimeSeries& series) {
    write_csv_header(os);
    for (const auto& row : series.rows) write_csv_row(os, row);
}

} // namespace btb
