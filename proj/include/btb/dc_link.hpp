#pragma once

namespace btb {

// Shared DC capacitor between the two converter stages.
// Sign convention: i_dc_x > 0 means the capacitor discharges into converter x.
struct DcLinkState {
    double v_dc = 0.0;   // V
    double c_dc = 0.0;   // F
    double i_dc_g = 0.0; // A, last exchanged grid-side converter current
    double i_dc_m = 0.0; // A, last exchanged microgrid-side converter current
};

inline double dv_dc_dt(const DcLinkState& s) {
    return (-s.i_dc_g - s.i_dc_m) / s.c_dc;
}

inline double energy(const DcLinkState& s) {
    return 0.5 * s.c_dc * s.v_dc * s.v_dc;
}

} // namespace btb
