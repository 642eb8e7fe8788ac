#pragma once

#include <utility>

#include "btb/phasor.hpp"

namespace btb {

// Interface reactor and LC filter of one converter stage (values per stage;
// the grid-side and microgrid-side stages are two instances of this model).
struct ConverterParams {
    double r_g = 0.0;       // interface reactor resistance, ohm
    double l_g = 0.0;       // interface reactor inductance, H
    double c_f = 0.0;       // filter capacitance, F
    double r_f = 0.0;       // filter-branch resistance, ohm
    double l_f = 0.0;       // filter-branch inductance, H
    double s_rated = 0.0;   // VA
    double v_ll_rms = 0.0;  // nominal line-to-line RMS voltage, V
    double omega_nom = 0.0; // rad/s

    // Peak phase voltage of the nominal line-to-line RMS value.
    double v_peak_nominal() const;
    // Rated current magnitude (peak phase) at nominal voltage.
    double i_peak_rated() const;
    Complex interface_z() const; // r_g + j*omega_nom*l_g

    void validate(const char* section) const;
};

enum class ControlMode { dc_regulation, pq_setpoint };

struct ControlConfig {
    ControlMode mode = ControlMode::pq_setpoint;
    double k_p = 0.0;      // W/V (dc_regulation)
    double k_i = 0.0;      // W/(V*s) (dc_regulation)
    double t_f = 0.0;      // current-loop lag time constant, s
    double v_dc_ref = 0.0; // V (dc_regulation)
    double p_ref = 0.0;    // W (pq_setpoint, event-updatable)
    double q_ref = 0.0;    // var (event-updatable)

    // Reference currents are refused below this fraction of nominal V_d.
    double dead_bus_fraction = 0.1;
    // Optional symmetric clamp of the reference-current magnitude at the
    // rated current. Off by default so scenarios follow the equations as-is.
    bool current_limit = false;

    void validate(const char* section) const;
};

// Dynamic states of one converter stage. i_d/i_q live in the converter's own
// dq frame; frame_angle records the d-axis alignment of the last network
// solution.
struct ConverterState {
    double i_d = 0.0;         // A
    double i_q = 0.0;         // A
    double pi_integral = 0.0; // V*s (dc_regulation only)
    double frame_angle = 0.0; // rad
};

struct ConverterOutputs {
    DqPair e_source; // filter-capacitor voltage
    DqPair i_f;      // filter-branch current
    DqPair v_t;      // switching-terminal voltage
    // DC side from the internal voltage and reactor current (the form the
    // simulation loop exchanges with the DC link).
    double p_dc = 0.0; // W, > 0 discharges the DC capacitor into this stage
    double i_dc = 0.0; // A
    // Diagnostic DC side from the terminal voltage and filter current.
    double p_dc_terminal = 0.0;
    double i_dc_terminal = 0.0;
    // PCC injection.
    double p_pcc = 0.0;
    double q_pcc = 0.0;
};

// Ideal PLL alignment: frame angle snaps to the PCC voltage angle, so the
// aligned voltage is (|v|, 0). A dead bus has no angle to lock onto.
std::pair<double, DqPair> align_frame(const Phasor& v_pcc);

// KVL across the interface reactor: E = V + (R + j*omega*L) I.
DqPair internal_voltage(const DqPair& v, const DqPair& i, const ConverterParams& p, double omega);

// Filter-capacitor current split: I_f = I + j*omega*C_f E.
DqPair filter_current(const DqPair& e, const DqPair& i, const ConverterParams& p, double omega);

// KVL across the filter branch: V_t = E + (R_f + j*omega*L_f) I_f.
DqPair terminal_voltage(const DqPair& e, const DqPair& i_f, const ConverterParams& p, double omega);

// DC-side power 3/2 (E_d I_d + E_q I_q) and current p/v_dc.
std::pair<double, double> dc_side(const DqPair& e, const DqPair& i, double v_dc);

// P/Q setpoints to dq current references:
//   i_d* = 2/3 p_ref / v_d,  i_q* = -2/3 q_ref / v_d
// v_d_min guards the division against a collapsing bus.
std::pair<double, double> reference_currents(double p_ref, double q_ref, double v_d, double v_d_min);

// DC-voltage regulator output P* = K_P (v_dc - v_dc_ref) + K_I * integral.
// Positive output commands export to the AC side, discharging the capacitor.
// The integral state is advanced by the engine together with all other states.
double dc_voltage_pi(double v_dc, const ControlConfig& cfg, double pi_integral);

// First-order current-loop lag: dI/dt = (I* - I) / T_f per axis.
std::pair<double, double> current_lag_derivatives(double i_d, double i_q,
                                                  double i_d_ref, double i_q_ref, double t_f);

// Scale a reference pair down to magnitude i_max (no-op when already inside).
std::pair<double, double> clamp_reference(double i_d_ref, double i_q_ref, double i_max);

// Full algebraic chain at one instant given the PLL-aligned PCC voltage
// (v_dq.q must be 0) and the reactor current state.
ConverterOutputs converter_chain(const DqPair& v_dq, double i_d, double i_q,
                                 const ConverterParams& p, double omega, double v_dc);

} // namespace btb
