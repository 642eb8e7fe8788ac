#pragma once

#include "btb/engine.hpp"
#include "btb/scenario.hpp"
#include "btb/timeseries.hpp"

namespace btb::oracle {

struct OracleConfig {
    double dt_fine = 1e-5; // s
    int log_stride = 100;  // steps per logged row
};

// High-rate RK4 integration of the same continuous model, implemented
// independently of the engine (own network assembly, own linear solve, own
// algebraic closure in current-source form). Validation reference for the
// phasor engine's integration and coupling accuracy; it is not an
// electromagnetic-transient model.
TimeSeries run_fine(const Scenario& scenario, const OracleConfig& cfg = {});
void run_fine(const Scenario& scenario, const OracleConfig& cfg, const RowSink& sink);

struct SteadyState {
    StateVector states;
    double p_g_pcc = 0.0, q_g_pcc = 0.0;
    double p_m_pcc = 0.0, q_m_pcc = 0.0;
    double i_dc_g = 0.0, i_dc_m = 0.0;
    double v_g_mag = 0.0, v_m_mag = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

// Damped fixed-point solve of the algebraic steady state at the scenario's
// initial setpoints: currents at their references, network Ohm's law, DC-side
// power balance, v_dc at its reference.
SteadyState steady_state(const Scenario& scenario);

} // namespace btb::oracle
