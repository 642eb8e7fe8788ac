#pragma once

#include "btb/dc_link.hpp"
#include "btb/network.hpp"
#include "btb/scenario.hpp"
#include "btb/timeseries.hpp"

namespace btb {

// Ordered dynamic states of the coupled model:
// GSC (i_d, i_q, pi_integral), MSC (i_d, i_q), DC link (v_dc).
struct StateVector {
    double gsc_i_d = 0.0;
    double gsc_i_q = 0.0;
    double gsc_pi = 0.0;
    double msc_i_d = 0.0;
    double msc_i_q = 0.0;
    double v_dc = 0.0;
};

// Fixed-step phasor engine. One step runs the loop: apply due events, solve
// both networks consistently with the converter states, Euler predictor,
// re-solve at the predicted states, trapezoidal corrector (Heun), final
// network solution and DC-link current exchange. All six states, including
// the PI integral and v_dc, advance in the same Heun scheme.
class SimEngine {
public:
    explicit SimEngine(const Scenario& scenario);

    void initialize(); // per scenario.sim.init_mode
    void initialize(InitMode mode);

    void step();
    TimeSeries run();             // initialize + full loop with stride logging
    void run(const RowSink& sink);

    const StateVector& state() const { return x_; }
    double time() const { return static_cast<double>(step_count_) * dt_; }
    long long step_count() const { return step_count_; }
    OutputRow row() const; // snapshot at the current instant
    const DcLinkState& dc_link() const { return dc_; }

    // Current (event-updated) control configs, for inspection in tests.
    const ControlConfig& gsc_control() const;
    const ControlConfig& msc_control() const;

private:
    struct Side {
        ConverterParams params;
        ControlConfig control;
        Network net;
        int pcc = 0; // 0-based
        Complex z;
        double omega = 0.0;
        double v_min = 0.0; // dead-bus guard on reference currents, V
        Phasor v_guess;     // warm start for the interface fixed point
        Complex gain;       // affine refresh gain Zbus/Z of the current Y
        bool gain_stale = true;
        std::vector<Phasor> v_scratch;
    };

    struct SideEnv {
        Phasor v_pcc;
        DqPair v_dq;
        ConverterOutputs out;
        double i_d_ref = 0.0;
        double i_q_ref = 0.0;
    };

    struct Env {
        SideEnv g, m;
        bool valid = false;
    };

    struct Derivs {
        double gsc_i_d, gsc_i_q, gsc_pi, msc_i_d, msc_i_q, v_dc;
    };

    static Side make_side_(const NetworkSpec& net, const ConverterParams& params,
                           const ControlConfig& control);
    void apply_due_events_();
    SideEnv solve_side_(Side& side, double i_d, double i_q, double v_dc);
    Env closure_(const StateVector& x);
    Derivs derivs_(const StateVector& x, const Env& env) const;
    void check_finite_(const StateVector& x, const StateVector& last_good) const;
    std::string dump_(const StateVector& x) const;

    Scenario scn_;
    double dt_;
    Side g_, m_;
    DcLinkState dc_;
    StateVector x_;
    Env env_; // consistent with x_ at the current time
    long long step_count_ = 0;
    size_t next_event_ = 0;
    std::vector<long long> event_step_;
    bool initialized_ = false;
};

TimeSeries run_scenario(const Scenario& scenario);

} // namespace btb
