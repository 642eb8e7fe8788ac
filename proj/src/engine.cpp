#include "btb/engine.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace btb {

namespace {

double peak_phase(double v_ll_rms) {
    return v_ll_rms * std::sqrt(2.0) / std::sqrt(3.0);
}

// Largest physical root of 1.5 r i^2 + 1.5 v i + (1.5 r i_q^2 - p_target) = 0,
// the reactor-current value that draws p_target from the DC side at PCC
// voltage v. Evaluated in the cancellation-safe form so r -> 0 degrades to
// (2/3) p_target / v.
double balance_current(double v_d, double i_q, double r, double p_target) {
    const double a = 1.5 * r;
    const double b = 1.5 * v_d;
    const double c = 1.5 * r * i_q * i_q - p_target;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        throw SimError(ErrorKind::init_failure,
                       "equilibrium: requested power beyond the interface transfer limit");
    const double q = -0.5 * (b + std::sqrt(disc));
    return c / q;
}

} // namespace

SimEngine::Side SimEngine::make_side_(const NetworkSpec& spec, const ConverterParams& params,
                                      const ControlConfig& control) {
    Network net(spec.n_bus, spec.omega);
    for (const auto& s : spec.sources)
        net.add_source(IdealSource{s.bus - 1, Phasor::polar(peak_phase(s.v_ll_rms), s.angle), s.z});
    for (const auto& l : spec.lines)
        net.add_branch(Branch{l.from - 1, l.to - 1, l.z, l.b_total});
    for (const auto& l : spec.loads)
        net.update_admittance(l.bus - 1, l.z);
    net.add_interface_shunt(spec.converter_bus - 1, params.interface_z());

    return Side{params,
                control,
                std::move(net),
                spec.converter_bus - 1,
                params.interface_z(),
                spec.omega,
                control.dead_bus_fraction * params.v_peak_nominal(),
                Phasor{},
                Complex{},
                true,
                {}};
}

SimEngine::SimEngine(const Scenario& scenario)
    : scn_(scenario),
      dt_(scenario.sim.dt),
      g_(make_side_(scenario.grid, scenario.gsc_params, scenario.gsc_control)),
      m_(make_side_(scenario.microgrid, scenario.msc_params, scenario.msc_control)) {
    dc_.c_dc = scn_.c_dc;
    event_step_.reserve(scn_.events.size());
    for (const auto& ev : scn_.events)
        event_step_.push_back(static_cast<long long>(std::ceil(ev.time / dt_ - 1e-9)));
}

const ControlConfig& SimEngine::gsc_control() const { return g_.control; }
const ControlConfig& SimEngine::msc_control() const { return m_.control; }

void SimEngine::apply_due_events_() {
    bool fired = false;
    while (next_event_ < scn_.events.size() && event_step_[next_event_] <= step_count_) {
        const Event& ev = scn_.events[next_event_];
        switch (ev.target) {
            case EventTarget::msc_p_ref: m_.control.p_ref = ev.value; break;
            case EventTarget::msc_q_ref: m_.control.q_ref = ev.value; break;
            case EventTarget::gsc_q_ref: g_.control.q_ref = ev.value; break;
            case EventTarget::gsc_v_dc_ref: g_.control.v_dc_ref = ev.value; break;
            case EventTarget::network_load: {
                Side& side = ev.side == NetworkSide::grid ? g_ : m_;
                side.net.update_admittance(ev.bus - 1, ev.shunt_z);
                side.gain_stale = true;
                break;
            }
        }
        ++next_event_;
        fired = true;
    }
    if (fired) env_.valid = false;
}

// Solve one network consistently with the converter state currents: the
// Norton injection E/Z is refreshed from the solved voltage until the
// (E, V) pair is a fixed point, so the effective injected current equals the
// state current exactly and the closure is independent of the previous stage.
// For a fixed frame angle the refresh map V -> solve(E(V)/Z) is affine with
// the cached gain r = Zbus/Z, so each round lands on that angle's fixed point
// directly; the outer loop only tracks the frame angle.
SimEngine::SideEnv SimEngine::solve_side_(Side& side, double i_d, double i_q, double v_dc) {
    Phasor v = side.v_guess;
    if (v.re == 0.0 && v.im == 0.0)
        v = Phasor::polar(side.params.v_peak_nominal(), 0.0);

    if (side.gain_stale) {
        side.gain = side.net.transfer_impedance(side.pcc) / side.z;
        if (std::abs(1.0 - side.gain) < 1e-9)
            throw SimError(ErrorKind::network_degenerate,
                           "converter interface sees a unit-gain bus, closure is singular");
        side.gain_stale = false;
    }

    const auto eval = [&](const Phasor& vk, double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        const Complex i_net{i_d * c - i_q * s, i_d * s + i_q * c};
        const Complex e_net = vk.c() + side.z * i_net;
        // Norton current of the interface equivalent; z is validated nonzero
        // at construction.
        side.net.set_injection(side.pcc, Phasor::from(e_net / side.z));
        side.net.solve_into(side.v_scratch);
        return side.v_scratch[static_cast<size_t>(side.pcc)];
    };

    double dv = 0.0;
    for (int round = 0; round < 32; ++round) {
        const Phasor v1 = eval(v, v.angle());
        dv = std::hypot(v1.re - v.re, v1.im - v.im);
        if (dv <= 1e-13 * std::max(1.0, v1.magnitude())) {
            v = v1;
            break;
        }
        // v1 = r v + c; jump to the fixed point c / (1 - r) for this angle.
        // The next round's eval doubles as verification and angle refresh.
        v = Phasor::from((v1.c() - side.gain * v.c()) / (1.0 - side.gain));
    }
    if (!(dv <= 1e-9 * std::max(1.0, v.magnitude())))
        throw SimError(ErrorKind::divergence,
                       "network-converter interface iteration did not converge");
    side.v_guess = v;

    SideEnv env;
    env.v_pcc = v;
    env.v_dq = align_frame(v).second; // throws dead_bus on |v| = 0
    env.out = converter_chain(env.v_dq, i_d, i_q, side.params, side.omega, v_dc);
    return env;
}

SimEngine::Env SimEngine::closure_(const StateVector& x) {
    Env env;
    env.g = solve_side_(g_, x.gsc_i_d, x.gsc_i_q, x.v_dc);
    env.m = solve_side_(m_, x.msc_i_d, x.msc_i_q, x.v_dc);

    const double p_ref_g = dc_voltage_pi(x.v_dc, g_.control, x.gsc_pi);
    auto [gd, gq] = reference_currents(p_ref_g, g_.control.q_ref, env.g.v_dq.d, g_.v_min);
    if (g_.control.current_limit)
        std::tie(gd, gq) = clamp_reference(gd, gq, g_.params.i_peak_rated());
    env.g.i_d_ref = gd;
    env.g.i_q_ref = gq;

    auto [md, mq] = reference_currents(m_.control.p_ref, m_.control.q_ref, env.m.v_dq.d, m_.v_min);
    if (m_.control.current_limit)
        std::tie(md, mq) = clamp_reference(md, mq, m_.params.i_peak_rated());
    env.m.i_d_ref = md;
    env.m.i_q_ref = mq;

    env.valid = true;
    return env;
}

SimEngine::Derivs SimEngine::derivs_(const StateVector& x, const Env& env) const {
    Derivs f{};
    std::tie(f.gsc_i_d, f.gsc_i_q) = current_lag_derivatives(
        x.gsc_i_d, x.gsc_i_q, env.g.i_d_ref, env.g.i_q_ref, g_.control.t_f);
    f.gsc_pi = x.v_dc - g_.control.v_dc_ref;
    std::tie(f.msc_i_d, f.msc_i_q) = current_lag_derivatives(
        x.msc_i_d, x.msc_i_q, env.m.i_d_ref, env.m.i_q_ref, m_.control.t_f);
    const DcLinkState dc{x.v_dc, dc_.c_dc, env.g.out.i_dc, env.m.out.i_dc};
    f.v_dc = dv_dc_dt(dc);
    return f;
}

std::string SimEngine::dump_(const StateVector& x) const {
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "gsc_i_d=%.9g gsc_i_q=%.9g gsc_pi=%.9g msc_i_d=%.9g msc_i_q=%.9g v_dc=%.9g",
                  x.gsc_i_d, x.gsc_i_q, x.gsc_pi, x.msc_i_d, x.msc_i_q, x.v_dc);
    return buf;
}

void SimEngine::check_finite_(const StateVector& x, const StateVector& last_good) const {
    const bool ok = std::isfinite(x.gsc_i_d) && std::isfinite(x.gsc_i_q) &&
                    std::isfinite(x.gsc_pi) && std::isfinite(x.msc_i_d) &&
                    std::isfinite(x.msc_i_q) && std::isfinite(x.v_dc);
    if (!ok)
        throw SimError(ErrorKind::divergence,
                       "state update diverged (NaN/Inf); last good state: " + dump_(last_good));
}

void SimEngine::initialize() { initialize(scn_.sim.init_mode); }

void SimEngine::initialize(InitMode mode) {
    step_count_ = 0;
    next_event_ = 0;
    // Fresh networks too: a prior run may have applied load events.
    g_ = make_side_(scn_.grid, scn_.gsc_params, scn_.gsc_control);
    m_ = make_side_(scn_.microgrid, scn_.msc_params, scn_.msc_control);
    x_ = StateVector{};

    if (mode == InitMode::cold_start) {
        x_.v_dc = scn_.v_dc_start();
        env_ = closure_(x_);
    } else {
        // Algebraic steady state at the initial setpoints: v_dc pinned at its
        // reference, currents at their references, DC-side powers balanced,
        // PI integral preloaded to carry the balancing power reference.
        x_.v_dc = g_.control.v_dc_ref;
        double residual = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 200 && !converged; ++iter) {
            const StateVector prev = x_;

            const SideEnv em = solve_side_(m_, x_.msc_i_d, x_.msc_i_q, x_.v_dc);
            auto [md, mq] =
                reference_currents(m_.control.p_ref, m_.control.q_ref, em.v_dq.d, m_.v_min);
            if (m_.control.current_limit)
                std::tie(md, mq) = clamp_reference(md, mq, m_.params.i_peak_rated());
            x_.msc_i_d = md;
            x_.msc_i_q = mq;
            const ConverterOutputs mo =
                converter_chain(em.v_dq, md, mq, m_.params, m_.omega, x_.v_dc);

            const SideEnv eg = solve_side_(g_, x_.gsc_i_d, x_.gsc_i_q, x_.v_dc);
            const double gq = -(2.0 / 3.0) * g_.control.q_ref / eg.v_dq.d;
            const double gd = balance_current(eg.v_dq.d, gq, g_.params.r_g, -mo.p_dc);
            x_.gsc_i_d = gd;
            x_.gsc_i_q = gq;

            const double p_star = 1.5 * eg.v_dq.d * gd;
            if (g_.control.k_i > 0.0) {
                x_.gsc_pi = p_star / g_.control.k_i;
            } else if (std::abs(p_star) > 1e-9) {
                throw SimError(ErrorKind::init_failure,
                               "equilibrium: k_i = 0 cannot hold a nonzero power reference");
            }

            residual = 0.0;
            const double deltas[6] = {
                std::abs(x_.gsc_i_d - prev.gsc_i_d) / std::max(1.0, std::abs(x_.gsc_i_d)),
                std::abs(x_.gsc_i_q - prev.gsc_i_q) / std::max(1.0, std::abs(x_.gsc_i_q)),
                std::abs(x_.gsc_pi - prev.gsc_pi) / std::max(1.0, std::abs(x_.gsc_pi)),
                std::abs(x_.msc_i_d - prev.msc_i_d) / std::max(1.0, std::abs(x_.msc_i_d)),
                std::abs(x_.msc_i_q - prev.msc_i_q) / std::max(1.0, std::abs(x_.msc_i_q)),
                0.0};
            for (double d : deltas) residual = std::max(residual, d);
            converged = residual < 1e-10;
        }
        if (!converged)
            throw SimError(ErrorKind::init_failure,
                           "equilibrium initialization did not converge in 200 iterations, "
                           "residual " + std::to_string(residual));

        env_ = closure_(x_);
        const Derivs f = derivs_(x_, env_);
        const double drift =
            std::max({std::abs(f.gsc_i_d), std::abs(f.gsc_i_q), std::abs(f.msc_i_d),
                      std::abs(f.msc_i_q), std::abs(f.gsc_pi), std::abs(f.v_dc)});
        if (!(drift < 1e-5))
            throw SimError(ErrorKind::init_failure,
                           "setpoints admit no equilibrium (residual derivative " +
                               std::to_string(drift) + "; current limit active?)");
    }

    dc_.v_dc = x_.v_dc;
    dc_.i_dc_g = env_.g.out.i_dc;
    dc_.i_dc_m = env_.m.out.i_dc;
    initialized_ = true;
}

void SimEngine::step() {
    if (!initialized_)
        throw std::logic_error("SimEngine::step before initialize");

    const StateVector x0 = x_;
    try {
        apply_due_events_();
        const Env env0 = env_.valid ? env_ : closure_(x_);
        const Derivs f0 = derivs_(x_, env0);

        StateVector xp; // Euler predictor
        xp.gsc_i_d = x0.gsc_i_d + dt_ * f0.gsc_i_d;
        xp.gsc_i_q = x0.gsc_i_q + dt_ * f0.gsc_i_q;
        xp.gsc_pi = x0.gsc_pi + dt_ * f0.gsc_pi;
        xp.msc_i_d = x0.msc_i_d + dt_ * f0.msc_i_d;
        xp.msc_i_q = x0.msc_i_q + dt_ * f0.msc_i_q;
        xp.v_dc = x0.v_dc + dt_ * f0.v_dc;
        check_finite_(xp, x0);

        const Env env1 = closure_(xp);
        const Derivs f1 = derivs_(xp, env1);

        const double h = 0.5 * dt_; // trapezoidal corrector
        x_.gsc_i_d = x0.gsc_i_d + h * (f0.gsc_i_d + f1.gsc_i_d);
        x_.gsc_i_q = x0.gsc_i_q + h * (f0.gsc_i_q + f1.gsc_i_q);
        x_.gsc_pi = x0.gsc_pi + h * (f0.gsc_pi + f1.gsc_pi);
        x_.msc_i_d = x0.msc_i_d + h * (f0.msc_i_d + f1.msc_i_d);
        x_.msc_i_q = x0.msc_i_q + h * (f0.msc_i_q + f1.msc_i_q);
        x_.v_dc = x0.v_dc + h * (f0.v_dc + f1.v_dc);
        check_finite_(x_, x0);

        ++step_count_;
        env_ = closure_(x_); // final network solution of the step

        // DC-link current exchange at the corrected states.
        dc_.v_dc = x_.v_dc;
        dc_.i_dc_g = env_.g.out.i_dc;
        dc_.i_dc_m = env_.m.out.i_dc;
    } catch (const SimError& e) {
        x_ = x0; // keep the engine at the last good state
        char prefix[48];
        std::snprintf(prefix, sizeof prefix, "t=%.9g s: ", time());
        throw SimError(e.kind(), prefix + std::string(e.what()));
    }
}

OutputRow SimEngine::row() const {
    OutputRow r;
    r.t = time();
    r.v_dc = x_.v_dc;
    r.i_dc_g = env_.g.out.i_dc;
    r.i_dc_m = env_.m.out.i_dc;
    r.p_g = env_.g.out.p_pcc;
    r.q_g = env_.g.out.q_pcc;
    r.p_m = env_.m.out.p_pcc;
    r.q_m = env_.m.out.q_pcc;
    r.v_g_mag = env_.g.v_pcc.magnitude();
    r.v_g_ang = env_.g.v_pcc.angle();
    r.v_m_mag = env_.m.v_pcc.magnitude();
    r.v_m_ang = env_.m.v_pcc.angle();
    r.e_g_d = env_.g.out.e_source.d;
    r.e_g_q = env_.g.out.e_source.q;
    r.e_m_d = env_.m.out.e_source.d;
    r.e_m_q = env_.m.out.e_source.q;
    return r;
}

void SimEngine::run(const RowSink& sink) {
    initialize();
    const long long n_steps = std::llround(scn_.sim.t_stop / dt_);
    sink(row());
    for (long long k = 0; k < n_steps; ++k) {
        step();
        if ((k + 1) % scn_.sim.log_stride == 0) sink(row());
    }
}

TimeSeries SimEngine::run() {
    TimeSeries series;
    series.rows.reserve(static_cast<size_t>(scn_.sim.t_stop / dt_ / scn_.sim.log_stride) + 2);
    run([&](const OutputRow& r) { series.rows.push_back(r); });
    return series;
}

TimeSeries run_scenario(const Scenario& scenario) {
    SimEngine engine(scenario);
    return engine.run();
}

} // namespace btb
