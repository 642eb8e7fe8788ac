// Reference integrator: RK4 at a fine step over the same continuous model,
// written independently of the engine. The network closure here uses the
// current-source form (converter injection stamped directly, no interface
// shunt in Y), each stage re-solves the network by plain dense elimination,
// and all converter equations are evaluated inline. Equivalence tests between
// this file and the engine exercise two genuinely different routes.

#include "btb/oracle.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <vector>

namespace btb::oracle {

namespace {

using State = std::array<double, 6>; // igd, igq, pi, imd, imq, vdc

double peak_phase(double v_ll_rms) { return v_ll_rms * std::sqrt(2.0) / std::sqrt(3.0); }

double wrap_angle(double a) {
    return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

struct SideNet {
    int n = 1;
    int pcc = 0;
    const NetworkSpec* spec = nullptr;
    std::vector<std::optional<Complex>> loads; // by 0-based bus
    std::vector<Complex> y;                    // dense, converter not stamped
    std::vector<Complex> base;                 // source Norton currents
    mutable std::vector<Complex> a_, b_;       // elimination scratch

    void assemble() {
        const auto nn = static_cast<size_t>(n);
        y.assign(nn * nn, Complex{});
        base.assign(nn, Complex{});
        for (const auto& s : spec->sources) {
            const auto b = static_cast<size_t>(s.bus - 1);
            y[b * nn + b] += 1.0 / s.z;
            base[b] += std::polar(peak_phase(s.v_ll_rms), s.angle) / s.z;
        }
        for (const auto& l : spec->lines) {
            const auto i = static_cast<size_t>(l.from - 1);
            const auto j = static_cast<size_t>(l.to - 1);
            const Complex yl = 1.0 / l.z;
            y[i * nn + i] += yl + Complex{0.0, 0.5 * l.b_total};
            y[j * nn + j] += yl + Complex{0.0, 0.5 * l.b_total};
            y[i * nn + j] -= yl;
            y[j * nn + i] -= yl;
        }
        for (size_t b = 0; b < nn; ++b)
            if (loads[b]) y[b * nn + b] += 1.0 / *loads[b];
        a_.resize(nn * nn);
        b_.resize(nn);
    }

    // V at the converter bus for a given converter current injection.
    Complex pcc_voltage(Complex inj) const {
        const auto nn = static_cast<size_t>(n);
        a_ = y;
        for (size_t i = 0; i < nn; ++i) b_[i] = base[i];
        b_[static_cast<size_t>(pcc)] += inj;

        for (size_t k = 0; k < nn; ++k) {
            size_t p = k;
            double best = std::abs(a_[k * nn + k]);
            for (size_t i = k + 1; i < nn; ++i)
                if (std::abs(a_[i * nn + k]) > best) { best = std::abs(a_[i * nn + k]); p = i; }
            if (!(best > 0.0))
                throw SimError(ErrorKind::network_degenerate, "reference solve: singular network");
            if (p != k) {
                for (size_t j = 0; j < nn; ++j) std::swap(a_[k * nn + j], a_[p * nn + j]);
                std::swap(b_[k], b_[p]);
            }
            for (size_t i = k + 1; i < nn; ++i) {
                const Complex f = a_[i * nn + k] / a_[k * nn + k];
                for (size_t j = k; j < nn; ++j) a_[i * nn + j] -= f * a_[k * nn + j];
                b_[i] -= f * b_[k];
            }
        }
        for (size_t i = nn; i-- > 0;) {
            for (size_t j = i + 1; j < nn; ++j) b_[i] -= a_[i * nn + j] * b_[j];
            b_[i] /= a_[i * nn + i];
        }
        return b_[static_cast<size_t>(pcc)];
    }
};

struct SideParams {
    double r = 0, l = 0, omega = 0;
    double v_min = 0;
    bool clamp = false;
    double i_max = 0;
};

struct Model {
    SideParams g, m;
    double t_f = 0, k_p = 0, k_i = 0, v_dc_ref = 0, c_dc = 0;
    double q_g = 0, p_m = 0, q_m = 0; // event-mutable setpoints
    SideNet gn, mn;
    mutable Complex vg_warm, vm_warm;

    Complex side_voltage(const SideNet& net, double i_d, double i_q, Complex& warm) const {
        Complex v = warm;
        if (v == Complex{}) v = net.pcc_voltage(Complex{});
        for (int it = 0; it < 120; ++it) {
            const double th = std::arg(v);
            const Complex vn = net.pcc_voltage(Complex{i_d, i_q} * std::polar(1.0, th));
            if (std::abs(vn - v) <= 1e-13 * std::max(1.0, std::abs(vn))) {
                warm = vn;
                return vn;
            }
            v = vn;
        }
        throw SimError(ErrorKind::divergence, "reference solve: frame iteration did not converge");
    }

    static void check_bus(double v_d, const SideParams& sp) {
        if (!(v_d >= sp.v_min))
            throw SimError(ErrorKind::low_voltage,
                           "reference solve: PCC voltage below dead-bus threshold");
    }

    static std::pair<double, double> refs(double p, double q, double v_d, const SideParams& sp) {
        double i_d = (2.0 / 3.0) * p / v_d;
        double i_q = -(2.0 / 3.0) * q / v_d;
        if (sp.clamp) {
            const double mag = std::hypot(i_d, i_q);
            if (mag > sp.i_max && mag > 0.0) {
                i_d *= sp.i_max / mag;
                i_q *= sp.i_max / mag;
            }
        }
        return {i_d, i_q};
    }

    void rhs(const State& x, State& f) const {
        const Complex vg = side_voltage(gn, x[0], x[1], vg_warm);
        const Complex vm = side_voltage(mn, x[3], x[4], vm_warm);
        const double vgd = std::abs(vg), vmd = std::abs(vm);
        check_bus(vgd, g);
        check_bus(vmd, m);
        if (!(x[5] > 0.0))
            throw SimError(ErrorKind::collapsed_dc_link, "reference solve: DC link collapsed");

        const double pg_star = k_p * (x[5] - v_dc_ref) + k_i * x[2];
        const auto [igd_r, igq_r] = refs(pg_star, q_g, vgd, g);
        const auto [imd_r, imq_r] = refs(p_m, q_m, vmd, m);

        const double egd = vgd + g.r * x[0] - g.omega * g.l * x[1];
        const double egq = g.r * x[1] + g.omega * g.l * x[0];
        const double emd = vmd + m.r * x[3] - m.omega * m.l * x[4];
        const double emq = m.r * x[4] + m.omega * m.l * x[3];
        const double p_dc_g = 1.5 * (egd * x[0] + egq * x[1]);
        const double p_dc_m = 1.5 * (emd * x[3] + emq * x[4]);

        f[0] = (igd_r - x[0]) / t_f;
        f[1] = (igq_r - x[1]) / t_f;
        f[2] = x[5] - v_dc_ref;
        f[3] = (imd_r - x[3]) / t_f;
        f[4] = (imq_r - x[4]) / t_f;
        f[5] = (-p_dc_g / x[5] - p_dc_m / x[5]) / c_dc;
    }

    OutputRow snapshot(double t, const State& x) const {
        const Complex vg = side_voltage(gn, x[0], x[1], vg_warm);
        const Complex vm = side_voltage(mn, x[3], x[4], vm_warm);
        const double vgd = std::abs(vg), vmd = std::abs(vm);

        OutputRow r;
        r.t = t;
        r.v_dc = x[5];
        r.e_g_d = vgd + g.r * x[0] - g.omega * g.l * x[1];
        r.e_g_q = g.r * x[1] + g.omega * g.l * x[0];
        r.e_m_d = vmd + m.r * x[3] - m.omega * m.l * x[4];
        r.e_m_q = m.r * x[4] + m.omega * m.l * x[3];
        r.i_dc_g = 1.5 * (r.e_g_d * x[0] + r.e_g_q * x[1]) / x[5];
        r.i_dc_m = 1.5 * (r.e_m_d * x[3] + r.e_m_q * x[4]) / x[5];
        r.p_g = 1.5 * vgd * x[0];
        r.q_g = -1.5 * vgd * x[1];
        r.p_m = 1.5 * vmd * x[3];
        r.q_m = -1.5 * vmd * x[4];
        r.v_g_mag = vgd;
        r.v_g_ang = wrap_angle(std::arg(vg));
        r.v_m_mag = vmd;
        r.v_m_ang = wrap_angle(std::arg(vm));
        return r;
    }
};

Model build_model(const Scenario& scn) {
    Model md;
    md.g = SideParams{scn.gsc_params.r_g, scn.gsc_params.l_g, scn.grid.omega,
                      scn.gsc_control.dead_bus_fraction * scn.gsc_params.v_peak_nominal(),
                      scn.gsc_control.current_limit, scn.gsc_params.i_peak_rated()};
    md.m = SideParams{scn.msc_params.r_g, scn.msc_params.l_g, scn.microgrid.omega,
                      scn.msc_control.dead_bus_fraction * scn.msc_params.v_peak_nominal(),
                      scn.msc_control.current_limit, scn.msc_params.i_peak_rated()};
    md.t_f = scn.gsc_control.t_f;
    md.k_p = scn.gsc_control.k_p;
    md.k_i = scn.gsc_control.k_i;
    md.v_dc_ref = scn.gsc_control.v_dc_ref;
    md.c_dc = scn.c_dc;
    md.q_g = scn.gsc_control.q_ref;
    md.p_m = scn.msc_control.p_ref;
    md.q_m = scn.msc_control.q_ref;

    md.gn.n = scn.grid.n_bus;
    md.gn.pcc = scn.grid.converter_bus - 1;
    md.gn.spec = &scn.grid;
    md.gn.loads.assign(static_cast<size_t>(scn.grid.n_bus), std::nullopt);
    for (const auto& l : scn.grid.loads) md.gn.loads[static_cast<size_t>(l.bus - 1)] = l.z;
    md.gn.assemble();

    md.mn.n = scn.microgrid.n_bus;
    md.mn.pcc = scn.microgrid.converter_bus - 1;
    md.mn.spec = &scn.microgrid;
    md.mn.loads.assign(static_cast<size_t>(scn.microgrid.n_bus), std::nullopt);
    for (const auto& l : scn.microgrid.loads) md.mn.loads[static_cast<size_t>(l.bus - 1)] = l.z;
    md.mn.assemble();
    return md;
}

void apply_event(Model& md, const Event& ev) {
    switch (ev.target) {
        case EventTarget::msc_p_ref: md.p_m = ev.value; break;
        case EventTarget::msc_q_ref: md.q_m = ev.value; break;
        case EventTarget::gsc_q_ref: md.q_g = ev.value; break;
        case EventTarget::gsc_v_dc_ref: md.v_dc_ref = ev.value; break;
        case EventTarget::network_load: {
            SideNet& net = ev.side == NetworkSide::grid ? md.gn : md.mn;
            net.loads[static_cast<size_t>(ev.bus - 1)] = ev.shunt_z;
            net.assemble();
            break;
        }
    }
}

} // namespace

SteadyState steady_state(const Scenario& scn) {
    const Model md = build_model(scn);
    SteadyState ss;
    State x{0, 0, 0, 0, 0, md.v_dc_ref};

    const double damping = 0.7;
    double residual = 1.0;
    int iter = 0;
    double p_dc_g = 0.0, p_dc_m = 0.0, vgd = 0.0, vmd = 0.0;
    for (; iter < 500; ++iter) {
        const State prev = x;

        const Complex vm = md.side_voltage(md.mn, x[3], x[4], md.vm_warm);
        vmd = std::abs(vm);
        Model::check_bus(vmd, md.m);
        const auto [imd_t, imq_t] = Model::refs(md.p_m, md.q_m, vmd, md.m);
        x[3] += damping * (imd_t - x[3]);
        x[4] += damping * (imq_t - x[4]);
        const double emd = vmd + md.m.r * x[3] - md.m.omega * md.m.l * x[4];
        const double emq = md.m.r * x[4] + md.m.omega * md.m.l * x[3];
        p_dc_m = 1.5 * (emd * x[3] + emq * x[4]);

        const Complex vg = md.side_voltage(md.gn, x[0], x[1], md.vg_warm);
        vgd = std::abs(vg);
        Model::check_bus(vgd, md.g);
        const double igq_t = -(2.0 / 3.0) * md.q_g / vgd;
        // i_gd such that the GSC draws exactly -p_dc_m from the DC side:
        // 1.5 (vgd i + r (i^2 + iq^2)) = -p_dc_m, solved by inner iteration.
        double igd_t = -(2.0 / 3.0) * p_dc_m / vgd;
        for (int k = 0; k < 100; ++k) {
            const double next =
                (-p_dc_m - 1.5 * md.g.r * (igd_t * igd_t + igq_t * igq_t)) * 2.0 / (3.0 * vgd);
            if (std::abs(next - igd_t) <= 1e-15 * std::max(1.0, std::abs(next))) {
                igd_t = next;
                break;
            }
            igd_t = next;
        }
        x[0] += damping * (igd_t - x[0]);
        x[1] += damping * (igq_t - x[1]);
        const double egd = vgd + md.g.r * x[0] - md.g.omega * md.g.l * x[1];
        const double egq = md.g.r * x[1] + md.g.omega * md.g.l * x[0];
        p_dc_g = 1.5 * (egd * x[0] + egq * x[1]);

        const double p_star = 1.5 * vgd * x[0];
        if (md.k_i > 0.0) {
            x[2] = p_star / md.k_i;
        } else if (std::abs(p_star) > 1e-9) {
            throw SimError(ErrorKind::init_failure,
                           "steady state: k_i = 0 cannot hold a nonzero power reference");
        }

        residual = 0.0;
        for (int s = 0; s < 6; ++s)
            residual = std::max(residual, std::abs(x[s] - prev[s]) / std::max(1.0, std::abs(x[s])));
        if (residual < 1e-12) break;
    }
    if (!(residual < 1e-12))
        throw SimError(ErrorKind::init_failure,
                       "steady-state solver did not converge in 500 iterations, residual " +
                           std::to_string(residual));

    ss.states = StateVector{x[0], x[1], x[2], x[3], x[4], x[5]};
    ss.p_g_pcc = 1.5 * vgd * x[0];
    ss.q_g_pcc = -1.5 * vgd * x[1];
    ss.p_m_pcc = 1.5 * vmd * x[3];
    ss.q_m_pcc = -1.5 * vmd * x[4];
    ss.i_dc_g = p_dc_g / x[5];
    ss.i_dc_m = p_dc_m / x[5];
    ss.v_g_mag = vgd;
    ss.v_m_mag = vmd;
    ss.iterations = iter + 1;
    ss.residual = residual;
    return ss;
}

void run_fine(const Scenario& scn, const OracleConfig& cfg, const RowSink& sink) {
    if (!(cfg.dt_fine > 0.0) || cfg.dt_fine > scn.sim.dt / 10.0)
        throw SimError(ErrorKind::usage, "reference integrator needs dt_fine in (0, dt/10]");
    if (cfg.log_stride < 1)
        throw SimError(ErrorKind::usage, "reference integrator log stride must be >= 1");

    Model md = build_model(scn);

    State x{};
    if (scn.sim.init_mode == InitMode::equilibrium) {
        const SteadyState ss = steady_state(scn);
        x = {ss.states.gsc_i_d, ss.states.gsc_i_q, ss.states.gsc_pi,
             ss.states.msc_i_d, ss.states.msc_i_q, ss.states.v_dc};
    } else {
        x[5] = scn.v_dc_start();
    }

    std::vector<long long> fire(scn.events.size());
    for (size_t i = 0; i < scn.events.size(); ++i)
        fire[i] = static_cast<long long>(std::ceil(scn.events[i].time / cfg.dt_fine - 1e-9));

    const long long n_steps = std::llround(scn.sim.t_stop / cfg.dt_fine);
    const double dt = cfg.dt_fine;
    sink(md.snapshot(0.0, x));

    State k1, k2, k3, k4, xs;
    size_t next_event = 0;
    for (long long k = 0; k < n_steps; ++k) {
        while (next_event < scn.events.size() && fire[next_event] <= k)
            apply_event(md, scn.events[next_event++]);
        try {
            md.rhs(x, k1);
            for (int s = 0; s < 6; ++s) xs[s] = x[s] + 0.5 * dt * k1[s];
            md.rhs(xs, k2);
            for (int s = 0; s < 6; ++s) xs[s] = x[s] + 0.5 * dt * k2[s];
            md.rhs(xs, k3);
            for (int s = 0; s < 6; ++s) xs[s] = x[s] + dt * k3[s];
            md.rhs(xs, k4);
            for (int s = 0; s < 6; ++s)
                x[s] += dt / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
            for (int s = 0; s < 6; ++s)
                if (!std::isfinite(x[s]))
                    throw SimError(ErrorKind::divergence, "reference state diverged (NaN/Inf)");
        } catch (const SimError& e) {
            char prefix[48];
            std::snprintf(prefix, sizeof prefix, "t=%.9g s: ", static_cast<double>(k) * dt);
            throw SimError(e.kind(), prefix + std::string(e.what()));
        }
        if ((k + 1) % cfg.log_stride == 0)
            sink(md.snapshot(static_cast<double>(k + 1) * dt, x));
    }
}

TimeSeries run_fine(const Scenario& scn, const OracleConfig& cfg) {
    TimeSeries series;
    series.rows.reserve(
        static_cast<size_t>(scn.sim.t_stop / cfg.dt_fine / cfg.log_stride) + 2);
    run_fine(scn, cfg, [&](const OutputRow& r) { series.rows.push_back(r); });
    return series;
}

} // namespace btb::oracle
