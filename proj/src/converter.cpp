#include "btb/converter.hpp"

#include <cmath>
#include <string>

namespace btb {

double ConverterParams::v_peak_nominal() const {
    return v_ll_rms * std::sqrt(2.0) / std::sqrt(3.0);
}

double ConverterParams::i_peak_rated() const {
    return (2.0 / 3.0) * s_rated / v_peak_nominal();
}

Complex ConverterParams::interface_z() const {
    return {r_g, omega_nom * l_g};
}

namespace {

void require_positive(double value, const char* key, const char* section) {
    if (!(value > 0.0))
        throw SimError(ErrorKind::parse, std::string(section) + ": '" + key +
                                             "' must be > 0, got " + std::to_string(value));
}

} // namespace

void ConverterParams::validate(const char* section) const {
    require_positive(r_g, "r", section);
    require_positive(l_g, "l", section);
    require_positive(c_f, "c_f", section);
    require_positive(r_f, "r_f", section);
    require_positive(l_f, "l_f", section);
    require_positive(s_rated, "s_rated", section);
    require_positive(v_ll_rms, "v_ll_rms", section);
    require_positive(omega_nom, "omega", section);
}

void ControlConfig::validate(const char* section) const {
    require_positive(t_f, "t_f", section);
    if (k_p < 0.0 || k_i < 0.0)
        throw SimError(ErrorKind::parse, std::string(section) + ": PI gains must be >= 0");
    if (mode == ControlMode::dc_regulation)
        require_positive(v_dc_ref, "v_dc_ref", section);
    if (!(dead_bus_fraction > 0.0))
        throw SimError(ErrorKind::parse, std::string(section) + ": dead_bus_fraction must be > 0");
}

std::pair<double, DqPair> align_frame(const Phasor& v_pcc) {
    const double mag = v_pcc.magnitude();
    if (mag == 0.0)
        throw SimError(ErrorKind::dead_bus, "align_frame: dead bus, PLL has no signal");
    const double frame = v_pcc.angle();
    return {frame, DqPair{mag, 0.0, frame}};
}

DqPair internal_voltage(const DqPair& v, const DqPair& i, const ConverterParams& p, double omega) {
    const double x = omega * p.l_g;
    return {v.d + p.r_g * i.d - x * i.q,
            v.q + p.r_g * i.q + x * i.d,
            v.frame_angle};
}

DqPair filter_current(const DqPair& e, const DqPair& i, const ConverterParams& p, double omega) {
    const double b = omega * p.c_f;
    return {i.d - b * e.q, i.q + b * e.d, e.frame_angle};
}

DqPair terminal_voltage(const DqPair& e, const DqPair& i_f, const ConverterParams& p, double omega) {
    const double x = omega * p.l_f;
    return {e.d + p.r_f * i_f.d - x * i_f.q,
            e.q + p.r_f * i_f.q + x * i_f.d,
            e.frame_angle};
}

std::pair<double, double> dc_side(const DqPair& e, const DqPair& i, double v_dc) {
    if (!(v_dc > 0.0))
        throw SimError(ErrorKind::collapsed_dc_link,
                       "dc_side: DC-link voltage collapsed (v_dc = " + std::to_string(v_dc) + " V)");
    const double p_dc = 1.5 * (e.d * i.d + e.q * i.q);
    return {p_dc, p_dc / v_dc};
}

std::pair<double, double> reference_currents(double p_ref, double q_ref, double v_d, double v_d_min) {
    if (!(v_d >= v_d_min))
        throw SimError(ErrorKind::low_voltage,
                       "reference_currents: PCC voltage " + std::to_string(v_d) +
                           " V below dead-bus threshold " + std::to_string(v_d_min) + " V");
    const double k = 2.0 / (3.0 * v_d);
    return {k * p_ref, -k * q_ref};
}

double dc_voltage_pi(double v_dc, const ControlConfig& cfg, double pi_integral) {
    return cfg.k_p * (v_dc - cfg.v_dc_ref) + cfg.k_i * pi_integral;
}

std::pair<double, double> current_lag_derivatives(double i_d, double i_q,
                                                  double i_d_ref, double i_q_ref, double t_f) {
    return {(i_d_ref - i_d) / t_f, (i_q_ref - i_q) / t_f};
}

std::pair<double, double> clamp_reference(double i_d_ref, double i_q_ref, double i_max) {
    const double mag = std::hypot(i_d_ref, i_q_ref);
    if (mag <= i_max || mag == 0.0)
        return {i_d_ref, i_q_ref};
    const double s = i_max / mag;
    return {i_d_ref * s, i_q_ref * s};
}

ConverterOutputs converter_chain(const DqPair& v_dq, double i_d, double i_q,
                                 const ConverterParams& p, double omega, double v_dc) {
    ConverterOutputs out;
    const DqPair i{i_d, i_q, v_dq.frame_angle};
    out.e_source = internal_voltage(v_dq, i, p, omega);
    out.i_f = filter_current(out.e_source, i, p, omega);
    out.v_t = terminal_voltage(out.e_source, out.i_f, p, omega);

    auto [p_dc, i_dc] = dc_side(out.e_source, i, v_dc);
    out.p_dc = p_dc;
    out.i_dc = i_dc;

    auto [p_t, i_t] = dc_side(out.v_t, out.i_f, v_dc);
    out.p_dc_terminal = p_t;
    out.i_dc_terminal = i_t;

    const PowerPQ s = three_phase_power(v_dq, i);
    out.p_pcc = s.p;
    out.q_pcc = s.q;
    return out;
}

} // namespace btb
