#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "btb/errors.hpp"

namespace btb {

using Complex = std::complex<double>;

// Balanced positive-sequence quantity in the network Re/Im frame.
// Stored rectangular; magnitude and angle are computed on demand so the
// network solve never touches branch cuts.
struct Phasor {
    double re = 0.0;
    double im = 0.0;

    double magnitude() const { return std::hypot(re, im); }

    // Angle in (-pi, pi].
    double angle() const {
        const double a = std::atan2(im, re);
        return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
    }

    Complex c() const { return {re, im}; }
    static Phasor from(Complex z) { return {z.real(), z.imag()}; }
    static Phasor polar(double mag, double ang) {
        return {mag * std::cos(ang), mag * std::sin(ang)};
    }
};

inline Phasor operator+(const Phasor& a, const Phasor& b) { return {a.re + b.re, a.im + b.im}; }
inline Phasor operator-(const Phasor& a, const Phasor& b) { return {a.re - b.re, a.im - b.im}; }

// Amplitude-invariant d/q pair (peak phase quantities). frame_angle is the
// angle of the converter d-axis relative to the network real axis. All dq
// arithmetic in this codebase assumes this convention; powers carry the 3/2
// factor accordingly.
struct DqPair {
    double d = 0.0;
    double q = 0.0;
    double frame_angle = 0.0;
};

// (d + jq) = v * exp(-j*frame_angle)
inline DqPair to_dq(const Phasor& v, double frame_angle) {
    const double c = std::cos(frame_angle);
    const double s = std::sin(frame_angle);
    return {v.re * c + v.im * s, v.im * c - v.re * s, frame_angle};
}

// v = (d + jq) * exp(j*frame_angle); exact inverse of to_dq.
inline Phasor from_dq(const DqPair& x) {
    const double c = std::cos(x.frame_angle);
    const double s = std::sin(x.frame_angle);
    return {x.d * c - x.q * s, x.d * s + x.q * c};
}

inline Phasor thevenin_to_norton(const Phasor& e_source, Complex z) {
    if (std::abs(z) == 0.0)
        throw SimError(ErrorKind::singular_equivalent,
                       "thevenin_to_norton: zero source impedance has no Norton equivalent");
    return Phasor::from(e_source.c() / z);
}

// Voltage source behind an impedance and its Norton form. i_norton is fixed
// at construction so the two representations stay consistent.
struct SourceEquivalent {
    Phasor e_source;
    Complex z;
    Phasor i_norton;

    static SourceEquivalent from_thevenin(const Phasor& e, Complex z) {
        return {e, z, thevenin_to_norton(e, z)};
    }
};

struct PowerPQ {
    double p = 0.0; // W
    double q = 0.0; // var, q > 0 = inductive vars injected into the network
};

// Three-phase power in the amplitude-invariant convention:
//   p = 3/2 (v_d i_d + v_q i_q),  q = 3/2 (v_q i_d - v_d i_q)
// i.e. 3/2 * (Re, Im) of V * conj(I).
inline PowerPQ three_phase_power(const DqPair& v, const DqPair& i) {
    if (v.frame_angle != i.frame_angle)
        throw std::logic_error("three_phase_power: voltage and current are in different frames");
    return {1.5 * (v.d * i.d + v.q * i.q), 1.5 * (v.q * i.d - v.d * i.q)};
}

} // namespace btb
