#pragma once

#include <optional>
#include <vector>

#include "btb/phasor.hpp"

namespace btb {

struct IdealSource {
    int bus = 0;  // 0-based
    Phasor e;     // internal voltage, peak phase volts
    Complex z;    // series impedance, ohm; stamped exactly (no large-admittance hack)
};

struct Branch {
    int from = 0;
    int to = 0;
    Complex z;            // series impedance, ohm
    double b_shunt = 0.0; // total charging susceptance, S, split half per end
};

// One isolated AC network solved as Y V = I with Norton current injections.
// Components are kept as lists and Y is rebuilt in a fixed order whenever the
// admittance changes, so a load stamp/unstamp round trip restores Y
// bit-exactly. The dense complex factorization is cached between changes.
class Network {
public:
    Network(int n_bus, double omega);

    void add_source(const IdealSource& s);
    void add_branch(const Branch& b);
    void add_interface_shunt(int bus, Complex z); // converter Norton admittance

    // Shunt load as a constant impedance; one slot per bus, replace semantics.
    // nullopt removes the load.
    void update_admittance(int bus, std::optional<Complex> shunt_z);

    // Converter Norton injection, replace semantics (on top of the sources'
    // own Norton currents).
    void set_injection(int bus, const Phasor& i);

    int n_bus() const { return n_bus_; }
    double omega() const { return omega_; }

    // Row-major dense admittance matrix (rebuilt if stale).
    const std::vector<Complex>& y_matrix() const;

    // Direct dense solve; checks the residual ||YV - I|| / ||I|| < 1e-10.
    std::vector<Phasor> solve() const;
    void solve_into(std::vector<Phasor>& out) const; // allocation-free variant

    // Driving-point impedance at a bus (voltage response to a unit injection
    // there, sources shorted to their impedances).
    Complex transfer_impedance(int bus) const;

private:
    void check_bus_(int bus, const char* what) const;
    void rebuild_() const;
    void factor_() const;

    int n_bus_;
    double omega_;
    std::vector<IdealSource> sources_;
    std::vector<Branch> branches_;
    std::vector<std::pair<int, Complex>> interface_shunts_;
    std::vector<std::optional<Complex>> loads_;
    std::vector<Complex> injections_;

    mutable std::vector<Complex> y_;
    mutable std::vector<Complex> lu_;
    mutable std::vector<int> piv_;
    mutable std::vector<Complex> rhs_scratch_;
    mutable std::vector<Complex> x_scratch_;
    mutable std::vector<Complex> base_inj_;
    mutable bool y_stale_ = true;
    mutable bool lu_stale_ = true;
    mutable bool base_stale_ = true;
};

} // namespace btb
