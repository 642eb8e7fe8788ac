#include "btb/network.hpp"

#include <cmath>
#include <string>

namespace btb {

Network::Network(int n_bus, double omega) : n_bus_(n_bus), omega_(omega) {
    if (n_bus < 1)
        throw SimError(ErrorKind::parse, "network must have at least one bus");
    loads_.resize(static_cast<size_t>(n_bus));
    injections_.resize(static_cast<size_t>(n_bus), Complex{0.0, 0.0});
}

void Network::check_bus_(int bus, const char* what) const {
    if (bus < 0 || bus >= n_bus_)
        throw SimError(ErrorKind::parse, std::string(what) + ": bus index " +
                                             std::to_string(bus + 1) + " outside 1.." +
                                             std::to_string(n_bus_));
}

void Network::add_source(const IdealSource& s) {
    check_bus_(s.bus, "source");
    if (std::abs(s.z) == 0.0)
        throw SimError(ErrorKind::singular_equivalent, "source: zero impedance cannot be stamped");
    sources_.push_back(s);
    y_stale_ = lu_stale_ = base_stale_ = true;
}

void Network::add_branch(const Branch& b) {
    check_bus_(b.from, "line");
    check_bus_(b.to, "line");
    if (b.from == b.to || std::abs(b.z) == 0.0)
        throw SimError(ErrorKind::parse, "line: needs two distinct buses and nonzero impedance");
    branches_.push_back(b);
    y_stale_ = lu_stale_ = true;
}

void Network::add_interface_shunt(int bus, Complex z) {
    check_bus_(bus, "converter interface");
    if (std::abs(z) == 0.0)
        throw SimError(ErrorKind::singular_equivalent, "converter interface: zero impedance");
    interface_shunts_.emplace_back(bus, z);
    y_stale_ = lu_stale_ = true;
}

void Network::update_admittance(int bus, std::optional<Complex> shunt_z) {
    check_bus_(bus, "load event");
    if (shunt_z && std::abs(*shunt_z) == 0.0)
        throw SimError(ErrorKind::parse, "load event: zero impedance shunt");
    loads_[static_cast<size_t>(bus)] = shunt_z;
    y_stale_ = lu_stale_ = true;
}

void Network::set_injection(int bus, const Phasor& i) {
    check_bus_(bus, "injection");
    injections_[static_cast<size_t>(bus)] = i.c();
}

void Network::rebuild_() const {
    const auto n = static_cast<size_t>(n_bus_);
    y_.assign(n * n, Complex{0.0, 0.0});
    for (const auto& s : sources_)
        y_[static_cast<size_t>(s.bus) * n + static_cast<size_t>(s.bus)] += 1.0 / s.z;
    for (const auto& b : branches_) {
        const Complex y = 1.0 / b.z;
        const auto i = static_cast<size_t>(b.from);
        const auto j = static_cast<size_t>(b.to);
        y_[i * n + i] += y + Complex{0.0, 0.5 * b.b_shunt};
        y_[j * n + j] += y + Complex{0.0, 0.5 * b.b_shunt};
        y_[i * n + j] -= y;
        y_[j * n + i] -= y;
    }
    for (size_t bus = 0; bus < n; ++bus)
        if (loads_[bus])
            y_[bus * n + bus] += 1.0 / *loads_[bus];
    for (const auto& [bus, z] : interface_shunts_)
        y_[static_cast<size_t>(bus) * n + static_cast<size_t>(bus)] += 1.0 / z;
    y_stale_ = false;
}

const std::vector<Complex>& Network::y_matrix() const {
    if (y_stale_) rebuild_();
    return y_;
}

// In-place LU with partial pivoting. Networks here are desk scale (a handful
// of buses), so a dense direct factorization is the whole story.
void Network::factor_() const {
    if (y_stale_) rebuild_();
    const auto n = static_cast<size_t>(n_bus_);
    lu_ = y_;
    piv_.resize(n);

    double row_scale = 0.0;
    for (const auto& v : lu_) row_scale = std::max(row_scale, std::abs(v));

    for (size_t k = 0; k < n; ++k) {
        size_t pivot = k;
        double best = std::abs(lu_[k * n + k]);
        for (size_t i = k + 1; i < n; ++i) {
            const double a = std::abs(lu_[i * n + k]);
            if (a > best) { best = a; pivot = i; }
        }
        if (!(best > 1e-12 * row_scale))
            throw SimError(ErrorKind::network_degenerate,
                           "network admittance matrix is singular or near-singular");
        piv_[k] = static_cast<int>(pivot);
        if (pivot != k)
            for (size_t j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[pivot * n + j]);
        const Complex d = lu_[k * n + k];
        for (size_t i = k + 1; i < n; ++i) {
            const Complex f = lu_[i * n + k] / d;
            lu_[i * n + k] = f;
            for (size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= f * lu_[k * n + j];
        }
    }
    lu_stale_ = false;
}

void Network::solve_into(std::vector<Phasor>& out) const {
    if (lu_stale_) factor_();
    const auto n = static_cast<size_t>(n_bus_);

    if (base_stale_) {
        base_inj_.assign(n, Complex{0.0, 0.0});
        for (const auto& s : sources_)
            base_inj_[static_cast<size_t>(s.bus)] += s.e.c() / s.z;
        base_stale_ = false;
    }

    rhs_scratch_.resize(n);
    x_scratch_.resize(n);
    for (size_t i = 0; i < n; ++i) rhs_scratch_[i] = injections_[i] + base_inj_[i];

    auto& x = x_scratch_;
    x = rhs_scratch_;
    for (size_t k = 0; k < n; ++k) {
        const auto p = static_cast<size_t>(piv_[k]);
        if (p != k) std::swap(x[k], x[p]);
        for (size_t i = k + 1; i < n; ++i) x[i] -= lu_[i * n + k] * x[k];
    }
    for (size_t i = n; i-- > 0;) {
        for (size_t j = i + 1; j < n; ++j) x[i] -= lu_[i * n + j] * x[j];
        x[i] /= lu_[i * n + i];
    }

    // Residual check against the unfactored matrix.
    double res = 0.0, rhs_norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
        Complex acc{0.0, 0.0};
        for (size_t j = 0; j < n; ++j) acc += y_[i * n + j] * x[j];
        res += std::norm(acc - rhs_scratch_[i]);
        rhs_norm += std::norm(rhs_scratch_[i]);
    }
    if (std::sqrt(res) > 1e-10 * std::max(std::sqrt(rhs_norm), 1.0))
        throw SimError(ErrorKind::network_degenerate,
                       "network solve residual exceeds 1e-10, matrix badly conditioned");

    out.resize(n);
    for (size_t i = 0; i < n; ++i) out[i] = Phasor::from(x[i]);
}

std::vector<Phasor> Network::solve() const {
    std::vector<Phasor> v;
    solve_into(v);
    return v;
}

Complex Network::transfer_impedance(int bus) const {
    check_bus_(bus, "transfer_impedance");
    if (lu_stale_) factor_();
    const auto n = static_cast<size_t>(n_bus_);
    auto& x = x_scratch_;
    x.assign(n, Complex{0.0, 0.0});
    x[static_cast<size_t>(bus)] = 1.0;
    for (size_t k = 0; k < n; ++k) {
        const auto p = static_cast<size_t>(piv_[k]);
        if (p != k) std::swap(x[k], x[p]);
        for (size_t i = k + 1; i < n; ++i) x[i] -= lu_[i * n + k] * x[k];
    }
    for (size_t i = n; i-- > 0;) {
        for (size_t j = i + 1; j < n; ++j) x[i] -= lu_[i * n + j] * x[j];
        x[i] /= lu_[i * n + i];
    }
    return x[static_cast<size_t>(bus)];
}

} // namespace btb
