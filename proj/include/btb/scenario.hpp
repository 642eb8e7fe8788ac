#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "btb/converter.hpp"

namespace btb {

// Scenario-level structures mirror the file format: bus indices are 1-based
// here and converted when the networks are built.

struct SourceSpec {
    int bus = 1;
    double v_ll_rms = 0.0; // line-to-line RMS volts
    double angle = 0.0;    // rad
    Complex z;             // series impedance, ohm
    bool operator==(const SourceSpec&) const = default;
};

struct LoadSpec {
    int bus = 1;
    Complex z; // shunt impedance, ohm
    bool operator==(const LoadSpec&) const = default;
};

struct LineSpec {
    int from = 1;
    int to = 2;
    Complex z;            // series impedance, ohm
    double b_total = 0.0; // total charging susceptance, S
    bool operator==(const LineSpec&) const = default;
};

struct NetworkSpec {
    int n_bus = 1;
    double omega = 376.99111843077515; // rad/s, 2*pi*60
    std::vector<SourceSpec> sources;
    std::vector<LineSpec> lines;
    std::vector<LoadSpec> loads;
    int converter_bus = 1;
    bool operator==(const NetworkSpec&) const = default;
};

enum class EventTarget { msc_p_ref, msc_q_ref, gsc_q_ref, gsc_v_dc_ref, network_load };
enum class NetworkSide { grid, microgrid };

// Timed change of a setpoint or of a network shunt load. Events are applied
// at the start of the first step whose time is >= the event time; ties keep
// file order.
struct Event {
    double time = 0.0;
    EventTarget target = EventTarget::msc_p_ref;
    double value = 0.0;                           // W | var | V, setpoint targets
    NetworkSide side = NetworkSide::grid;         // network_load only
    int bus = 1;                                  // network_load only
    std::optional<Complex> shunt_z;               // nullopt removes the load
    bool operator==(const Event&) const = default;
};

enum class InitMode { equilibrium, cold_start };

struct SimulationConfig {
    double dt = 1e-3;
    double t_stop = 0.0;
    int log_stride = 1;
    InitMode init_mode = InitMode::equilibrium;
    double dt_fine = 1e-5; // reference-integrator step
    bool operator==(const SimulationConfig&) const = default;
};

struct Scenario {
    NetworkSpec grid;
    NetworkSpec microgrid;
    ConverterParams gsc_params;
    ConverterParams msc_params;
    ControlConfig gsc_control; // dc_regulation
    ControlConfig msc_control; // pq_setpoint
    double c_dc = 0.0;
    std::optional<double> v_dc_init; // defaults to v_dc_ref
    SimulationConfig sim;
    std::vector<Event> events;

    double v_dc_start() const { return v_dc_init ? *v_dc_init : gsc_control.v_dc_ref; }
    void validate(const std::string& origin) const;
};

bool operator==(const ConverterParams&, const ConverterParams&);
bool operator==(const ControlConfig&, const ControlConfig&);
bool operator==(const Scenario&, const Scenario&);

Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(std::string_view text, const std::string& origin);

// Canonical text form; parse_scenario_text(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

const char* event_target_name(EventTarget t);

} // namespace btb
