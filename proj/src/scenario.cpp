#include "btb/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace btb {

namespace {

struct Token {
    std::string text;
    int col = 0; // 1-based
};

struct KeyLine {
    std::string key;
    std::vector<Token> values;
    int line = 0;
    int col = 0; // column of the key
    bool used = false;
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<KeyLine> keys;
};

[[noreturn]] void fail(const std::string& origin, int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": " << msg;
    throw SimError(ErrorKind::parse, os.str());
}

double to_double(const Token& t, const std::string& origin, int line, const char* what) {
    const char* s = t.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        fail(origin, line, t.col, std::string("expected a number for ") + what + ", got '" + t.text + "'");
    return v;
}

int to_int(const Token& t, const std::string& origin, int line, const char* what) {
    const double v = to_double(t, origin, line, what);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        fail(origin, line, t.col, std::string("expected an integer for ") + what + ", got '" + t.text + "'");
    return i;
}

bool to_bool(const Token& t, const std::string& origin, int line, const char* what) {
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    fail(origin, line, t.col, std::string("expected true/false for ") + what + ", got '" + t.text + "'");
}

// Sectioned key/value reader with token positions for diagnostics.
std::vector<Section> read_sections(std::string_view text, const std::string& origin) {
    static const std::set<std::string> known = {
        "grid_network", "microgrid_network", "gsc", "msc",
        "dclink", "control", "simulation", "events"};

    std::vector<Section> sections;
    Section* cur = nullptr;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line.erase(hash);

        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;

        if (line[first] == '[') {
            const auto close = line.find(']', first);
            if (close == std::string::npos)
                fail(origin, line_no, static_cast<int>(first) + 1, "unterminated section header");
            const std::string name = line.substr(first + 1, close - first - 1);
            if (!known.count(name))
                fail(origin, line_no, static_cast<int>(first) + 1, "unknown section [" + name + "]");
            if (line.find_first_not_of(" \t\r", close + 1) != std::string::npos)
                fail(origin, line_no, static_cast<int>(close) + 2, "trailing text after section header");
            sections.push_back(Section{name, line_no, {}});
            cur = &sections.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, line_no, static_cast<int>(first) + 1, "expected 'key = value'");
        if (!cur)
            fail(origin, line_no, static_cast<int>(first) + 1, "key outside of any section");

        KeyLine kl;
        kl.line = line_no;
        kl.col = static_cast<int>(first) + 1;
        const auto key_end = line.find_last_not_of(" \t", eq - 1);
        if (key_end == std::string::npos || key_end < first)
            fail(origin, line_no, static_cast<int>(eq) + 1, "missing key before '='");
        kl.key = line.substr(first, key_end - first + 1);

        size_t pos = eq + 1;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
            if (pos >= line.size()) break;
            const size_t start = pos;
            while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
            kl.values.push_back(Token{line.substr(start, pos - start), static_cast<int>(start) + 1});
        }
        if (kl.values.empty())
            fail(origin, line_no, static_cast<int>(eq) + 2, "missing value for key '" + kl.key + "'");
        cur->keys.push_back(std::move(kl));
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(Section* s, const std::string& origin) : s_(s), origin_(origin) {}

    bool present() const { return s_ != nullptr; }

    KeyLine* find_single(const std::string& key) {
        if (!s_) return nullptr;
        KeyLine* found = nullptr;
        for (auto& kl : s_->keys) {
            if (kl.key != key) continue;
            if (found)
                fail(origin_, kl.line, kl.col, "duplicate key '" + key + "' in [" + s_->name + "]");
            found = &kl;
        }
        if (found) found->used = true;
        return found;
    }

    double require_double(const std::string& key) {
        KeyLine* kl = find_single(key);
        if (!kl)
            fail(origin_, s_ ? s_->line : 0, 1,
                 "missing required key '" + key + "' in [" + (s_ ? s_->name : "?") + "]");
        require_arity(*kl, 1);
        return to_double(kl->values[0], origin_, kl->line, key.c_str());
    }

    std::optional<double> optional_double(const std::string& key) {
        KeyLine* kl = find_single(key);
        if (!kl) return std::nullopt;
        require_arity(*kl, 1);
        return to_double(kl->values[0], origin_, kl->line, key.c_str());
    }

    std::optional<int> optional_int(const std::string& key) {
        KeyLine* kl = find_single(key);
        if (!kl) return std::nullopt;
        require_arity(*kl, 1);
        return to_int(kl->values[0], origin_, kl->line, key.c_str());
    }

    std::optional<bool> optional_bool(const std::string& key) {
        KeyLine* kl = find_single(key);
        if (!kl) return std::nullopt;
        require_arity(*kl, 1);
        return to_bool(kl->values[0], origin_, kl->line, key.c_str());
    }

    std::optional<std::string> optional_word(const std::string& key) {
        KeyLine* kl = find_single(key);
        if (!kl) return std::nullopt;
        require_arity(*kl, 1);
        return kl->values[0].text;
    }

    std::vector<KeyLine*> repeated(const std::string& key) {
        std::vector<KeyLine*> out;
        if (!s_) return out;
        for (auto& kl : s_->keys)
            if (kl.key == key) { kl.used = true; out.push_back(&kl); }
        return out;
    }

    void require_arity(const KeyLine& kl, size_t n) const {
        if (kl.values.size() != n)
            fail(origin_, kl.line, kl.values.size() > n ? kl.values[n].col : kl.col,
                 "key '" + kl.key + "' takes " + std::to_string(n) + " value(s), got " +
                     std::to_string(kl.values.size()));
    }

    void reject_unused() const {
        if (!s_) return;
        for (const auto& kl : s_->keys)
            if (!kl.used)
                fail(origin_, kl.line, kl.col,
                     "unknown key '" + kl.key + "' in [" + s_->name + "]");
    }

    const std::string& origin() const { return origin_; }
    Section* raw() { return s_; }

private:
    Section* s_;
    const std::string& origin_;
};

NetworkSpec read_network(SectionReader& r, const char* section_name) {
    if (!r.present())
        throw SimError(ErrorKind::parse,
                       r.origin() + ": missing required section [" + section_name + "]");
    NetworkSpec net;
    if (auto n = r.optional_int("n_bus")) net.n_bus = *n;
    if (auto w = r.optional_double("omega")) net.omega = *w;
    if (auto b = r.optional_int("converter_bus")) net.converter_bus = *b;

    for (KeyLine* kl : r.repeated("source")) {
        r.require_arity(*kl, 5);
        SourceSpec s;
        s.bus = to_int(kl->values[0], r.origin(), kl->line, "source bus");
        s.v_ll_rms = to_double(kl->values[1], r.origin(), kl->line, "source v_ll_rms");
        s.angle = to_double(kl->values[2], r.origin(), kl->line, "source angle");
        s.z = {to_double(kl->values[3], r.origin(), kl->line, "source r"),
               to_double(kl->values[4], r.origin(), kl->line, "source x")};
        net.sources.push_back(s);
    }
    for (KeyLine* kl : r.repeated("load")) {
        r.require_arity(*kl, 3);
        LoadSpec l;
        l.bus = to_int(kl->values[0], r.origin(), kl->line, "load bus");
        l.z = {to_double(kl->values[1], r.origin(), kl->line, "load r"),
               to_double(kl->values[2], r.origin(), kl->line, "load x")};
        net.loads.push_back(l);
    }
    for (KeyLine* kl : r.repeated("line")) {
        if (kl->values.size() != 4 && kl->values.size() != 5)
            fail(r.origin(), kl->line, kl->col, "key 'line' takes 4 or 5 values");
        LineSpec l;
        l.from = to_int(kl->values[0], r.origin(), kl->line, "line from-bus");
        l.to = to_int(kl->values[1], r.origin(), kl->line, "line to-bus");
        l.z = {to_double(kl->values[2], r.origin(), kl->line, "line r"),
               to_double(kl->values[3], r.origin(), kl->line, "line x")};
        if (kl->values.size() == 5)
            l.b_total = to_double(kl->values[4], r.origin(), kl->line, "line b_total");
        net.lines.push_back(l);
    }
    r.reject_unused();
    return net;
}

ConverterParams read_converter(SectionReader& r, const char* suffix, double omega) {
    ConverterParams p;
    const std::string s(suffix);
    p.r_g = r.require_double("r_" + s);
    p.l_g = r.require_double("l_" + s);
    p.c_f = r.require_double("c_f" + s);
    p.r_f = r.require_double("r_f" + s);
    p.l_f = r.require_double("l_f" + s);
    p.s_rated = r.require_double("s_rated");
    p.v_ll_rms = r.require_double("v_ll_rms");
    p.omega_nom = omega;
    return p;
}

Event read_event(const KeyLine& kl, const std::string& origin) {
    Event ev;
    ev.time = to_double(kl.values[0], origin, kl.line, "event time");
    const Token& target = kl.values.size() > 1 ? kl.values[1] : kl.values[0];
    if (kl.values.size() < 2)
        fail(origin, kl.line, kl.col, "event needs '<time> <target> <args...>'");
    const std::string& name = target.text;

    auto one_value = [&](EventTarget t) {
        if (kl.values.size() != 3)
            fail(origin, kl.line, target.col, "event '" + name + "' takes one value");
        ev.target = t;
        ev.value = to_double(kl.values[2], origin, kl.line, "event value");
    };

    if (name == "msc.p_ref") one_value(EventTarget::msc_p_ref);
    else if (name == "msc.q_ref") one_value(EventTarget::msc_q_ref);
    else if (name == "gsc.q_ref") one_value(EventTarget::gsc_q_ref);
    else if (name == "gsc.v_dc_ref") one_value(EventTarget::gsc_v_dc_ref);
    else if (name == "network.load") {
        ev.target = EventTarget::network_load;
        if (kl.values.size() != 5 && kl.values.size() != 6)
            fail(origin, kl.line, target.col,
                 "network.load needs '<grid|microgrid> <bus> <r> <x>' or '<grid|microgrid> <bus> open'");
        const std::string& side = kl.values[2].text;
        if (side == "grid") ev.side = NetworkSide::grid;
        else if (side == "microgrid") ev.side = NetworkSide::microgrid;
        else fail(origin, kl.line, kl.values[2].col, "expected grid or microgrid, got '" + side + "'");
        ev.bus = to_int(kl.values[3], origin, kl.line, "event bus");
        if (kl.values.size() == 5) {
            if (kl.values[4].text != "open")
                fail(origin, kl.line, kl.values[4].col,
                     "expected '<r> <x>' or 'open', got '" + kl.values[4].text + "'");
            ev.shunt_z = std::nullopt;
        } else {
            ev.shunt_z = Complex{to_double(kl.values[4], origin, kl.line, "event load r"),
                                 to_double(kl.values[5], origin, kl.line, "event load x")};
        }
    } else {
        fail(origin, kl.line, target.col, "unknown event target '" + name + "'");
    }
    return ev;
}

void check_network(const NetworkSpec& net, const char* name, const std::string& origin) {
    auto bad = [&](const std::string& msg) {
        throw SimError(ErrorKind::parse, origin + ": [" + name + "] " + msg);
    };
    if (net.n_bus < 1) bad("n_bus must be >= 1");
    if (!(net.omega > 0.0)) bad("omega must be > 0");
    if (net.sources.empty()) bad("needs at least one source");
    if (net.converter_bus < 1 || net.converter_bus > net.n_bus) bad("converter_bus outside 1..n_bus");
    for (const auto& s : net.sources) {
        if (s.bus < 1 || s.bus > net.n_bus) bad("source bus outside 1..n_bus");
        if (!(s.v_ll_rms > 0.0)) bad("source voltage must be > 0");
        if (std::abs(s.z) == 0.0) bad("source impedance must be nonzero");
    }
    std::set<int> load_buses;
    for (const auto& l : net.loads) {
        if (l.bus < 1 || l.bus > net.n_bus) bad("load bus outside 1..n_bus");
        if (std::abs(l.z) == 0.0) bad("load impedance must be nonzero");
        if (!load_buses.insert(l.bus).second) bad("duplicate load at bus " + std::to_string(l.bus));
    }
    for (const auto& l : net.lines) {
        if (l.from < 1 || l.from > net.n_bus || l.to < 1 || l.to > net.n_bus || l.from == l.to)
            bad("line endpoints invalid");
        if (std::abs(l.z) == 0.0) bad("line impedance must be nonzero");
    }
}

} // namespace

void Scenario::validate(const std::string& origin) const {
    check_network(grid, "grid_network", origin);
    check_network(microgrid, "microgrid_network", origin);
    gsc_params.validate("[gsc]");
    msc_params.validate("[msc]");
    gsc_control.validate("[control]");
    msc_control.validate("[control]");
    if (!(c_dc > 0.0))
        throw SimError(ErrorKind::parse, origin + ": [dclink] 'c_dc' must be > 0");
    if (v_dc_init && !(*v_dc_init > 0.0))
        throw SimError(ErrorKind::parse, origin + ": [dclink] 'v_dc_init' must be > 0");
    if (!(sim.dt > 0.0) || sim.dt > 0.01)
        throw SimError(ErrorKind::parse, origin + ": [simulation] 'dt' must be in (0, 0.01]");
    if (!(sim.t_stop > 0.0))
        throw SimError(ErrorKind::parse, origin + ": [simulation] 't_stop' must be > 0");
    if (sim.log_stride < 1)
        throw SimError(ErrorKind::parse, origin + ": [simulation] 'log_stride' must be >= 1");
    if (!(sim.dt_fine > 0.0) || sim.dt_fine > sim.dt / 10.0)
        throw SimError(ErrorKind::parse,
                       origin + ": [simulation] 'dt_fine' must be in (0, dt/10]");
    for (size_t k = 0; k + 1 < events.size(); ++k) {
        if (events[k + 1].time < events[k].time) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "%s: [events] out of order: t=%.9g follows t=%.9g",
                          origin.c_str(), events[k + 1].time, events[k].time);
            throw SimError(ErrorKind::parse, buf);
        }
    }
    for (const auto& ev : events) {
        if (ev.time < 0.0)
            throw SimError(ErrorKind::parse, origin + ": [events] negative event time");
        if (ev.target == EventTarget::network_load) {
            const NetworkSpec& net = ev.side == NetworkSide::grid ? grid : microgrid;
            if (ev.bus < 1 || ev.bus > net.n_bus)
                throw SimError(ErrorKind::parse, origin + ": [events] load event bus " +
                                                     std::to_string(ev.bus) + " outside 1.." +
                                                     std::to_string(net.n_bus));
            if (ev.shunt_z && std::abs(*ev.shunt_z) == 0.0)
                throw SimError(ErrorKind::parse, origin + ": [events] zero-impedance load event");
        } else if (ev.target == EventTarget::gsc_v_dc_ref && !(ev.value > 0.0)) {
            throw SimError(ErrorKind::parse, origin + ": [events] gsc.v_dc_ref must stay > 0");
        }
    }
}

Scenario parse_scenario_text(std::string_view text, const std::string& origin) {
    auto sections = read_sections(text, origin);
    auto section = [&](const char* name) -> Section* {
        for (auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    };
    for (const auto& s : sections) {
        int count = 0;
        for (const auto& t : sections)
            if (t.name == s.name) ++count;
        if (count > 1)
            throw SimError(ErrorKind::parse, origin + ": duplicate section [" + s.name + "]");
    }

    Scenario scn;

    SectionReader grid_r(section("grid_network"), origin);
    SectionReader micro_r(section("microgrid_network"), origin);
    scn.grid = read_network(grid_r, "grid_network");
    scn.microgrid = read_network(micro_r, "microgrid_network");

    SectionReader gsc_r(section("gsc"), origin);
    if (!gsc_r.present())
        throw SimError(ErrorKind::parse, origin + ": missing required section [gsc]");
    scn.gsc_params = read_converter(gsc_r, "g", scn.grid.omega);
    const double gsc_q = gsc_r.optional_double("q_ref").value_or(0.0);
    gsc_r.reject_unused();

    SectionReader msc_r(section("msc"), origin);
    if (!msc_r.present())
        throw SimError(ErrorKind::parse, origin + ": missing required section [msc]");
    scn.msc_params = read_converter(msc_r, "m", scn.microgrid.omega);
    const double msc_p = msc_r.optional_double("p_ref").value_or(0.0);
    const double msc_q = msc_r.optional_double("q_ref").value_or(0.0);
    msc_r.reject_unused();

    SectionReader dc_r(section("dclink"), origin);
    if (!dc_r.present())
        throw SimError(ErrorKind::parse, origin + ": missing required section [dclink]");
    scn.c_dc = dc_r.require_double("c_dc");
    scn.v_dc_init = dc_r.optional_double("v_dc_init");
    dc_r.reject_unused();

    SectionReader ctl_r(section("control"), origin);
    if (!ctl_r.present())
        throw SimError(ErrorKind::parse, origin + ": missing required section [control]");
    ControlConfig& g = scn.gsc_control;
    g.mode = ControlMode::dc_regulation;
    g.k_p = ctl_r.require_double("k_p");
    g.k_i = ctl_r.require_double("k_i");
    g.t_f = ctl_r.require_double("t_f");
    g.v_dc_ref = ctl_r.require_double("v_dc_ref");
    g.q_ref = gsc_q;
    g.dead_bus_fraction = ctl_r.optional_double("dead_bus_fraction").value_or(0.1);
    g.current_limit = ctl_r.optional_bool("current_limit").value_or(false);
    ctl_r.reject_unused();

    ControlConfig& m = scn.msc_control;
    m.mode = ControlMode::pq_setpoint;
    m.t_f = g.t_f;
    m.p_ref = msc_p;
    m.q_ref = msc_q;
    m.dead_bus_fraction = g.dead_bus_fraction;
    m.current_limit = g.current_limit;

    SectionReader sim_r(section("simulation"), origin);
    if (!sim_r.present())
        throw SimError(ErrorKind::parse, origin + ": missing required section [simulation]");
    scn.sim.dt = sim_r.optional_double("dt").value_or(1e-3);
    scn.sim.t_stop = sim_r.require_double("t_stop");
    scn.sim.log_stride = sim_r.optional_int("log_stride").value_or(1);
    scn.sim.dt_fine = sim_r.optional_double("dt_fine").value_or(1e-5);
    if (auto init = sim_r.optional_word("init")) {
        if (*init == "equilibrium") scn.sim.init_mode = InitMode::equilibrium;
        else if (*init == "cold") scn.sim.init_mode = InitMode::cold_start;
        else {
            Section* s = sim_r.raw();
            fail(origin, s ? s->line : 0, 1, "init must be 'equilibrium' or 'cold', got '" + *init + "'");
        }
    }
    sim_r.reject_unused();

    SectionReader ev_r(section("events"), origin);
    for (KeyLine* kl : ev_r.repeated("event"))
        scn.events.push_back(read_event(*kl, origin));
    ev_r.reject_unused();

    scn.validate(origin);
    return scn;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SimError(ErrorKind::io, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_network(std::ostringstream& os, const NetworkSpec& net, const char* name) {
    os << "[" << name << "]\n";
    os << "n_bus = " << net.n_bus << "\n";
    os << "omega = " << num(net.omega) << "\n";
    os << "converter_bus = " << net.converter_bus << "\n";
    for (const auto& s : net.sources)
        os << "source = " << s.bus << " " << num(s.v_ll_rms) << " " << num(s.angle) << " "
           << num(s.z.real()) << " " << num(s.z.imag()) << "\n";
    for (const auto& l : net.loads)
        os << "load = " << l.bus << " " << num(l.z.real()) << " " << num(l.z.imag()) << "\n";
    for (const auto& l : net.lines)
        os << "line = " << l.from << " " << l.to << " " << num(l.z.real()) << " "
           << num(l.z.imag()) << " " << num(l.b_total) << "\n";
    os << "\n";
}

void write_converter(std::ostringstream& os, const ConverterParams& p, const char* name,
                     const char* suffix) {
    os << "[" << name << "]\n";
    os << "r_" << suffix << " = " << num(p.r_g) << "\n";
    os << "l_" << suffix << " = " << num(p.l_g) << "\n";
    os << "c_f" << suffix << " = " << num(p.c_f) << "\n";
    os << "r_f" << suffix << " = " << num(p.r_f) << "\n";
    os << "l_f" << suffix << " = " << num(p.l_f) << "\n";
    os << "s_rated = " << num(p.s_rated) << "\n";
    os << "v_ll_rms = " << num(p.v_ll_rms) << "\n";
}

} // namespace

const char* event_target_name(EventTarget t) {
    switch (t) {
        case EventTarget::msc_p_ref: return "msc.p_ref";
        case EventTarget::msc_q_ref: return "msc.q_ref";
        case EventTarget::gsc_q_ref: return "gsc.q_ref";
        case EventTarget::gsc_v_dc_ref: return "gsc.v_dc_ref";
        case EventTarget::network_load: return "network.load";
    }
    return "?";
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    write_network(os, s.grid, "grid_network");
    write_network(os, s.microgrid, "microgrid_network");

    write_converter(os, s.gsc_params, "gsc", "g");
    os << "q_ref = " << num(s.gsc_control.q_ref) << "\n\n";

    write_converter(os, s.msc_params, "msc", "m");
    os << "p_ref = " << num(s.msc_control.p_ref) << "\n";
    os << "q_ref = " << num(s.msc_control.q_ref) << "\n\n";

    os << "[dclink]\n";
    os << "c_dc = " << num(s.c_dc) << "\n";
    if (s.v_dc_init) os << "v_dc_init = " << num(*s.v_dc_init) << "\n";
    os << "\n[control]\n";
    os << "k_p = " << num(s.gsc_control.k_p) << "\n";
    os << "k_i = " << num(s.gsc_control.k_i) << "\n";
    os << "t_f = " << num(s.gsc_control.t_f) << "\n";
    os << "v_dc_ref = " << num(s.gsc_control.v_dc_ref) << "\n";
    os << "dead_bus_fraction = " << num(s.gsc_control.dead_bus_fraction) << "\n";
    os << "current_limit = " << (s.gsc_control.current_limit ? "true" : "false") << "\n";

    os << "\n[simulation]\n";
    os << "dt = " << num(s.sim.dt) << "\n";
    os << "t_stop = " << num(s.sim.t_stop) << "\n";
    os << "log_stride = " << s.sim.log_stride << "\n";
    os << "dt_fine = " << num(s.sim.dt_fine) << "\n";
    os << "init = " << (s.sim.init_mode == InitMode::equilibrium ? "equilibrium" : "cold") << "\n";

    os << "\n[events]\n";
    for (const auto& ev : s.events) {
        os << "event = " << num(ev.time) << " " << event_target_name(ev.target);
        if (ev.target == EventTarget::network_load) {
            os << " " << (ev.side == NetworkSide::grid ? "grid" : "microgrid") << " " << ev.bus;
            if (ev.shunt_z)
                os << " " << num(ev.shunt_z->real()) << " " << num(ev.shunt_z->imag());
            else
                os << " open";
        } else {
            os << " " << num(ev.value);
        }
        os << "\n";
    }
    return os.str();
}

bool operator==(const ConverterParams& a, const ConverterParams& b) {
    return a.r_g == b.r_g && a.l_g == b.l_g && a.c_f == b.c_f && a.r_f == b.r_f &&
           a.l_f == b.l_f && a.s_rated == b.s_rated && a.v_ll_rms == b.v_ll_rms &&
           a.omega_nom == b.omega_nom;
}

bool operator==(const ControlConfig& a, const ControlConfig& b) {
    return a.mode == b.mode && a.k_p == b.k_p && a.k_i == b.k_i && a.t_f == b.t_f &&
           a.v_dc_ref == b.v_dc_ref && a.p_ref == b.p_ref && a.q_ref == b.q_ref &&
           a.dead_bus_fraction == b.dead_bus_fraction && a.current_limit == b.current_limit;
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.grid == b.grid && a.microgrid == b.microgrid && a.gsc_params == b.gsc_params &&
           a.msc_params == b.msc_params && a.gsc_control == b.gsc_control &&
           a.msc_control == b.msc_control && a.c_dc == b.c_dc && a.v_dc_init == b.v_dc_init &&
           a.sim == b.sim && a.events == b.events;
}

} // namespace btb
