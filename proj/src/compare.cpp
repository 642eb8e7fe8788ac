#include "btb/compare.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace btb {

DeviationReport compare_series(const TimeSeries& a, const TimeSeries& b) {
    if (a.rows.size() != b.rows.size())
        throw SimError(ErrorKind::usage,
                       "compare: logs have different row counts (" +
                           std::to_string(a.rows.size()) + " vs " + std::to_string(b.rows.size()) + ")");
    DeviationReport rep;
    rep.rows = a.rows.size();
    for (int c = 0; c < kOutputColumns; ++c) rep.columns[static_cast<size_t>(c)].name = kColumnNames[c];

    for (size_t i = 0; i < a.rows.size(); ++i) {
        if (std::abs(a.rows[i].t - b.rows[i].t) > 1e-9)
            throw SimError(ErrorKind::usage, "compare: logs sampled at different instants");
        for (int c = 1; c < kOutputColumns; ++c) {
            const double d = output_column(a.rows[i], c) - output_column(b.rows[i], c);
            auto& col = rep.columns[static_cast<size_t>(c)];
            col.max_abs = std::max(col.max_abs, std::abs(d));
            col.rms += d * d;
        }
    }
    if (rep.rows > 0)
        for (int c = 1; c < kOutputColumns; ++c) {
            auto& col = rep.columns[static_cast<size_t>(c)];
            col.rms = std::sqrt(col.rms / static_cast<double>(rep.rows));
        }
    return rep;
}

void print_report(std::ostream& os, const DeviationReport& rep) {
    char line[128];
    os << "deviation report (" << rep.rows << " common rows)\n";
    std::snprintf(line, sizeof line, "  %-8s %14s %14s\n", "column", "max|delta|", "rms");
    os << line;
    for (int c = 1; c < kOutputColumns; ++c) {
        const auto& col = rep.columns[static_cast<size_t>(c)];
        std::snprintf(line, sizeof line, "  %-8s %14.6g %14.6g\n", col.name, col.max_abs, col.rms);
        os << line;
    }
    if (rep.wall_a > 0.0 && rep.wall_b > 0.0) {
        std::snprintf(line, sizeof line,
                      "  wall time: engine %.3f s, reference %.3f s, speedup %.1fx\n",
                      rep.wall_a, rep.wall_b, rep.wall_b / rep.wall_a);
        os << line;
    }
}

bool report_within_thresholds(const DeviationReport& rep, const Scenario& scn,
                              double vdc_frac, double power_frac) {
    const double vdc_tol = vdc_frac * scn.gsc_control.v_dc_ref;
    const double p_tol = power_frac * scn.gsc_params.s_rated;
    if (rep.columns[1].max_abs > vdc_tol) return false; // v_dc
    for (int c : {4, 5, 6, 7})                          // p_g, q_g, p_m, q_m
        if (rep.columns[static_cast<size_t>(c)].rms > p_tol) return false;
    return true;
}

RunSummary summarize(const TimeSeries& series, const Scenario& scn, double band) {
    if (series.rows.empty())
        throw SimError(ErrorKind::usage, "summarize: empty log");
    RunSummary s;
    s.band = band;
    s.final_row = series.rows.back();

    const double v_ref = scn.gsc_control.v_dc_ref;
    for (size_t e = 0; e < scn.events.size(); ++e) {
        const double t0 = scn.events[e].time;
        const double t1 =
            e + 1 < scn.events.size() ? scn.events[e + 1].time : series.rows.back().t + 1.0;
        EventSettling es;
        es.event_time = t0;
        // Last excursion outside the band before the next event decides the
        // settling instant; staying inside from t0 on counts as settled at 0.
        double last_outside = -1.0;
        bool seen = false;
        for (const auto& row : series.rows) {
            if (row.t < t0 || row.t >= t1) continue;
            seen = true;
            if (std::abs(row.v_dc - v_ref) > band) last_outside = row.t;
        }
        if (seen) {
            es.settled = true;
            es.settle_time = last_outside < 0.0 ? 0.0 : last_outside - t0;
            if (last_outside >= 0.0) {
                // Unsettled if still outside at the end of its window.
                const auto& last = series.rows.back();
                if (last_outside >= (e + 1 < scn.events.size() ? t1 : last.t) - 1e-9)
                    es.settled = false;
            }
        }
        s.events.push_back(es);
    }
    return s;
}

void print_summary(std::ostream& os, const RunSummary& s) {
    const OutputRow& r = s.final_row;
    char line[160];
    os << "summary\n";
    std::snprintf(line, sizeof line, "  final t=%.9g s: v_dc=%.4f V, p_g=%.1f W, p_m=%.1f W\n",
                  r.t, r.v_dc, r.p_g, r.p_m);
    os << line;
    std::snprintf(line, sizeof line, "  final i_dc_g=%.3f A, i_dc_m=%.3f A, q_g=%.1f var, q_m=%.1f var\n",
                  r.i_dc_g, r.i_dc_m, r.q_g, r.q_m);
    os << line;
    for (const auto& ev : s.events) {
        if (ev.settled)
            std::snprintf(line, sizeof line,
                          "  event t=%.9g s: v_dc back within +-%.3g V after %.3f s\n",
                          ev.event_time, s.band, ev.settle_time);
        else
            std::snprintf(line, sizeof line,
                          "  event t=%.9g s: v_dc not settled within +-%.3g V in its window\n",
                          ev.event_time, s.band);
        os << line;
    }
}

} // namespace btb
