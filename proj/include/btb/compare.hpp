#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "btb/scenario.hpp"
#include "btb/timeseries.hpp"

namespace btb {

struct ColumnDeviation {
    const char* name = "";
    double max_abs = 0.0;
    double rms = 0.0;
};

struct DeviationReport {
    std::array<ColumnDeviation, kOutputColumns> columns{};
    size_t rows = 0;
    double wall_a = 0.0; // s, filled by the caller when timed
    double wall_b = 0.0;
};

// Per-column max-abs and RMS deviation between two logs sampled at the same
// instants (throws if the time axes differ).
DeviationReport compare_series(const TimeSeries& a, const TimeSeries& b);

void print_report(std::ostream& os, const DeviationReport& rep);

// Acceptance-style thresholds on a deviation report: v_dc max-abs within
// vdc_frac of v_dc_ref, power-column RMS within power_frac of s_rated.
bool report_within_thresholds(const DeviationReport& rep, const Scenario& scn,
                              double vdc_frac = 0.005, double power_frac = 0.01);

struct EventSettling {
    double event_time = 0.0;
    bool settled = false;
    double settle_time = 0.0; // s after the event until v_dc stays in band
};

struct RunSummary {
    OutputRow final_row;
    // v_dc settling per event against a fixed +-band around v_dc_ref.
    double band = 1.0; // V
    std::vector<EventSettling> events;
};

RunSummary summarize(const TimeSeries& series, const Scenario& scn, double band = 1.0);
void print_summary(std::ostream& os, const RunSummary& summary);

} // namespace btb
