#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "btb/scenario.hpp"

namespace btb {

struct RunOptions {
    std::string scenario_path;
    std::optional<double> dt;
    std::optional<double> t_stop;
    std::optional<int> stride;
    std::string out_csv;      // empty = no CSV file
    bool use_oracle = false;  // run the reference integrator instead
    bool compare = false;     // run both and report deviations
    bool summary = false;     // final values + settling times
};

// CLI run entry: returns the process exit code (0 success, 4 when --compare
// exceeds the deviation thresholds); model and parse failures throw SimError.
// CSV output is streamed, so a failed run leaves the rows up to the failure.
int run_command(const RunOptions& opt, std::ostream& console);

} // namespace btb
