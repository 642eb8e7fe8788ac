#include "btb/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "btb/compare.hpp"
#include "btb/engine.hpp"
#include "btb/oracle.hpp"
#include "btb/timeseries.hpp"

namespace btb {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class CsvFile {
public:
    explicit CsvFile(const std::string& path) {
        if (path.empty()) return;
        out_.open(path);
        if (!out_)
            throw SimError(ErrorKind::io, "cannot open output CSV '" + path + "'");
        write_csv_header(out_);
    }
    void row(const OutputRow& r) {
        if (out_.is_open()) write_csv_row(out_, r);
    }
    void flush() {
        if (out_.is_open()) out_.flush();
    }

private:
    std::ofstream out_;
};

Scenario load(const RunOptions& opt) {
    Scenario scn = parse_scenario(opt.scenario_path);
    if (opt.dt) scn.sim.dt = *opt.dt;
    if (opt.t_stop) scn.sim.t_stop = *opt.t_stop;
    if (opt.stride) scn.sim.log_stride = *opt.stride;
    scn.validate(opt.scenario_path);
    return scn;
}

} // namespace

int run_command(const RunOptions& opt, std::ostream& console) {
    const Scenario scn = load(opt);

    if (opt.compare) {
        SimEngine engine(scn);
        TimeSeries eng;
        auto t0 = std::chrono::steady_clock::now();
        engine.run([&](const OutputRow& r) { eng.rows.push_back(r); });
        const double wall_engine = seconds_since(t0);

        oracle::OracleConfig ocfg;
        ocfg.dt_fine = scn.sim.dt_fine;
        ocfg.log_stride = static_cast<int>(
            std::llround(scn.sim.dt * scn.sim.log_stride / scn.sim.dt_fine));
        t0 = std::chrono::steady_clock::now();
        const TimeSeries ref = oracle::run_fine(scn, ocfg);
        const double wall_oracle = seconds_since(t0);

        DeviationReport rep = compare_series(eng, ref);
        rep.wall_a = wall_engine;
        rep.wall_b = wall_oracle;
        print_report(console, rep);

        if (!opt.out_csv.empty()) {
            CsvFile csv(opt.out_csv);
            for (const auto& r : eng.rows) csv.row(r);
        }
        if (opt.summary) print_summary(console, summarize(eng, scn));
        if (!report_within_thresholds(rep, scn)) {
            console << "comparison thresholds exceeded\n";
            return 4;
        }
        return 0;
    }

    CsvFile csv(opt.out_csv);
    TimeSeries series;
    const bool keep = opt.summary;
    const RowSink sink = [&](const OutputRow& r) {
        csv.row(r);
        if (keep) series.rows.push_back(r);
    };

    try {
        if (opt.use_oracle) {
            oracle::OracleConfig ocfg;
            ocfg.dt_fine = scn.sim.dt_fine;
            ocfg.log_stride = static_cast<int>(
                std::llround(scn.sim.dt * scn.sim.log_stride / scn.sim.dt_fine));
            oracle::run_fine(scn, ocfg, sink);
        } else {
            SimEngine engine(scn);
            engine.run(sink);
        }
    } catch (...) {
        csv.flush(); // keep the rows up to the failure point
        throw;
    }

    if (opt.summary) print_summary(console, summarize(series, scn));
    return 0;
}

} // namespace btb
