// btbsim: phasor-domain back-to-back converter simulator.
//   btbsim run <scenario.cfg> [--dt S] [--t-stop S] [--out file.csv]
//              [--stride N] [--oracle] [--compare] [--summary]
//   btbsim plot <file.csv> [--out script.py] [--layout currents|powers]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "btb/plot_script.hpp"
#include "btb/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Phasor-domain back-to-back AC/DC/AC converter simulator"};
    app.require_subcommand(1);

    btb::RunOptions opt;
    double dt = 0.0, t_stop = 0.0;
    int stride = 0;

    CLI::App* run = app.add_subcommand("run", "Run a scenario and emit a CSV log");
    run->add_option("scenario", opt.scenario_path, "Scenario file")->required();
    auto* dt_opt = run->add_option("--dt", dt, "Override the engine time step (s)");
    auto* ts_opt = run->add_option("--t-stop", t_stop, "Override the stop time (s)");
    auto* st_opt = run->add_option("--stride", stride, "Override the log stride (steps per row)");
    run->add_option("--out", opt.out_csv, "Output CSV path");
    run->add_flag("--oracle", opt.use_oracle, "Run the high-rate reference integrator instead");
    run->add_flag("--compare", opt.compare,
                  "Run both integrators and report per-column deviations (exit 4 on threshold)");
    run->add_flag("--summary", opt.summary, "Print final values and settling times");

    std::string csv_path, script_path = "plot.py", layout_name = "currents";
    CLI::App* plot = app.add_subcommand("plot", "Emit a matplotlib script for a CSV log");
    plot->add_option("csv", csv_path, "CSV log produced by 'run'")->required();
    plot->add_option("--out", script_path, "Plot script path");
    plot->add_option("--layout", layout_name, "Panel layout: currents (v_dc, i_dc_m, i_dc_g) "
                                              "or powers (v_dc, p_g, p_m)")
        ->check(CLI::IsMember({"currents", "powers"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1
    }

    try {
        if (run->parsed()) {
            if (*dt_opt) opt.dt = dt;
            if (*ts_opt) opt.t_stop = t_stop;
            if (*st_opt) opt.stride = stride;
            return btb::run_command(opt, std::cout);
        }
        const auto layout = layout_name == "powers" ? btb::PlotLayout::powers
                                                    : btb::PlotLayout::dc_currents;
        btb::emit_plot_script(csv_path, script_path, layout);
        std::cout << "wrote " << script_path << "\n";
        return 0;
    } catch (const btb::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
