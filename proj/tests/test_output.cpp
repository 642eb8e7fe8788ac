#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "btb/compare.hpp"
#include "btb/plot_script.hpp"
#include "btb/timeseries.hpp"

using namespace btb;

namespace {

OutputRow make_row(double t, double v_dc) {
    OutputRow r;
    r.t = t;
    r.v_dc = v_dc;
    r.p_g = -20123.456789;
    r.v_g_mag = 169.83128833;
    return r;
}

std::string temp_file(const char* name) {
    return std::string("./") + name;
}

} // namespace

TEST_CASE("CSV schema is the pinned versioned string") {
    CHECK(std::string(kCsvSchemaLine) == "# btb-timeseries-v1");
    CHECK(std::string(kCsvHeaderLine) ==
          "t,v_dc,i_dc_g,i_dc_m,p_g,q_g,p_m,q_m,"
          "v_g_mag,v_g_ang,v_m_mag,v_m_ang,e_g_d,e_g_q,e_m_d,e_m_q");

    std::ostringstream os;
    TimeSeries ts;
    ts.rows.push_back(make_row(0.0, 600.0));
    write_csv(os, ts);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvSchemaLine);
    std::getline(in, line);
    CHECK(line == kCsvHeaderLine);
    std::getline(in, line);
    CHECK(line.substr(0, 6) == "0,600,");
}

TEST_CASE("CSV rows carry 9 significant digits") {
    std::ostringstream os;
    write_csv_row(os, make_row(1.0 / 3.0, 599.987654321));
    const std::string line = os.str();
    CHECK(line.find("0.333333333") == 0);
    CHECK(line.find("599.987654") != std::string::npos); // 9 significant digits
    CHECK(line.find("-20123.4568") != std::string::npos);
    CHECK(line.find("169.831288") != std::string::npos);
}

TEST_CASE("compare_series reports per-column max and rms") {
    TimeSeries a, b;
    for (int k = 0; k < 4; ++k) {
        a.rows.push_back(make_row(k * 0.5, 600.0));
        b.rows.push_back(make_row(k * 0.5, 600.0));
    }
    b.rows[1].v_dc = 601.0; // one-sample deviation of 1 V
    b.rows[2].p_m = 30.0;

    const DeviationReport rep = compare_series(a, b);
    CHECK(rep.rows == 4);
    CHECK(rep.columns[1].max_abs == doctest::Approx(1.0));
    CHECK(rep.columns[1].rms == doctest::Approx(0.5)); // sqrt(1/4)
    CHECK(rep.columns[6].max_abs == doctest::Approx(30.0));

    std::ostringstream os;
    print_report(os, rep);
    CHECK(os.str().find("v_dc") != std::string::npos);

    TimeSeries c = a;
    c.rows[3].t += 0.25;
    CHECK_THROWS_AS(compare_series(a, c), SimError);
    c.rows.pop_back();
    CHECK_THROWS_AS(compare_series(a, c), SimError);
}

TEST_CASE("threshold check uses v_dc max and power rms") {
    Scenario scn;
    scn.gsc_control.v_dc_ref = 600.0;
    scn.gsc_params.s_rated = 50e3;

    DeviationReport rep;
    rep.columns[1].max_abs = 2.9; // within 0.5% of 600
    rep.columns[4].rms = 499.0;   // within 1% of 50 kVA
    CHECK(report_within_thresholds(rep, scn));
    rep.columns[1].max_abs = 3.1;
    CHECK(!report_within_thresholds(rep, scn));
    rep.columns[1].max_abs = 1.0;
    rep.columns[6].rms = 501.0;
    CHECK(!report_within_thresholds(rep, scn));
}

TEST_CASE("summarize finds settling after each event") {
    Scenario scn;
    scn.gsc_control.v_dc_ref = 600.0;
    scn.events.push_back(Event{1.0, EventTarget::msc_p_ref, 45e3, NetworkSide::grid, 1, {}});

    TimeSeries ts;
    for (int k = 0; k <= 4000; ++k) {
        const double t = k * 1e-3;
        double v = 600.0;
        if (t >= 1.0) v = 600.0 - 40.0 * std::exp(-(t - 1.0) / 0.4);
        ts.rows.push_back(make_row(t, v));
    }
    const RunSummary s = summarize(ts, scn);
    REQUIRE(s.events.size() == 1);
    CHECK(s.events[0].settled);
    // 40 exp(-t/0.4) crosses 1 V at t = 0.4 ln 40 = 1.4755 s.
    CHECK(s.events[0].settle_time == doctest::Approx(1.4755).epsilon(2e-3));

    std::ostringstream os;
    print_summary(os, s);
    CHECK(os.str().find("event t=1") != std::string::npos);
}

TEST_CASE("plot script emission validates the CSV and picks panels by layout") {
    const std::string csv = temp_file("plot_test.csv");
    {
        std::ofstream out(csv);
        TimeSeries ts;
        ts.rows.push_back(make_row(0.0, 600.0));
        ts.rows.push_back(make_row(1.0, 599.0));
        write_csv(out, ts);
    }

    const std::string cur = make_plot_script(csv, PlotLayout::dc_currents);
    CHECK(cur.find("subplots(3") != std::string::npos);
    CHECK(cur.find("\"i_dc_m\"") != std::string::npos);
    CHECK(cur.find("\"i_dc_g\"") != std::string::npos);
    CHECK(cur.find("\"v_dc\"") != std::string::npos);

    const std::string pow = make_plot_script(csv, PlotLayout::powers);
    CHECK(pow.find("\"p_g\"") != std::string::npos);
    CHECK(pow.find("\"p_m\"") != std::string::npos);

    const std::string script = temp_file("plot_test.py");
    emit_plot_script(csv, script, PlotLayout::dc_currents);
    std::ifstream back(script);
    CHECK(back.good());

    // Empty and wrong-header files are rejected.
    const std::string empty = temp_file("plot_empty.csv");
    { std::ofstream out(empty); }
    CHECK_THROWS_AS(make_plot_script(empty, PlotLayout::powers), SimError);

    const std::string bad = temp_file("plot_bad.csv");
    {
        std::ofstream out(bad);
        out << "time,volts\n1,2\n";
    }
    CHECK_THROWS_AS(make_plot_script(bad, PlotLayout::powers), SimError);

    CHECK_THROWS_AS(make_plot_script(temp_file("does_not_exist.csv"), PlotLayout::powers),
                    SimError);

    std::remove(csv.c_str());
    std::remove(script.c_str());
    std::remove(empty.c_str());
    std::remove(bad.c_str());
}
