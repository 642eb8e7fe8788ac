#include "btb/plot_script.hpp"

#include <fstream>
#include <sstream>

#include "btb/errors.hpp"
#include "btb/timeseries.hpp"

namespace btb {

namespace {

void check_csv_header(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in)
        throw SimError(ErrorKind::io, "cannot open CSV file '" + csv_path + "'");
    std::string schema, header;
    if (!std::getline(in, schema) || !std::getline(in, header))
        throw SimError(ErrorKind::parse, csv_path + ": empty or truncated CSV");
    if (!schema.empty() && schema.back() == '\r') schema.pop_back();
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (schema != kCsvSchemaLine || header != kCsvHeaderLine)
        throw SimError(ErrorKind::parse, csv_path + ": CSV header does not match schema " +
                                             std::string(kCsvSchemaLine).substr(2));
}

struct Panel {
    const char* column;
    const char* label;
};

} // namespace

std::string make_plot_script(const std::string& csv_path, PlotLayout layout) {
    check_csv_header(csv_path);

    const Panel panels_currents[3] = {
        {"v_dc", "DC-link voltage (V)"},
        {"i_dc_m", "I_dc_m (A)"},
        {"i_dc_g", "I_dc_g (A)"},
    };
    const Panel panels_powers[3] = {
        {"v_dc", "DC-link voltage (V)"},
        {"p_g", "P_g (W)"},
        {"p_m", "P_m (W)"},
    };
    const Panel* panels = layout == PlotLayout::dc_currents ? panels_currents : panels_powers;

    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "# Generated by btbsim; plots " << panels[0].column << ", " << panels[1].column
       << ", " << panels[2].column << " from " << csv_path << "\n"
       << "import csv\n"
       << "import matplotlib.pyplot as plt\n"
       << "\n"
       << "path = \"" << csv_path << "\"\n"
       << "cols = {}\n"
       << "with open(path) as f:\n"
       << "    lines = [ln for ln in f if not ln.startswith(\"#\")]\n"
       << "reader = csv.DictReader(lines)\n"
       << "names = reader.fieldnames\n"
       << "data = {n: [] for n in names}\n"
       << "for row in reader:\n"
       << "    for n in names:\n"
       << "        data[n].append(float(row[n]))\n"
       << "\n"
       << "fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 8))\n";
    for (int i = 0; i < 3; ++i) {
        os << "axes[" << i << "].plot(data[\"t\"], data[\"" << panels[i].column << "\"])\n"
           << "axes[" << i << "].set_ylabel(\"" << panels[i].label << "\")\n"
           << "axes[" << i << "].grid(True)\n";
    }
    os << "axes[2].set_xlabel(\"time (s)\")\n"
       << "fig.tight_layout()\n"
       << "plt.show()\n";
    return os.str();
}

void emit_plot_script(const std::string& csv_path, const std::string& out_path, PlotLayout layout) {
    const std::string script = make_plot_script(csv_path, layout);
    std::ofstream out(out_path);
    if (!out)
        throw SimError(ErrorKind::io, "cannot write plot script '" + out_path + "'");
    out << script;
}

} // namespace btb
