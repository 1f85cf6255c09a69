#include <fstream>
#include <stdexcept>

#include "seusim/campaign.hpp"
#include "seusim/reliability.hpp"
#include "seusim/rng.hpp"

namespace seusim {

namespace {
using json = nlohmann::ordered_json;

std::string size_label(const SizeSpec& s) {
    return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

json group_stats_json(const GroupStats& gs) {
    json j;
    j["ff_bits"] = gs.ff_bits;
    j["ff_ratio"] = gs.ff_ratio;
    j["injections"] = gs.injections;
    j["propagations"] = gs.propagations;
    j["propagation_ratio"] = gs.propagation_ratio;
    j["wilson_lo"] = gs.wilson_lo;
    j["wilson_hi"] = gs.wilson_hi;
    json m;
    m["n"] = gs.magnitude.n;
    if (gs.magnitude.n > 0) {
        m["min"] = gs.magnitude.min;
        m["q1"] = gs.magnitude.q1;
        m["median"] = gs.magnitude.median;
        m["q3"] = gs.magnitude.q3;
        m["max"] = gs.magnitude.max;
        m["mean"] = gs.magnitude.mean;
    } else {
        m["empty"] = true;
    }
    j["magnitude"] = m;
    return j;
}
}  // namespace

nlohmann::ordered_json report_to_json(const CampaignReport& report) {
    const CampaignConfig& cfg = report.config;
    json j;
    json header;
    header["tool"] = "seusim";
    json c;
    json sizes = json::array();
    for (const auto& s : cfg.sizes) sizes.push_back(size_label(s));
    c["sizes"] = sizes;
    c["iterations"] = cfg.iterations;
    c["master_seed"] = cfg.master_seed;
    c["passes"] = cfg.passes;
    c["calibration_samples"] = cfg.calibration_samples;
    c["workers"] = cfg.workers;
    c["ser_per_ff_day"] = cfg.ser_per_ff_day;
    c["f_clock_hz"] = cfg.f_clock_hz;
    header["config"] = c;
    header["prng"] = Rng::kDescription;

    // Poisson table over the datapath FF counts, documenting the
    // single-fault-per-iteration assumption.
    json poisson = json::array();
    for (const auto& stats : report.sizes) {
        SerContext ctx{cfg.ser_per_ff_day, cfg.f_clock_hz, stats.census.total_bits};
        json row;
        row["size"] = size_label(stats.size);
        row["n_ff"] = stats.census.total_bits;
        double lambda = lambda_per_cycle(ctx);
        row["lambda_per_cycle"] = lambda;
        for (int k = 0; k <= 2; ++k) row["p" + std::to_string(k)] = poisson_pk(lambda, k);
        poisson.push_back(row);
    }
    header["poisson"] = poisson;
    j["header"] = header;
    if (!report.raw_records_path.empty()) j["raw_records"] = report.raw_records_path;

    json per_size = json::array();
    for (const auto& stats : report.sizes) {
        json s;
        s["size"] = size_label(stats.size);
        s["iterations"] = stats.iterations;
        json cal;
        cal["s_a_exp"] = stats.calibration.s_a.exponent;
        cal["s_w_exp"] = stats.calibration.s_w.exponent;
        cal["s_y_exp"] = stats.calibration.s_y.exponent;
        cal["shift"] = stats.calibration.shift.value;
        s["calibration"] = cal;
        json census;
        for (int g = 0; g < kGroupCount; ++g)
            census[std::string(group_name(static_cast<RegGroup>(g)))] =
                stats.census.bits_per_group[static_cast<size_t>(g)];
        census["total"] = stats.census.total_bits;
        s["census"] = census;
        json groups;
        for (int g = 0; g < kGroupCount; ++g)
            groups[std::string(group_name(static_cast<RegGroup>(g)))] =
                group_stats_json(stats.groups[static_cast<size_t>(g)]);
        s["groups"] = groups;
        per_size.push_back(s);
    }
    j["sizes"] = per_size;
    return j;
}

void write_report(const CampaignReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << report_to_json(report).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Plot data + optional SVG rendering

namespace {

void write_bars_csv(const SizeStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot data: " + path);
    out << "group,ff_ratio,propagation_ratio\n";
    for (int g = 0; g < kGroupCount; ++g) {
        const GroupStats& gs = stats.groups[static_cast<size_t>(g)];
        out << group_name(static_cast<RegGroup>(g)) << ',' << gs.ff_ratio << ','
            << gs.propagation_ratio << '\n';
    }
}

void write_box_csv(const SizeStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot data: " + path);
    out << "group,min,q1,median,q3,max\n";
    for (int g = 0; g < kGroupCount; ++g) {
        const MagnitudeSummary& m = stats.groups[static_cast<size_t>(g)].magnitude;
        out << group_name(static_cast<RegGroup>(g)) << ',';
        if (m.n > 0)
            out << m.min << ',' << m.q1 << ',' << m.median << ',' << m.q3 << ',' << m.max;
        else
            out << ",,,,";
        out << '\n';
    }
}

void write_bars_svg(const SizeStats& stats, const std::string& path) {
    const int width = 720, height = 320, margin = 40;
    const double plot_h = height - 2.0 * margin;
    const double band = (width - 2.0 * margin) / kGroupCount;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write svg: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    for (int g = 0; g < kGroupCount; ++g) {
        const GroupStats& gs = stats.groups[static_cast<size_t>(g)];
        double x0 = margin + g * band;
        double h1 = gs.ff_ratio * plot_h;
        double h2 = gs.propagation_ratio * plot_h;
        out << "<rect x='" << x0 + 4 << "' y='" << height - margin - h1 << "' width='"
            << band * 0.4 - 6 << "' height='" << h1 << "' fill='#4878d0'/>\n";
        out << "<rect x='" << x0 + band * 0.4 + 2 << "' y='" << height - margin - h2 << "' width='"
            << band * 0.4 - 6 << "' height='" << h2 << "' fill='#ee854a'/>\n";
        out << "<text x='" << x0 + band / 2 << "' y='" << height - margin + 14
            << "' font-size='8' text-anchor='middle'>" << group_name(static_cast<RegGroup>(g))
            << "</text>\n";
    }
    out << "<text x='" << margin << "' y='16' font-size='11'>ff_ratio (blue) / propagation_ratio "
           "(orange), "
        << size_label(stats.size) << "</text>\n</svg>\n";
}

void write_box_svg(const SizeStats& stats, const std::string& path) {
    const int width = 720, height = 320, margin = 40;
    const double plot_h = height - 2.0 * margin;
    const double band = (width - 2.0 * margin) / kGroupCount;
    const double vmax = 256.0;
    auto y_of = [&](double v) { return height - margin - v / vmax * plot_h; };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write svg: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    for (int g = 0; g < kGroupCount; ++g) {
        const MagnitudeSummary& m = stats.groups[static_cast<size_t>(g)].magnitude;
        double xc = margin + (g + 0.5) * band;
        if (m.n > 0) {
            out << "<line x1='" << xc << "' y1='" << y_of(m.min) << "' x2='" << xc << "' y2='"
                << y_of(m.max) << "' stroke='black'/>\n";
            out << "<rect x='" << xc - band * 0.3 << "' y='" << y_of(m.q3) << "' width='"
                << band * 0.6 << "' height='" << y_of(m.q1) - y_of(m.q3)
                << "' fill='#d0e0f0' stroke='black'/>\n";
            out << "<line x1='" << xc - band * 0.3 << "' y1='" << y_of(m.median) << "' x2='"
                << xc + band * 0.3 << "' y2='" << y_of(m.median) << "' stroke='red'/>\n";
        }
        out << "<text x='" << xc << "' y='" << height - margin + 14
            << "' font-size='8' text-anchor='middle'>" << group_name(static_cast<RegGroup>(g))
            << "</text>\n";
    }
    out << "<text x='" << margin << "' y='16' font-size='11'>output fault magnitude, "
        << size_label(stats.size) << "</text>\n</svg>\n";
}

}  // namespace

void write_plot_files(const CampaignReport& report, const std::string& dir, bool svg) {
    for (const auto& stats : report.sizes) {
        std::string base = dir + "/" + size_label(stats.size);
        write_bars_csv(stats, base + "_bars.csv");
        write_box_csv(stats, base + "_box.csv");
        if (svg) {
            write_bars_svg(stats, base + "_bars.svg");
            write_box_svg(stats, base + "_box.svg");
        }
    }
}

}  // namespace seusim
