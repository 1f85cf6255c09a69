#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "seusim/campaign.hpp"
#include "seusim/golden.hpp"
#include "seusim/reliability.hpp"
#include "seusim/rng.hpp"
#include "seusim/stimulus.hpp"

namespace {

using namespace seusim;

std::vector<SizeSpec> parse_sizes(const std::string& spec) {
    std::vector<SizeSpec> sizes;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto x = tok.find('x');
        if (x == std::string::npos)
            throw CLI::ValidationError("--sizes", "expected RxC tokens, e.g. 2x2,4x4");
        try {
            sizes.push_back(SizeSpec{std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1))});
        } catch (const std::exception&) {
            throw CLI::ValidationError("--sizes", "bad size token: " + tok);
        }
    }
    if (sizes.empty()) throw CLI::ValidationError("--sizes", "no sizes given");
    return sizes;
}

void print_report_summary(const CampaignReport& report) {
    for (const auto& stats : report.sizes) {
        std::printf("size %dx%d  (S=%u, %lld iterations)\n", stats.size.rows, stats.size.cols,
                    stats.calibration.shift.value, static_cast<long long>(stats.iterations));
        std::printf("  %-18s %9s %11s %11s %9s %9s\n", "group", "ff_ratio", "injections",
                    "prop_ratio", "mag_med", "mag_max");
        for (int g = 0; g < kGroupCount; ++g) {
            const GroupStats& gs = stats.groups[static_cast<size_t>(g)];
            std::printf("  %-18s %9.4f %11lld %11.5f", group_name(static_cast<RegGroup>(g)).data(),
                        gs.ff_ratio, static_cast<long long>(gs.injections), gs.propagation_ratio);
            if (gs.magnitude.n > 0)
                std::printf(" %9.1f %9d\n", gs.magnitude.median, gs.magnitude.max);
            else
                std::printf(" %9s %9s\n", "-", "-");
        }
    }
}

int cmd_calibrate(int rows, int cols, int samples, uint64_t seed, const std::string& out_path) {
    Calibration cal = calibrate_workload(rows, cols, samples, seed);
    std::printf("rows=%d cols=%d samples=%d seed=%llu prng=%s\n", rows, cols, samples,
                static_cast<unsigned long long>(seed), Rng::kDescription);
    std::printf("s_a=2^%d s_w=2^%d s_y=2^%d shift=%u\n", cal.s_a.exponent, cal.s_w.exponent,
                cal.s_y.exponent, cal.shift.value);
    if (!out_path.empty()) {
        nlohmann::ordered_json j;
        j["rows"] = rows;
        j["cols"] = cols;
        j["samples"] = samples;
        j["seed"] = seed;
        j["prng"] = Rng::kDescription;
        j["s_a_exp"] = cal.s_a.exponent;
        j["s_w_exp"] = cal.s_w.exponent;
        j["s_y_exp"] = cal.s_y.exponent;
        j["shift"] = cal.shift.value;
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_poisson(double ser, double fclk, const std::vector<int64_t>& nff, int kmax) {
    std::vector<SerContext> contexts;
    for (int64_t n : nff) contexts.push_back(SerContext{ser, fclk, n});
    SeuTable table = seu_table(contexts, kmax);
    std::printf("ser=%.6g SEU/FF/day  f_clock=%.6g Hz\n", ser, fclk);
    std::printf("%-6s", "k");
    for (const auto& ctx : table.contexts) std::printf(" %14s", ("n_ff=" + std::to_string(ctx.n_ff)).c_str());
    std::printf("\n");
    for (int k = 0; k <= kmax; ++k) {
        std::printf("%-6d", k);
        for (double p : table.rows[static_cast<size_t>(k)]) std::printf(" %14.4e", p);
        std::printf("\n");
    }
    return 0;
}

int cmd_run(CampaignConfig config, const std::string& out_dir, bool resume, bool svg) {
    std::filesystem::create_directories(out_dir);
    std::string csv_path = out_dir + "/records.csv";
    CampaignReport report = run_campaign(config, csv_path, resume);
    write_report(report, out_dir + "/report.json");
    write_plot_files(report, out_dir, svg);
    print_report_summary(report);
    std::printf("raw records: %s\nreport: %s/report.json\n", csv_path.c_str(), out_dir.c_str());
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& out_dir, bool svg) {
    std::filesystem::create_directories(out_dir);
    CampaignReport report = aggregate_csv(records_path);
    write_report(report, out_dir + "/report.json");
    write_plot_files(report, out_dir, svg);
    print_report_summary(report);
    return 0;
}

int cmd_selftest() {
    // Golden-equivalence and core invariants at reduced volume; the full
    // suites live in the test binaries.
    int failures = 0;
    auto check = [&](bool ok, const char* what) {
        std::printf("%s %s\n", ok ? "PASS" : "FAIL", what);
        if (!ok) ++failures;
    };

    NlfTable relu = relu_table();
    bool relu_ok = true;
    for (int i = -128; i <= 127; ++i) {
        int8_t x = static_cast<int8_t>(i);
        if (nlf_lookup(relu, x) != (x > 0 ? x : 0)) relu_ok = false;
    }
    check(relu_ok, "relu lut exhaustive");

    bool shift_ok = true;
    for (int32_t acc = -65536; acc <= 65536; ++acc) {
        int64_t expect = (static_cast<int64_t>(acc) + 64) >> 7;
        if (round_shift_clip(acc, ShiftAmount{7}) != clip_int8(expect)) shift_ok = false;
    }
    check(shift_ok, "round_shift_clip exhaustive S=7");

    bool equiv_ok = true;
    for (const SizeSpec size : {SizeSpec{2, 2}, SizeSpec{4, 4}, SizeSpec{8, 8}}) {
        Calibration cal = calibrate_workload(size.rows, size.cols, 10000, 42);
        StimulusParams params;
        params.rows = size.rows;
        params.cols = size.cols;
        params.passes = 1;
        params.cal = cal;
        params.master_seed = 42;
        Pipeline pipe(PipelineConfig{size.rows, size.cols, 1, cal.shift, relu});
        for (uint64_t i = 0; i < 2000; ++i) {
            Stimulus st = generate_stimulus(params, i);
            auto got = pipe.run_iteration(st.tile, st.acts).output;
            if (got != golden_forward(st.tile, st.acts, relu)) equiv_ok = false;
        }
    }
    check(equiv_ok, "cycle-accurate vs golden equivalence (2000 stimuli/size)");

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"systolic-array SEU fault-injection simulator"};
    app.require_subcommand(1);
    app.set_config("--config");

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "derive power-of-two scales and the shift");
    int rows = 0, cols = 0, samples = 10000;
    uint64_t seed = 1;
    std::string cal_out;
    cal_cmd->add_option("--rows", rows, "array rows")->required();
    cal_cmd->add_option("--cols", cols, "array cols")->required();
    cal_cmd->add_option("--samples", samples, "calibration sample count (>= 1000)");
    cal_cmd->add_option("--seed", seed, "master seed");
    cal_cmd->add_option("--out", cal_out, "write the calibration record as JSON");

    // poisson
    auto* poisson_cmd = app.add_subcommand("poisson", "multi-SEU probability table");
    double ser = 2.82e-7, fclk = 1e8;
    std::vector<int64_t> nff = {352, 1240, 4648};
    int kmax = 2;
    poisson_cmd->add_option("--ser", ser, "SEU/FF/day");
    poisson_cmd->add_option("--fclk", fclk, "clock frequency in Hz");
    poisson_cmd->add_option("--nff", nff, "FF counts (comma separated)")->delimiter(',');
    poisson_cmd->add_option("--kmax", kmax, "largest k to print");

    // run
    auto* run_cmd = app.add_subcommand("run", "execute a fault-injection campaign");
    CampaignConfig config;
    std::string sizes_spec = "2x2,4x4,8x8";
    std::string out_dir = "campaign_out";
    bool resume = false, svg = false;
    run_cmd->add_option("--sizes", sizes_spec, "array sizes, e.g. 2x2,4x4,8x8");
    run_cmd->add_option("--iters", config.iterations, "injections per size");
    run_cmd->add_option("--seed", config.master_seed, "master seed");
    run_cmd->add_option("--passes", config.passes, "accumulation passes per iteration");
    run_cmd->add_option("--samples", config.calibration_samples, "calibration sample count");
    run_cmd->add_option("--workers", config.workers, "worker count (0 = hardware)");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_flag("--resume", resume, "continue an interrupted run from its raw records");
    run_cmd->add_flag("--svg", svg, "also render SVG charts");

    // report
    auto* report_cmd = app.add_subcommand("report", "re-aggregate a raw record CSV");
    std::string records_path = "campaign_out/records.csv";
    std::string report_out = "campaign_out";
    bool report_svg = false;
    report_cmd->add_option("--records", records_path, "raw record CSV path");
    report_cmd->add_option("--out", report_out, "output directory");
    report_cmd->add_flag("--svg", report_svg, "also render SVG charts");

    // selftest
    app.add_subcommand("selftest", "golden-equivalence and invariant smoke checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (cal_cmd->parsed()) return cmd_calibrate(rows, cols, samples, seed, cal_out);
        if (poisson_cmd->parsed()) return cmd_poisson(ser, fclk, nff, kmax);
        if (run_cmd->parsed()) {
            config.sizes = parse_sizes(sizes_spec);
            if (config.iterations < 1) throw std::invalid_argument("--iters must be >= 1");
            return cmd_run(config, out_dir, resume, svg);
        }
        if (report_cmd->parsed()) return cmd_report(records_path, report_out, report_svg);
        return cmd_selftest();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
