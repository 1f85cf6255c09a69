#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "seusim/fault.hpp"
#include "seusim/ffregistry.hpp"
#include "seusim/stimulus.hpp"

namespace seusim {

// Monte-Carlo fault-injection campaign: many independent (stimulus, fault)
// iterations per array size, aggregated into per-group sensitivity
// statistics. Iterations are keyed by (seed, size, index) substreams, so
// the result is a pure function of the configuration regardless of worker
// count, and an interrupted raw-record file can be resumed exactly.

struct SizeSpec {
    int rows = 0;
    int cols = 0;

    friend bool operator==(const SizeSpec&, const SizeSpec&) = default;
};

struct CampaignConfig {
    std::vector<SizeSpec> sizes{{2, 2}, {4, 4}, {8, 8}};
    int64_t iterations = 100000;  // per size
    uint64_t master_seed = 1;
    int passes = 1;
    int calibration_samples = 10000;
    int workers = 0;  // 0 = hardware default, 1 = serial
    double ser_per_ff_day = 2.82e-7;
    double f_clock_hz = 1e8;
};

struct FaultRecord {
    SizeSpec size;
    int64_t iteration = 0;
    FlipFlopId ff;
    int cycle = 0;
    bool propagated = false;
    int magnitude = 0;
};

struct MagnitudeSummary {
    // Over propagated faults only; empty when n == 0.
    int64_t n = 0;
    int min = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    int max = 0;
    double mean = 0.0;
};

struct GroupStats {
    int64_t ff_bits = 0;
    double ff_ratio = 0.0;
    int64_t injections = 0;
    int64_t propagations = 0;
    double propagation_ratio = 0.0;
    double wilson_lo = 0.0;  // 95% interval on the propagation ratio
    double wilson_hi = 0.0;
    MagnitudeSummary magnitude;
};

struct SizeStats {
    SizeSpec size;
    int64_t iterations = 0;
    Calibration calibration;
    RegistryCensus census;
    std::array<GroupStats, kGroupCount> groups;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<SizeStats> sizes;
    std::string raw_records_path;
};

/// Per-size calibration seed and per-iteration stimulus/fault substreams.
uint64_t size_seed(const CampaignConfig& config, const SizeSpec& size);

/// One iteration of one size: generate stimulus i, sample one fault,
/// execute the faulty run against its golden twin.
FaultRecord run_one_injection(Pipeline& pipe, const StimulusParams& params, uint64_t seed,
                              int64_t iteration);

/// Injections [first, first+count) for one size. Plain loop; the
/// reference implementation the parallel runner is checked against.
std::vector<FaultRecord> run_injections_serial(const CampaignConfig& config, const SizeSpec& size,
                                               const Calibration& cal, int64_t first, int64_t count);

/// Same work distributed over OpenMP workers; byte-identical output.
std::vector<FaultRecord> run_injections_parallel(const CampaignConfig& config, const SizeSpec& size,
                                                 const Calibration& cal, int64_t first,
                                                 int64_t count);

/// Exact counting statistics for one size. Throws on an empty record set.
SizeStats aggregate(const std::vector<FaultRecord>& records, const SizeSpec& size,
                    int64_t iterations, const Calibration& cal, const RegistryCensus& census);

/// Full campaign. If csv_path is non-empty, raw records stream to it in
/// iteration order (resumable prefix); with resume=true an existing file
/// is continued from its watermark instead of restarted.
CampaignReport run_campaign(const CampaignConfig& config, const std::string& csv_path = "",
                            bool resume = false);

/// Re-aggregates a raw-record CSV without re-simulation.
CampaignReport aggregate_csv(const std::string& csv_path);

nlohmann::ordered_json report_to_json(const CampaignReport& report);
void write_report(const CampaignReport& report, const std::string& path);

/// Plot data: per size, a grouped-bar CSV
/// (group, ff_ratio, propagation_ratio) and a box CSV
/// (group, min, q1, median, q3, max). Optional SVG rendering.
void write_plot_files(const CampaignReport& report, const std::string& dir, bool svg = false);

// Aggregation helpers, exposed for tests.
/// Tukey median-of-halves quartiles (exclusive) on a sorted sample.
MagnitudeSummary summarize_magnitudes(std::vector<int> propagated_magnitudes);
/// Wilson 95% score interval for k successes in n trials.
std::pair<double, double> wilson_interval(int64_t k, int64_t n);

}  // namespace seusim
