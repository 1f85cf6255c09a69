#include "seusim/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "seusim/golden.hpp"
#include "seusim/reliability.hpp"

namespace seusim {

namespace {
constexpr uint64_t kSaltFault = 5;
constexpr uint64_t kSaltSize = 10;
constexpr int64_t kCsvFlushChunk = 8192;

std::string size_label(const SizeSpec& s) {
    return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}
}  // namespace

uint64_t size_seed(const CampaignConfig& config, const SizeSpec& size) {
    return Rng::derive_seed(config.master_seed,
                            static_cast<uint64_t>(size.rows) * 100000 + size.cols, kSaltSize);
}

FaultRecord run_one_injection(Pipeline& pipe, const StimulusParams& params, uint64_t seed,
                              int64_t iteration) {
    Stimulus stim = generate_stimulus(params, static_cast<uint64_t>(iteration));
    OutputVector golden = golden_forward(stim.tile, stim.acts, pipe.config().nlf);
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(iteration), kSaltFault);
    FaultSpec spec = sample_fault(pipe.registry(), pipe.schedule(), rng);
    FaultOutcome outcome = run_with_fault(pipe, stim.tile, stim.acts, spec, golden);

    FaultRecord rec;
    rec.size = SizeSpec{params.rows, params.cols};
    rec.iteration = iteration;
    rec.ff = spec.ff;
    rec.cycle = spec.cycle;
    rec.propagated = outcome.propagated;
    rec.magnitude = outcome.magnitude;
    return rec;
}

namespace {
StimulusParams make_params(const CampaignConfig& config, const SizeSpec& size,
                           const Calibration& cal, uint64_t seed) {
    StimulusParams p;
    p.rows = size.rows;
    p.cols = size.cols;
    p.passes = config.passes;
    p.cal = cal;
    p.master_seed = seed;
    p.calibration_samples = config.calibration_samples;
    return p;
}

PipelineConfig make_pipe_config(const CampaignConfig& config, const SizeSpec& size,
                                const Calibration& cal) {
    return PipelineConfig{size.rows, size.cols, config.passes, cal.shift, relu_table()};
}
}  // namespace

std::vector<FaultRecord> run_injections_serial(const CampaignConfig& config, const SizeSpec& size,
                                               const Calibration& cal, int64_t first,
                                               int64_t count) {
    uint64_t seed = size_seed(config, size);
    StimulusParams params = make_params(config, size, cal, seed);
    Pipeline pipe(make_pipe_config(config, size, cal));
    std::vector<FaultRecord> records(static_cast<size_t>(count));
    for (int64_t i = 0; i < count; ++i)
        records[static_cast<size_t>(i)] = run_one_injection(pipe, params, seed, first + i);
    return records;
}

std::vector<FaultRecord> run_injections_parallel(const CampaignConfig& config, const SizeSpec& size,
                                                 const Calibration& cal, int64_t first,
                                                 int64_t count) {
#ifdef _OPENMP
    uint64_t seed = size_seed(config, size);
    StimulusParams params = make_params(config, size, cal, seed);
    PipelineConfig pipe_config = make_pipe_config(config, size, cal);
    std::vector<FaultRecord> records(static_cast<size_t>(count));
    int threads = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
    {
        Pipeline pipe(pipe_config);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < count; ++i)
            records[static_cast<size_t>(i)] = run_one_injection(pipe, params, seed, first + i);
    }
    return records;
#else
    return run_injections_serial(config, size, cal, first, count);
#endif
}

std::pair<double, double> wilson_interval(int64_t k, int64_t n) {
    if (n <= 0) return {0.0, 0.0};
    const double z = 1.959963984540054;  // 97.5th normal percentile
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MagnitudeSummary summarize_magnitudes(std::vector<int> mags) {
    MagnitudeSummary s;
    s.n = static_cast<int64_t>(mags.size());
    if (mags.empty()) return s;
    std::sort(mags.begin(), mags.end());

    auto median_of = [&](size_t lo, size_t hi) {  // [lo, hi)
        size_t n = hi - lo;
        size_t mid = lo + n / 2;
        if (n % 2 == 1) return static_cast<double>(mags[mid]);
        return (static_cast<double>(mags[mid - 1]) + static_cast<double>(mags[mid])) / 2.0;
    };

    size_t n = mags.size();
    s.min = mags.front();
    s.max = mags.back();
    s.median = median_of(0, n);
    // Tukey exclusive halves: an odd sample's middle element joins neither.
    size_t half = n / 2;
    s.q1 = half == 0 ? s.median : median_of(0, half);
    s.q3 = half == 0 ? s.median : median_of(n - half, n);
    double sum = 0.0;
    for (int m : mags) sum += m;
    s.mean = sum / static_cast<double>(n);
    return s;
}

SizeStats aggregate(const std::vector<FaultRecord>& records, const SizeSpec& size,
                    int64_t iterations, const Calibration& cal, const RegistryCensus& census) {
    if (records.empty()) throw std::invalid_argument("aggregate: empty record set");

    SizeStats stats;
    stats.size = size;
    stats.iterations = iterations;
    stats.calibration = cal;
    stats.census = census;

    std::array<std::vector<int>, kGroupCount> mags;
    for (const auto& rec : records) {
        auto g = static_cast<size_t>(rec.ff.group);
        ++stats.groups[g].injections;
        if (rec.propagated) {
            ++stats.groups[g].propagations;
            mags[g].push_back(rec.magnitude);
        }
    }
    for (int g = 0; g < kGroupCount; ++g) {
        GroupStats& gs = stats.groups[static_cast<size_t>(g)];
        gs.ff_bits = census.bits_per_group[static_cast<size_t>(g)];
        gs.ff_ratio = static_cast<double>(gs.ff_bits) / static_cast<double>(census.total_bits);
        gs.propagation_ratio =
            gs.injections > 0 ? static_cast<double>(gs.propagations) / static_cast<double>(gs.injections)
                              : 0.0;
        std::tie(gs.wilson_lo, gs.wilson_hi) = wilson_interval(gs.propagations, gs.injections);
        gs.magnitude = summarize_magnitudes(std::move(mags[static_cast<size_t>(g)]));
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Raw record CSV

namespace {

const char* kCsvHeader = "size,iteration,group,row,col,chain_pos,bit,cycle,propagated,magnitude";

void write_csv_preamble(std::ostream& os, const CampaignConfig& config) {
    os << "# seusim raw fault records\n";
    os << "# seed=" << config.master_seed << "\n";
    os << "# iterations=" << config.iterations << "\n";
    os << "# passes=" << config.passes << "\n";
    os << "# calibration_samples=" << config.calibration_samples << "\n";
    os << "# ser_per_ff_day=" << config.ser_per_ff_day << "\n";
    os << "# f_clock_hz=" << config.f_clock_hz << "\n";
    os << "# prng=" << Rng::kDescription << "\n";
    os << "# sizes=";
    for (size_t i = 0; i < config.sizes.size(); ++i)
        os << (i ? "," : "") << size_label(config.sizes[i]);
    os << "\n" << kCsvHeader << "\n";
}

void write_csv_records(std::ostream& os, const std::vector<FaultRecord>& records) {
    for (const auto& r : records) {
        os << r.size.rows << 'x' << r.size.cols << ',' << r.iteration << ','
           << group_name(r.ff.group) << ',' << r.ff.row << ',' << r.ff.col << ',' << r.ff.chain_pos
           << ',' << r.ff.bit << ',' << r.cycle << ',' << (r.propagated ? 1 : 0) << ','
           << r.magnitude << '\n';
    }
}

struct CsvContents {
    CampaignConfig config;  // reconstructed from the preamble
    std::vector<FaultRecord> records;
};

CsvContents read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open raw record file: " + path);

    CsvContents out;
    out.config.sizes.clear();
    std::string line;
    bool header_seen = false;
    int64_t line_no = 0;
    int64_t last_valid_iteration = -1;

    auto fail = [&](const std::string& what) {
        throw std::runtime_error("corrupt raw record file " + path + " at line " +
                                 std::to_string(line_no) + " (" + what + "); last valid iteration " +
                                 std::to_string(last_valid_iteration));
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto kv = line.substr(1);
            auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            std::string key = kv.substr(0, eq);
            key.erase(0, key.find_first_not_of(' '));
            std::string value = kv.substr(eq + 1);
            try {
                if (key == "seed") out.config.master_seed = std::stoull(value);
                else if (key == "iterations") out.config.iterations = std::stoll(value);
                else if (key == "passes") out.config.passes = std::stoi(value);
                else if (key == "calibration_samples") out.config.calibration_samples = std::stoi(value);
                else if (key == "ser_per_ff_day") out.config.ser_per_ff_day = std::stod(value);
                else if (key == "f_clock_hz") out.config.f_clock_hz = std::stod(value);
                else if (key == "sizes") {
                    std::stringstream ss(value);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) {
                        auto x = tok.find('x');
                        if (x == std::string::npos) fail("bad size token");
                        out.config.sizes.push_back(
                            SizeSpec{std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1))});
                    }
                }
            } catch (const std::exception&) {
                fail("bad preamble value");
            }
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader) fail("missing header row");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() != 10) fail("wrong field count");
        try {
            FaultRecord r;
            auto x = fields[0].find('x');
            if (x == std::string::npos) fail("bad size field");
            r.size = SizeSpec{std::stoi(fields[0].substr(0, x)), std::stoi(fields[0].substr(x + 1))};
            r.iteration = std::stoll(fields[1]);
            r.ff.group = group_from_name(fields[2]);
            r.ff.row = std::stoi(fields[3]);
            r.ff.col = std::stoi(fields[4]);
            r.ff.chain_pos = std::stoi(fields[5]);
            r.ff.bit = std::stoi(fields[6]);
            r.cycle = std::stoi(fields[7]);
            r.propagated = std::stoi(fields[8]) != 0;
            r.magnitude = std::stoi(fields[9]);
            out.records.push_back(r);
            last_valid_iteration = r.iteration;
        } catch (const std::exception&) {
            fail("bad record field");
        }
    }
    if (!header_seen) fail("no header row");
    return out;
}

/// Completed-iteration watermark: records for `size` must be the contiguous
/// prefix 0..k-1 in order.
int64_t watermark_for_size(const std::vector<FaultRecord>& records, const SizeSpec& size) {
    int64_t next = 0;
    for (const auto& r : records) {
        if (!(r.size == size)) continue;
        if (r.iteration != next)
            throw std::runtime_error("raw record file is not a contiguous prefix for size " +
                                     size_label(size) + "; last valid iteration " +
                                     std::to_string(next - 1));
        ++next;
    }
    return next;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config, const std::string& csv_path,
                            bool resume) {
    if (config.iterations < 1) throw std::invalid_argument("run_campaign: iterations must be >= 1");
    if (config.sizes.empty()) throw std::invalid_argument("run_campaign: no sizes configured");

    std::vector<FaultRecord> existing;
    if (resume) {
        if (csv_path.empty()) throw std::invalid_argument("resume requires a raw record file");
        CsvContents prior = read_csv(csv_path);
        if (prior.config.master_seed != config.master_seed)
            throw std::runtime_error("resume refused: raw record file was produced with seed " +
                                     std::to_string(prior.config.master_seed));
        existing = std::move(prior.records);
    }

    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path, resume ? std::ios::app : std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot open raw record file for writing: " + csv_path);
        if (!resume) write_csv_preamble(csv, config);
    }

    CampaignReport report;
    report.config = config;
    report.raw_records_path = csv_path;

    for (const auto& size : config.sizes) {
        Calibration cal =
            calibrate_workload(size.rows, size.cols, config.calibration_samples, size_seed(config, size));
        Registry registry(size.rows, size.cols);

        std::vector<FaultRecord> records;
        records.reserve(static_cast<size_t>(config.iterations));
        for (const auto& r : existing)
            if (r.size == size) records.push_back(r);
        int64_t done = resume ? watermark_for_size(existing, size) : 0;

        while (done < config.iterations) {
            int64_t chunk = std::min(kCsvFlushChunk, config.iterations - done);
            std::vector<FaultRecord> batch =
                config.workers == 1 ? run_injections_serial(config, size, cal, done, chunk)
                                    : run_injections_parallel(config, size, cal, done, chunk);
            if (csv.is_open()) {
                write_csv_records(csv, batch);
                csv.flush();
                if (!csv) throw std::runtime_error("write failure on " + csv_path +
                                                   "; completed-iteration watermark " +
                                                   std::to_string(done));
            }
            records.insert(records.end(), batch.begin(), batch.end());
            done += chunk;
        }
        report.sizes.push_back(aggregate(records, size, config.iterations, cal, registry.census()));
    }
    return report;
}

CampaignReport aggregate_csv(const std::string& csv_path) {
    CsvContents contents = read_csv(csv_path);
    if (contents.records.empty()) throw std::runtime_error("no records in " + csv_path);
    if (contents.config.sizes.empty())
        throw std::runtime_error("raw record file lacks a sizes preamble: " + csv_path);

    CampaignReport report;
    report.config = contents.config;
    report.raw_records_path = csv_path;
    for (const auto& size : contents.config.sizes) {
        std::vector<FaultRecord> records;
        for (const auto& r : contents.records)
            if (r.size == size) records.push_back(r);
        if (records.empty()) continue;
        Calibration cal = calibrate_workload(size.rows, size.cols,
                                             contents.config.calibration_samples,
                                             size_seed(contents.config, size));
        Registry registry(size.rows, size.cols);
        report.sizes.push_back(aggregate(records, size, static_cast<int64_t>(records.size()), cal,
                                         registry.census()));
    }
    return report;
}

}  // namespace seusim
