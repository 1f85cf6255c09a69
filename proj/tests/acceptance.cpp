// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Campaign-backed criteria share three 100k-injection runs.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "seusim/campaign.hpp"
#include "seusim/fault.hpp"
#include "seusim/reliability.hpp"

using namespace seusim;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(bool ok, int index, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", index, what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Poisson table values

void criterion_1() {
    auto t0 = Clock::now();
    struct Row {
        int64_t n_ff;
        double p1, p2;
    };
    const Row rows[] = {
        {352, 1.149e-17, 6.600e-35},
        {1240, 4.047e-17, 8.190e-34},
        {4648, 1.517e-16, 1.151e-32},
    };
    bool ok = true;
    for (const Row& row : rows) {
        double lambda = lambda_per_cycle(SerContext{2.82e-7, 1e8, row.n_ff});
        if (std::abs(poisson_pk(lambda, 1) - row.p1) / row.p1 > 5e-4) ok = false;
        if (std::abs(poisson_pk(lambda, 2) - row.p2) / row.p2 > 5e-4) ok = false;
    }
    double dt = elapsed(t0);
    ok = ok && dt < 1.0;
    report(ok, 1, "single/double-upset probabilities match reference values to 0.05% (" +
                      std::to_string(dt) + " s)");
}

// ---------------------------------------------------------------------------
// 2. Golden equivalence

void criterion_2() {
    auto t0 = Clock::now();
    NlfTable relu = relu_table();
    int64_t mismatches = 0;
    for (const SizeSpec size : {SizeSpec{2, 2}, SizeSpec{4, 4}, SizeSpec{8, 8}}) {
        for (int passes : {1, 2}) {
            Calibration cal = calibrate_workload(size.rows, size.cols, 10000, 77);
            StimulusParams params;
            params.rows = size.rows;
            params.cols = size.cols;
            params.passes = passes;
            params.cal = cal;
            params.master_seed = 77;
            Pipeline pipe(PipelineConfig{size.rows, size.cols, passes, cal.shift, relu});
            for (uint64_t i = 0; i < 10000; ++i) {
                Stimulus st = generate_stimulus(params, i);
                if (pipe.run_iteration(st.tile, st.acts).output !=
                    golden_forward(st.tile, st.acts, relu))
                    ++mismatches;
            }
        }
    }
    double dt = elapsed(t0);
    bool ok = mismatches == 0 && dt < 120.0;
    report(ok, 2, "cycle-accurate pipeline bit-identical to functional reference, 10k stimuli x "
                  "{2x2,4x4,8x8} x P in {1,2} (" +
                      std::to_string(mismatches) + " mismatches, " + std::to_string(dt) + " s)");
}

// ---------------------------------------------------------------------------
// 3. Requantization arithmetic vs wide-integer oracle

int oracle_rsc(int64_t acc, unsigned s) {
    if (s == 0) return clip_int8(acc);
    __int128 num = static_cast<__int128>(acc) + (static_cast<__int128>(1) << (s - 1));
    __int128 den = static_cast<__int128>(1) << s;
    __int128 q = num / den;
    if (num % den != 0 && num < 0) --q;
    return clip_int8(static_cast<int64_t>(q));
}

void criterion_3() {
    int64_t mismatches = 0;
    for (unsigned s : {0u, 1u, 5u, 7u, 31u})
        for (int64_t acc = -65536; acc <= 65536; ++acc)
            if (round_shift_clip(static_cast<int32_t>(acc), ShiftAmount{s}) != oracle_rsc(acc, s))
                ++mismatches;
    Rng rng(303);
    for (int i = 0; i < 1000000; ++i) {
        int32_t acc = static_cast<int32_t>(rng.next());
        unsigned s = static_cast<unsigned>(rng.below(32));
        if (round_shift_clip(acc, ShiftAmount{s}) != oracle_rsc(acc, s)) ++mismatches;
    }
    report(mismatches == 0, 3,
           "round/shift/clip exhaustive over [-2^16,2^16] x S in {0,1,5,7,31} plus 10^6 random "
           "int32 (" + std::to_string(mismatches) + " mismatches)");
}

// ---------------------------------------------------------------------------
// 4. Calibration statistics across seeds

void criterion_4() {
    int scale_hits = 0, shift_hits = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Calibration cal = calibrate_workload(8, 8, 10000, seed);
        if (cal.s_a.exponent == -5 && cal.s_w.exponent == -5) ++scale_hits;
        if (cal.shift.value == 7) ++shift_hits;
    }
    bool ok = scale_hits >= 99 && shift_hits >= 95;
    report(ok, 4, "100 seeded calibrations at M=10000: s_a=s_w=2^-5 in " +
                      std::to_string(scale_hits) + "/100 (need >=99), S=7 in " +
                      std::to_string(shift_hits) + "/100 (need >=95)");
}

// ---------------------------------------------------------------------------
// Shared campaign runs (criteria 5, 6, 7, 10)

struct SizeRun {
    SizeSpec size;
    Calibration cal;
    RegistryCensus census;
    std::vector<FaultRecord> records;
    double seconds = 0.0;
};

SizeRun run_size(const CampaignConfig& config, const SizeSpec& size) {
    SizeRun run;
    run.size = size;
    run.cal = calibrate_workload(size.rows, size.cols, config.calibration_samples,
                                 size_seed(config, size));
    run.census = Registry(size.rows, size.cols).census();
    auto t0 = Clock::now();
    run.records = run_injections_parallel(config, size, run.cal, 0, config.iterations);
    run.seconds = elapsed(t0);
    return run;
}

// ---------------------------------------------------------------------------
// 5. NlfReg power-of-two magnitudes

void criterion_5(const SizeRun& run4) {
    int64_t n = 0, bad = 0, bit7 = 0, bit7_bad = 0;
    for (const auto& r : run4.records) {
        if (r.ff.group != RegGroup::NlfReg || !r.propagated) continue;
        ++n;
        bool pow2 = r.magnitude > 0 && (r.magnitude & (r.magnitude - 1)) == 0;
        if (!pow2) ++bad;
        if (r.ff.bit == 7) {
            ++bit7;
            // A sign-bit flip of an int8 lane always moves it by exactly 128.
            if (r.magnitude != 128) ++bit7_bad;
        } else if (r.magnitude != (1 << r.ff.bit)) {
            ++bad;
        }
    }
    bool ok = n > 0 && bad == 0 && bit7_bad == 0;
    report(ok, 5, "all " + std::to_string(n) +
                      " propagated NlfReg faults in the 4x4 campaign have power-of-two magnitude; "
                      "bit-7 cases (" + std::to_string(bit7) + ") verified at 128 separately");
}

// ---------------------------------------------------------------------------
// 6 + 7: per-group statistics from the shared campaigns

struct GroupAgg {
    int64_t injections = 0;
    int64_t propagations = 0;
    double lo = 0.0, hi = 0.0;
    std::vector<int> mags;
};

std::array<GroupAgg, kGroupCount> per_group(const SizeRun& run) {
    std::array<GroupAgg, kGroupCount> agg;
    for (const auto& r : run.records) {
        GroupAgg& g = agg[static_cast<size_t>(r.ff.group)];
        ++g.injections;
        if (r.propagated) {
            ++g.propagations;
            g.mags.push_back(r.magnitude);
        }
    }
    for (auto& g : agg) std::tie(g.lo, g.hi) = wilson_interval(g.propagations, g.injections);
    return agg;
}

void criterion_6(const std::vector<SizeRun>& runs) {
    std::vector<std::array<GroupAgg, kGroupCount>> aggs;
    for (const auto& run : runs) aggs.push_back(per_group(run));

    auto at = [&](size_t run, RegGroup g) -> const GroupAgg& {
        return aggs[run][static_cast<size_t>(g)];
    };

    // (a) NlfReg strictly highest propagation ratio at every size.
    bool a_ok = true;
    for (size_t i = 0; i < runs.size(); ++i)
        for (int g = 0; g < kGroupCount; ++g)
            if (static_cast<RegGroup>(g) != RegGroup::NlfReg &&
                at(i, RegGroup::NlfReg).lo <= at(i, static_cast<RegGroup>(g)).hi)
                a_ok = false;

    // (b) RoundReg strictly above every pre-rounding group.
    const RegGroup pre_round[] = {RegGroup::SaRegFfchainH, RegGroup::WReg, RegGroup::SaRegH,
                                  RegGroup::SaRegV, RegGroup::SaRegFfchainV, RegGroup::AccumReg};
    bool b_ok = true;
    for (size_t i = 0; i < runs.size(); ++i)
        for (RegGroup g : pre_round)
            if (at(i, RegGroup::RoundReg).lo <= at(i, g).hi) b_ok = false;

    // (c) activation-path ratios rise with array size.
    bool c_ok = true;
    for (RegGroup g : {RegGroup::SaRegFfchainH, RegGroup::SaRegH})
        for (size_t i = 1; i < runs.size(); ++i)
            if (at(i, g).lo <= at(i - 1, g).hi) c_ok = false;

    auto ratios = [&](RegGroup g) {
        std::string s;
        for (size_t i = 0; i < runs.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s%.3f",  i ? "/" : "",
                          static_cast<double>(at(i, g).propagations) /
                              static_cast<double>(at(i, g).injections));
            s += buf;
        }
        return s;
    };
    report(a_ok && b_ok && c_ok, 6,
           std::string("propagation-ratio trends outside Wilson 95% intervals: ") +
               "(a) nlf-reg highest " + (a_ok ? "yes" : "NO") + ", (b) round-reg above pre-round " +
               (b_ok ? "yes" : "NO") + ", (c) activation chains rising with size " +
               (c_ok ? "yes" : "NO") + " [nlf " + ratios(RegGroup::NlfReg) + ", round " +
               ratios(RegGroup::RoundReg) + ", accum " + ratios(RegGroup::AccumReg) + ", chain-h " +
               ratios(RegGroup::SaRegFfchainH) + ", sa-h " + ratios(RegGroup::SaRegH) + "]");
}

double bootstrap_median_bound(const std::vector<int>& sample, bool upper, Rng& rng) {
    const int B = 1000;
    std::vector<double> medians(B);
    std::vector<int> resample(sample.size());
    for (int b = 0; b < B; ++b) {
        for (auto& v : resample) v = sample[rng.below(sample.size())];
        std::sort(resample.begin(), resample.end());
        size_t n = resample.size();
        medians[b] = n % 2 ? resample[n / 2]
                           : (resample[n / 2 - 1] + resample[n / 2]) / 2.0;
    }
    std::sort(medians.begin(), medians.end());
    return medians[static_cast<size_t>(upper ? B * 0.975 : B * 0.025)];
}

void criterion_7(const std::vector<SizeRun>& runs) {
    bool ok = true;
    std::string detail;
    Rng rng(707);
    for (const auto& run : runs) {
        std::vector<int> wide, narrow;
        for (const auto& r : run.records) {
            if (!r.propagated) continue;
            switch (r.ff.group) {
                case RegGroup::SaRegV:
                case RegGroup::SaRegFfchainV:
                case RegGroup::AccumReg:
                    wide.push_back(r.magnitude);
                    break;
                case RegGroup::SaRegFfchainH:
                case RegGroup::WReg:
                case RegGroup::SaRegH:
                    narrow.push_back(r.magnitude);
                    break;
                default:
                    break;
            }
        }
        if (wide.empty() || narrow.empty()) {
            ok = false;
            continue;
        }
        double wide_lo = bootstrap_median_bound(wide, false, rng);
        double narrow_hi = bootstrap_median_bound(narrow, true, rng);
        if (wide_lo <= narrow_hi) ok = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, " %dx%d: %.1f vs %.1f;", run.size.rows, run.size.cols,
                      wide_lo, narrow_hi);
        detail += buf;
    }
    report(ok, 7, "median propagated magnitude of 32-bit partial-sum groups exceeds 8-bit "
                  "activation groups outside bootstrap 95% intervals (wide lower bound vs narrow "
                  "upper bound:" + detail + ")");
}

// ---------------------------------------------------------------------------
// 8. Masking bounds on targeted injections

void criterion_8() {
    StimulusParams params;
    params.rows = 4;
    params.cols = 4;
    params.passes = 1;
    params.cal = calibrate_workload(4, 4, 10000, 808);
    params.master_seed = 808;
    unsigned S = params.cal.shift.value;
    Pipeline pipe(PipelineConfig{4, 4, 1, params.cal.shift, relu_table()});
    const Schedule& sched = pipe.schedule();
    Rng rng(808);

    int64_t round_violations = 0;
    for (int i = 0; i < 10000; ++i) {
        Stimulus st = generate_stimulus(params, static_cast<uint64_t>(i));
        OutputVector golden = golden_forward(st.tile, st.acts, pipe.config().nlf);
        int bit = static_cast<int>(rng.below(8));
        FaultSpec spec{FlipFlopId{RegGroup::RoundReg, 0, static_cast<int>(rng.below(4)), 0, bit},
                       sched.round_final};
        FaultOutcome out = run_with_fault(pipe, st.tile, st.acts, spec, golden);
        int bound = bit < 7 ? (1 << bit) : 128;
        if (out.magnitude > bound) ++round_violations;
    }

    // Sub-LSB accumulator upsets after the final accumulation: a bit below
    // the shift that cannot carry through the rounding add must vanish.
    int64_t accum_violations = 0, accum_cases = 0;
    for (int i = 0; accum_cases < 10000 && i < 200000; ++i) {
        Stimulus st = generate_stimulus(params, static_cast<uint64_t>(i));
        std::vector<int32_t> accs = gemm_accumulate(st.tile, st.acts);
        int col = static_cast<int>(rng.below(4));
        int bit = S > 0 ? static_cast<int>(rng.below(S)) : 0;
        if (S == 0) break;
        // No-carry precondition in exact arithmetic: the flip may not move
        // the half-added value across a 2^S boundary.
        int64_t acc = accs[static_cast<size_t>(col)];
        int64_t flipped = static_cast<int32_t>(static_cast<uint32_t>(acc) ^ (uint32_t{1} << bit));
        int64_t half = int64_t{1} << (S - 1);
        if (((acc + half) >> S) != ((flipped + half) >> S)) continue;
        ++accum_cases;
        OutputVector golden = golden_forward(st.tile, st.acts, pipe.config().nlf);
        FaultSpec spec{FlipFlopId{RegGroup::AccumReg, 0, col, 0, bit}, sched.accum_final};
        if (run_with_fault(pipe, st.tile, st.acts, spec, golden).propagated) ++accum_violations;
    }

    bool ok = round_violations == 0 && accum_violations == 0 && accum_cases >= 10000;
    report(ok, 8, "targeted masking bounds: 10^4 round-stage bit-b faults within 2^b (" +
                      std::to_string(round_violations) + " violations), " +
                      std::to_string(accum_cases) + " carry-free sub-LSB accumulator faults never "
                      "propagate (" + std::to_string(accum_violations) + " violations)");
}

// ---------------------------------------------------------------------------
// 9. Determinism across workers + sampling uniformity

void criterion_9() {
    CampaignConfig base;
    base.sizes = {{2, 2}, {4, 4}};
    base.iterations = 10000;
    base.master_seed = 909;

    CampaignConfig one = base, eight = base;
    one.workers = 1;
    eight.workers = 8;
    auto ja = report_to_json(run_campaign(one));
    auto jb = report_to_json(run_campaign(eight));
    ja["header"]["config"]["workers"] = 0;
    jb["header"]["config"]["workers"] = 0;
    bool identical = ja.dump() == jb.dump();

    Registry reg(4, 4);
    Schedule sched = Schedule::of(4, 4, 1);
    Rng rng(909);
    const int64_t draws = 1000000;
    std::array<int64_t, kGroupCount> hits{};
    for (int64_t i = 0; i < draws; ++i)
        ++hits[static_cast<size_t>(sample_fault(reg, sched, rng).ff.group)];
    bool uniform = true;
    for (int g = 0; g < kGroupCount; ++g) {
        double p = static_cast<double>(reg.census().bits_per_group[static_cast<size_t>(g)]) /
                   static_cast<double>(reg.total_bits());
        double sigma = std::sqrt(p * (1.0 - p) * static_cast<double>(draws));
        if (std::abs(static_cast<double>(hits[static_cast<size_t>(g)]) - p * draws) > 3.0 * sigma)
            uniform = false;
    }

    report(identical && uniform, 9,
           std::string("1 vs 8 workers: aggregated reports ") +
               (identical ? "identical" : "DIFFER") + "; group sampling within 3-sigma of "
               "ff_ratio at 10^6 draws: " + (uniform ? "yes" : "NO"));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();

    CampaignConfig config;
    config.iterations = 100000;
    config.master_seed = 606;
    std::vector<SizeRun> runs;
    for (const SizeSpec size : {SizeSpec{2, 2}, SizeSpec{4, 4}, SizeSpec{8, 8}})
        runs.push_back(run_size(config, size));

    criterion_5(runs[1]);
    criterion_6(runs);
    criterion_7(runs);
    criterion_8();
    criterion_9();

    // 10. Throughput of the 8x8 run measured above.
    bool fast = runs[2].seconds < 600.0;
    report(fast, 10, "10^5-injection 8x8 campaign in " + std::to_string(runs[2].seconds) +
                         " s (limit 600 s)");

    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
