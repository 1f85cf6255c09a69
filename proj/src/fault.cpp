#include "seusim/fault.hpp"

#include <cstdlib>
#include <stdexcept>

#include "seusim/golden.hpp"

namespace seusim {

FaultSpec sample_fault(const Registry& registry, const Schedule& schedule, Rng& rng) {
    if (registry.total_bits() < 1 || schedule.total_cycles < 1)
        throw std::invalid_argument("sample_fault: empty registry or schedule");
    FaultSpec spec;
    spec.ff = registry.at(static_cast<int64_t>(rng.below(static_cast<uint64_t>(registry.total_bits()))));
    spec.cycle = static_cast<int>(rng.below(static_cast<uint64_t>(schedule.total_cycles)));
    return spec;
}

namespace {

struct FaultyRun {
    OutputVector output;
    std::vector<int32_t> accum_at_read;  // accumulator when the round stage samples it
    std::vector<int8_t> round_at_read;   // round register when the NLF stage samples it
};

FaultyRun run_faulty(Pipeline& pipe, const Tile& tile, std::span<const ActivationVector> acts,
                     const FaultSpec& spec) {
    const Schedule& sched = pipe.schedule();
    pipe.reset_and_preload(tile);
    if (spec.cycle == 0) pipe.flip_bit(spec.ff);
    FaultyRun out;
    for (int t = 1; t < sched.total_cycles; ++t) {
        pipe.step_cycle(acts);
        if (spec.cycle == t) pipe.flip_bit(spec.ff);
        if (t == sched.accum_final)
            for (int c = 0; c < tile.cols; ++c) out.accum_at_read.push_back(pipe.accum(c));
        if (t == sched.round_final)
            for (int c = 0; c < tile.cols; ++c) out.round_at_read.push_back(pipe.round_reg(c));
    }
    out.output = pipe.outputs();
    return out;
}

}  // namespace

FaultOutcome run_with_fault(Pipeline& pipe, const Tile& tile,
                            std::span<const ActivationVector> acts, const FaultSpec& spec,
                            const OutputVector& golden) {
    FaultOutcome outcome;
    outcome.spec = spec;
    OutputVector faulty = run_faulty(pipe, tile, acts, spec).output;
    outcome.deltas.resize(faulty.size());
    for (size_t c = 0; c < faulty.size(); ++c) {
        int d = std::abs(static_cast<int>(faulty[c]) - static_cast<int>(golden[c]));
        outcome.deltas[c] = d;
        if (d > outcome.magnitude) outcome.magnitude = d;
    }
    outcome.propagated = outcome.magnitude > 0;
    return outcome;
}

MaskingTag classify_masking(Pipeline& pipe, const Tile& tile,
                            std::span<const ActivationVector> acts, const FaultSpec& spec) {
    FaultyRun faulty = run_faulty(pipe, tile, acts, spec);

    std::vector<int32_t> acc_golden = gemm_accumulate(tile, acts);
    bool accum_differs = false;
    bool clip_differs = false;  // pre-clip rounded values differ
    for (int c = 0; c < tile.cols; ++c) {
        if (faulty.accum_at_read[c] == acc_golden[c]) continue;
        accum_differs = true;
        auto unclipped = [&](int32_t acc) -> int64_t {
            unsigned s = tile.shift.value;
            if (s == 0) return acc;
            return (static_cast<int64_t>(acc) + (int64_t{1} << (s - 1))) >> s;
        };
        if (unclipped(faulty.accum_at_read[c]) != unclipped(acc_golden[c])) clip_differs = true;
    }

    bool round_differs = false;
    for (int c = 0; c < tile.cols; ++c)
        if (faulty.round_at_read[c] != round_shift_clip(acc_golden[c], tile.shift))
            round_differs = true;

    if (round_differs) return MaskingTag::ReluMasked;
    if (accum_differs) return clip_differs ? MaskingTag::ClipMasked : MaskingTag::RoundMasked;
    return MaskingTag::Overwritten;
}

}  // namespace seusim
