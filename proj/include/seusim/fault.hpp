#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seusim/ffregistry.hpp"
#include "seusim/pipeline.hpp"
#include "seusim/rng.hpp"

namespace seusim {

// Single-SEU executor: one (flip-flop bit, cycle) pair per faulty run.
// The upset is applied to the stored value right after the clock edge of
// the sampled cycle, so it corrupts the value held during that cycle.

struct FaultSpec {
    FlipFlopId ff;
    int cycle = 0;  // [0, T)
};

struct FaultOutcome {
    FaultSpec spec;
    bool propagated = false;
    int magnitude = 0;            // max |faulty - golden| over outputs, [0, 255]
    std::vector<int> deltas;      // per output element
};

enum class MaskingTag {
    Overwritten,  // flipped value never reached the accumulation/post path
    RoundMasked,  // shifted below the output LSB
    ClipMasked,   // absorbed by output saturation
    ReluMasked,   // NLF mapped golden and faulty to the same value
};

/// Uniform over all FF bits (by canonical index) and uniform, independent
/// over cycles [0, T).
FaultSpec sample_fault(const Registry& registry, const Schedule& schedule, Rng& rng);

/// One faulty iteration against a cached golden output.
FaultOutcome run_with_fault(Pipeline& pipe, const Tile& tile,
                            std::span<const ActivationVector> acts, const FaultSpec& spec,
                            const OutputVector& golden);

/// Diagnostic replay for non-propagated faults; compares stage snapshots
/// at their consumption cycles against the golden run.
MaskingTag classify_masking(Pipeline& pipe, const Tile& tile,
                            std::span<const ActivationVector> acts, const FaultSpec& spec);

}  // namespace seusim
