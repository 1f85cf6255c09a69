#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "seusim/ffregistry.hpp"
#include "seusim/golden.hpp"
#include "seusim/quant.hpp"

namespace seusim {

// Cycle-accurate, bit-exact model of the weight-stationary array and its
// post-processing stages. Every register bit is addressable by FlipFlopId
// so upsets can be injected anywhere in the datapath.
//
// Schedule (cycle 0 = state established by reset_and_preload):
//   cycle 1..P        activation vector p enters the skew chains at cycle 1+p
//   cycle r+c+p+2     MAC(r,c) consumes pass p's activation (clock edge)
//   cycle R+C+p       all C column sums of pass p sit at the deskew tails
//   cycle R+C+1+p     accumulate edge for pass p
//   cycle R+C+P+1     RoundReg holds the final requantized result
//   cycle R+C+P+2     NlfReg holds the final output; readout cycle
// Total T = R+C+P+3 cycles (indices 0..T-1). RoundReg and NlfReg re-latch
// on every edge; accumulation is gated to the arrival edges.

struct PipelineConfig {
    int rows = 0;
    int cols = 0;
    int passes = 1;
    ShiftAmount shift;
    NlfTable nlf;
};

struct Schedule {
    int total_cycles = 0;   // T
    int stream_first = 0;   // first cycle an activation vector occupies a chain head
    int stream_last = 0;
    int arrival_first = 0;  // column sums at deskew tails, pass 0
    int arrival_last = 0;   // pass P-1
    int accum_final = 0;    // accumulator holds the complete result
    int round_final = 0;
    int readout = 0;        // NlfReg holds the output; last cycle, T-1

    static Schedule of(int rows, int cols, int passes);
};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    const PipelineConfig& config() const { return config_; }
    const Registry& registry() const { return registry_; }
    const Schedule& schedule() const { return schedule_; }
    int cycle() const { return cycle_; }

    /// Cycle counter <- 0, all FFs <- 0, then weights and biases land in
    /// their stationary registers. Throws on dimension mismatch.
    void reset_and_preload(const Tile& tile);

    /// One synchronous clock edge. Activation vectors are fed from the
    /// sequence given to the last reset via set_inputs/run convenience,
    /// or explicitly here.
    void step_cycle(std::span<const ActivationVector> acts);

    /// XOR exactly one stored bit. Throws on an id outside the registry
    /// geometry.
    void flip_bit(const FlipFlopId& ff);

    /// reset_and_preload + T-1 steps; returns NlfReg at the readout cycle.
    struct IterationResult {
        OutputVector output;
        int cycles = 0;
    };
    IterationResult run_iteration(const Tile& tile, std::span<const ActivationVector> acts);

    // Register readback, used by tests and the masking classifier.
    int32_t accum(int c) const { return accum_[c]; }
    int8_t round_reg(int c) const { return round_[c]; }
    int8_t nlf_reg(int c) const { return nlf_[c]; }
    int32_t deskew_tail(int c) const;
    OutputVector outputs() const { return {nlf_.begin(), nlf_.end()}; }

    /// Optional per-cycle register trace ("cycle group row col pos value"
    /// lines); disabled by default.
    void set_trace(std::ostream* os) { trace_ = os; }

private:
    void trace_cycle() const;

    PipelineConfig config_;
    Registry registry_;
    Schedule schedule_;
    int cycle_ = 0;

    // Storage, one slot per architectural register.
    std::vector<int8_t> chain_h_;   // skew chains, row r at offset r(r+1)/2, length r+1
    std::vector<int8_t> w_;         // rows x cols
    std::vector<int8_t> sah_;       // rows x (cols-1)
    std::vector<int32_t> sav_;      // (rows-1) x cols
    std::vector<int32_t> deskew_;   // column c at offset, length cols-c
    std::vector<int32_t> accum_;    // cols
    std::vector<int8_t> round_;     // cols
    std::vector<int8_t> nlf_;       // cols

    std::vector<int> chain_off_;    // per-row offset into chain_h_
    std::vector<int> deskew_off_;   // per-col offset into deskew_

    std::ostream* trace_ = nullptr;
};

}  // namespace seusim
