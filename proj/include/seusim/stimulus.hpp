#pragma once

#include <cstdint>
#include <vector>

#include "seusim/golden.hpp"
#include "seusim/quant.hpp"

namespace seusim {

// Constrained-random workload generation: N(0,1) weights and activations
// quantized with 3-sigma power-of-two calibration, PyTorch-style uniform
// bias initialization, and a fixed derived shift.

struct Calibration {
    Pow2Scale s_a;
    Pow2Scale s_w;
    Pow2Scale s_y;
    ShiftAmount shift;
};

struct StimulusParams {
    int rows = 0;
    int cols = 0;
    int passes = 1;
    Calibration cal;
    uint64_t master_seed = 0;
    int calibration_samples = 10000;  // M
};

struct Stimulus {
    Tile tile;
    std::vector<ActivationVector> acts;  // passes vectors of length rows
    uint64_t iteration = 0;
};

/// 3-sigma calibration of s_a, s_w (from M unit normals each) and s_y
/// (from M real-valued GEMM outputs, biases included), then the derived
/// shift. M >= 1000.
Calibration calibrate_workload(int rows, int cols, int samples, uint64_t seed);

/// Pure function of (params.master_seed, iteration); regeneration is
/// bit-identical regardless of generation order.
Stimulus generate_stimulus(const StimulusParams& params, uint64_t iteration);

struct DistributionSummary {
    double weight_mean = 0.0;
    double weight_sigma = 0.0;
    double act_mean = 0.0;
    double act_sigma = 0.0;
    double clip_rate = 0.0;  // fraction of draws saturated by quantization
    int64_t n = 0;
};

/// Sample statistics of the dequantized weight/activation streams; n >= 1.
DistributionSummary empirical_distribution_check(const StimulusParams& params, int64_t n);

}  // namespace seusim
