#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "seusim/quant.hpp"

namespace seusim {

// Functional reference model of the accelerator pipeline. Not cycle
// accurate; the cycle simulator is checked against this bit for bit.

using NlfTable = std::array<int8_t, 256>;

/// 256-entry table realizing max(x, 0). Indexed by the uint8 bit pattern.
NlfTable relu_table();

inline int8_t nlf_lookup(const NlfTable& table, int8_t x) {
    return table[static_cast<uint8_t>(x)];
}

/// Weight-stationary tile: R x C int8 weights (row major), per-column
/// int32 biases, and the fixed requantization shift.
struct Tile {
    int rows = 0;
    int cols = 0;
    std::vector<int8_t> weights;  // rows * cols, row major
    std::vector<int32_t> biases;  // cols
    ShiftAmount shift;

    int8_t weight(int r, int c) const { return weights[static_cast<size_t>(r) * cols + c]; }
};

using ActivationVector = std::vector<int8_t>;  // length rows
using OutputVector = std::vector<int8_t>;      // length cols

/// y_c = b_c + sum over passes and rows of a_r * w_rc, wrapping int32.
std::vector<int32_t> gemm_accumulate(const Tile& tile, std::span<const ActivationVector> acts);

/// Complete fault-free pipeline: gemm -> round/shift/clip -> NLF.
OutputVector golden_forward(const Tile& tile, std::span<const ActivationVector> acts,
                            const NlfTable& nlf);

inline int32_t wrap_add(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) + static_cast<uint32_t>(b));
}

inline int32_t wrap_mac(int32_t psum, int8_t a, int8_t w) {
    return wrap_add(psum, static_cast<int32_t>(a) * static_cast<int32_t>(w));
}

}  // namespace seusim
