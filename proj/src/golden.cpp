#include "seusim/golden.hpp"

#include <stdexcept>

namespace seusim {

NlfTable relu_table() {
    NlfTable t{};
    for (int i = 0; i < 256; ++i) {
        int8_t x = static_cast<int8_t>(static_cast<uint8_t>(i));
        t[i] = x > 0 ? x : 0;
    }
    return t;
}

std::vector<int32_t> gemm_accumulate(const Tile& tile, std::span<const ActivationVector> acts) {
    if (acts.empty()) throw std::invalid_argument("gemm_accumulate: need at least one pass");
    for (const auto& a : acts)
        if (static_cast<int>(a.size()) != tile.rows)
            throw std::invalid_argument("gemm_accumulate: activation length mismatch");

    std::vector<int32_t> acc(tile.biases.begin(), tile.biases.end());
    for (const auto& a : acts)
        for (int r = 0; r < tile.rows; ++r)
            for (int c = 0; c < tile.cols; ++c)
                acc[c] = wrap_mac(acc[c], a[r], tile.weight(r, c));
    return acc;
}

OutputVector golden_forward(const Tile& tile, std::span<const ActivationVector> acts,
                            const NlfTable& nlf) {
    std::vector<int32_t> acc = gemm_accumulate(tile, acts);
    OutputVector out(tile.cols);
    for (int c = 0; c < tile.cols; ++c)
        out[c] = nlf_lookup(nlf, round_shift_clip(acc[c], tile.shift));
    return out;
}

}  // namespace seusim
