#include "seusim/ffregistry.hpp"

#include <stdexcept>
#include <string>

namespace seusim {

namespace {
constexpr std::array<std::string_view, kGroupCount> kNames = {
    "sa-reg-ffchain-h", "w-reg",     "sa-reg-h",  "sa-reg-v",
    "sa-reg-ffchain-v", "accum-reg", "round-reg", "nlf-reg",
};
}

std::string_view group_name(RegGroup g) { return kNames[static_cast<size_t>(g)]; }

RegGroup group_from_name(std::string_view name) {
    for (int i = 0; i < kGroupCount; ++i)
        if (kNames[static_cast<size_t>(i)] == name) return static_cast<RegGroup>(i);
    throw std::invalid_argument("unknown register group: " + std::string(name));
}

int group_bit_width(RegGroup g) {
    switch (g) {
        case RegGroup::SaRegV:
        case RegGroup::SaRegFfchainV:
        case RegGroup::AccumReg:
            return 32;
        default:
            return 8;
    }
}

Registry::Registry(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Registry: dimensions must be >= 1");

    auto emit = [&](RegGroup g, int r, int c, int pos) {
        int width = group_bit_width(g);
        for (int b = 0; b < width; ++b)
            ids_.push_back(FlipFlopId{g, r, c, pos, b});
        census_.bits_per_group[static_cast<size_t>(g)] += width;
        census_.total_bits += width;
    };

    // Input skew chains: row r is delayed by r+1 registers.
    for (int r = 0; r < rows; ++r)
        for (int i = 0; i <= r; ++i) emit(RegGroup::SaRegFfchainH, r, 0, i);
    // One stationary weight register per MAC.
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) emit(RegGroup::WReg, r, c, 0);
    // Activation register between MAC (r,c) and (r,c+1).
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols - 1; ++c) emit(RegGroup::SaRegH, r, c, 0);
    // Partial-sum register between MAC (r,c) and (r+1,c).
    for (int r = 0; r < rows - 1; ++r)
        for (int c = 0; c < cols; ++c) emit(RegGroup::SaRegV, r, c, 0);
    // Output deskew chains: column c drains through C-c registers.
    for (int c = 0; c < cols; ++c)
        for (int i = 0; i < cols - c; ++i) emit(RegGroup::SaRegFfchainV, 0, c, i);
    for (int c = 0; c < cols; ++c) emit(RegGroup::AccumReg, 0, c, 0);
    for (int c = 0; c < cols; ++c) emit(RegGroup::RoundReg, 0, c, 0);
    for (int c = 0; c < cols; ++c) emit(RegGroup::NlfReg, 0, c, 0);
}

}  // namespace seusim
