#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace seusim {

// Enumeration of every datapath flip-flop bit in the modeled accelerator,
// grouped the way the sensitivity analysis reports them. Control and
// memory cells are out of scope; where an external FF inventory must be
// matched, the count is taken as an explicit parameter instead (see
// reliability).

enum class RegGroup : uint8_t {
    SaRegFfchainH = 0,  // activation input skew chains, 8 bit
    WReg,               // stationary weight registers, 8 bit
    SaRegH,             // activation registers between MAC columns, 8 bit
    SaRegV,             // partial-sum registers between MAC rows, 32 bit
    SaRegFfchainV,      // output deskew chains, 32 bit
    AccumReg,           // per-column accumulators, 32 bit
    RoundReg,           // per-column requantized results, 8 bit
    NlfReg,             // per-column NLF outputs, 8 bit
};

inline constexpr int kGroupCount = 8;

std::string_view group_name(RegGroup g);
/// Parses the canonical dashed name ("sa-reg-ffchain-h", ...). Throws on
/// unknown names.
RegGroup group_from_name(std::string_view name);
int group_bit_width(RegGroup g);

/// Address of one register bit: (group, row, col, position in chain, bit).
struct FlipFlopId {
    RegGroup group{};
    int row = 0;
    int col = 0;
    int chain_pos = 0;  // 0 when the group has no chain dimension
    int bit = 0;        // 0 = LSB

    friend bool operator==(const FlipFlopId&, const FlipFlopId&) = default;
};

struct RegistryCensus {
    std::array<int64_t, kGroupCount> bits_per_group{};
    int64_t total_bits = 0;
};

/// Immutable, canonically ordered FF enumeration for an R x C array.
class Registry {
public:
    Registry(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RegistryCensus& census() const { return census_; }
    int64_t total_bits() const { return census_.total_bits; }

    /// Canonical index -> FF id. The ordering is group, then row-major
    /// register order, then bit 0..width-1; stable across runs.
    const FlipFlopId& at(int64_t index) const { return ids_[static_cast<size_t>(index)]; }
    const std::vector<FlipFlopId>& all() const { return ids_; }

private:
    int rows_;
    int cols_;
    std::vector<FlipFlopId> ids_;
    RegistryCensus census_;
};

}  // namespace seusim
