#pragma once

#include <cstdint>
#include <span>

namespace seusim {

// Power-of-two symmetric quantization arithmetic. All scales are carried
// as exact exponents; the value 2^n never goes through a rounded float on
// an arithmetic path.

/// Exact power-of-two scale s = 2^exponent.
struct Pow2Scale {
    int exponent = 0;

    double value() const;

    friend bool operator==(const Pow2Scale&, const Pow2Scale&) = default;
};

/// Right-shift amount for requantization; must fit the 5-bit shift input.
struct ShiftAmount {
    unsigned value = 0;  // [0, 31]

    friend bool operator==(const ShiftAmount&, const ShiftAmount&) = default;
};

inline constexpr int kInt8Lo = -128;
inline constexpr int kInt8Hi = 127;

/// Saturate an integer to [-128, 127].
int8_t clip_int8(int64_t x);

/// clip(round(x / s)), round = half away from zero.
int8_t quantize_to_int8(double x, Pow2Scale s);

/// quantize_to_int8(x, s) * s. Idempotent.
double fake_quantize(double x, Pow2Scale s);

/// Smallest power of two >= 3*sigma/127 over the sample standard deviation.
/// Throws std::invalid_argument on fewer than 2 samples or sigma == 0.
Pow2Scale calibrate_3sigma(std::span<const double> samples);

/// S = log2(s_y / (s_a * s_w)). Throws std::invalid_argument if the exact
/// exponent falls outside [0, 31].
ShiftAmount scale_to_shift(Pow2Scale s_a, Pow2Scale s_w, Pow2Scale s_y);

/// clip((acc + 2^(S-1)) >> S) with an arithmetic shift; S = 0 is a plain
/// clip with no rounding offset. The add-half is evaluated wider than 32
/// bits, so it cannot wrap.
int8_t round_shift_clip(int32_t acc, ShiftAmount s);

}  // namespace seusim
