#include "seusim/quant.hpp"

#include <cmath>
#include <stdexcept>

namespace seusim {

double Pow2Scale::value() const { return std::ldexp(1.0, exponent); }

int8_t clip_int8(int64_t x) {
    if (x < kInt8Lo) return static_cast<int8_t>(kInt8Lo);
    if (x > kInt8Hi) return static_cast<int8_t>(kInt8Hi);
    return static_cast<int8_t>(x);
}

int8_t quantize_to_int8(double x, Pow2Scale s) {
    // x / 2^n computed exactly as x * 2^-n (power-of-two scaling is exact).
    double scaled = std::ldexp(x, -s.exponent);
    if (scaled >= static_cast<double>(kInt8Hi)) return static_cast<int8_t>(kInt8Hi);
    if (scaled <= static_cast<double>(kInt8Lo)) return static_cast<int8_t>(kInt8Lo);
    return clip_int8(std::llround(scaled));  // llround: half away from zero
}

double fake_quantize(double x, Pow2Scale s) {
    return std::ldexp(static_cast<double>(quantize_to_int8(x, s)), s.exponent);
}

Pow2Scale calibrate_3sigma(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("calibrate_3sigma: need at least 2 samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    double var = ss / static_cast<double>(samples.size() - 1);
    if (var <= 0.0) throw std::invalid_argument("calibrate_3sigma: degenerate samples (sigma = 0)");
    double target = 3.0 * std::sqrt(var) / 127.0;
    // Smallest n with 2^n >= target, exact at power-of-two boundaries:
    // frexp gives target = m * 2^e with m in [0.5, 1).
    int e = 0;
    double m = std::frexp(target, &e);
    return Pow2Scale{m == 0.5 ? e - 1 : e};
}

ShiftAmount scale_to_shift(Pow2Scale s_a, Pow2Scale s_w, Pow2Scale s_y) {
    int shift = -(s_a.exponent + s_w.exponent - s_y.exponent);
    if (shift < 0 || shift > 31)
        throw std::invalid_argument("scale_to_shift: shift " + std::to_string(shift) +
                                    " does not fit the 5-bit shift input");
    return ShiftAmount{static_cast<unsigned>(shift)};
}

int8_t round_shift_clip(int32_t acc, ShiftAmount s) {
    if (s.value == 0) return clip_int8(acc);
    int64_t half = int64_t{1} << (s.value - 1);
    int64_t shifted = (static_cast<int64_t>(acc) + half) >> s.value;
    return clip_int8(shifted);
}

}  // namespace seusim
