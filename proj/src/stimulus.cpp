#include "seusim/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "seusim/rng.hpp"

namespace seusim {

namespace {
// Substream salts; one per independent draw purpose.
constexpr uint64_t kSaltCalibA = 1;
constexpr uint64_t kSaltCalibW = 2;
constexpr uint64_t kSaltCalibY = 3;
constexpr uint64_t kSaltStimulus = 4;
constexpr uint64_t kSaltDistCheck = 6;

int32_t quantize_bias(double u, Pow2Scale s_a, Pow2Scale s_w) {
    // Bias scaled by 1/(s_a*s_w), rounded half away from zero.
    double scaled = std::ldexp(u, -(s_a.exponent + s_w.exponent));
    long long v = std::llround(scaled);
    if (v > INT32_MAX) return INT32_MAX;
    if (v < INT32_MIN) return INT32_MIN;
    return static_cast<int32_t>(v);
}
}  // namespace

Calibration calibrate_workload(int rows, int cols, int samples, uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("calibrate_workload: bad dimensions");
    if (samples < 1000) throw std::invalid_argument("calibrate_workload: need >= 1000 samples");

    std::vector<double> buf(static_cast<size_t>(samples));

    Rng rng_a = Rng::substream(seed, 0, kSaltCalibA);
    for (auto& v : buf) v = rng_a.normal();
    Pow2Scale s_a = calibrate_3sigma(buf);

    Rng rng_w = Rng::substream(seed, 0, kSaltCalibW);
    for (auto& v : buf) v = rng_w.normal();
    Pow2Scale s_w = calibrate_3sigma(buf);

    // Output scale from fresh real-valued GEMM outputs, bias included.
    Rng rng_y = Rng::substream(seed, 0, kSaltCalibY);
    double bias_range = 1.0 / std::sqrt(static_cast<double>(rows));
    for (auto& v : buf) {
        double y = rng_y.uniform(-bias_range, bias_range);
        for (int r = 0; r < rows; ++r) y += rng_y.normal() * rng_y.normal();
        v = y;
    }
    Pow2Scale s_y = calibrate_3sigma(buf);

    return Calibration{s_a, s_w, s_y, scale_to_shift(s_a, s_w, s_y)};
}

Stimulus generate_stimulus(const StimulusParams& params, uint64_t iteration) {
    const int R = params.rows, C = params.cols, P = params.passes;
    Rng rng = Rng::substream(params.master_seed, iteration, kSaltStimulus);

    Stimulus st;
    st.iteration = iteration;
    st.tile.rows = R;
    st.tile.cols = C;
    st.tile.shift = params.cal.shift;
    st.tile.weights.resize(static_cast<size_t>(R) * C);
    for (auto& w : st.tile.weights) w = quantize_to_int8(rng.normal(), params.cal.s_w);
    st.acts.resize(P);
    for (auto& vec : st.acts) {
        vec.resize(R);
        for (auto& a : vec) a = quantize_to_int8(rng.normal(), params.cal.s_a);
    }
    // PyTorch linear-layer init, j = contraction length of the iteration.
    double bias_range = 1.0 / std::sqrt(static_cast<double>(R) * (P > 1 ? P : 1));
    st.tile.biases.resize(C);
    for (auto& b : st.tile.biases)
        b = quantize_bias(rng.uniform(-bias_range, bias_range), params.cal.s_a, params.cal.s_w);
    return st;
}

DistributionSummary empirical_distribution_check(const StimulusParams& params, int64_t n) {
    if (n < 1) throw std::invalid_argument("empirical_distribution_check: n must be >= 1");
    Rng rng = Rng::substream(params.master_seed, 0, kSaltDistCheck);

    auto stream = [&](Pow2Scale s, double& mean, double& sigma, int64_t& clipped) {
        double sum = 0.0, sum2 = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            double x = rng.normal();
            double q = std::ldexp(x, -s.exponent);
            if (q >= 127.5 || q < -128.5) ++clipped;
            double deq = std::ldexp(static_cast<double>(quantize_to_int8(x, s)), s.exponent);
            sum += deq;
            sum2 += deq * deq;
        }
        mean = sum / static_cast<double>(n);
        sigma = std::sqrt(std::max(0.0, sum2 / static_cast<double>(n) - mean * mean));
    };

    DistributionSummary out;
    out.n = n;
    int64_t clipped = 0;
    stream(params.cal.s_w, out.weight_mean, out.weight_sigma, clipped);
    stream(params.cal.s_a, out.act_mean, out.act_sigma, clipped);
    out.clip_rate = static_cast<double>(clipped) / static_cast<double>(2 * n);
    return out;
}

}  // namespace seusim
