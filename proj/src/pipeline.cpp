#include "seusim/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace seusim {

Schedule Schedule::of(int rows, int cols, int passes) {
    Schedule s;
    s.stream_first = 1;
    s.stream_last = passes;
    s.arrival_first = rows + cols;
    s.arrival_last = rows + cols + passes - 1;
    s.accum_final = rows + cols + passes;
    s.round_final = rows + cols + passes + 1;
    s.readout = rows + cols + passes + 2;
    s.total_cycles = s.readout + 1;
    return s;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      registry_(config_.rows, config_.cols),
      schedule_(Schedule::of(config_.rows, config_.cols, config_.passes)) {
    if (config_.passes < 1) throw std::invalid_argument("Pipeline: passes must be >= 1");
    const int R = config_.rows, C = config_.cols;
    chain_off_.resize(R);
    int off = 0;
    for (int r = 0; r < R; ++r) {
        chain_off_[r] = off;
        off += r + 1;
    }
    chain_h_.assign(off, 0);
    w_.assign(static_cast<size_t>(R) * C, 0);
    sah_.assign(static_cast<size_t>(R) * (C - 1), 0);
    sav_.assign(static_cast<size_t>(R - 1) * C, 0);
    deskew_off_.resize(C);
    off = 0;
    for (int c = 0; c < C; ++c) {
        deskew_off_[c] = off;
        off += C - c;
    }
    deskew_.assign(off, 0);
    accum_.assign(C, 0);
    round_.assign(C, 0);
    nlf_.assign(C, 0);
}

int32_t Pipeline::deskew_tail(int c) const {
    return deskew_[deskew_off_[c] + (config_.cols - c - 1)];
}

void Pipeline::reset_and_preload(const Tile& tile) {
    const int R = config_.rows, C = config_.cols;
    if (tile.rows != R || tile.cols != C || static_cast<int>(tile.biases.size()) != C)
        throw std::invalid_argument("reset_and_preload: tile dimensions do not match config");
    cycle_ = 0;
    std::fill(chain_h_.begin(), chain_h_.end(), static_cast<int8_t>(0));
    std::fill(sah_.begin(), sah_.end(), static_cast<int8_t>(0));
    std::fill(sav_.begin(), sav_.end(), 0);
    std::fill(deskew_.begin(), deskew_.end(), 0);
    std::fill(round_.begin(), round_.end(), static_cast<int8_t>(0));
    std::fill(nlf_.begin(), nlf_.end(), static_cast<int8_t>(0));
    w_.assign(tile.weights.begin(), tile.weights.end());
    accum_.assign(tile.biases.begin(), tile.biases.end());
    trace_cycle();
}

void Pipeline::step_cycle(std::span<const ActivationVector> acts) {
    const int R = config_.rows, C = config_.cols;
    const int t = cycle_ + 1;  // cycle being entered on this edge

    // Previous-state snapshot; every capture below reads only from here.
    const std::vector<int8_t> chain_prev = chain_h_;
    const std::vector<int8_t> sah_prev = sah_;
    const std::vector<int32_t> sav_prev = sav_;
    const std::vector<int32_t> deskew_prev = deskew_;
    const std::vector<int32_t> accum_prev = accum_;
    const std::vector<int8_t> round_prev = round_;

    auto act_in = [&](int r, int c) -> int8_t {
        return c == 0 ? chain_prev[chain_off_[r] + r] : sah_prev[static_cast<size_t>(r) * (C - 1) + (c - 1)];
    };
    auto mac_out = [&](int r, int c) -> int32_t {
        int32_t psum = r == 0 ? 0 : sav_prev[static_cast<size_t>(r - 1) * C + c];
        return wrap_mac(psum, act_in(r, c), w_[static_cast<size_t>(r) * C + c]);
    };

    // Skew chains shift; pass p's vector enters at cycle 1+p.
    int pass = t - 1;
    for (int r = 0; r < R; ++r) {
        for (int i = r; i >= 1; --i)
            chain_h_[chain_off_[r] + i] = chain_prev[chain_off_[r] + i - 1];
        chain_h_[chain_off_[r]] =
            (pass >= 0 && pass < static_cast<int>(acts.size())) ? acts[pass][r] : 0;
    }
    // Activations hop one column per cycle.
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C - 1; ++c)
            sah_[static_cast<size_t>(r) * (C - 1) + c] = act_in(r, c);
    // Partial sums move one row down per cycle.
    for (int r = 0; r < R - 1; ++r)
        for (int c = 0; c < C; ++c)
            sav_[static_cast<size_t>(r) * C + c] = mac_out(r, c);
    // Bottom-row results enter the deskew chains.
    for (int c = 0; c < C; ++c) {
        for (int i = C - c - 1; i >= 1; --i)
            deskew_[deskew_off_[c] + i] = deskew_prev[deskew_off_[c] + i - 1];
        deskew_[deskew_off_[c]] = mac_out(R - 1, c);
    }
    // Accumulation is gated to the arrival edges.
    if (t >= schedule_.arrival_first + 1 && t <= schedule_.arrival_last + 1)
        for (int c = 0; c < C; ++c)
            accum_[c] = wrap_add(accum_prev[c], deskew_prev[deskew_off_[c] + (C - c - 1)]);
    // Round and NLF stages re-latch every edge.
    for (int c = 0; c < C; ++c) {
        round_[c] = round_shift_clip(accum_prev[c], config_.shift);
        nlf_[c] = nlf_lookup(config_.nlf, round_prev[c]);
    }

    cycle_ = t;
    trace_cycle();
}

void Pipeline::flip_bit(const FlipFlopId& ff) {
    const int R = config_.rows, C = config_.cols;
    auto check = [](bool ok) {
        if (!ok) throw std::invalid_argument("flip_bit: id outside registry geometry");
    };
    auto flip8 = [&](int8_t& v, int bit) {
        check(bit >= 0 && bit < 8);
        v = static_cast<int8_t>(static_cast<uint8_t>(v) ^ (1u << bit));
    };
    auto flip32 = [&](int32_t& v, int bit) {
        check(bit >= 0 && bit < 32);
        v = static_cast<int32_t>(static_cast<uint32_t>(v) ^ (uint32_t{1} << bit));
    };
    switch (ff.group) {
        case RegGroup::SaRegFfchainH:
            check(ff.row >= 0 && ff.row < R && ff.chain_pos >= 0 && ff.chain_pos <= ff.row);
            flip8(chain_h_[chain_off_[ff.row] + ff.chain_pos], ff.bit);
            break;
        case RegGroup::WReg:
            check(ff.row >= 0 && ff.row < R && ff.col >= 0 && ff.col < C);
            flip8(w_[static_cast<size_t>(ff.row) * C + ff.col], ff.bit);
            break;
        case RegGroup::SaRegH:
            check(ff.row >= 0 && ff.row < R && ff.col >= 0 && ff.col < C - 1);
            flip8(sah_[static_cast<size_t>(ff.row) * (C - 1) + ff.col], ff.bit);
            break;
        case RegGroup::SaRegV:
            check(ff.row >= 0 && ff.row < R - 1 && ff.col >= 0 && ff.col < C);
            flip32(sav_[static_cast<size_t>(ff.row) * C + ff.col], ff.bit);
            break;
        case RegGroup::SaRegFfchainV:
            check(ff.col >= 0 && ff.col < C && ff.chain_pos >= 0 && ff.chain_pos < C - ff.col);
            flip32(deskew_[deskew_off_[ff.col] + ff.chain_pos], ff.bit);
            break;
        case RegGroup::AccumReg:
            check(ff.col >= 0 && ff.col < C);
            flip32(accum_[ff.col], ff.bit);
            break;
        case RegGroup::RoundReg:
            check(ff.col >= 0 && ff.col < C);
            flip8(round_[ff.col], ff.bit);
            break;
        case RegGroup::NlfReg:
            check(ff.col >= 0 && ff.col < C);
            flip8(nlf_[ff.col], ff.bit);
            break;
    }
}

Pipeline::IterationResult Pipeline::run_iteration(const Tile& tile,
                                                  std::span<const ActivationVector> acts) {
    if (static_cast<int>(acts.size()) != config_.passes)
        throw std::invalid_argument("run_iteration: need exactly one activation vector per pass");
    reset_and_preload(tile);
    for (int t = 1; t < schedule_.total_cycles; ++t) step_cycle(acts);
    return IterationResult{outputs(), schedule_.total_cycles};
}

void Pipeline::trace_cycle() const {
    if (!trace_) return;
    auto line = [&](RegGroup g, int r, int c, int pos, int64_t v) {
        *trace_ << cycle_ << ' ' << group_name(g) << ' ' << r << ' ' << c << ' ' << pos << ' ' << v
                << '\n';
    };
    const int R = config_.rows, C = config_.cols;
    for (int r = 0; r < R; ++r)
        for (int i = 0; i <= r; ++i)
            line(RegGroup::SaRegFfchainH, r, 0, i, chain_h_[chain_off_[r] + i]);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) line(RegGroup::WReg, r, c, 0, w_[static_cast<size_t>(r) * C + c]);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C - 1; ++c)
            line(RegGroup::SaRegH, r, c, 0, sah_[static_cast<size_t>(r) * (C - 1) + c]);
    for (int r = 0; r < R - 1; ++r)
        for (int c = 0; c < C; ++c) line(RegGroup::SaRegV, r, c, 0, sav_[static_cast<size_t>(r) * C + c]);
    for (int c = 0; c < C; ++c)
        for (int i = 0; i < C - c; ++i)
            line(RegGroup::SaRegFfchainV, 0, c, i, deskew_[deskew_off_[c] + i]);
    for (int c = 0; c < C; ++c) line(RegGroup::AccumReg, 0, c, 0, accum_[c]);
    for (int c = 0; c < C; ++c) line(RegGroup::RoundReg, 0, c, 0, round_[c]);
    for (int c = 0; c < C; ++c) line(RegGroup::NlfReg, 0, c, 0, nlf_[c]);
}

}  // namespace seusim
