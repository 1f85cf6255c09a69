#pragma once

#include <cstdint>
#include <vector>

namespace seusim {

// SEU-rate arithmetic: per-FF soft-error rate -> expected upsets per clock
// cycle -> Poisson probabilities of k upsets in one cycle window. Used to
// justify the single-fault-per-iteration model.

struct SerContext {
    double ser_per_ff_day = 0.0;  // SEU / FF / day
    double f_clock_hz = 0.0;
    int64_t n_ff = 0;  // explicit so external netlist counts can be used
};

/// lambda = n_ff * (ser / 86400 s) / f_clock. Throws on non-positive inputs.
double lambda_per_cycle(const SerContext& ctx);

/// lambda^k e^-lambda / k!, evaluated in log space. Throws on k < 0.
double poisson_pk(double lambda, int k);

struct SeuTable {
    std::vector<SerContext> contexts;
    std::vector<double> lambdas;
    // rows[k][i] = P(k SEUs) for contexts[i]
    std::vector<std::vector<double>> rows;
};

SeuTable seu_table(const std::vector<SerContext>& contexts, int k_max);

}  // namespace seusim
