#include "seusim/reliability.hpp"

#include <cmath>
#include <stdexcept>

namespace seusim {

double lambda_per_cycle(const SerContext& ctx) {
    if (ctx.ser_per_ff_day <= 0.0 || ctx.f_clock_hz <= 0.0 || ctx.n_ff <= 0)
        throw std::invalid_argument("lambda_per_cycle: all inputs must be positive");
    return static_cast<double>(ctx.n_ff) * (ctx.ser_per_ff_day / 86400.0) / ctx.f_clock_hz;
}

double poisson_pk(double lambda, int k) {
    if (k < 0) throw std::invalid_argument("poisson_pk: k must be >= 0");
    if (lambda < 0.0) throw std::invalid_argument("poisson_pk: lambda must be >= 0");
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    // log space; values like lambda^2/2 at lambda ~ 1e-17 underflow a
    // naive power-first evaluation's intermediate products.
    double log_p = static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(k + 1.0);
    return std::exp(log_p);
}

SeuTable seu_table(const std::vector<SerContext>& contexts, int k_max) {
    SeuTable t;
    t.contexts = contexts;
    for (const auto& ctx : contexts) t.lambdas.push_back(lambda_per_cycle(ctx));
    t.rows.resize(static_cast<size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k)
        for (double lambda : t.lambdas) t.rows[k].push_back(poisson_pk(lambda, k));
    return t;
}

}  // namespace seusim
