// Throughput comparison of the serial and OpenMP campaign runners on one
// array size. Verifies the two produce identical records before timing.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "seusim/campaign.hpp"
#include "seusim/stimulus.hpp"

using namespace seusim;

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

int main(int argc, char** argv) {
    SizeSpec size{8, 8};
    int64_t iters = 20000;
    if (argc > 1) {
        std::string tok = argv[1];
        auto x = tok.find('x');
        if (x == std::string::npos) {
            std::fprintf(stderr, "usage: seusim_bench [RxC] [iters]\n");
            return 2;
        }
        size = SizeSpec{std::atoi(tok.substr(0, x).c_str()), std::atoi(tok.substr(x + 1).c_str())};
    }
    if (argc > 2) iters = std::atoll(argv[2]);

    CampaignConfig config;
    config.sizes = {size};
    config.iterations = iters;
    config.master_seed = 7;

    Calibration cal = calibrate_workload(size.rows, size.cols, config.calibration_samples,
                                         size_seed(config, size));

    auto t0 = std::chrono::steady_clock::now();
    auto serial = run_injections_serial(config, size, cal, 0, iters);
    double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel = run_injections_parallel(config, size, cal, 0, iters);
    double t_parallel = seconds_since(t0);

    bool identical = serial.size() == parallel.size();
    for (size_t i = 0; identical && i < serial.size(); ++i)
        identical = serial[i].ff == parallel[i].ff && serial[i].cycle == parallel[i].cycle &&
                    serial[i].propagated == parallel[i].propagated &&
                    serial[i].magnitude == parallel[i].magnitude;
    if (!identical) {
        std::fprintf(stderr, "FAIL: serial and parallel runners disagree\n");
        return 1;
    }

    std::printf("size %dx%d, %lld injections\n", size.rows, size.cols,
                static_cast<long long>(iters));
    std::printf("serial:   %8.3f s  (%.0f inj/s)\n", t_serial, iters / t_serial);
    std::printf("parallel: %8.3f s  (%.0f inj/s, speedup %.2fx)\n", t_parallel,
                iters / t_parallel, t_serial / t_parallel);
    return 0;
}
