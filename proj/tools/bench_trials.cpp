#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scs/channel.hpp"
#include "scs/harness.hpp"
#include "scs/rng.hpp"
#include "scs/sharing.hpp"

// Times the Monte Carlo trial runner serially vs with the OpenMP pool on a
// sweep-like workload (channel draw + handshake + all four schemes), and
// checks the two runs produce bit-identical rates.
//
// usage: bench_trials [trials] [threads]

using namespace scs;

namespace {

std::vector<double> run_workload(int trials, int threads) {
    std::vector<double> out(static_cast<size_t>(trials) * 2);
    for_each_trial(trials, threads, [&](int trial) {
        Rng rng(99, substream_id(trial, 0));
        const ChannelSet cs = sample_channel_set({4, 2, 4, 2}, 1e-2, 1e-2, 0.1, rng);
        SchemeOptions opt;
        opt.trial_seed = substream_id(trial, 0);
        double r1 = 0.0, r2 = 0.0;
        for (const RateReport& rep : evaluate_schemes(cs, 20.0, opt, rng)) {
            r1 += rep.rate_user1;
            r2 += rep.rate_user2;
        }
        out[2 * static_cast<size_t>(trial)] = r1;
        out[2 * static_cast<size_t>(trial) + 1] = r2;
    });
    return out;
}

double time_run(int trials, int threads, std::vector<double>& out) {
    const auto start = std::chrono::steady_clock::now();
    out = run_workload(trials, threads);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    return dt.count();
}

}  // namespace

int main(int argc, char** argv) {
    const int trials = argc > 1 ? std::atoi(argv[1]) : 2000;
    int threads = argc > 2 ? std::atoi(argv[2]) : 0;
    if (trials < 1) {
        std::fprintf(stderr, "bench_trials: trials must be >= 1\n");
        return 2;
    }
    if (threads <= 0) {
#ifdef _OPENMP
        threads = omp_get_max_threads();
#else
        threads = 1;
#endif
    }

    std::vector<double> serial, parallel;
    const double t_serial = time_run(trials, 1, serial);
    const double t_parallel = time_run(trials, threads, parallel);

    const bool identical = serial == parallel;
    std::printf("trials             %d\n", trials);
    std::printf("serial             %.3f s\n", t_serial);
    std::printf("parallel (%d)      %.3f s\n", threads, t_parallel);
    std::printf("speedup            %.2fx\n", t_parallel > 0.0 ? t_serial / t_parallel : 0.0);
    std::printf("outputs identical  %s\n", identical ? "yes" : "NO");
#ifndef _OPENMP
    std::printf("(built without OpenMP; both runs are serial)\n");
#endif
    return identical ? 0 : 1;
}
