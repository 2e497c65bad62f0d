// Timing comparison of the serial reference drivers against the OpenMP
// kernels, on the two replication loops that dominate real runs.

#include "mss/bootstrap.hpp"
#include "mss/rng.hpp"
#include "mss/simulation.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

double time_once(const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

double best_of(int repeats, const std::function<void()>& body) {
    double best = time_once(body);
    for (int r = 1; r < repeats; ++r) best = std::min(best, time_once(body));
    return best;
}

}  // namespace

int main() {
    const int threads = omp_get_max_threads();
    std::printf("workers available: %d\n\n", threads);

    {
        mss::SimConfig config;
        config.benchmark_count = 3;
        config.redundant_count = 5;
        config.T = 300;
        auto rng = mss::rng::make_stream(1, mss::rng::StreamKind::Panel, 0);
        const auto panel = mss::simulate_var_garch(config, rng);
        const auto plan = mss::make_block_plan(panel.T(), mss::default_block_len(panel.T()));
        const int B = 2000;

        mss::BootstrapDraws serial_draws, parallel_draws;
        const double serial = best_of(3, [&] {
            serial_draws = mss::bootstrap_statistics_serial(panel, plan, B, 7);
        });
        const double parallel = best_of(3, [&] {
            parallel_draws = mss::bootstrap_statistics(panel, plan, B, 7, threads);
        });
        const bool identical =
            (serial_draws.m_boot - parallel_draws.m_boot).cwiseAbs().maxCoeff() == 0.0;

        std::printf("bootstrap_statistics  (T=%d, d=%d, B=%d)\n", panel.T(), panel.d(), B);
        std::printf("  serial reference : %8.3f s\n", serial);
        std::printf("  openmp kernel    : %8.3f s   speedup %.2fx   identical: %s\n\n",
                    parallel, serial / parallel, identical ? "yes" : "NO");
        if (!identical) return 1;
    }

    {
        mss::SimConfig config;
        config.benchmark_count = 2;
        config.redundant_count = 3;
        config.T = 240;
        config.reps = 60;
        config.B = 500;
        config.seed = 11;

        mss::SimResult serial_result, parallel_result;
        const double serial =
            best_of(2, [&] { serial_result = mss::run_experiment_serial(config); });
        const double parallel =
            best_of(2, [&] { parallel_result = mss::run_experiment(config, threads); });
        const bool identical =
            serial_result.proposed.p_contain == parallel_result.proposed.p_contain &&
            serial_result.proposed.p_exact == parallel_result.proposed.p_exact &&
            serial_result.oracle.p_contain == parallel_result.oracle.p_contain &&
            serial_result.oracle.p_exact == parallel_result.oracle.p_exact;

        std::printf("run_experiment        (%s, T=%d, reps=%d, B=%d)\n",
                    config.panel_id().c_str(), config.T, config.reps, config.B);
        std::printf("  serial reference : %8.3f s\n", serial);
        std::printf("  openmp kernel    : %8.3f s   speedup %.2fx   identical: %s\n",
                    parallel, serial / parallel, identical ? "yes" : "NO");
        if (!identical) return 1;
    }

    return 0;
}
