#pragma once

#include "mss/bootstrap.hpp"
#include "mss/panel.hpp"
#include "mss/stepdown.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mss {

/// One Monte Carlo experiment: K benchmark assets follow a VAR(1) with
/// GARCH(1,1) shocks; N redundant assets are exact weight-sum-one
/// combinations of the benchmark plus their own GARCH shocks.
struct SimConfig {
    int benchmark_count = 1;  // K
    int redundant_count = 7;  // N
    int T = 300;
    double rho = 0.1;
    double mu_level = 0.0;
    int reps = 1000;
    double level = 0.05;
    int B = 1000;
    std::uint64_t seed = 42;
    int burn_in = 500;
    int block_len = 0;  // 0 -> bandwidth rule

    void validate() const;
    std::string panel_id() const;  // e.g. "K3N5"
};

struct EstimatorOutcome {
    double p_contain = 0.0;
    double p_exact = 0.0;
};

struct SimResult {
    EstimatorOutcome proposed;
    EstimatorOutcome oracle;
    int failures = 0;
    int reps_used = 0;
    SimConfig config;
};

/// Autoregressive coefficient matrix a_{ij} = rho^{|i-j|+1}.
Eigen::MatrixXd var_coefficients(int K, double rho);

/// One simulated panel of burn_in + T periods, last T kept. Benchmark
/// columns first (labels K1.., then N1..).
ReturnPanel simulate_var_garch(const SimConfig& config, std::mt19937_64& rng);

/// {0..K-1} by construction of the data-generating process.
std::vector<int> true_mss(const SimConfig& config);

/// Single-pass selection against the bootstrap critical value formed on the
/// true non-member set (zero when that set is empty).
std::vector<int> oracle_estimate(const std::vector<SpanningStat>& stats,
                                 const BootstrapDraws& draws,
                                 const std::vector<int>& true_set, double level);

/// OpenMP kernel over replications; deterministic for a given seed under any
/// thread count.
SimResult run_experiment(const SimConfig& config, int threads = 0);

/// Serial reference driver, kept for testing the parallel kernel.
SimResult run_experiment_serial(const SimConfig& config);

}  // namespace mss
