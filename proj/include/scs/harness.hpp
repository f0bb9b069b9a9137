#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scs/config.hpp"
#include "scs/sharing.hpp"

namespace scs {

// Serial reference loop over trial indices.
void for_each_trial_serial(int trials, const std::function<void(int)>& body);

// OpenMP worker pool when built with OpenMP and threads > 1, otherwise the
// serial loop. The body must only write to trial-owned slots; exceptions are
// captured and rethrown after the loop.
void for_each_trial(int trials, int threads, const std::function<void(int)>& body);

// One sweep grid point: either an SNR from snr_db_grid or an antenna count
// from t_grid (then t1 = t2 = t at the single configured SNR).
struct GridPoint {
    int index = 0;
    double snr_db = 0.0;
    int t1 = 0;
    int t2 = 0;
};

std::vector<GridPoint> sweep_grid(const ExperimentConfig& cfg);

struct ResultRow {
    int trial = 0;
    Scheme scheme = Scheme::SingleUserFullChannel;
    int grid_index = 0;
    int t = 0;  // t2 of the grid point
    double snr_db = 0.0;
    uint64_t trial_seed = 0;  // RNG substream id of (trial, grid point)
    double rate_user1 = 0.0;
    double rate_user2 = 0.0;
    double residual_interference = 0.0;
    int learning_cycles = 0;
};

struct AggregateRow {
    Scheme scheme = Scheme::SingleUserFullChannel;
    int grid_index = 0;
    int t = 0;
    double snr_db = 0.0;
    int trials = 0;
    double mean_rate_user1 = 0.0;
    double mean_rate_user2 = 0.0;
    // per-trial rate / single-user rate, averaged over trials
    double mean_ratio_user1 = 0.0;
    double mean_ratio_user2 = 0.0;
    double mean_ratio = 0.0;  // user average
    double mean_residual_interference = 0.0;
    double mean_learning_cycles = 0.0;
};

struct SweepResult {
    std::vector<ResultRow> rows;  // sorted by (trial, scheme, grid point)
    std::vector<AggregateRow> aggregates;
};

// RNG substream id for one (trial, grid point) cell.
uint64_t substream_id(int trial, int grid_index);

SweepResult run_sweep(const ExperimentConfig& cfg);

void write_raw_csv(const ExperimentConfig& cfg, const SweepResult& result,
                   std::ostream& out);
void write_aggregate_csv(const ExperimentConfig& cfg, const SweepResult& result,
                         std::ostream& out);

// "results.csv" -> "results_agg.csv"
std::string aggregate_path(const std::string& raw_path);

struct LearnResult {
    LearnedGram learned;
    ComplexMatrix g_true;         // unscaled interference Gram H12* H12
    ComplexMatrix g_hat_normalized;  // g_hat / g_hat(0,0)
    Precoder null_basis;
    double relative_error = 0.0;  // between (1,1)-normalized learned and true Grams
};

LearnResult run_learn(const ExperimentConfig& cfg);

struct ValidationArm {
    std::string name;
    bool expected_pass = true;  // negative controls expect a failure
    bool behaved = false;       // arm matched its expectation
    std::string detail;
};

std::vector<ValidationArm> run_validation(const ExperimentConfig& cfg);

// CLI entry points. Diagnostics and tables go to `out`; files are written to
// cfg.output_path. Exit codes: 0 success, 1 validation failure, 2 config
// error, 3 runtime error (mapped by the caller for exceptions).
int cli_learn(const ExperimentConfig& cfg, std::ostream& out);
int cli_sweep(const ExperimentConfig& cfg, std::ostream& out);
int cli_validate(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace scs
