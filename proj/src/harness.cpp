#include "scs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scs/beacon.hpp"
#include "scs/channel.hpp"
#include "scs/ebcl.hpp"
#include "scs/rng.hpp"

namespace scs {

void for_each_trial_serial(int trials, const std::function<void(int)>& body) {
    for (int t = 0; t < trials; ++t) body(t);
}

void for_each_trial(int trials, int threads, const std::function<void(int)>& body) {
    if (trials < 0) throw std::invalid_argument("for_each_trial: trials must be >= 0");
    if (threads < 1) throw std::invalid_argument("for_each_trial: threads must be >= 1");
#ifdef _OPENMP
    if (threads > 1 && trials > 1) {
        std::exception_ptr error = nullptr;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
        for (int t = 0; t < trials; ++t) {
            try {
                body(t);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for_each_trial_serial(trials, body);
}

std::vector<GridPoint> sweep_grid(const ExperimentConfig& cfg) {
    std::vector<GridPoint> grid;
    if (!cfg.t_grid.empty()) {
        for (size_t i = 0; i < cfg.t_grid.size(); ++i) {
            grid.push_back({static_cast<int>(i), cfg.snr_db_grid[0], cfg.t_grid[i],
                            cfg.t_grid[i]});
        }
    } else {
        for (size_t i = 0; i < cfg.snr_db_grid.size(); ++i) {
            grid.push_back({static_cast<int>(i), cfg.snr_db_grid[i], cfg.t1, cfg.t2});
        }
    }
    return grid;
}

uint64_t substream_id(int trial, int grid_index) {
    return (static_cast<uint64_t>(trial) << 20) | static_cast<uint64_t>(grid_index);
}

namespace {

double snr_to_noise_power(double snr_db) { return 1.0 / std::pow(10.0, snr_db / 10.0); }

void write_header_block(const ExperimentConfig& cfg, const char* kind, std::ostream& out) {
    out << "# scs " << kind << " v1\n";
    out << "# noise_power = tx_power / 10^(snr_db/10) per receive antenna, tx_power = 1\n";
    std::stringstream lines(cfg.canonical());
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << "\n";
}

std::string format_matrix(const ComplexMatrix& m, const std::string& name) {
    std::ostringstream out;
    out << name << ": " << m.rows << "x" << m.cols << "\n";
    for (int r = 0; r < m.rows; ++r) {
        out << " ";
        for (int c = 0; c < m.cols; ++c) {
            out << " (" << format_double(m.at(r, c).real()) << ","
                << format_double(m.at(r, c).imag()) << ")";
        }
        out << "\n";
    }
    return out.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    return f;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<GridPoint> grid = sweep_grid(cfg);
    if (grid.size() >= (1u << 20)) {
        throw ConfigError("sweep grid too large for substream packing");
    }
    const int n_grid = static_cast<int>(grid.size());
    const int n_schemes = 1 + static_cast<int>(cfg.schemes.size());
    const double gain = cfg.interference_gain();

    SweepResult result;
    result.rows.resize(static_cast<size_t>(cfg.trials) * n_grid * n_schemes);
    auto slot = [&](int trial, int g, int k) {
        return (static_cast<size_t>(trial) * n_grid + g) * n_schemes + k;
    };

    for_each_trial(cfg.trials, cfg.threads, [&](int trial) {
        for (const GridPoint& g : grid) {
            const uint64_t sub = substream_id(trial, g.index);
            Rng rng(cfg.seed, sub);
            const AntennaConfig ant{g.t1, cfg.r1, g.t2, cfg.r2};
            const double sigma2 = snr_to_noise_power(g.snr_db);
            const ChannelSet cs = sample_channel_set(ant, sigma2, sigma2, gain, rng);

            SchemeOptions opt;
            opt.partial_extra = cfg.partial_extra;
            opt.fdd_power_boost = cfg.fdd_power_boost;
            opt.beacon_mode = cfg.beacon_mode;
            opt.cycle_length_n = cfg.cycle_length_n;
            opt.alpha = cfg.alpha;
            opt.trial_seed = sub;
            opt.schemes = cfg.schemes;
            const std::vector<RateReport> reps = evaluate_schemes(cs, g.snr_db, opt, rng);

            for (size_t k = 0; k < reps.size(); ++k) {
                ResultRow row;
                row.trial = trial;
                row.scheme = reps[k].scheme;
                row.grid_index = g.index;
                row.t = g.t2;
                row.snr_db = g.snr_db;
                row.trial_seed = sub;
                row.rate_user1 = reps[k].rate_user1;
                row.rate_user2 = reps[k].rate_user2;
                row.residual_interference = reps[k].residual_interference;
                row.learning_cycles = reps[k].learning_cycles;
                result.rows[slot(trial, g.index, static_cast<int>(k))] = row;
            }
        }
    });

    // Aggregates straight from the slot layout, before the rows are re-sorted.
    for (const GridPoint& g : grid) {
        for (int k = 0; k < n_schemes; ++k) {
            AggregateRow agg;
            agg.scheme = result.rows[slot(0, g.index, k)].scheme;
            agg.grid_index = g.index;
            agg.t = g.t2;
            agg.snr_db = g.snr_db;
            agg.trials = cfg.trials;
            double sum_ratio_1 = 0.0, sum_ratio_2 = 0.0;
            int n_ratio_1 = 0, n_ratio_2 = 0;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                const ResultRow& row = result.rows[slot(trial, g.index, k)];
                const ResultRow& single = result.rows[slot(trial, g.index, 0)];
                agg.mean_rate_user1 += row.rate_user1;
                agg.mean_rate_user2 += row.rate_user2;
                agg.mean_residual_interference += row.residual_interference;
                agg.mean_learning_cycles += row.learning_cycles;
                if (single.rate_user1 > 0.0) {
                    sum_ratio_1 += row.rate_user1 / single.rate_user1;
                    ++n_ratio_1;
                }
                if (single.rate_user2 > 0.0) {
                    sum_ratio_2 += row.rate_user2 / single.rate_user2;
                    ++n_ratio_2;
                }
            }
            agg.mean_rate_user1 /= cfg.trials;
            agg.mean_rate_user2 /= cfg.trials;
            agg.mean_residual_interference /= cfg.trials;
            agg.mean_learning_cycles /= cfg.trials;
            agg.mean_ratio_user1 = n_ratio_1 ? sum_ratio_1 / n_ratio_1 : 0.0;
            agg.mean_ratio_user2 = n_ratio_2 ? sum_ratio_2 / n_ratio_2 : 0.0;
            agg.mean_ratio = (n_ratio_1 + n_ratio_2)
                                 ? (sum_ratio_1 + sum_ratio_2) / (n_ratio_1 + n_ratio_2)
                                 : 0.0;
            result.aggregates.push_back(agg);
        }
    }

    std::sort(result.rows.begin(), result.rows.end(),
              [](const ResultRow& a, const ResultRow& b) {
                  if (a.trial != b.trial) return a.trial < b.trial;
                  if (a.scheme != b.scheme) return a.scheme < b.scheme;
                  return a.grid_index < b.grid_index;
              });
    std::sort(result.aggregates.begin(), result.aggregates.end(),
              [](const AggregateRow& a, const AggregateRow& b) {
                  if (a.scheme != b.scheme) return a.scheme < b.scheme;
                  return a.grid_index < b.grid_index;
              });
    return result;
}

void write_raw_csv(const ExperimentConfig& cfg, const SweepResult& result,
                   std::ostream& out) {
    write_header_block(cfg, "sweep raw rows", out);
    out << "trial,scheme,t,snr_db,trial_seed,rate_user1,rate_user2,"
           "residual_interference,learning_cycles\n";
    for (const ResultRow& row : result.rows) {
        out << row.trial << "," << scheme_name(row.scheme) << "," << row.t << ","
            << format_double(row.snr_db) << "," << row.trial_seed << ","
            << format_double(row.rate_user1) << "," << format_double(row.rate_user2)
            << "," << format_double(row.residual_interference) << ","
            << row.learning_cycles << "\n";
    }
}

void write_aggregate_csv(const ExperimentConfig& cfg, const SweepResult& result,
                         std::ostream& out) {
    write_header_block(cfg, "sweep aggregates", out);
    out << "scheme,t,snr_db,trials,mean_rate_user1,mean_rate_user2,mean_ratio_user1,"
           "mean_ratio_user2,mean_ratio,mean_residual_interference,"
           "mean_learning_cycles\n";
    for (const AggregateRow& a : result.aggregates) {
        out << scheme_name(a.scheme) << "," << a.t << "," << format_double(a.snr_db)
            << "," << a.trials << "," << format_double(a.mean_rate_user1) << ","
            << format_double(a.mean_rate_user2) << ","
            << format_double(a.mean_ratio_user1) << ","
            << format_double(a.mean_ratio_user2) << "," << format_double(a.mean_ratio)
            << "," << format_double(a.mean_residual_interference) << ","
            << format_double(a.mean_learning_cycles) << "\n";
    }
}

std::string aggregate_path(const std::string& raw_path) {
    const size_t dot = raw_path.find_last_of('.');
    const size_t slash = raw_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return raw_path + "_agg";
    }
    return raw_path.substr(0, dot) + "_agg" + raw_path.substr(dot);
}

LearnResult run_learn(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.snr_db_grid.size() != 1) {
        throw ConfigError("learn uses a single snr_db_grid entry");
    }
    Rng rng(cfg.seed, 0);
    const double sigma2 = snr_to_noise_power(cfg.snr_db_grid[0]);
    const ChannelSet cs =
        sample_channel_set(cfg.antennas(), sigma2, sigma2, cfg.interference_gain(), rng);

    std::optional<ComplexMatrix> projector;
    ComplexMatrix target = matmul(conj_transpose(cs.h12), cs.h12);
    if (beacon_mode_is_projected(cfg.beacon_mode)) {
        projector = column_space_projector(cs.h11, 1e-8);
        target = matmul(conj_transpose(cs.h12), matmul(*projector, cs.h12));
    }

    BeaconEmitter emitter(cs, cfg.beacon_mode, cfg.alpha, cfg.cycle_length_n, rng.fork(1),
                          std::move(projector));
    LearnResult res;
    res.learned = run_learning_session(emitter, cfg.t2);
    res.g_true = target;
    res.null_basis = null_space(res.learned);

    const double ghat_11 = res.learned.g_hat.rows > 0 ? res.learned.g_hat.at(0, 0).real() : 0.0;
    const double gtrue_11 = res.g_true.rows > 0 ? res.g_true.at(0, 0).real() : 0.0;
    if (ghat_11 > 1e-300 && gtrue_11 > 1e-300) {
        res.g_hat_normalized = scale(res.learned.g_hat, 1.0 / ghat_11);
        const ComplexMatrix true_normalized = scale(res.g_true, 1.0 / gtrue_11);
        const double denom = frobenius_norm(true_normalized);
        res.relative_error =
            frobenius_norm(subtract(res.g_hat_normalized, true_normalized)) /
            (denom > 0.0 ? denom : 1.0);
    } else {
        res.g_hat_normalized = res.learned.g_hat;
        const double denom = frobenius_norm(res.g_true);
        res.relative_error = frobenius_norm(subtract(res.learned.g_hat, res.g_true)) /
                             (denom > 0.0 ? denom : 1.0);
    }
    return res;
}

std::vector<ValidationArm> run_validation(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.trials < 1000) {
        throw ConfigError("validate requires trials >= 1000 per arm");
    }
    if (cfg.t1 < cfg.r1 + cfg.r2 || cfg.t2 < cfg.r2 + cfg.r1) {
        throw ConfigError(
            "validate requires t1 >= r1 + r2 and t2 >= r2 + r1 for the positive arm");
    }

    std::vector<ValidationArm> arms;
    {
        ValidationArm arm;
        arm.name = "dof_preserved";
        arm.expected_pass = true;
        Rng rng(cfg.seed, 100);
        const DofReport rep = validate_dof_preservation(cfg.antennas(), cfg.trials, rng);
        arm.behaved = rep.violations_user1 == 0 && rep.violations_user2 == 0;
        std::ostringstream d;
        d << "rank violations user1=" << rep.violations_user1
          << " user2=" << rep.violations_user2 << " over " << rep.trials << " trials";
        arm.detail = d.str();
        arms.push_back(arm);
    }
    {
        ValidationArm arm;
        arm.name = "dof_negative_control";
        arm.expected_pass = false;
        const AntennaConfig narrow{cfg.r1 + cfg.r2 - 1, cfg.r1, cfg.t2, cfg.r2};
        Rng rng(cfg.seed, 101);
        const DofReport rep = validate_dof_preservation(narrow, cfg.trials, rng);
        arm.behaved = rep.violations_user1 >= (9 * cfg.trials) / 10;
        std::ostringstream d;
        d << "t1=" << narrow.t1 << " < r1+r2: rank violations user1="
          << rep.violations_user1 << " over " << rep.trials << " trials";
        arm.detail = d.str();
        arms.push_back(arm);
    }
    {
        ValidationArm arm;
        arm.name = "zmsw_effective_channel";
        arm.expected_pass = true;
        Rng rng(cfg.seed, 102);
        const ZmswReport rep =
            validate_zmsw_effective_channel(cfg.antennas(), cfg.trials, rng);
        arm.behaved = rep.pass_all;
        std::ostringstream d;
        d << "max|mean|=" << format_double(rep.max_mean_abs) << " (<= "
          << format_double(rep.mean_threshold) << "), var range ["
          << format_double(rep.min_variance) << "," << format_double(rep.max_variance)
          << "] (in [" << format_double(rep.var_lo) << "," << format_double(rep.var_hi)
          << "]), max|corr|=" << format_double(rep.max_corr_abs) << " (<= "
          << format_double(rep.corr_threshold) << "), ks=" << format_double(rep.ks_stat)
          << " (<= " << format_double(rep.ks_threshold) << ")";
        arm.detail = d.str();
        arms.push_back(arm);
    }
    return arms;
}

int cli_learn(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.output_path.empty()) {
        throw ConfigError("learn requires output_path (or --out)");
    }
    const LearnResult res = run_learn(cfg);

    std::ofstream f = open_output(cfg.output_path);
    write_header_block(cfg, "learn session", f);
    f << "measurement_count=" << res.learned.measurement_count << "\n";
    f << "null_dim=" << res.null_basis.t.cols << "\n";
    f << "null_tol=" << format_double(res.learned.null_tol) << "\n";
    f << "relative_error=" << format_double(res.relative_error) << "\n";
    f << format_matrix(res.g_hat_normalized, "g_hat_normalized");
    f << format_matrix(res.g_true, "g_true");
    f << format_matrix(res.null_basis.t, "null_basis");
    f << "residual_levels=";
    for (size_t i = 0; i < res.null_basis.residual_levels.size(); ++i) {
        if (i) f << ",";
        f << format_double(res.null_basis.residual_levels[i]);
    }
    f << "\n";
    if (!f) throw std::runtime_error("write failed for '" + cfg.output_path + "'");

    out << "learn: " << beacon_mode_name(cfg.beacon_mode) << " beacon, "
        << res.learned.measurement_count << " beacon interactions, null_dim="
        << res.null_basis.t.cols << ", relative_error=" << format_double(res.relative_error)
        << ", wrote " << cfg.output_path << "\n";
    return 0;
}

int cli_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.output_path.empty()) {
        throw ConfigError("sweep requires output_path (or --out)");
    }
    const SweepResult result = run_sweep(cfg);

    const std::string agg_path = aggregate_path(cfg.output_path);
    {
        std::ofstream raw = open_output(cfg.output_path);
        write_raw_csv(cfg, result, raw);
        if (!raw) throw std::runtime_error("write failed for '" + cfg.output_path + "'");
    }
    {
        std::ofstream agg = open_output(agg_path);
        write_aggregate_csv(cfg, result, agg);
        if (!agg) throw std::runtime_error("write failed for '" + agg_path + "'");
    }
    out << "sweep: " << result.rows.size() << " rows over " << sweep_grid(cfg).size()
        << " grid points, wrote " << cfg.output_path << " and " << agg_path << "\n";
    return 0;
}

int cli_validate(const ExperimentConfig& cfg, std::ostream& out) {
    const std::vector<ValidationArm> arms = run_validation(cfg);

    std::ostringstream table;
    table << std::left << std::setw(24) << "arm" << std::setw(18) << "expectation"
          << std::setw(8) << "result" << "detail\n";
    bool all_ok = true;
    for (const ValidationArm& arm : arms) {
        all_ok = all_ok && arm.behaved;
        table << std::left << std::setw(24) << arm.name << std::setw(18)
              << (arm.expected_pass ? "pass" : "fail (control)") << std::setw(8)
              << (arm.behaved ? "ok" : "FAIL") << arm.detail << "\n";
    }
    table << (all_ok ? "validate: PASS" : "validate: FAIL") << "\n";

    out << table.str();
    if (!cfg.output_path.empty()) {
        std::ofstream f = open_output(cfg.output_path);
        f << table.str();
        if (!f) throw std::runtime_error("write failed for '" + cfg.output_path + "'");
    }
    return all_ok ? 0 : 1;
}

}  // namespace scs
