#include "scs/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "scs/stats.hpp"

namespace scs {

namespace {

ChannelSet swapped_roles(const ChannelSet& cs) {
    ChannelSet sw;
    sw.h11 = cs.h22;
    sw.h12 = cs.h21;
    sw.h21 = cs.h12;
    sw.h22 = cs.h11;
    sw.noise_power_1 = cs.noise_power_2;
    sw.noise_power_2 = cs.noise_power_1;
    sw.interference_gain = cs.interference_gain;
    return sw;
}

LearnedGram learn_one_side(const ChannelSet& cs, BeaconMode mode, int cycle_length_n,
                           double alpha, Rng rng) {
    std::optional<ComplexMatrix> projector;
    if (beacon_mode_is_projected(mode)) {
        projector = column_space_projector(cs.h11, 1e-8);
    }
    BeaconEmitter emitter(cs, mode, alpha, cycle_length_n, std::move(rng),
                          std::move(projector));
    return run_learning_session(emitter, cs.h12.cols);
}

SharingOutcome handshake_impl(const ChannelSet& cs, BeaconMode mode, int cycle_length_n,
                              Rng& rng, double alpha, bool allow_empty) {
    SharingOutcome out;
    out.learned_2 = learn_one_side(cs, mode, cycle_length_n, alpha, rng.fork(1));
    const ChannelSet sw = swapped_roles(cs);
    out.learned_1 = learn_one_side(sw, mode, cycle_length_n, alpha, rng.fork(2));

    out.precoder_2 = null_space(out.learned_2);
    out.precoder_1 = null_space(out.learned_1);
    if (!allow_empty) {
        if (out.precoder_2.t.cols == 0) {
            throw std::runtime_error(
                "scs_handshake: user 2 learned an empty null space (requires t2 > r1)");
        }
        if (out.precoder_1.t.cols == 0) {
            throw std::runtime_error(
                "scs_handshake: user 1 learned an empty null space (requires t1 > r2)");
        }
    }

    out.effective_channel_1 = matmul(cs.h11, out.precoder_1.t);
    out.effective_channel_2 = matmul(cs.h22, out.precoder_2.t);
    out.residual_interference_1 = frobenius_norm(matmul(cs.h12, out.precoder_2.t));
    out.residual_interference_2 = frobenius_norm(matmul(cs.h21, out.precoder_1.t));
    return out;
}

ComplexMatrix scaled_identity(int n, double value) {
    ComplexMatrix m = ComplexMatrix::identity(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = value;
    return m;
}

// sigma2 * I + (power / n_cols) * M M*, skipping the interference term when M
// has no columns (nothing transmitted).
ComplexMatrix interference_noise_cov(int n, double sigma2, const ComplexMatrix& m,
                                     double power) {
    ComplexMatrix cov = scaled_identity(n, sigma2);
    if (m.cols == 0) return cov;
    ComplexMatrix mm = matmul(m, conj_transpose(m));
    return add(cov, scale(mm, power / static_cast<double>(m.cols)));
}

}  // namespace

SharingOutcome scs_handshake(const ChannelSet& cs, BeaconMode mode, int cycle_length_n,
                             Rng& rng, double alpha) {
    return handshake_impl(cs, mode, cycle_length_n, rng, alpha, false);
}

SharingOutcome scs_handshake_lenient(const ChannelSet& cs, BeaconMode mode,
                                     int cycle_length_n, Rng& rng, double alpha) {
    return handshake_impl(cs, mode, cycle_length_n, rng, alpha, true);
}

double mimo_rate_uniform(const ComplexMatrix& h, double tx_power,
                         const ComplexMatrix& noise_cov) {
    if (noise_cov.rows != noise_cov.cols) {
        throw std::invalid_argument("mimo_rate_uniform: noise covariance must be square");
    }
    if (noise_cov.rows != h.rows) {
        throw std::invalid_argument(
            "mimo_rate_uniform: noise covariance order " + std::to_string(noise_cov.rows) +
            " does not match channel rows " + std::to_string(h.rows));
    }
    if (!(tx_power >= 0.0)) {
        throw std::invalid_argument("mimo_rate_uniform: tx_power must be >= 0");
    }

    const HermitianEig ne = hermitian_eig(noise_cov);
    const double lmax = ne.values.empty() ? 0.0 : ne.values.front();
    const double lmin = ne.values.empty() ? 0.0 : ne.values.back();
    if (!(lmax > 0.0) || lmin <= 1e-12 * lmax) {
        throw std::runtime_error("mimo_rate_uniform: singular noise covariance");
    }

    const int n_tx = h.cols;
    if (n_tx == 0 || tx_power == 0.0 || frobenius_norm(h) == 0.0) return 0.0;

    // Whiten: w = D^{-1/2} U* h, then the rate depends only on eig(w w*).
    ComplexMatrix w = matmul(conj_transpose(ne.vectors), h);
    for (int r = 0; r < w.rows; ++r) {
        const double inv_sd = 1.0 / std::sqrt(ne.values[static_cast<size_t>(r)]);
        for (int c = 0; c < w.cols; ++c) w.at(r, c) *= inv_sd;
    }
    const ComplexMatrix gram = (w.rows <= w.cols)
                                   ? matmul(w, conj_transpose(w))
                                   : matmul(conj_transpose(w), w);
    const HermitianEig ge = hermitian_eig(gram);
    const double per_antenna = tx_power / static_cast<double>(n_tx);
    double rate = 0.0;
    for (double lambda : ge.values) {
        rate += std::log2(1.0 + per_antenna * std::max(lambda, 0.0));
    }
    return rate;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::SingleUserFullChannel: return "single_user";
        case Scheme::SCS: return "scs";
        case Scheme::FDD: return "fdd";
        case Scheme::NoMitigation: return "no_mitigation";
        case Scheme::PartialSCS: return "partial_scs";
    }
    throw std::invalid_argument("scheme_name: unknown scheme");
}

std::vector<RateReport> evaluate_schemes(const ChannelSet& cs, double snr_db,
                                         const SchemeOptions& opt, Rng& rng,
                                         const SharingOutcome* handshake) {
    if (!(opt.tx_power > 0.0)) {
        throw std::invalid_argument("evaluate_schemes: tx_power must be > 0");
    }
    if (opt.partial_extra < 0) {
        throw std::invalid_argument("evaluate_schemes: partial_extra must be >= 0");
    }
    const double p = opt.tx_power;
    const double sigma2 = p / std::pow(10.0, snr_db / 10.0);
    const int r1 = cs.h11.rows;
    const int r2 = cs.h22.rows;

    bool want[5] = {true, false, false, false, false};
    for (Scheme s : opt.schemes) want[static_cast<int>(s)] = true;

    SharingOutcome local;
    const SharingOutcome* hs = handshake;
    if (hs == nullptr && (want[static_cast<int>(Scheme::SCS)] ||
                          want[static_cast<int>(Scheme::PartialSCS)])) {
        local = scs_handshake_lenient(cs, opt.beacon_mode, opt.cycle_length_n, rng,
                                      opt.alpha);
        hs = &local;
    }

    auto base = [&](Scheme s) {
        RateReport rep;
        rep.scheme = s;
        rep.snr_db = snr_db;
        rep.trial_seed = opt.trial_seed;
        return rep;
    };

    std::vector<RateReport> reports;
    {
        RateReport rep = base(Scheme::SingleUserFullChannel);
        rep.rate_user1 = mimo_rate_uniform(cs.h11, p, scaled_identity(r1, sigma2));
        rep.rate_user2 = mimo_rate_uniform(cs.h22, p, scaled_identity(r2, sigma2));
        reports.push_back(rep);
    }

    if (want[static_cast<int>(Scheme::SCS)]) {
        RateReport rep = base(Scheme::SCS);
        rep.rate_user1 =
            mimo_rate_uniform(hs->effective_channel_1, p, scaled_identity(r1, sigma2));
        rep.rate_user2 =
            mimo_rate_uniform(hs->effective_channel_2, p, scaled_identity(r2, sigma2));
        rep.residual_interference =
            std::max(hs->residual_interference_1, hs->residual_interference_2);
        rep.learning_cycles =
            hs->learned_1.measurement_count + hs->learned_2.measurement_count;
        reports.push_back(rep);
    }

    if (want[static_cast<int>(Scheme::FDD)]) {
        RateReport rep = base(Scheme::FDD);
        const double p_fdd = opt.fdd_power_boost ? 2.0 * p : p;
        rep.rate_user1 =
            0.5 * mimo_rate_uniform(cs.h11, p_fdd, scaled_identity(r1, sigma2));
        rep.rate_user2 =
            0.5 * mimo_rate_uniform(cs.h22, p_fdd, scaled_identity(r2, sigma2));
        reports.push_back(rep);
    }

    if (want[static_cast<int>(Scheme::NoMitigation)]) {
        RateReport rep = base(Scheme::NoMitigation);
        rep.rate_user1 =
            mimo_rate_uniform(cs.h11, p, interference_noise_cov(r1, sigma2, cs.h12, p));
        rep.rate_user2 =
            mimo_rate_uniform(cs.h22, p, interference_noise_cov(r2, sigma2, cs.h21, p));
        rep.residual_interference =
            std::max(frobenius_norm(cs.h12), frobenius_norm(cs.h21));
        reports.push_back(rep);
    }

    if (want[static_cast<int>(Scheme::PartialSCS)]) {
        RateReport rep = base(Scheme::PartialSCS);
        const int t1 = cs.h11.cols;
        const int t2 = cs.h22.cols;
        const int d1 = hs->precoder_1.t.cols;
        const int d2 = hs->precoder_2.t.cols;
        const Precoder tp1 =
            partial_precoder(hs->learned_1, std::min(opt.partial_extra, t1 - d1));
        const Precoder tp2 =
            partial_precoder(hs->learned_2, std::min(opt.partial_extra, t2 - d2));
        const ComplexMatrix eff1 = matmul(cs.h11, tp1.t);
        const ComplexMatrix eff2 = matmul(cs.h22, tp2.t);
        const ComplexMatrix leak_at_1 = matmul(cs.h12, tp2.t);
        const ComplexMatrix leak_at_2 = matmul(cs.h21, tp1.t);
        rep.rate_user1 =
            mimo_rate_uniform(eff1, p, interference_noise_cov(r1, sigma2, leak_at_1, p));
        rep.rate_user2 =
            mimo_rate_uniform(eff2, p, interference_noise_cov(r2, sigma2, leak_at_2, p));
        rep.residual_interference =
            std::max(frobenius_norm(leak_at_1), frobenius_norm(leak_at_2));
        rep.learning_cycles =
            hs->learned_1.measurement_count + hs->learned_2.measurement_count;
        reports.push_back(rep);
    }

    return reports;
}

DofReport validate_dof_preservation(const AntennaConfig& cfg, int trials, Rng& rng) {
    cfg.validate();
    if (trials < 1) {
        throw std::invalid_argument("validate_dof_preservation: trials must be >= 1");
    }
    DofReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        Rng trial_rng = rng.fork(static_cast<uint64_t>(trial));
        const ChannelSet cs = sample_channel_set(cfg, 1.0, 1.0, 1.0, trial_rng);
        const SharingOutcome out =
            scs_handshake_lenient(cs, BeaconMode::Ideal, 1, trial_rng, 1.0);
        if (numeric_rank(out.effective_channel_1, 1e-8) < numeric_rank(cs.h11, 1e-8)) {
            ++report.violations_user1;
        }
        if (numeric_rank(out.effective_channel_2, 1e-8) < numeric_rank(cs.h22, 1e-8)) {
            ++report.violations_user2;
        }
    }
    return report;
}

ZmswReport validate_zmsw_effective_channel(const AntennaConfig& cfg, int trials, Rng& rng) {
    cfg.validate();
    if (trials < 2) {
        throw std::invalid_argument("validate_zmsw_effective_channel: trials must be >= 2");
    }
    const int d1 = cfg.t1 - cfg.r2;
    if (d1 < 1) {
        throw std::invalid_argument(
            "validate_zmsw_effective_channel: requires t1 > r2 for a nonempty"
            " effective channel");
    }

    ZmswReport report;
    report.trials = trials;
    report.rows = cfg.r1;
    report.cols = d1;
    const int entries = cfg.r1 * d1;
    std::vector<cvec> samples(static_cast<size_t>(entries));
    for (auto& s : samples) s.reserve(static_cast<size_t>(trials));

    for (int trial = 0; trial < trials; ++trial) {
        Rng trial_rng = rng.fork(static_cast<uint64_t>(trial));
        const ChannelSet cs = sample_channel_set(cfg, 1.0, 1.0, 1.0, trial_rng);
        const SharingOutcome out =
            scs_handshake_lenient(cs, BeaconMode::Ideal, 1, trial_rng, 1.0);
        const ComplexMatrix& eff = out.effective_channel_1;
        if (eff.cols != d1) {
            throw std::runtime_error(
                "validate_zmsw_effective_channel: unexpected effective channel width");
        }
        for (int r = 0; r < eff.rows; ++r) {
            for (int c = 0; c < eff.cols; ++c) {
                samples[static_cast<size_t>(r * d1 + c)].push_back(eff.at(r, c));
            }
        }
    }

    const double root_n = std::sqrt(static_cast<double>(trials));
    report.mean_threshold = 3.0 / root_n;
    report.var_lo = 1.0 - 4.0 / root_n;
    report.var_hi = 1.0 + 4.0 / root_n;
    report.corr_threshold = 3.0 / root_n;
    report.ks_threshold = ks_critical(trials, 0.001);

    report.entry_means.resize(static_cast<size_t>(entries));
    report.entry_variances.resize(static_cast<size_t>(entries));
    report.min_variance = std::numeric_limits<double>::infinity();
    for (int e = 0; e < entries; ++e) {
        const cplx mu = complex_mean(samples[static_cast<size_t>(e)]);
        const double var = complex_sample_variance(samples[static_cast<size_t>(e)]);
        report.entry_means[static_cast<size_t>(e)] = mu;
        report.entry_variances[static_cast<size_t>(e)] = var;
        report.max_mean_abs = std::max(report.max_mean_abs, std::abs(mu));
        report.min_variance = std::min(report.min_variance, var);
        report.max_variance = std::max(report.max_variance, var);
    }
    for (int a = 0; a < entries; ++a) {
        for (int b = a + 1; b < entries; ++b) {
            const cplx rho = complex_correlation(samples[static_cast<size_t>(a)],
                                                 samples[static_cast<size_t>(b)]);
            report.max_corr_abs = std::max(report.max_corr_abs, std::abs(rho));
        }
    }
    std::vector<double> re00(static_cast<size_t>(trials));
    for (int i = 0; i < trials; ++i) {
        re00[static_cast<size_t>(i)] = samples[0][static_cast<size_t>(i)].real();
    }
    report.ks_stat = ks_statistic(
        re00, [](double x) { return normal_cdf(x, 0.0, std::sqrt(0.5)); });

    report.pass_mean = report.max_mean_abs <= report.mean_threshold;
    report.pass_variance =
        report.min_variance >= report.var_lo && report.max_variance <= report.var_hi;
    report.pass_correlation = report.max_corr_abs <= report.corr_threshold;
    report.pass_ks = report.ks_stat <= report.ks_threshold;
    report.pass_all = report.pass_mean && report.pass_variance &&
                      report.pass_correlation && report.pass_ks;
    return report;
}

}  // namespace scs
