#pragma once

#include <cstdint>
#include <vector>

#include "scs/beacon.hpp"
#include "scs/channel.hpp"
#include "scs/cmatrix.hpp"
#include "scs/ebcl.hpp"
#include "scs/rng.hpp"

namespace scs {

// Result of the two-sided learn-then-swap handshake. residual_interference_i
// is the Frobenius norm of the interference arriving at receiver i under the
// other user's precoder (H_ij * T_j).
struct SharingOutcome {
    Precoder precoder_1;
    Precoder precoder_2;
    LearnedGram learned_1;
    LearnedGram learned_2;
    ComplexMatrix effective_channel_1;  // H11 * T1
    ComplexMatrix effective_channel_2;  // H22 * T2
    double residual_interference_1 = 0.0;
    double residual_interference_2 = 0.0;
};

// Sequential equal-priority handshake: user 2 learns its interference Gram
// H12* H12 from user 1's beacon, then roles swap. Throws when either learned
// null space is empty (antenna precondition t_i > r_j violated). The lenient
// variant returns empty precoders instead, which the sweep harness uses for
// grid points where sharing is infeasible.
SharingOutcome scs_handshake(const ChannelSet& cs, BeaconMode mode, int cycle_length_n,
                             Rng& rng, double alpha = 1.0);
SharingOutcome scs_handshake_lenient(const ChannelSet& cs, BeaconMode mode,
                                     int cycle_length_n, Rng& rng, double alpha = 1.0);

// log2 det(I + (tx_power / n_tx) * noise_cov^{-1} H H*) with n_tx = h.cols.
// Interference-as-noise is supported by folding it into noise_cov. Throws on
// a singular noise covariance.
double mimo_rate_uniform(const ComplexMatrix& h, double tx_power,
                         const ComplexMatrix& noise_cov);

enum class Scheme {
    SingleUserFullChannel = 0,
    SCS = 1,
    FDD = 2,
    NoMitigation = 3,
    PartialSCS = 4,
};

const char* scheme_name(Scheme s);

struct RateReport {
    Scheme scheme = Scheme::SingleUserFullChannel;
    double rate_user1 = 0.0;  // bits per channel use
    double rate_user2 = 0.0;
    double snr_db = 0.0;
    uint64_t trial_seed = 0;
    double residual_interference = 0.0;
    int learning_cycles = 0;
};

struct SchemeOptions {
    double tx_power = 1.0;
    int partial_extra = 1;
    bool fdd_power_boost = false;
    BeaconMode beacon_mode = BeaconMode::Ideal;
    int cycle_length_n = 100;
    double alpha = 1.0;
    uint64_t trial_seed = 0;
    std::vector<Scheme> schemes = {Scheme::SCS, Scheme::FDD, Scheme::NoMitigation,
                                   Scheme::PartialSCS};
};

// Evaluates the single-user baseline plus the requested schemes at one SNR
// point. noise_power = tx_power / 10^(snr_db/10) per receive antenna. Reuses
// a precomputed handshake when given one; otherwise performs its own.
std::vector<RateReport> evaluate_schemes(const ChannelSet& cs, double snr_db,
                                         const SchemeOptions& opt, Rng& rng,
                                         const SharingOutcome* handshake = nullptr);

struct DofReport {
    int trials = 0;
    int violations_user1 = 0;
    int violations_user2 = 0;
};

// Compares numeric_rank(H_ii) against numeric_rank(H_ii T_i) over ZMSW trials
// with ideal-beacon learning (rank tolerance 1e-8).
DofReport validate_dof_preservation(const AntennaConfig& cfg, int trials, Rng& rng);

struct ZmswReport {
    int trials = 0;
    int rows = 0;
    int cols = 0;
    std::vector<cplx> entry_means;
    std::vector<double> entry_variances;
    double max_mean_abs = 0.0;
    double min_variance = 0.0;
    double max_variance = 0.0;
    double max_corr_abs = 0.0;
    double ks_stat = 0.0;
    double mean_threshold = 0.0;
    double var_lo = 0.0;
    double var_hi = 0.0;
    double corr_threshold = 0.0;
    double ks_threshold = 0.0;
    bool pass_mean = false;
    bool pass_variance = false;
    bool pass_correlation = false;
    bool pass_ks = false;
    bool pass_all = false;
};

// Collects the entries of the effective channel H11 T1 across ZMSW trials and
// tests the claim that they are i.i.d. CN(0,1): entry means, variances,
// pairwise correlations, and a KS test of one entry's real part against
// N(0, 1/2). Thresholds scale with the trial count (4-sigma style bounds,
// KS at significance 0.001).
ZmswReport validate_zmsw_effective_channel(const AntennaConfig& cfg, int trials, Rng& rng);

}  // namespace scs
