#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scs/beacon.hpp"
#include "scs/channel.hpp"
#include "scs/sharing.hpp"

namespace scs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value experiment configuration. '#' starts a comment, keys may
// appear once, and unknown keys are errors. Grids are comma-separated.
struct ExperimentConfig {
    int t1 = 4;
    int r1 = 2;
    int t2 = 4;
    int r2 = 2;
    std::vector<double> snr_db_grid = {10.0};
    std::vector<int> t_grid;  // when non-empty: sweep t1 = t2 = t at one SNR
    double interference_gain_db = 0.0;
    BeaconMode beacon_mode = BeaconMode::Ideal;
    int cycle_length_n = 100;
    double alpha = 1.0;
    int trials = 1;
    uint64_t seed = 1;
    std::vector<Scheme> schemes = {Scheme::SCS, Scheme::FDD, Scheme::NoMitigation,
                                   Scheme::PartialSCS};
    int partial_extra = 1;
    bool fdd_power_boost = false;
    int threads = 1;          // excluded from the canonical echo
    std::string output_path;  // excluded from the canonical echo

    void validate() const;
    AntennaConfig antennas() const { return {t1, r1, t2, r2}; }
    double interference_gain() const;

    // The config as key=value lines in fixed order, excluding threads and
    // output_path so reruns and worker-pool changes keep identical headers.
    std::string canonical() const;

    static ExperimentConfig parse_string(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);
};

BeaconMode parse_beacon_mode(const std::string& name);
Scheme parse_scheme(const std::string& name);
std::string format_double(double value);

}  // namespace scs
