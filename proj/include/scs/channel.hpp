#pragma once

#include <utility>

#include "scs/cmatrix.hpp"
#include "scs/rng.hpp"

namespace scs {

struct AntennaConfig {
    int t1 = 1;
    int r1 = 1;
    int t2 = 1;
    int r2 = 1;

    void validate() const;
};

// The four link matrices of the two-user interference channel plus receiver
// noise powers. Cross matrices are stored with the interference gain already
// applied.
struct ChannelSet {
    ComplexMatrix h11;  // r1 x t1
    ComplexMatrix h12;  // r1 x t2
    ComplexMatrix h21;  // r2 x t1
    ComplexMatrix h22;  // r2 x t2
    double noise_power_1 = 0.0;
    double noise_power_2 = 0.0;
    double interference_gain = 1.0;

    AntennaConfig antennas() const;
};

// Matrix with i.i.d. zero-mean unit-variance circularly symmetric complex
// Gaussian entries (real and imaginary parts N(0, 1/2) each).
ComplexMatrix sample_zmsw(int rows, int cols, Rng& rng);

// Direct channels ZMSW; cross channels ZMSW scaled by sqrt(interference_gain).
// Sampling order is h11, h12, h21, h22.
ChannelSet sample_channel_set(const AntennaConfig& cfg, double noise_power_1,
                              double noise_power_2, double interference_gain, Rng& rng);

// One use of the physical signal model: y_i = H_ii x_i + H_ij x_j + v_i with
// fresh circular Gaussian noise of per-antenna variance noise_power_i.
// Noise draw order is v1 then v2, entry by entry.
std::pair<cvec, cvec> received_signal(const ChannelSet& cs, const cvec& x1, const cvec& x2,
                                      Rng& rng);

}  // namespace scs
