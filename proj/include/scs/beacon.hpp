#pragma once

#include <optional>

#include "scs/channel.hpp"
#include "scs/cmatrix.hpp"
#include "scs/rng.hpp"

namespace scs {

enum class BeaconMode { Ideal, SampleAverage, ProjectedIdeal, ProjectedSampleAverage };

const char* beacon_mode_name(BeaconMode mode);
bool beacon_mode_is_sampled(BeaconMode mode);
bool beacon_mode_is_projected(BeaconMode mode);

struct BeaconTrace {
    std::vector<double> values;
    int cycle_index = -1;
};

// PU-side emitter of the scalar interference-energy beacon q(n), scaled by
// the unknown control-channel gain alpha. One emitter serves one learning
// session; calls are sequential and each call advances the cycle index.
//
// Modes:
//  - Ideal: the expectation form alpha * (||H12 x2||^2 + r1 * noise_power_1).
//  - SampleAverage: simulates cycle_length_n symbol instants of constant
//    transmission, with the PU's own symbols drawn i.i.d. CN(0, I/t1) and
//    cancelled under perfect decoding, and averages ||y1(k) - H11 x1(k)||^2.
//  - Projected*: the residual is first projected by the supplied projector
//    (ideal baseline becomes alpha * noise_power_1 * trace(P)).
class BeaconEmitter {
public:
    BeaconEmitter(const ChannelSet& cs, BeaconMode mode, double alpha, int cycle_length_n,
                  Rng rng, std::optional<ComplexMatrix> projector = std::nullopt);

    // Dispatches on the configured mode.
    double emit(const cvec& x2_tilde);

    double emit_ideal(const cvec& x2_tilde);
    double emit_sampled(const cvec& x2_tilde);
    double emit_projected(const cvec& x2_tilde);

    const BeaconTrace& trace() const { return trace_; }
    int call_count() const { return trace_.cycle_index + 1; }
    BeaconMode mode() const { return mode_; }
    int cycle_length() const { return cycle_length_n_; }
    const ChannelSet& channel_set() const { return *cs_; }

private:
    double record(double value);
    double projected_ideal_value(const cvec& x2_tilde);
    double projected_sampled_value(const cvec& x2_tilde);

    const ChannelSet* cs_;
    BeaconMode mode_;
    double alpha_;
    int cycle_length_n_;
    Rng rng_;
    std::optional<ComplexMatrix> projector_;
    BeaconTrace trace_;
};

}  // namespace scs
