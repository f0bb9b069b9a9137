#include "scs/beacon.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scs {

const char* beacon_mode_name(BeaconMode mode) {
    switch (mode) {
        case BeaconMode::Ideal: return "ideal";
        case BeaconMode::SampleAverage: return "sampled";
        case BeaconMode::ProjectedIdeal: return "projected_ideal";
        case BeaconMode::ProjectedSampleAverage: return "projected_sampled";
    }
    return "unknown";
}

bool beacon_mode_is_sampled(BeaconMode mode) {
    return mode == BeaconMode::SampleAverage || mode == BeaconMode::ProjectedSampleAverage;
}

bool beacon_mode_is_projected(BeaconMode mode) {
    return mode == BeaconMode::ProjectedIdeal || mode == BeaconMode::ProjectedSampleAverage;
}

BeaconEmitter::BeaconEmitter(const ChannelSet& cs, BeaconMode mode, double alpha,
                             int cycle_length_n, Rng rng,
                             std::optional<ComplexMatrix> projector)
    : cs_(&cs),
      mode_(mode),
      alpha_(alpha),
      cycle_length_n_(cycle_length_n),
      rng_(rng),
      projector_(std::move(projector)) {
    if (!(alpha_ > 0.0)) {
        throw std::invalid_argument("BeaconEmitter: alpha must be > 0");
    }
    if (cycle_length_n_ < 1) {
        throw std::invalid_argument("BeaconEmitter: cycle_length_n must be >= 1");
    }
    if (beacon_mode_is_projected(mode_)) {
        if (!projector_.has_value()) {
            throw std::invalid_argument("BeaconEmitter: projected mode needs a projector");
        }
        const ComplexMatrix& p = *projector_;
        if (p.rows != p.cols || p.rows != cs_->h11.rows) {
            throw std::invalid_argument("BeaconEmitter: projector must be r1 x r1");
        }
        const double scale_norm = std::max(frobenius_norm(p), 1.0);
        if (frobenius_norm(subtract(p, conj_transpose(p))) > 1e-9 * scale_norm ||
            frobenius_norm(subtract(matmul(p, p), p)) > 1e-9 * scale_norm) {
            throw std::invalid_argument(
                "BeaconEmitter: projector is not an orthogonal projector");
        }
    } else if (projector_.has_value()) {
        throw std::invalid_argument("BeaconEmitter: projector given for unprojected mode");
    }
}

double BeaconEmitter::record(double value) {
    trace_.values.push_back(value);
    trace_.cycle_index += 1;
    return value;
}

double BeaconEmitter::emit(const cvec& x2_tilde) {
    switch (mode_) {
        case BeaconMode::Ideal: return emit_ideal(x2_tilde);
        case BeaconMode::SampleAverage: return emit_sampled(x2_tilde);
        case BeaconMode::ProjectedIdeal:
        case BeaconMode::ProjectedSampleAverage: return emit_projected(x2_tilde);
    }
    throw std::logic_error("BeaconEmitter: unknown mode");
}

double BeaconEmitter::emit_ideal(const cvec& x2_tilde) {
    if (mode_ != BeaconMode::Ideal) {
        throw std::logic_error(std::string("emit_ideal called on mode ") +
                               beacon_mode_name(mode_));
    }
    const cvec h = matvec(cs_->h12, x2_tilde);
    double sig = 0.0;
    for (const auto& v : h) sig += std::norm(v);
    const double floor_term = static_cast<double>(cs_->h11.rows) * cs_->noise_power_1;
    return record(alpha_ * (sig + floor_term));
}

double BeaconEmitter::emit_sampled(const cvec& x2_tilde) {
    if (mode_ != BeaconMode::SampleAverage) {
        throw std::logic_error(std::string("emit_sampled called on mode ") +
                               beacon_mode_name(mode_));
    }
    const cvec h = matvec(cs_->h12, x2_tilde);
    const int r1 = cs_->h11.rows;
    const int t1 = cs_->h11.cols;
    const double symbol_sd = std::sqrt(1.0 / (2.0 * static_cast<double>(t1)));
    const double noise_sd = std::sqrt(cs_->noise_power_1 / 2.0);
    cvec x1(static_cast<size_t>(t1));
    double acc = 0.0;
    for (int k = 0; k < cycle_length_n_; ++k) {
        for (auto& s : x1) s = cplx(rng_.normal() * symbol_sd, rng_.normal() * symbol_sd);
        const cvec own = matvec(cs_->h11, x1);
        double inst = 0.0;
        for (int i = 0; i < r1; ++i) {
            const cplx y = own[static_cast<size_t>(i)] + h[static_cast<size_t>(i)] +
                           cplx(rng_.normal() * noise_sd, rng_.normal() * noise_sd);
            const cplx z = y - own[static_cast<size_t>(i)];
            inst += std::norm(z);
        }
        acc += inst;
    }
    return record(alpha_ * acc / static_cast<double>(cycle_length_n_));
}

double BeaconEmitter::projected_ideal_value(const cvec& x2_tilde) {
    const ComplexMatrix& p = *projector_;
    const cvec ph = matvec(p, matvec(cs_->h12, x2_tilde));
    double sig = 0.0;
    for (const auto& v : ph) sig += std::norm(v);
    double trace_p = 0.0;
    for (int i = 0; i < p.rows; ++i) trace_p += p.at(i, i).real();
    return alpha_ * (sig + cs_->noise_power_1 * trace_p);
}

double BeaconEmitter::projected_sampled_value(const cvec& x2_tilde) {
    const ComplexMatrix& p = *projector_;
    const cvec h = matvec(cs_->h12, x2_tilde);
    const int r1 = cs_->h11.rows;
    const int t1 = cs_->h11.cols;
    const double symbol_sd = std::sqrt(1.0 / (2.0 * static_cast<double>(t1)));
    const double noise_sd = std::sqrt(cs_->noise_power_1 / 2.0);
    cvec x1(static_cast<size_t>(t1));
    cvec z(static_cast<size_t>(r1));
    double acc = 0.0;
    for (int k = 0; k < cycle_length_n_; ++k) {
        for (auto& s : x1) s = cplx(rng_.normal() * symbol_sd, rng_.normal() * symbol_sd);
        const cvec own = matvec(cs_->h11, x1);
        for (int i = 0; i < r1; ++i) {
            const cplx y = own[static_cast<size_t>(i)] + h[static_cast<size_t>(i)] +
                           cplx(rng_.normal() * noise_sd, rng_.normal() * noise_sd);
            z[static_cast<size_t>(i)] = y - own[static_cast<size_t>(i)];
        }
        const cvec pz = matvec(p, z);
        for (const auto& v : pz) acc += std::norm(v);
    }
    return alpha_ * acc / static_cast<double>(cycle_length_n_);
}

double BeaconEmitter::emit_projected(const cvec& x2_tilde) {
    if (!beacon_mode_is_projected(mode_)) {
        throw std::logic_error(std::string("emit_projected called on mode ") +
                               beacon_mode_name(mode_));
    }
    if (!projector_.has_value()) {
        throw std::logic_error("emit_projected: projector missing");
    }
    if (mode_ == BeaconMode::ProjectedIdeal) {
        return record(projected_ideal_value(x2_tilde));
    }
    return record(projected_sampled_value(x2_tilde));
}

}  // namespace scs
