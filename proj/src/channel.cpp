#include "scs/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scs {

void AntennaConfig::validate() const {
    if (t1 < 1 || r1 < 1 || t2 < 1 || r2 < 1) {
        throw std::invalid_argument("AntennaConfig: all antenna counts must be >= 1 (got t1=" +
                                    std::to_string(t1) + " r1=" + std::to_string(r1) +
                                    " t2=" + std::to_string(t2) + " r2=" + std::to_string(r2) +
                                    ")");
    }
}

AntennaConfig ChannelSet::antennas() const {
    AntennaConfig cfg;
    cfg.t1 = h11.cols;
    cfg.r1 = h11.rows;
    cfg.t2 = h12.cols;
    cfg.r2 = h21.rows;
    return cfg;
}

ComplexMatrix sample_zmsw(int rows, int cols, Rng& rng) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("sample_zmsw: dimensions must be >= 1");
    }
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data) v = rng.zmsw();
    return m;
}

ChannelSet sample_channel_set(const AntennaConfig& cfg, double noise_power_1,
                              double noise_power_2, double interference_gain, Rng& rng) {
    cfg.validate();
    if (noise_power_1 < 0.0 || noise_power_2 < 0.0) {
        throw std::invalid_argument("sample_channel_set: noise powers must be >= 0");
    }
    if (interference_gain < 0.0) {
        throw std::invalid_argument("sample_channel_set: interference_gain must be >= 0");
    }
    ChannelSet cs;
    cs.noise_power_1 = noise_power_1;
    cs.noise_power_2 = noise_power_2;
    cs.interference_gain = interference_gain;
    const double cross_scale = std::sqrt(interference_gain);
    cs.h11 = sample_zmsw(cfg.r1, cfg.t1, rng);
    cs.h12 = scale(sample_zmsw(cfg.r1, cfg.t2, rng), cross_scale);
    cs.h21 = scale(sample_zmsw(cfg.r2, cfg.t1, rng), cross_scale);
    cs.h22 = sample_zmsw(cfg.r2, cfg.t2, rng);
    return cs;
}

std::pair<cvec, cvec> received_signal(const ChannelSet& cs, const cvec& x1, const cvec& x2,
                                      Rng& rng) {
    if (static_cast<int>(x1.size()) != cs.h11.cols) {
        throw std::invalid_argument("received_signal: x1 has length " +
                                    std::to_string(x1.size()) + ", expected " +
                                    std::to_string(cs.h11.cols));
    }
    if (static_cast<int>(x2.size()) != cs.h12.cols) {
        throw std::invalid_argument("received_signal: x2 has length " +
                                    std::to_string(x2.size()) + ", expected " +
                                    std::to_string(cs.h12.cols));
    }
    cvec y1 = matvec(cs.h11, x1);
    const cvec i1 = matvec(cs.h12, x2);
    const double sd1 = std::sqrt(cs.noise_power_1 / 2.0);
    for (size_t i = 0; i < y1.size(); ++i) {
        y1[i] += i1[i] + cplx(rng.normal() * sd1, rng.normal() * sd1);
    }
    cvec y2 = matvec(cs.h22, x2);
    const cvec i2 = matvec(cs.h21, x1);
    const double sd2 = std::sqrt(cs.noise_power_2 / 2.0);
    for (size_t i = 0; i < y2.size(); ++i) {
        y2[i] += i2[i] + cplx(rng.normal() * sd2, rng.normal() * sd2);
    }
    return {std::move(y1), std::move(y2)};
}

}  // namespace scs
