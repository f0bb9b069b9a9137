#include "scs/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace scs {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

uint64_t splitmix_mix(uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct SplitMix {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += kGolden);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

struct ZigguratTables {
    uint32_t kn[128];
    double wn[128];
    double fn[128];
    ZigguratTables() {
        const double m1 = 2147483648.0;
        double dn = 3.442619855899;
        double tn = dn;
        const double vn = 9.91256303526217e-3;
        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables& zig() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
    SplitMix sm{splitmix_mix(seed) + stream * kGolden};
    for (auto& word : s_) word = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl64(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl64(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
    double u;
    do {
        u = uniform();
    } while (u == 0.0);
    return u;
}

double Rng::normal() {
    const ZigguratTables& t = zig();
    const double r_tail = 3.442619855899;
    int32_t hz = static_cast<int32_t>(next_u32());
    uint32_t iz = static_cast<uint32_t>(hz) & 127u;
    for (;;) {
        const uint32_t mag = static_cast<uint32_t>(std::llabs(static_cast<int64_t>(hz)));
        if (mag < t.kn[iz]) return hz * t.wn[iz];

        double x = hz * t.wn[iz];
        if (iz == 0) {
            double y;
            do {
                x = -std::log(uniform_pos()) / r_tail;
                y = -std::log(uniform_pos());
            } while (y + y < x * x);
            return (hz > 0) ? r_tail + x : -(r_tail + x);
        }
        if (t.fn[iz] + uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) {
            return x;
        }
        hz = static_cast<int32_t>(next_u32());
        iz = static_cast<uint32_t>(hz) & 127u;
    }
}

std::complex<double> Rng::zmsw() {
    const double re = normal();
    const double im = normal();
    constexpr double inv_sqrt2 = 0.7071067811865476;
    return {re * inv_sqrt2, im * inv_sqrt2};
}

Rng Rng::fork(uint64_t idx) const {
    Rng child;
    SplitMix sm{splitmix_mix(s_[0] ^ rotl64(s_[1], 13) ^ (idx * kGolden)) ^ s_[3]};
    for (auto& word : child.s_) word = sm.next();
    if ((child.s_[0] | child.s_[1] | child.s_[2] | child.s_[3]) == 0) child.s_[0] = 1;
    return child;
}

}  // namespace scs
