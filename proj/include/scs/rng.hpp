#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace scs {

// xoshiro256++ seeded through SplitMix64 from a (seed, stream) pair.
// Identical (seed, stream) always reproduces the same sequence; distinct
// stream ids give statistically independent substreams, which is how the
// harness hands every Monte Carlo trial its own generator.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();
    uint32_t next_u32() { return static_cast<uint32_t>(next_u64() >> 32); }

    double uniform();      // [0, 1)
    double uniform_pos();  // (0, 1)

    // Standard normal via a 128-layer ziggurat.
    double normal();

    // One CN(0,1) draw: real and imaginary parts i.i.d. N(0, 1/2),
    // real part drawn first.
    std::complex<double> zmsw();

    // Deterministic child stream for per-trial parallelism.
    Rng fork(uint64_t idx) const;

private:
    Rng() = default;
    std::array<uint64_t, 4> s_{};
};

}  // namespace scs
