#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "scs/beacon.hpp"
#include "scs/channel.hpp"
#include "scs/cmatrix.hpp"
#include "scs/rng.hpp"
#include "support.hpp"

using namespace scs;
using test_support::make_gen;
using test_support::random_matrix;

namespace {

ComplexMatrix mat(int rows, int cols, const std::vector<cplx>& entries) {
    ComplexMatrix m(rows, cols);
    m.data = entries;
    return m;
}

ChannelSet toy_channel() {
    ChannelSet cs;
    cs.h11 = ComplexMatrix(1, 1);
    cs.h12 = mat(1, 2, {cplx(1, 0), cplx(0, 1)});
    cs.h21 = ComplexMatrix(1, 1);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.5;
    return cs;
}

bool message_contains(const std::invalid_argument& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("beacon") {

TEST_CASE("mode names and predicates") {
    CHECK(std::string(beacon_mode_name(BeaconMode::Ideal)) == "ideal");
    CHECK(std::string(beacon_mode_name(BeaconMode::SampleAverage)) == "sampled");
    CHECK(std::string(beacon_mode_name(BeaconMode::ProjectedIdeal)) == "projected_ideal");
    CHECK(std::string(beacon_mode_name(BeaconMode::ProjectedSampleAverage)) ==
          "projected_sampled");
    CHECK_FALSE(beacon_mode_is_sampled(BeaconMode::Ideal));
    CHECK(beacon_mode_is_sampled(BeaconMode::SampleAverage));
    CHECK_FALSE(beacon_mode_is_sampled(BeaconMode::ProjectedIdeal));
    CHECK(beacon_mode_is_sampled(BeaconMode::ProjectedSampleAverage));
    CHECK_FALSE(beacon_mode_is_projected(BeaconMode::SampleAverage));
    CHECK(beacon_mode_is_projected(BeaconMode::ProjectedIdeal));
    CHECK(beacon_mode_is_projected(BeaconMode::ProjectedSampleAverage));
}

TEST_CASE("ideal emitter matches hand-computed energies") {
    const ChannelSet cs = toy_channel();
    BeaconEmitter em(cs, BeaconMode::Ideal, 2.0, 100, Rng(1), std::nullopt);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(em.emit({cplx(0, 0), cplx(0, 0)}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(em.emit({cplx(1, 0), cplx(0, 0)}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(em.emit({cplx(0, 0), cplx(0, 1)}) == doctest::Approx(3.0).epsilon(1e-12));
    // (1, i)/sqrt(2) lies in the null space of h12 = [1, i] conjugated: h12 x = 0.
    CHECK(em.emit({cplx(inv_sqrt2, 0), cplx(0, inv_sqrt2)}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(em.emit({cplx(inv_sqrt2, 0), cplx(0, -inv_sqrt2)}) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("ideal emitter equals quadratic form in the Gram matrix") {
    auto gen = make_gen(41);
    ChannelSet cs;
    cs.h11 = ComplexMatrix(3, 2);
    cs.h12 = random_matrix(3, 4, gen);
    cs.h21 = ComplexMatrix(1, 2);
    cs.h22 = ComplexMatrix(1, 4);
    cs.noise_power_1 = 0.37;
    const double alpha = 1.9;
    BeaconEmitter em(cs, BeaconMode::Ideal, alpha, 50, Rng(2));
    const ComplexMatrix g = matmul(conj_transpose(cs.h12), cs.h12);
    for (int k = 0; k < 5; ++k) {
        const cvec x = test_support::random_vector(4, gen);
        const double expected =
            alpha * (quadratic_form(g, x).real() + 3.0 * cs.noise_power_1);
        CHECK(em.emit(x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("ideal emitter ignores its rng stream") {
    const ChannelSet cs = toy_channel();
    BeaconEmitter a(cs, BeaconMode::Ideal, 1.0, 10, Rng(1, 0));
    BeaconEmitter b(cs, BeaconMode::Ideal, 1.0, 10, Rng(999, 7));
    const cvec x = {cplx(0.3, -0.2), cplx(0.8, 0.1)};
    CHECK(a.emit(x) == b.emit(x));
}

TEST_CASE("trace records every emission in order") {
    const ChannelSet cs = toy_channel();
    BeaconEmitter em(cs, BeaconMode::Ideal, 1.0, 100, Rng(3));
    CHECK(em.call_count() == 0);
    CHECK(em.trace().cycle_index == -1);
    std::vector<double> returned;
    returned.push_back(em.emit({cplx(0, 0), cplx(0, 0)}));
    returned.push_back(em.emit({cplx(1, 0), cplx(0, 0)}));
    returned.push_back(em.emit({cplx(0, 0), cplx(1, 0)}));
    CHECK(em.call_count() == 3);
    CHECK(em.trace().cycle_index == 2);
    REQUIRE(em.trace().values.size() == 3);
    for (size_t i = 0; i < returned.size(); ++i) {
        CHECK(em.trace().values[i] == returned[i]);
    }
}

TEST_CASE("sampled emitter cancels the primary's own signal exactly") {
    ChannelSet cs;
    cs.h11 = mat(1, 1, {cplx(2, 1)});
    cs.h12 = ComplexMatrix(1, 2);
    cs.h21 = ComplexMatrix(1, 1);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.0;
    BeaconEmitter em(cs, BeaconMode::SampleAverage, 1.0, 16, Rng(5));
    CHECK(em.emit({cplx(1, 0), cplx(0, 0)}) == 0.0);
    CHECK(em.emit({cplx(0.4, 0.6), cplx(-1, 0)}) == 0.0);
}

TEST_CASE("sampled emitter is deterministic in the seed") {
    auto gen = make_gen(42);
    ChannelSet cs;
    cs.h11 = random_matrix(2, 2, gen);
    cs.h12 = random_matrix(2, 3, gen);
    cs.h21 = ComplexMatrix(1, 2);
    cs.h22 = ComplexMatrix(1, 3);
    cs.noise_power_1 = 0.25;
    const cvec x = test_support::random_vector(3, gen);
    BeaconEmitter a(cs, BeaconMode::SampleAverage, 1.3, 64, Rng(77, 3));
    BeaconEmitter b(cs, BeaconMode::SampleAverage, 1.3, 64, Rng(77, 3));
    BeaconEmitter c(cs, BeaconMode::SampleAverage, 1.3, 64, Rng(77, 4));
    const double qa = a.emit(x);
    CHECK(qa == b.emit(x));
    CHECK(qa != c.emit(x));
}

TEST_CASE("sampled emitter converges to the ideal value for large N") {
    auto gen = make_gen(43);
    ChannelSet cs;
    cs.h11 = random_matrix(2, 2, gen);
    cs.h12 = random_matrix(2, 3, gen);
    cs.h21 = ComplexMatrix(1, 2);
    cs.h22 = ComplexMatrix(1, 3);
    cs.noise_power_1 = 0.3;
    const double alpha = 1.7;
    const cvec x = {cplx(1, 0), cplx(0, 0), cplx(0, 0)};
    BeaconEmitter ideal(cs, BeaconMode::Ideal, alpha, 1, Rng(6));
    BeaconEmitter sampled(cs, BeaconMode::SampleAverage, alpha, 40000, Rng(6));
    const double want = ideal.emit(x);
    const double got = sampled.emit(x);
    CHECK(std::abs(got - want) / want < 0.05);
}

TEST_CASE("sampled emitter is unbiased across cycles") {
    auto gen = make_gen(44);
    ChannelSet cs;
    cs.h11 = random_matrix(2, 3, gen);
    cs.h12 = random_matrix(2, 2, gen);
    cs.h21 = ComplexMatrix(1, 3);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.6;
    const cvec x = {cplx(0.5, 0.5), cplx(-0.3, 0.1)};
    BeaconEmitter ideal(cs, BeaconMode::Ideal, 1.0, 1, Rng(7));
    const double mu = ideal.emit(x);

    const int cycles = 400;
    BeaconEmitter sampled(cs, BeaconMode::SampleAverage, 1.0, 25, Rng(7));
    std::vector<double> qs;
    for (int k = 0; k < cycles; ++k) qs.push_back(sampled.emit(x));
    double m = 0.0;
    for (double q : qs) m += q;
    m /= cycles;
    double var = 0.0;
    for (double q : qs) var += (q - m) * (q - m);
    var /= (cycles - 1);
    const double band = 5.0 * std::sqrt(var / cycles);
    CHECK(std::abs(m - mu) < band);
}

TEST_CASE("projected ideal emitter applies the projector and trace term") {
    ChannelSet cs;
    cs.h11 = mat(2, 1, {cplx(1, 0), cplx(0, 0)});
    cs.h12 = mat(2, 2, {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)});
    cs.h21 = ComplexMatrix(1, 1);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.2;
    const ComplexMatrix p = mat(2, 2, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)});
    BeaconEmitter em(cs, BeaconMode::ProjectedIdeal, 1.5, 10, Rng(8), p);
    CHECK(em.emit({cplx(0, 0), cplx(1, 0)}) == doctest::Approx(6.3).epsilon(1e-12));
    CHECK(em.emit({cplx(0, 0), cplx(0, 0)}) == doctest::Approx(0.3).epsilon(1e-12));
    // Compare against the column-space projector route.
    const ComplexMatrix p2 = column_space_projector(cs.h11, 1e-8);
    BeaconEmitter em2(cs, BeaconMode::ProjectedIdeal, 1.5, 10, Rng(8), p2);
    CHECK(em2.emit({cplx(0, 0), cplx(1, 0)}) == doctest::Approx(6.3).epsilon(1e-10));
}

TEST_CASE("projected sampled emitter is exact without noise") {
    auto gen = make_gen(45);
    ChannelSet cs;
    cs.h11 = random_matrix(2, 2, gen);
    cs.h12 = mat(2, 2, {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)});
    cs.h21 = ComplexMatrix(1, 2);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.0;
    const ComplexMatrix p = mat(2, 2, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)});
    BeaconEmitter em(cs, BeaconMode::ProjectedSampleAverage, 1.5, 32, Rng(9), p);
    CHECK(em.emit({cplx(0, 0), cplx(1, 0)}) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("projected sampled emitter converges to projected ideal") {
    auto gen = make_gen(46);
    ChannelSet cs;
    cs.h11 = random_matrix(3, 1, gen);
    cs.h12 = random_matrix(3, 2, gen);
    cs.h21 = ComplexMatrix(1, 1);
    cs.h22 = ComplexMatrix(1, 2);
    cs.noise_power_1 = 0.4;
    const ComplexMatrix p = column_space_projector(cs.h11, 1e-8);
    const cvec x = {cplx(0.7, -0.1), cplx(0.2, 0.4)};
    BeaconEmitter ideal(cs, BeaconMode::ProjectedIdeal, 2.2, 1, Rng(10), p);
    BeaconEmitter sampled(cs, BeaconMode::ProjectedSampleAverage, 2.2, 40000, Rng(10), p);
    const double want = ideal.emit(x);
    const double got = sampled.emit(x);
    CHECK(std::abs(got - want) / want < 0.05);
}

TEST_CASE("constructor validation") {
    const ChannelSet cs = toy_channel();
    const ComplexMatrix eye1 = ComplexMatrix::identity(1);

    CHECK_THROWS_AS(BeaconEmitter(cs, BeaconMode::Ideal, 0.0, 10, Rng(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BeaconEmitter(cs, BeaconMode::Ideal, -2.0, 10, Rng(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BeaconEmitter(cs, BeaconMode::SampleAverage, 1.0, 0, Rng(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BeaconEmitter(cs, BeaconMode::ProjectedIdeal, 1.0, 10, Rng(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BeaconEmitter(cs, BeaconMode::Ideal, 1.0, 10, Rng(1), eye1),
                    std::invalid_argument);

    try {
        BeaconEmitter em(cs, BeaconMode::ProjectedIdeal, 1.0, 10, Rng(1),
                         ComplexMatrix::identity(2));
        FAIL("expected shape rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(message_contains(e, "r1 x r1"));
    }

    const ComplexMatrix not_idem = mat(1, 1, {cplx(0.5, 0.0)});
    try {
        BeaconEmitter em(cs, BeaconMode::ProjectedIdeal, 1.0, 10, Rng(1), not_idem);
        FAIL("expected projector rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(message_contains(e, "projector"));
    }

    ChannelSet wide = toy_channel();
    wide.h11 = ComplexMatrix(2, 1);
    wide.h12 = ComplexMatrix(2, 2);
    const ComplexMatrix not_herm =
        mat(2, 2, {cplx(1, 0), cplx(0.1, 0), cplx(0, 0), cplx(0, 0)});
    CHECK_THROWS_AS(
        BeaconEmitter(wide, BeaconMode::ProjectedIdeal, 1.0, 10, Rng(1), not_herm),
        std::invalid_argument);
}

TEST_CASE("probe vector of the wrong length is rejected") {
    const ChannelSet cs = toy_channel();
    BeaconEmitter em(cs, BeaconMode::Ideal, 1.0, 10, Rng(1));
    CHECK_THROWS_AS(em.emit({cplx(1, 0)}), std::invalid_argument);
}

TEST_CASE("mode-specific entry points reject other modes") {
    const ChannelSet cs = toy_channel();
    BeaconEmitter ideal(cs, BeaconMode::Ideal, 1.0, 10, Rng(1));
    CHECK_THROWS_AS(ideal.emit_sampled({cplx(0, 0), cplx(0, 0)}), std::logic_error);
    CHECK_THROWS_AS(ideal.emit_projected({cplx(0, 0), cplx(0, 0)}), std::logic_error);
    BeaconEmitter sampled(cs, BeaconMode::SampleAverage, 1.0, 4, Rng(1));
    CHECK_THROWS_AS(sampled.emit_ideal({cplx(0, 0), cplx(0, 0)}), std::logic_error);
}

}  // TEST_SUITE
