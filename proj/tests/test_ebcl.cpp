#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "scs/beacon.hpp"
#include "scs/channel.hpp"
#include "scs/cmatrix.hpp"
#include "scs/ebcl.hpp"
#include "scs/rng.hpp"
#include "support.hpp"

using namespace scs;
using test_support::make_gen;
using test_support::max_abs_diff;
using test_support::random_matrix;
using test_support::rel_frob_error;

namespace {

ComplexMatrix mat(int rows, int cols, const std::vector<cplx>& entries) {
    ComplexMatrix m(rows, cols);
    m.data = entries;
    return m;
}

ChannelSet channel_for_learning(const ComplexMatrix& h12, double noise_power,
                                int t1 = 1) {
    ChannelSet cs;
    cs.h11 = ComplexMatrix(h12.rows, t1);
    cs.h12 = h12;
    cs.h21 = ComplexMatrix(1, t1);
    cs.h22 = ComplexMatrix(1, h12.cols);
    cs.noise_power_1 = noise_power;
    return cs;
}

LearnedGram learn_ideal(const ComplexMatrix& h12, double alpha, double noise_power) {
    ChannelSet cs = channel_for_learning(h12, noise_power);
    BeaconEmitter em(cs, BeaconMode::Ideal, alpha, 1, Rng(11));
    return run_learning_session(em, h12.cols);
}

bool what_contains(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("ebcl") {

TEST_CASE("probe schedule for t2=2 is the documented five-probe sequence") {
    const auto sched = probe_schedule(2);
    REQUIRE(sched.size() == 5);
    const double is2 = 1.0 / std::sqrt(2.0);

    CHECK(sched[0].label == ProbeLabel{ProbeKind::Baseline, 0, 0});
    CHECK(sched[0].as_vector == cvec{cplx(0, 0), cplx(0, 0)});

    CHECK(sched[1].label == ProbeLabel{ProbeKind::Diagonal, 0, 0});
    CHECK(std::abs(sched[1].as_vector[0] - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(sched[1].as_vector[1]) < 1e-15);

    CHECK(sched[2].label == ProbeLabel{ProbeKind::Diagonal, 1, 1});
    CHECK(std::abs(sched[2].as_vector[1] - cplx(1, 0)) < 1e-15);

    CHECK(sched[3].label == ProbeLabel{ProbeKind::OffDiagRe, 0, 1});
    CHECK(sched[3].theta == doctest::Approx(M_PI / 4));
    CHECK(sched[3].phi == 0.0);
    CHECK(std::abs(sched[3].as_vector[0] - cplx(is2, 0)) < 1e-15);
    CHECK(std::abs(sched[3].as_vector[1] - cplx(is2, 0)) < 1e-15);

    CHECK(sched[4].label == ProbeLabel{ProbeKind::OffDiagIm, 0, 1});
    CHECK(sched[4].phi == doctest::Approx(M_PI / 2));
    CHECK(std::abs(sched[4].as_vector[0] - cplx(is2, 0)) < 1e-15);
    CHECK(std::abs(sched[4].as_vector[1] - cplx(0, -is2)) < 1e-15);
}

TEST_CASE("probe schedule sizes and unit norms") {
    CHECK(probe_schedule(1).size() == 2);
    CHECK(probe_schedule(3).size() == 10);
    CHECK(probe_schedule(5).size() == 26);
    for (int t2 : {1, 2, 3, 4, 5}) {
        const auto sched = probe_schedule(t2);
        CHECK(sched.size() == static_cast<size_t>(t2) * t2 + 1);
        for (size_t i = 1; i < sched.size(); ++i) {
            CHECK(vector_norm(sched[i].as_vector) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(probe_schedule(0), std::invalid_argument);
    CHECK_THROWS_AS(probe_schedule(-3), std::invalid_argument);
}

TEST_CASE("reconstruction from hand-computed beacon values, complex Gram") {
    // h12 = [1, i], noise power 0.25, alpha 1: G = [[1, i], [-i, 1]].
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 0.25;
    q[{ProbeKind::Diagonal, 0, 0}] = 1.25;
    q[{ProbeKind::Diagonal, 1, 1}] = 1.25;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 1.25;
    q[{ProbeKind::OffDiagIm, 0, 1}] = 2.25;
    const LearnedGram lg = reconstruct_gram(q);
    const ComplexMatrix want = mat(2, 2, {cplx(1, 0), cplx(0, 1), cplx(0, -1), cplx(1, 0)});
    CHECK(max_abs_diff(lg.g_hat, want) < 1e-14);
    CHECK(lg.measurement_count == 5);
    CHECK(lg.eig.values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lg.eig.values[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reconstruction from hand-computed beacon values, real Gram") {
    // h12 = [1, 1], no noise: G = [[1, 1], [1, 1]].
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 0.0;
    q[{ProbeKind::Diagonal, 0, 0}] = 1.0;
    q[{ProbeKind::Diagonal, 1, 1}] = 1.0;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 2.0;
    q[{ProbeKind::OffDiagIm, 0, 1}] = 1.0;
    const LearnedGram lg = reconstruct_gram(q);
    const ComplexMatrix want = mat(2, 2, {cplx(1, 0), cplx(1, 0), cplx(1, 0), cplx(1, 0)});
    CHECK(max_abs_diff(lg.g_hat, want) < 1e-14);
}

TEST_CASE("ideal sessions recover alpha times the Gram for random channels") {
    auto gen = make_gen(50);
    for (int t2 : {1, 2, 3, 4, 5}) {
        const ComplexMatrix h12 = random_matrix(3, t2, gen);
        const ComplexMatrix g = matmul(conj_transpose(h12), h12);
        for (double a : {1.0, 7.3}) {
            ChannelSet cs = channel_for_learning(h12, 0.4, 2);
            BeaconEmitter em(cs, BeaconMode::Ideal, a, 1, Rng(12));
            const LearnedGram lg = run_learning_session(em, t2);
            CHECK(rel_frob_error(lg.g_hat, scale(g, a)) < 1e-12);
            CHECK(lg.measurement_count == t2 * t2 + 1);
            CHECK(em.call_count() == t2 * t2 + 1);
            CHECK(lg.null_tol == 1e-8);
            CHECK(lg.scaled_by_alpha);
        }
    }
}

TEST_CASE("learned Gram is exactly Hermitian by construction") {
    auto gen = make_gen(51);
    const ComplexMatrix h12 = random_matrix(2, 4, gen);
    const LearnedGram lg = learn_ideal(h12, 1.0, 0.2);
    for (int l = 0; l < 4; ++l) {
        for (int m = 0; m < 4; ++m) {
            CHECK(lg.g_hat.at(l, m) == std::conj(lg.g_hat.at(m, l)));
        }
    }
}

TEST_CASE("scale equivariance: alpha rescales the learned Gram only") {
    auto gen = make_gen(52);
    const ComplexMatrix h12 = random_matrix(2, 3, gen);
    const LearnedGram base = learn_ideal(h12, 1.0, 0.3);
    const LearnedGram scaled = learn_ideal(h12, 7.3, 0.3);
    CHECK(rel_frob_error(scaled.g_hat, scale(base.g_hat, 7.3)) < 1e-12);
    const Precoder pa = null_space(base);
    const Precoder pb = null_space(scaled);
    REQUIRE(pa.t.cols == pb.t.cols);
    CHECK(test_support::max_principal_angle(pa.t, pb.t) < 1e-8);
}

TEST_CASE("null space of the worked-example channel kills the interference") {
    const ComplexMatrix h12 = mat(1, 2, {cplx(1, 0), cplx(0, 1)});
    const LearnedGram lg = learn_ideal(h12, 1.0, 0.25);
    const Precoder p = null_space(lg);
    REQUIRE(p.t.cols == 1);
    CHECK(p.residual_levels[0] <= 1e-12);
    CHECK(frobenius_norm(matmul(h12, p.t)) < 1e-10);
    const ComplexMatrix tt = matmul(conj_transpose(p.t), p.t);
    CHECK(max_abs_diff(tt, ComplexMatrix::identity(1)) < 1e-12);
}

TEST_CASE("null space dimensions follow the rank deficit") {
    auto gen = make_gen(53);
    for (int r1 : {1, 2, 3}) {
        const int t2 = 4;
        const ComplexMatrix h12 = random_matrix(r1, t2, gen);
        const LearnedGram lg = learn_ideal(h12, 2.0, 0.1);
        const Precoder p = null_space(lg);
        CHECK(p.t.cols == t2 - r1);
        CHECK(frobenius_norm(matmul(h12, p.t)) < 1e-8 * frobenius_norm(h12));
        const ComplexMatrix tt = matmul(conj_transpose(p.t), p.t);
        CHECK(max_abs_diff(tt, ComplexMatrix::identity(t2 - r1)) < 1e-10);
        // residual levels ascending
        for (size_t i = 1; i < p.residual_levels.size(); ++i) {
            CHECK(p.residual_levels[i - 1] <= p.residual_levels[i]);
        }
    }
}

TEST_CASE("zero Gram yields the full space") {
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 0.7;
    q[{ProbeKind::Diagonal, 0, 0}] = 0.7;
    q[{ProbeKind::Diagonal, 1, 1}] = 0.7;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 0.7;
    q[{ProbeKind::OffDiagIm, 0, 1}] = 0.7;
    const LearnedGram lg = reconstruct_gram(q);
    CHECK(frobenius_norm(lg.g_hat) == 0.0);
    const Precoder p = null_space(lg);
    CHECK(p.t.cols == 2);
    const ComplexMatrix tt = matmul(conj_transpose(p.t), p.t);
    CHECK(max_abs_diff(tt, ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("partial precoder extends the null space by the smallest eigenvectors") {
    // Diagonal Gram diag(3, 2, 1) has no null space; the partial precoder
    // must pick the eigenvectors of 1, then 2.
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 0.0;
    q[{ProbeKind::Diagonal, 0, 0}] = 3.0;
    q[{ProbeKind::Diagonal, 1, 1}] = 2.0;
    q[{ProbeKind::Diagonal, 2, 2}] = 1.0;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 2.5;
    q[{ProbeKind::OffDiagIm, 0, 1}] = 2.5;
    q[{ProbeKind::OffDiagRe, 0, 2}] = 2.0;
    q[{ProbeKind::OffDiagIm, 0, 2}] = 2.0;
    q[{ProbeKind::OffDiagRe, 1, 2}] = 1.5;
    q[{ProbeKind::OffDiagIm, 1, 2}] = 1.5;
    const LearnedGram lg = reconstruct_gram(q);

    CHECK(null_space(lg).t.cols == 0);

    const Precoder p0 = partial_precoder(lg, 0);
    CHECK(p0.t.cols == 0);

    const Precoder p1 = partial_precoder(lg, 1);
    REQUIRE(p1.t.cols == 1);
    CHECK(p1.residual_levels[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p1.t.at(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    const Precoder p2 = partial_precoder(lg, 2);
    REQUIRE(p2.t.cols == 2);
    CHECK(p2.residual_levels[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p2.residual_levels[1] == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(partial_precoder(lg, 3).t.cols == 3);
    CHECK_THROWS_AS(partial_precoder(lg, 4), std::invalid_argument);
    CHECK_THROWS_AS(partial_precoder(lg, -1), std::invalid_argument);
}

TEST_CASE("partial precoder counts the null space toward the budget") {
    auto gen = make_gen(54);
    const ComplexMatrix h12 = random_matrix(2, 4, gen);  // null dim 2
    const LearnedGram lg = learn_ideal(h12, 1.0, 0.1);
    const Precoder p = partial_precoder(lg, 1);
    CHECK(p.t.cols == 3);
    // First two columns are the null space; the third carries interference.
    CHECK(frobenius_norm(matmul(h12, p.t)) > 1e-3);
    for (size_t i = 1; i < p.residual_levels.size(); ++i) {
        CHECK(p.residual_levels[i - 1] <= p.residual_levels[i]);
    }
    CHECK_THROWS_AS(partial_precoder(lg, 3), std::invalid_argument);
}

TEST_CASE("reconstruction validation rejects malformed measurement sets") {
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 0.0;
    q[{ProbeKind::Diagonal, 0, 0}] = 1.0;
    q[{ProbeKind::Diagonal, 1, 1}] = 1.0;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 1.0;
    // four of five measurements
    try {
        reconstruct_gram(q);
        FAIL("expected count rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(what_contains(e, "expected 5 measurements"));
    }

    // right count, wrong label
    q[{ProbeKind::OffDiagIm, 0, 2}] = 1.0;
    try {
        reconstruct_gram(q);
        FAIL("expected missing-probe rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(what_contains(e, "missing probe value"));
    }

    CHECK_THROWS_AS(reconstruct_gram({}), std::invalid_argument);
}

TEST_CASE("reconstruction flags inconsistent beacon data") {
    std::map<ProbeLabel, double> q;
    q[{ProbeKind::Baseline, 0, 0}] = 1.0;
    q[{ProbeKind::Diagonal, 0, 0}] = 0.2;  // energy below the noise floor
    q[{ProbeKind::Diagonal, 1, 1}] = 1.2;
    q[{ProbeKind::OffDiagRe, 0, 1}] = 1.1;
    q[{ProbeKind::OffDiagIm, 0, 1}] = 1.1;
    try {
        reconstruct_gram(q);
        FAIL("expected inconsistency rejection");
    } catch (const std::runtime_error& e) {
        CHECK(what_contains(e, "inconsistent"));
    }
    // A generous explicit tolerance accepts the same data.
    CHECK_NOTHROW(reconstruct_gram(q, 1e-8, 1.0));
}

TEST_CASE("sampled session calibrates noise and finds the right null space") {
    auto gen = make_gen(55);
    ComplexMatrix h12(2, 2);
    // rank-1 cross channel: null dimension 1
    const ComplexMatrix col = random_matrix(2, 1, gen);
    for (int i = 0; i < 2; ++i) {
        h12.at(i, 0) = col.at(i, 0);
        h12.at(i, 1) = cplx(0, 1) * col.at(i, 0);
    }
    ChannelSet cs = channel_for_learning(h12, 0.1, 2);
    cs.h11 = random_matrix(2, 2, gen);
    BeaconEmitter em(cs, BeaconMode::SampleAverage, 1.0, 10000, Rng(13));
    const LearnedGram lg = run_learning_session(em, 2);

    CHECK(lg.measurement_count == 13);  // 5 probes + 8 calibration baselines
    CHECK(em.call_count() == 13);
    CHECK(lg.null_tol >= 1e-8);

    const ComplexMatrix g = matmul(conj_transpose(h12), h12);
    CHECK(rel_frob_error(lg.g_hat, g) < 0.1);
    const Precoder p = null_space(lg);
    REQUIRE(p.t.cols == 1);
    CHECK(frobenius_norm(matmul(h12, p.t)) < 0.1 * frobenius_norm(h12));
}

TEST_CASE("sampled sessions are deterministic in the seed") {
    auto gen = make_gen(56);
    const ComplexMatrix h12 = random_matrix(2, 3, gen);
    ChannelSet cs = channel_for_learning(h12, 0.2, 2);
    cs.h11 = random_matrix(2, 2, gen);

    BeaconEmitter a(cs, BeaconMode::SampleAverage, 1.0, 200, Rng(14, 5));
    BeaconEmitter b(cs, BeaconMode::SampleAverage, 1.0, 200, Rng(14, 5));
    const LearnedGram la = run_learning_session(a, 3);
    const LearnedGram lb = run_learning_session(b, 3);
    REQUIRE(la.g_hat.data.size() == lb.g_hat.data.size());
    for (size_t i = 0; i < la.g_hat.data.size(); ++i) {
        CHECK(la.g_hat.data[i] == lb.g_hat.data[i]);
    }
    CHECK(la.null_tol == lb.null_tol);
}

TEST_CASE("sampled session error shrinks as N grows") {
    auto gen = make_gen(57);
    const ComplexMatrix h12 = random_matrix(2, 2, gen);
    const ComplexMatrix g = matmul(conj_transpose(h12), h12);
    ChannelSet cs = channel_for_learning(h12, 0.1, 2);
    cs.h11 = random_matrix(2, 2, gen);

    double prev = 1e300;
    for (int n : {100, 10000, 1000000}) {
        BeaconEmitter em(cs, BeaconMode::SampleAverage, 1.0, n, Rng(15));
        const LearnedGram lg = run_learning_session(em, 2);
        const double err = rel_frob_error(lg.g_hat, g);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("projected ideal session learns the projected Gram") {
    auto gen = make_gen(58);
    ChannelSet cs;
    cs.h11 = random_matrix(2, 1, gen);
    cs.h12 = random_matrix(2, 3, gen);
    cs.h21 = ComplexMatrix(1, 1);
    cs.h22 = ComplexMatrix(1, 3);
    cs.noise_power_1 = 0.3;
    const ComplexMatrix p = column_space_projector(cs.h11, 1e-8);
    const double alpha = 1.4;
    BeaconEmitter em(cs, BeaconMode::ProjectedIdeal, alpha, 1, Rng(16), p);
    const LearnedGram lg = run_learning_session(em, 3);

    const ComplexMatrix want =
        scale(matmul(conj_transpose(cs.h12), matmul(p, cs.h12)), alpha);
    CHECK(rel_frob_error(lg.g_hat, want) < 1e-10);

    // Projected Gram has rank <= rank(h11) = 1, so the null space gains a
    // dimension over the unprojected t2 - r1 = 1.
    const Precoder proj_null = null_space(lg);
    CHECK(proj_null.t.cols == 2);
    CHECK(frobenius_norm(matmul(matmul(p, cs.h12), proj_null.t)) <
          1e-8 * frobenius_norm(cs.h12));
}

}  // TEST_SUITE
