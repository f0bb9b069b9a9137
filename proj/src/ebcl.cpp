#include "scs/ebcl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scs {

namespace {

constexpr double kAbsFloor = 1e-14;
constexpr int kCalibrationProbes = 8;

std::string label_str(const ProbeLabel& label) {
    switch (label.kind) {
        case ProbeKind::Baseline: return "baseline";
        case ProbeKind::Diagonal: return "diag(" + std::to_string(label.l) + ")";
        case ProbeKind::OffDiagRe:
            return "offdiag_re(" + std::to_string(label.l) + "," + std::to_string(label.m) + ")";
        case ProbeKind::OffDiagIm:
            return "offdiag_im(" + std::to_string(label.l) + "," + std::to_string(label.m) + ")";
    }
    return "?";
}

double fetch(const std::map<ProbeLabel, double>& measurements, const ProbeLabel& label) {
    const auto it = measurements.find(label);
    if (it == measurements.end()) {
        throw std::invalid_argument("reconstruct_gram: missing probe value " + label_str(label));
    }
    return it->second;
}

}  // namespace

std::vector<ProbeVector> probe_schedule(int t2) {
    if (t2 < 1) {
        throw std::invalid_argument("probe_schedule: t2 must be >= 1");
    }
    std::vector<ProbeVector> schedule;
    schedule.reserve(static_cast<size_t>(t2) * t2 + 1);

    ProbeVector baseline;
    baseline.label = {ProbeKind::Baseline, 0, 0};
    baseline.as_vector.assign(static_cast<size_t>(t2), cplx(0.0, 0.0));
    schedule.push_back(std::move(baseline));

    for (int l = 0; l < t2; ++l) {
        ProbeVector p;
        p.label = {ProbeKind::Diagonal, l, l};
        p.theta = 0.0;
        p.phi = 0.0;
        p.as_vector.assign(static_cast<size_t>(t2), cplx(0.0, 0.0));
        p.as_vector[static_cast<size_t>(l)] = 1.0;
        schedule.push_back(std::move(p));
    }

    const double quarter = 0.25 * M_PI;
    const double c = std::cos(quarter);
    const double s = std::sin(quarter);
    for (int l = 0; l < t2; ++l) {
        for (int m = l + 1; m < t2; ++m) {
            ProbeVector re;
            re.label = {ProbeKind::OffDiagRe, l, m};
            re.theta = quarter;
            re.phi = 0.0;
            re.as_vector.assign(static_cast<size_t>(t2), cplx(0.0, 0.0));
            re.as_vector[static_cast<size_t>(l)] = c;
            re.as_vector[static_cast<size_t>(m)] = s;
            schedule.push_back(std::move(re));

            ProbeVector im;
            im.label = {ProbeKind::OffDiagIm, l, m};
            im.theta = quarter;
            im.phi = 0.5 * M_PI;
            im.as_vector.assign(static_cast<size_t>(t2), cplx(0.0, 0.0));
            im.as_vector[static_cast<size_t>(l)] = c;
            im.as_vector[static_cast<size_t>(m)] = cplx(0.0, -s);
            schedule.push_back(std::move(im));
        }
    }
    return schedule;
}

LearnedGram reconstruct_gram(const std::map<ProbeLabel, double>& measurements,
                             double null_tol, double neg_diag_tol) {
    int t2 = 0;
    for (const auto& [label, value] : measurements) {
        (void)value;
        if (label.kind == ProbeKind::Diagonal) ++t2;
    }
    if (t2 < 1) {
        throw std::invalid_argument("reconstruct_gram: no diagonal probe values");
    }
    const size_t expected = static_cast<size_t>(t2) * static_cast<size_t>(t2) + 1;
    if (measurements.size() != expected) {
        throw std::invalid_argument("reconstruct_gram: expected " + std::to_string(expected) +
                                    " measurements for t2=" + std::to_string(t2) + ", got " +
                                    std::to_string(measurements.size()));
    }

    const double baseline = fetch(measurements, {ProbeKind::Baseline, 0, 0});

    std::vector<double> diag(static_cast<size_t>(t2));
    for (int l = 0; l < t2; ++l) {
        diag[static_cast<size_t>(l)] = fetch(measurements, {ProbeKind::Diagonal, l, l}) - baseline;
    }

    double max_diag = 0.0;
    for (double d : diag) max_diag = std::max(max_diag, d);
    const double neg_tol =
        neg_diag_tol >= 0.0 ? neg_diag_tol : 1e-9 * std::max(max_diag, 0.0) + kAbsFloor;
    for (int l = 0; l < t2; ++l) {
        if (diag[static_cast<size_t>(l)] < -neg_tol) {
            throw std::runtime_error(
                "reconstruct_gram: diagonal entry " + std::to_string(l) +
                " reconstructed as " + std::to_string(diag[static_cast<size_t>(l)]) +
                ", below tolerance -" + std::to_string(neg_tol) +
                "; beacon data inconsistent (alpha not constant or noise uncalibrated)");
        }
    }

    LearnedGram lg;
    lg.g_hat = ComplexMatrix(t2, t2);
    for (int l = 0; l < t2; ++l) {
        lg.g_hat.at(l, l) = diag[static_cast<size_t>(l)];
    }
    for (int l = 0; l < t2; ++l) {
        for (int m = l + 1; m < t2; ++m) {
            const double diag_avg =
                0.5 * (diag[static_cast<size_t>(l)] + diag[static_cast<size_t>(m)]);
            const double e_re =
                fetch(measurements, {ProbeKind::OffDiagRe, l, m}) - baseline - diag_avg;
            const double e_im =
                fetch(measurements, {ProbeKind::OffDiagIm, l, m}) - baseline - diag_avg;
            lg.g_hat.at(l, m) = cplx(e_re, e_im);
            lg.g_hat.at(m, l) = cplx(e_re, -e_im);
        }
    }
    lg.eig = hermitian_eig(lg.g_hat);
    lg.null_tol = null_tol;
    lg.measurement_count = static_cast<int>(measurements.size());
    return lg;
}

namespace {

// Eigenvalues ascending with ties keeping the lower eigendecomposition
// index; returns indices into lg.eig.
std::vector<int> ascending_order(const LearnedGram& lg) {
    std::vector<int> order(lg.eig.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return lg.eig.values[static_cast<size_t>(a)] < lg.eig.values[static_cast<size_t>(b)];
    });
    return order;
}

Precoder build_precoder(const LearnedGram& lg, const std::vector<int>& selection) {
    const int n = lg.g_hat.rows;
    Precoder p;
    p.t = ComplexMatrix(n, static_cast<int>(selection.size()));
    for (size_t c = 0; c < selection.size(); ++c) {
        const int k = selection[c];
        p.selected_indices.push_back(k);
        p.residual_levels.push_back(lg.eig.values[static_cast<size_t>(k)]);
        for (int i = 0; i < n; ++i) {
            p.t.at(i, static_cast<int>(c)) = lg.eig.vectors.at(i, k);
        }
    }
    return p;
}

int null_count(const LearnedGram& lg, const std::vector<int>& order) {
    const double lambda_max = lg.eig.values.empty() ? 0.0 : lg.eig.values[0];
    if (lambda_max <= kAbsFloor) return static_cast<int>(order.size());
    const double cut = lg.null_tol * lambda_max;
    int count = 0;
    for (int idx : order) {
        if (lg.eig.values[static_cast<size_t>(idx)] <= cut) ++count;
    }
    return count;
}

}  // namespace

Precoder null_space(const LearnedGram& lg) {
    const std::vector<int> order = ascending_order(lg);
    const int d = null_count(lg, order);
    return build_precoder(lg, {order.begin(), order.begin() + d});
}

Precoder partial_precoder(const LearnedGram& lg, int extra_dims) {
    if (extra_dims < 0) {
        throw std::invalid_argument("partial_precoder: extra_dims must be >= 0");
    }
    const std::vector<int> order = ascending_order(lg);
    const int d = null_count(lg, order);
    if (d + extra_dims > lg.g_hat.rows) {
        throw std::invalid_argument("partial_precoder: null dimension " + std::to_string(d) +
                                    " plus extra_dims " + std::to_string(extra_dims) +
                                    " exceeds t2=" + std::to_string(lg.g_hat.rows));
    }
    return build_precoder(lg, {order.begin(), order.begin() + d + extra_dims});
}

LearnedGram run_learning_session(BeaconEmitter& emitter, int t2) {
    const int calls_before = emitter.call_count();
    const std::vector<ProbeVector> schedule = probe_schedule(t2);
    std::map<ProbeLabel, double> measurements;
    for (const ProbeVector& probe : schedule) {
        measurements[probe.label] = emitter.emit(probe.as_vector);
    }

    if (!beacon_mode_is_sampled(emitter.mode())) {
        return reconstruct_gram(measurements);
    }

    // Noise calibration: repeat the baseline probe, then propagate the
    // known sample-average variance form Var(q) = sigma_b^2 (1 + 2 s / b)
    // through the reconstruction formulas to a per-entry RMS deviation.
    const cvec zero_probe(static_cast<size_t>(t2), cplx(0.0, 0.0));
    std::vector<double> baselines;
    baselines.push_back(measurements.at({ProbeKind::Baseline, 0, 0}));
    for (int i = 0; i < kCalibrationProbes; ++i) {
        baselines.push_back(emitter.emit(zero_probe));
    }
    const double n_bases = static_cast<double>(baselines.size());
    double b_mean = 0.0;
    for (double b : baselines) b_mean += b;
    b_mean /= n_bases;
    double b_var = 0.0;
    for (double b : baselines) b_var += (b - b_mean) * (b - b_mean);
    b_var /= (n_bases - 1.0);

    measurements[{ProbeKind::Baseline, 0, 0}] = b_mean;

    const int t2i = t2;
    auto probe_variance = [&](const ProbeLabel& label) {
        const double q = measurements.at(label);
        const double s = std::max(q - b_mean, 0.0);
        const double rel = (b_mean > 0.0) ? 2.0 * s / b_mean : 0.0;
        return b_var * (1.0 + rel);
    };

    double null_tol = 1e-8;
    double neg_tol = -1.0;
    if (b_var > 0.0 && b_mean > 0.0) {
        std::vector<double> var_diag(static_cast<size_t>(t2i));
        double max_var_diag = 0.0;
        for (int l = 0; l < t2i; ++l) {
            var_diag[static_cast<size_t>(l)] =
                probe_variance({ProbeKind::Diagonal, l, l}) + b_var / n_bases;
            max_var_diag = std::max(max_var_diag, var_diag[static_cast<size_t>(l)]);
        }
        double total_var = 0.0;
        for (int l = 0; l < t2i; ++l) total_var += var_diag[static_cast<size_t>(l)];
        for (int l = 0; l < t2i; ++l) {
            for (int m = l + 1; m < t2i; ++m) {
                const double quarter_diag = 0.25 * (var_diag[static_cast<size_t>(l)] +
                                                    var_diag[static_cast<size_t>(m)]);
                const double var_re =
                    probe_variance({ProbeKind::OffDiagRe, l, m}) + quarter_diag;
                const double var_im =
                    probe_variance({ProbeKind::OffDiagIm, l, m}) + quarter_diag;
                total_var += 2.0 * (var_re + var_im);
            }
        }
        const double sigma_entry =
            std::sqrt(total_var / (static_cast<double>(t2i) * static_cast<double>(t2i)));
        const double tau = 3.0 * sigma_entry;
        neg_tol = 6.0 * std::sqrt(max_var_diag) + kAbsFloor;

        LearnedGram lg = reconstruct_gram(measurements, 1e-8, neg_tol);
        const double lambda_max = lg.eig.values.empty() ? 0.0 : lg.eig.values[0];
        if (lambda_max > kAbsFloor) {
            null_tol = std::max(1e-8, tau / lambda_max);
        }
        lg.null_tol = null_tol;
        lg.measurement_count = emitter.call_count() - calls_before;
        return lg;
    }

    LearnedGram lg = reconstruct_gram(measurements, null_tol, neg_tol);
    lg.measurement_count = emitter.call_count() - calls_before;
    return lg;
}

}  // namespace scs
