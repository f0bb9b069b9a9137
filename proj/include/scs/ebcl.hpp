#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "scs/beacon.hpp"
#include "scs/cmatrix.hpp"

namespace scs {

enum class ProbeKind { Baseline, Diagonal, OffDiagRe, OffDiagIm };

struct ProbeLabel {
    ProbeKind kind = ProbeKind::Baseline;
    int l = 0;
    int m = 0;

    friend bool operator<(const ProbeLabel& a, const ProbeLabel& b) {
        return std::tie(a.kind, a.l, a.m) < std::tie(b.kind, b.l, b.m);
    }
    friend bool operator==(const ProbeLabel& a, const ProbeLabel& b) {
        return std::tie(a.kind, a.l, a.m) == std::tie(b.kind, b.l, b.m);
    }
};

// Unit probe vector with cos(theta) at entry l and e^{-i phi} sin(theta) at
// entry m; the baseline probe is the zero vector.
struct ProbeVector {
    ProbeLabel label;
    double theta = 0.0;
    double phi = 0.0;
    cvec as_vector;
};

// Ordered schedule: baseline, the t2 basis probes e_l, then for each l < m
// the pair r_{l,m}(pi/4, 0) and r_{l,m}(pi/4, pi/2). Length t2^2 + 1.
std::vector<ProbeVector> probe_schedule(int t2);

// Reconstruction of alpha * G from the beacon energies, with eigendecomposition
// and the relative null threshold used by null_space.
struct LearnedGram {
    ComplexMatrix g_hat;
    bool scaled_by_alpha = true;  // g_hat equals alpha * G for unknown alpha > 0
    HermitianEig eig;
    double null_tol = 1e-8;
    int measurement_count = 0;
};

// Closed-form recovery of the Gram entries from one full probe schedule of
// measurements. neg_diag_tol bounds how negative a reconstructed diagonal
// entry may be before the data is declared inconsistent; negative means
// "derive from the reconstruction scale" (1e-9 of the largest diagonal).
LearnedGram reconstruct_gram(const std::map<ProbeLabel, double>& measurements,
                             double null_tol = 1e-8, double neg_diag_tol = -1.0);

struct Precoder {
    ComplexMatrix t;                     // t2 x d, orthonormal columns
    std::vector<int> selected_indices;   // indices into the eigendecomposition
    std::vector<double> residual_levels; // eigenvalue of each selected column
};

// Columns with eigenvalue <= null_tol * lambda_max (all columns when the
// learned Gram is numerically zero), ordered from smallest eigenvalue up.
Precoder null_space(const LearnedGram& lg);

// Null-space columns plus extra_dims more eigenvectors of smallest positive
// eigenvalue; ties keep the lower eigendecomposition index.
Precoder partial_precoder(const LearnedGram& lg, int extra_dims);

// Runs the full schedule against the emitter, one transmission cycle per
// probe. In sample-averaged modes, eight additional baseline probes follow
// the schedule to calibrate the beacon noise, the null threshold becomes the
// calibrated 3-sigma value, and measurement_count includes the extra probes.
LearnedGram run_learning_session(BeaconEmitter& emitter, int t2);

}  // namespace scs
