#pragma once

#include <complex>
#include <vector>

namespace scs {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Dense row-major complex matrix. Degenerate shapes (0 rows or 0 columns)
// are representable so that an empty precoder is a valid value; ordinary
// operations never produce NaN/Inf from finite inputs.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    cvec data;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c);

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }

    cplx& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    const cplx& at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    bool empty() const { return rows == 0 || cols == 0; }
};

struct HermitianEig {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // unitary, column k pairs with values[k]
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conj_transpose(const ComplexMatrix& a);
cvec matvec(const ComplexMatrix& a, const cvec& x);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cplx factor);

// x* A x. For Hermitian A the imaginary part is numerically negligible and
// callers read .real() as the energy value.
cplx quadratic_form(const ComplexMatrix& a, const cvec& x);

double frobenius_norm(const ComplexMatrix& a);
double vector_norm(const cvec& x);

// Cyclic Jacobi with fixed row-major sweep order; converges when the
// off-diagonal Frobenius norm drops below 1e-12 * ||A||_F or after 100
// sweeps. Input must be Hermitian within 1e-10 * ||A||_F and is symmetrized
// internally. Each eigenvector is phased so its largest-magnitude entry is
// real positive; ties among equal eigenvalues keep the pre-sort column order.
HermitianEig hermitian_eig(const ComplexMatrix& a);

// Moore-Penrose pseudo-inverse via the eigendecomposition of the smaller
// Gram matrix; singular values at or below tol * sigma_max are treated as
// zero (absolute floor 1e-14 relative to sigma_max handles the zero matrix).
ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol);

// Orthogonal projector onto the column space of b.
ComplexMatrix column_space_projector(const ComplexMatrix& b, double tol);

// Count of singular values above rel_tol * sigma_max; rel_tol must lie in
// (0,1). The zero matrix has rank 0.
int numeric_rank(const ComplexMatrix& a, double rel_tol);

}  // namespace scs
