#include "scs/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scs {

namespace {

constexpr double kAbsFloor = 1e-14;

std::string shape_str(const ComplexMatrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int r, int c) : rows(r), cols(c) {
    if (r < 0 || c < 0) {
        throw std::invalid_argument("ComplexMatrix: negative dimension " +
                                    std::to_string(r) + "x" + std::to_string(c));
    }
    data.assign(static_cast<size_t>(r) * static_cast<size_t>(c), cplx(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: dimension mismatch " + shape_str(a) +
                                    " * " + shape_str(b));
    }
    ComplexMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols; ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) {
            out.at(j, i) = std::conj(a.at(i, j));
        }
    }
    return out;
}

cvec matvec(const ComplexMatrix& a, const cvec& x) {
    if (static_cast<size_t>(a.cols) != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch " + shape_str(a) +
                                    " * vector of length " + std::to_string(x.size()));
    }
    cvec out(static_cast<size_t>(a.rows), cplx(0.0, 0.0));
    for (int i = 0; i < a.rows; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* row = a.data.data() + static_cast<size_t>(i) * a.cols;
        for (int j = 0; j < a.cols; ++j) acc += row[j] * x[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("add: dimension mismatch " + shape_str(a) + " + " +
                                    shape_str(b));
    }
    ComplexMatrix out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("subtract: dimension mismatch " + shape_str(a) +
                                    " - " + shape_str(b));
    }
    ComplexMatrix out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

ComplexMatrix scale(const ComplexMatrix& a, cplx factor) {
    ComplexMatrix out = a;
    for (auto& v : out.data) v *= factor;
    return out;
}

cplx quadratic_form(const ComplexMatrix& a, const cvec& x) {
    if (a.rows != a.cols) {
        throw std::invalid_argument("quadratic_form: matrix not square, " + shape_str(a));
    }
    if (static_cast<size_t>(a.rows) != x.size()) {
        throw std::invalid_argument("quadratic_form: dimension mismatch " + shape_str(a) +
                                    " with vector of length " + std::to_string(x.size()));
    }
    cplx acc(0.0, 0.0);
    for (int i = 0; i < a.rows; ++i) {
        cplx row_acc(0.0, 0.0);
        for (int j = 0; j < a.cols; ++j) row_acc += a.at(i, j) * x[static_cast<size_t>(j)];
        acc += std::conj(x[static_cast<size_t>(i)]) * row_acc;
    }
    return acc;
}

double frobenius_norm(const ComplexMatrix& a) {
    double acc = 0.0;
    for (const auto& v : a.data) acc += std::norm(v);
    return std::sqrt(acc);
}

double vector_norm(const cvec& x) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return std::sqrt(acc);
}

namespace {

double offdiag_norm(const ComplexMatrix& s) {
    double acc = 0.0;
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            if (i != j) acc += std::norm(s.at(i, j));
        }
    }
    return std::sqrt(acc);
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& a) {
    if (a.rows != a.cols) {
        throw std::invalid_argument("hermitian_eig: matrix not square, " + shape_str(a));
    }
    const int n = a.rows;
    if (n == 0) {
        HermitianEig eig;
        eig.vectors = ComplexMatrix(0, 0);
        return eig;
    }
    const double norm_f = frobenius_norm(a);

    double herm_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            herm_dev += 0.25 * std::norm(a.at(i, j) - std::conj(a.at(j, i)));
        }
    }
    herm_dev = std::sqrt(herm_dev);
    if (herm_dev > 1e-10 * norm_f) {
        throw std::invalid_argument("hermitian_eig: input not Hermitian (deviation " +
                                    std::to_string(herm_dev) + ", norm " +
                                    std::to_string(norm_f) + ")");
    }

    ComplexMatrix s(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            s.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
        }
    }
    ComplexMatrix w = ComplexMatrix::identity(n);

    const double off_target = 1e-12 * norm_f;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm(s) <= off_target) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx beta = s.at(p, q);
                const double abs_beta = std::abs(beta);
                if (abs_beta <= 1e-300) continue;
                const cplx phase = beta / abs_beta;  // e^{i psi}
                const double app = s.at(p, p).real();
                const double aqq = s.at(q, q).real();
                const double tau = (app - aqq) / (2.0 * abs_beta);
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sv = t * c;

                const cplx vpq = -sv * phase;            // V[p][q]
                const cplx vqp = sv * std::conj(phase);  // V[q][p]

                // S <- V* S V, applied as column then row updates.
                for (int k = 0; k < n; ++k) {
                    const cplx skp = s.at(k, p);
                    const cplx skq = s.at(k, q);
                    s.at(k, p) = c * skp + vqp * skq;
                    s.at(k, q) = vpq * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx spk = s.at(p, k);
                    const cplx sqk = s.at(q, k);
                    s.at(p, k) = c * spk + std::conj(vqp) * sqk;
                    s.at(q, k) = std::conj(vpq) * spk + c * sqk;
                }
                s.at(p, q) = 0.0;
                s.at(q, p) = 0.0;
                s.at(p, p) = cplx(s.at(p, p).real(), 0.0);
                s.at(q, q) = cplx(s.at(q, q).real(), 0.0);

                for (int k = 0; k < n; ++k) {
                    const cplx wkp = w.at(k, p);
                    const cplx wkq = w.at(k, q);
                    w.at(k, p) = c * wkp + vqp * wkq;
                    w.at(k, q) = vpq * wkp + c * wkq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return s.at(i, i).real() > s.at(j, j).real();
    });

    HermitianEig eig;
    eig.values.resize(static_cast<size_t>(n));
    eig.vectors = ComplexMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<size_t>(k)];
        eig.values[static_cast<size_t>(k)] = s.at(src, src).real();
        int max_idx = 0;
        double max_mag = -1.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(w.at(i, src));
            if (mag > max_mag) {
                max_mag = mag;
                max_idx = i;
            }
        }
        cplx rot(1.0, 0.0);
        if (max_mag > kAbsFloor) {
            rot = std::conj(w.at(max_idx, src)) / max_mag;
        }
        for (int i = 0; i < n; ++i) eig.vectors.at(i, k) = w.at(i, src) * rot;
    }
    return eig;
}

namespace {

// Singular values through the smaller Gram matrix's eigenvectors. The naive
// sqrt of Gram eigenvalues carries a sqrt(eps) noise floor from the squaring;
// re-evaluating sigma_k = ||A v_k|| restores full relative accuracy, which
// the 1e-8 rank thresholds depend on.
std::vector<double> singular_values_desc(const ComplexMatrix& a) {
    const bool use_ata = a.cols <= a.rows;
    const ComplexMatrix side = use_ata ? a : conj_transpose(a);
    const ComplexMatrix gram = matmul(conj_transpose(side), side);
    const HermitianEig eig = hermitian_eig(gram);
    const int n = gram.rows;
    std::vector<double> sv(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        cvec v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = eig.vectors.at(i, k);
        sv[static_cast<size_t>(k)] = vector_norm(matvec(side, v));
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

}  // namespace

ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol) {
    if (tol < 0.0) {
        throw std::invalid_argument("pseudo_inverse: tol must be >= 0");
    }
    ComplexMatrix out(a.cols, a.rows);
    if (a.empty()) return out;

    const bool use_ata = a.cols <= a.rows;
    if (use_ata) {
        const HermitianEig eig = hermitian_eig(matmul(conj_transpose(a), a));
        std::vector<cvec> vs(static_cast<size_t>(a.cols));
        std::vector<cvec> avs(static_cast<size_t>(a.cols));
        std::vector<double> sigma(static_cast<size_t>(a.cols));
        double sigma_max = 0.0;
        for (int k = 0; k < a.cols; ++k) {
            cvec v(static_cast<size_t>(a.cols));
            for (int i = 0; i < a.cols; ++i) v[static_cast<size_t>(i)] = eig.vectors.at(i, k);
            cvec av = matvec(a, v);
            sigma[static_cast<size_t>(k)] = vector_norm(av);
            sigma_max = std::max(sigma_max, sigma[static_cast<size_t>(k)]);
            vs[static_cast<size_t>(k)] = std::move(v);
            avs[static_cast<size_t>(k)] = std::move(av);
        }
        if (sigma_max <= kAbsFloor) return out;
        const double cutoff = sigma_max * std::max(tol, kAbsFloor);
        for (int k = 0; k < a.cols; ++k) {
            const double s = sigma[static_cast<size_t>(k)];
            if (s <= cutoff) continue;
            const double lambda = s * s;
            const cvec& v = vs[static_cast<size_t>(k)];
            const cvec& av = avs[static_cast<size_t>(k)];
            for (int i = 0; i < a.cols; ++i) {
                for (int j = 0; j < a.rows; ++j) {
                    out.at(i, j) += v[static_cast<size_t>(i)] *
                                    std::conj(av[static_cast<size_t>(j)]) / lambda;
                }
            }
        }
    } else {
        const HermitianEig eig = hermitian_eig(matmul(a, conj_transpose(a)));
        const ComplexMatrix ah = conj_transpose(a);
        std::vector<cvec> us(static_cast<size_t>(a.rows));
        std::vector<cvec> ahus(static_cast<size_t>(a.rows));
        std::vector<double> sigma(static_cast<size_t>(a.rows));
        double sigma_max = 0.0;
        for (int k = 0; k < a.rows; ++k) {
            cvec u(static_cast<size_t>(a.rows));
            for (int i = 0; i < a.rows; ++i) u[static_cast<size_t>(i)] = eig.vectors.at(i, k);
            cvec ahu = matvec(ah, u);
            sigma[static_cast<size_t>(k)] = vector_norm(ahu);
            sigma_max = std::max(sigma_max, sigma[static_cast<size_t>(k)]);
            us[static_cast<size_t>(k)] = std::move(u);
            ahus[static_cast<size_t>(k)] = std::move(ahu);
        }
        if (sigma_max <= kAbsFloor) return out;
        const double cutoff = sigma_max * std::max(tol, kAbsFloor);
        for (int k = 0; k < a.rows; ++k) {
            const double s = sigma[static_cast<size_t>(k)];
            if (s <= cutoff) continue;
            const double lambda = s * s;
            const cvec& u = us[static_cast<size_t>(k)];
            const cvec& ahu = ahus[static_cast<size_t>(k)];
            for (int i = 0; i < a.cols; ++i) {
                for (int j = 0; j < a.rows; ++j) {
                    out.at(i, j) += ahu[static_cast<size_t>(i)] *
                                    std::conj(u[static_cast<size_t>(j)]) / lambda;
                }
            }
        }
    }
    return out;
}

ComplexMatrix column_space_projector(const ComplexMatrix& b, double tol) {
    if (tol < 0.0) {
        throw std::invalid_argument("column_space_projector: tol must be >= 0");
    }
    ComplexMatrix p(b.rows, b.rows);
    if (b.empty()) return p;
    const HermitianEig eig = hermitian_eig(matmul(b, conj_transpose(b)));
    const ComplexMatrix bh = conj_transpose(b);
    std::vector<double> sigma(static_cast<size_t>(b.rows));
    double sigma_max = 0.0;
    for (int k = 0; k < b.rows; ++k) {
        cvec u(static_cast<size_t>(b.rows));
        for (int i = 0; i < b.rows; ++i) u[static_cast<size_t>(i)] = eig.vectors.at(i, k);
        sigma[static_cast<size_t>(k)] = vector_norm(matvec(bh, u));
        sigma_max = std::max(sigma_max, sigma[static_cast<size_t>(k)]);
    }
    if (sigma_max <= kAbsFloor) return p;
    const double cutoff = sigma_max * std::max(tol, kAbsFloor);
    for (int k = 0; k < b.rows; ++k) {
        if (sigma[static_cast<size_t>(k)] <= cutoff) continue;
        for (int i = 0; i < b.rows; ++i) {
            for (int j = 0; j < b.rows; ++j) {
                p.at(i, j) += eig.vectors.at(i, k) * std::conj(eig.vectors.at(j, k));
            }
        }
    }
    return p;
}

int numeric_rank(const ComplexMatrix& a, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw std::invalid_argument("numeric_rank: rel_tol must lie in (0,1)");
    }
    if (a.empty()) return 0;
    const std::vector<double> sv = singular_values_desc(a);
    const double sigma_max = sv.empty() ? 0.0 : sv[0];
    if (sigma_max <= kAbsFloor) return 0;
    int rank = 0;
    for (double sigma : sv) {
        if (sigma > rel_tol * sigma_max) ++rank;
    }
    return rank;
}

}  // namespace scs
