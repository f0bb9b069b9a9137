#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scs/cmatrix.hpp"

namespace test_support {

using scs::ComplexMatrix;
using scs::cplx;
using scs::cvec;

// Tests draw their randomness from std::mt19937_64 so oracle inputs never
// depend on the library's own generator.
inline std::mt19937_64 make_gen(uint64_t seed) { return std::mt19937_64(seed); }

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& gen,
                                   double entry_std = 1.0) {
    std::normal_distribution<double> dist(0.0, entry_std / std::sqrt(2.0));
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data) v = cplx(dist(gen), dist(gen));
    return m;
}

inline cvec random_vector(int n, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    cvec x(static_cast<size_t>(n));
    for (auto& v : x) v = cplx(dist(gen), dist(gen));
    return x;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& gen) {
    ComplexMatrix a = random_matrix(n, n, gen);
    ComplexMatrix ah = scs::conj_transpose(a);
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) h.at(i, j) = 0.5 * (a.at(i, j) + ah.at(i, j));
    }
    return h;
}

inline ComplexMatrix random_psd(int n, int rank, std::mt19937_64& gen) {
    ComplexMatrix b = random_matrix(n, rank, gen);
    return scs::matmul(b, scs::conj_transpose(b));
}

inline ComplexMatrix triple_loop_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < b.cols; ++j) {
            cplx acc(0.0, 0.0);
            for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
            out.at(i, j) = acc;
        }
    }
    return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline double rel_frob_error(const ComplexMatrix& got, const ComplexMatrix& want) {
    const double denom = scs::frobenius_norm(want);
    const double num = scs::frobenius_norm(scs::subtract(got, want));
    if (denom <= 1e-300) return num;
    return num / denom;
}

// Largest principal angle between the column spans of two matrices with
// orthonormal columns, computed through sines: singular values of
// (I - A A*) B stay accurate near zero angles where the cosine route loses
// half the digits.
inline double max_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix pa = scs::matmul(a, scs::conj_transpose(a));
    ComplexMatrix residual = scs::subtract(b, scs::matmul(pa, b));
    const ComplexMatrix gram = scs::matmul(scs::conj_transpose(residual), residual);
    const scs::HermitianEig eig = scs::hermitian_eig(gram);
    const double s = std::sqrt(std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0));
    return std::asin(std::min(1.0, s));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace test_support
