#pragma once

// Independent reference evaluation of the MMSE filter formula
// W = Cxx A^H (Czz + A Cxx A^H)^{-1}, written against plain dense
// complex arrays with its own Gauss-Jordan inverse. Used only to check the
// production path; deliberately shares no code with it.

#include <complex>
#include <stdexcept>
#include <vector>

namespace noma::testing {

using zmat = std::vector<std::vector<std::complex<double>>>;

inline zmat zzeros(size_t r, size_t c) {
    return zmat(r, std::vector<std::complex<double>>(c));
}

inline zmat zmul(const zmat& a, const zmat& b) {
    zmat out = zzeros(a.size(), b[0].size());
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t k = 0; k < b.size(); ++k) {
            for (size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

inline zmat zadd(const zmat& a, const zmat& b) {
    zmat out = a;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < a[0].size(); ++j) out[i][j] += b[i][j];
    }
    return out;
}

inline zmat zadjoint(const zmat& a) {
    zmat out = zzeros(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < a[0].size(); ++j) out[j][i] = std::conj(a[i][j]);
    }
    return out;
}

// Gauss-Jordan with partial pivoting.
inline zmat zinverse(zmat m) {
    const size_t n = m.size();
    zmat inv = zzeros(n, n);
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-300) {
            throw std::runtime_error("reference inverse: singular matrix");
        }
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        const std::complex<double> d = m[col][col];
        for (size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const std::complex<double> f = m[r][col];
            if (f == std::complex<double>(0.0)) continue;
            for (size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// Literal evaluation of the definition.
inline zmat reference_mmse_filter(const zmat& a, const zmat& cxx, const zmat& czz) {
    const zmat inner = zadd(czz, zmul(zmul(a, cxx), zadjoint(a)));
    return zmul(zmul(cxx, zadjoint(a)), zinverse(inner));
}

}  // namespace noma::testing
