#include "loewner/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace loewner {

double norm(const CVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double distance(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

Complex hermitian_dot(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hermitian_dot: dimension mismatch");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

CVector add(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

CVector sub(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

CVector scale(const CVector& a, Complex k) {
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}

bool all_finite(const CVector& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
}

CVector matvec(const CMatrix& m, const CVector& v) {
    const std::size_t n = m.dim();
    if (v.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    CVector r(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i] += m(i, j) * v[j];
    return r;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("matmul: dimension mismatch");
    CMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

CMatrix mat_scale(const CMatrix& a, Complex k) {
    CMatrix r = a;
    for (auto& x : r.data()) x *= k;
    return r;
}

CMatrix mat_add(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("mat_add: dimension mismatch");
    CMatrix r = a;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] += b.data()[i];
    return r;
}

double frobenius_norm(const CMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

double operator_norm(const CMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(m(0, 0));
    // power iteration on A^H A with a fixed deterministic start
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = Complex(1.0 + 0.37 * static_cast<double>(i), 0.21 * static_cast<double>(i + 1));
    double nv = norm(v);
    for (auto& x : v) x /= nv;
    double sigma2 = 0.0;
    for (int iter = 0; iter < 400; ++iter) {
        CVector av = matvec(m, v);
        // w = A^H (A v)
        CVector w(n, Complex(0.0, 0.0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) w[j] += std::conj(m(i, j)) * av[i];
        const double nw = norm(w);
        if (nw == 0.0) return 0.0;
        const double next = nw; // Rayleigh quotient since ||v|| = 1
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        if (iter > 4 && std::abs(next - sigma2) <= 1e-15 * std::max(1.0, next)) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    return std::sqrt(sigma2);
}

namespace {

// LU with partial pivoting; returns false on (numerical) singularity.
bool lu_decompose(CMatrix& a, std::vector<std::size_t>& perm, int& sign) {
    const std::size_t n = a.dim();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::abs(a(r, col));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best == 0.0) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(perm[col], perm[piv]);
            sign = -sign;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / a(col, col);
            a(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return true;
}

} // namespace

Complex determinant(const CMatrix& m) {
    CMatrix lu = m;
    std::vector<std::size_t> perm;
    int sign = 0;
    if (!lu_decompose(lu, perm, sign)) return Complex(0.0, 0.0);
    Complex det(static_cast<double>(sign), 0.0);
    for (std::size_t i = 0; i < m.dim(); ++i) det *= lu(i, i);
    return det;
}

InverseResult invert(const CMatrix& m) {
    const std::size_t n = m.dim();
    InverseResult res;
    CMatrix lu = m;
    std::vector<std::size_t> perm;
    int sign = 0;
    if (!lu_decompose(lu, perm, sign)) {
        res.singular = true;
        res.inverse = CMatrix(n);
        res.condition = std::numeric_limits<double>::infinity();
        return res;
    }
    CMatrix inv(n);
    CVector col(n), x(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) col[i] = (perm[i] == c) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        // forward substitution (unit lower)
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = col[i];
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
        }
        // back substitution
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu(ii, j) * x[j];
            x[ii] /= lu(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, c) = x[i];
    }
    res.inverse = inv;
    res.condition = frobenius_norm(m) * frobenius_norm(inv);
    return res;
}

double max_abs_entry(const CMatrix& m) {
    double best = 0.0;
    for (const auto& z : m.data()) best = std::max(best, std::abs(z));
    return best;
}

} // namespace loewner
