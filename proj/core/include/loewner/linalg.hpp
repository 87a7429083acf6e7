#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace loewner {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Euclidean norm of a complex vector.
double norm(const CVector& v);

/// Euclidean distance between two complex vectors of equal dimension.
double distance(const CVector& a, const CVector& b);

/// Hermitian inner product sum_j a_j * conj(b_j).
Complex hermitian_dot(const CVector& a, const CVector& b);

CVector add(const CVector& a, const CVector& b);
CVector sub(const CVector& a, const CVector& b);
CVector scale(const CVector& a, Complex k);

bool all_finite(const CVector& v);

/// Dense square complex matrix, row-major storage.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), a_(n * n, Complex(0.0, 0.0)) {}

    static CMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    std::vector<Complex>& data() { return a_; }
    const std::vector<Complex>& data() const { return a_; }

private:
    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

CVector matvec(const CMatrix& m, const CVector& v);
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix mat_scale(const CMatrix& a, Complex k);
CMatrix mat_add(const CMatrix& a, const CMatrix& b);

double frobenius_norm(const CMatrix& m);

/// Spectral norm via power iteration on A^H A; exact to rounding for the
/// small dimensions used here.
double operator_norm(const CMatrix& m);

Complex determinant(const CMatrix& m);

struct InverseResult {
    CMatrix inverse;
    double condition = 0.0; // Frobenius-based estimate ||A|| * ||A^-1||
    bool singular = false;
};

/// Gaussian elimination with partial pivoting.
InverseResult invert(const CMatrix& m);

double max_abs_entry(const CMatrix& m);

} // namespace loewner
