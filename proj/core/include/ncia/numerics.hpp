#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ncia::num {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

/// Dense row-major complex matrix, sized for the handful of subcarriers the
/// alignment scheme works over (K <= 16 in practice).
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> d);
    /// Single-column matrix.
    static ComplexMatrix column_vector(std::span<const Complex> v);
    /// Single-row matrix.
    static ComplexMatrix row_vector(std::span<const Complex> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> entries() const noexcept { return data_; }

    CVector row(std::size_t r) const;
    CVector column(std::size_t c) const;
    void set_row(std::size_t r, std::span<const Complex> v);
    void set_column(std::size_t c, std::span<const Complex> v);

    /// First `n` columns.
    ComplexMatrix leading_columns(std::size_t n) const;

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix& operator*=(Complex s);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

/// Matrix-vector product a * x.
CVector multiply(const ComplexMatrix& a, std::span<const Complex> x);
/// Conjugated inner product x^H y.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double norm_squared(std::span<const Complex> x);
double norm(std::span<const Complex> x);

struct SvdResult {
    ComplexMatrix u;  ///< m x m unitary
    RVector s;        ///< min(m, n) singular values, descending
    ComplexMatrix v;  ///< n x n unitary
};

/// First `n_s` columns of the order-`k` Sylvester Hadamard matrix, scaled to
/// orthonormal columns. Throws InvalidArgument unless k is a power of two and
/// 1 <= n_s <= k.
ComplexMatrix hadamard_trunk(std::size_t k, std::size_t n_s);

/// Full SVD a = u * diag(s) * v^H by one-sided Jacobi rotations.
///
/// Both unitary factors are complete: when a has fewer columns than rows (or
/// is rank deficient) the trailing left singular vectors span the left null
/// space. The largest-magnitude entry of every left singular vector is made
/// real and positive, with the matching right vector co-rotated, so results
/// are reproducible bit for bit.
///
/// Throws NumericalFailure if 100 sweeps do not bring the off-diagonal mass
/// below 1e-13 relative, and InvalidArgument on non-finite input.
SvdResult svd(const ComplexMatrix& a);

/// Inverse by Gaussian elimination with partial pivoting. Throws
/// SingularMatrix when a pivot falls below 1e-12 * max|a_ij|.
ComplexMatrix invert(const ComplexMatrix& a);

/// Returned by condition_estimate for numerically rank-deficient input.
inline constexpr double kConditionSentinel = 1e300;

/// Ratio of extreme singular values. Singular values at or below
/// max(m, n) * eps * s_max count as zero and yield kConditionSentinel.
double condition_estimate(const ComplexMatrix& a);

} // namespace ncia::num
