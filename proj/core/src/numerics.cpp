#include "ncia/numerics.hpp"

#include "ncia/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>

namespace ncia::num {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<Complex>(rows * cols)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
        throw DimensionError(fmt::format("matrix must be non-empty, got {}x{}", rows_, cols_));
    }
    if (data_.size() != rows_ * cols_) {
        throw DimensionError(
            fmt::format("{} entries supplied for a {}x{} matrix", data_.size(), rows_, cols_));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    if (rows_ == 0 || cols_ == 0) {
        throw DimensionError("matrix literal must be non-empty");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::column_vector(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::row_vector(std::span<const Complex> v) {
    return ComplexMatrix(1, v.size(), std::vector<Complex>(v.begin(), v.end()));
}

CVector ComplexMatrix::row(std::size_t r) const {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * cols_);
    return CVector(first, first + static_cast<std::ptrdiff_t>(cols_));
}

CVector ComplexMatrix::column(std::size_t c) const {
    CVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

void ComplexMatrix::set_row(std::size_t r, std::span<const Complex> v) {
    if (v.size() != cols_) {
        throw DimensionError("set_row: length mismatch");
    }
    std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> v) {
    if (v.size() != rows_) {
        throw DimensionError("set_column: length mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        (*this)(r, c) = v[r];
    }
}

ComplexMatrix ComplexMatrix::leading_columns(std::size_t n) const {
    if (n == 0 || n > cols_) {
        throw DimensionError(fmt::format("cannot take {} of {} columns", n, cols_));
    }
    ComplexMatrix out(rows_, n);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c) = (*this)(r, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    return norm(data_);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw DimensionError(
            fmt::format("product of {}x{} and {}x{}", a.rows_, a.cols_, b.rows_, b.cols_));
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols_; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(fmt::format("{}: {}x{} vs {}x{}", op, a.rows(), a.cols(), b.rows(),
                                         b.cols()));
    }
}

} // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "sum");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] += b.data_[i];
    }
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "difference");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] -= b.data_[i];
    }
    return out;
}

CVector multiply(const ComplexMatrix& a, std::span<const Complex> x) {
    if (x.size() != a.cols()) {
        throw DimensionError(
            fmt::format("{}x{} matrix times length-{} vector", a.rows(), a.cols(), x.size()));
    }
    CVector y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < a.cols(); ++c) {
            acc += a(r, c) * x[c];
        }
        y[r] = acc;
    }
    return y;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) {
        throw DimensionError("inner product of unequal lengths");
    }
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

double norm_squared(std::span<const Complex> x) {
    double acc = 0.0;
    for (const auto& z : x) {
        acc += std::norm(z);
    }
    return acc;
}

double norm(std::span<const Complex> x) {
    return std::sqrt(norm_squared(x));
}

ComplexMatrix hadamard_trunk(std::size_t k, std::size_t n_s) {
    if (k == 0 || !std::has_single_bit(k)) {
        throw InvalidArgument(fmt::format("Sylvester Hadamard order must be a power of two, got {}", k));
    }
    if (n_s == 0 || n_s > k) {
        throw InvalidArgument(fmt::format("trunk width {} outside [1, {}]", n_s, k));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    ComplexMatrix m(k, n_s);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n_s; ++c) {
            // Sylvester entry: (-1)^popcount(r & c)
            m(r, c) = (std::popcount(r & c) % 2 == 0) ? scale : -scale;
        }
    }
    return m;
}

namespace {

constexpr std::size_t kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-13;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hestenes one-sided Jacobi for rows >= cols. Returns unnormalised factors.
SvdResult svd_tall(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexMatrix w = a;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double frob2 = norm_squared(a.entries());

    auto col_dot = [&](std::size_t i, std::size_t j) {
        Complex acc{};
        for (std::size_t r = 0; r < m; ++r) {
            acc += std::conj(w(r, i)) * w(r, j);
        }
        return acc;
    };
    auto col_norm2 = [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            acc += std::norm(w(r, i));
        }
        return acc;
    };

    bool converged = frob2 == 0.0 || n == 1;
    std::size_t sweep = 0;
    while (!converged) {
        if (sweep == kMaxSweeps) {
            throw NumericalFailure(
                fmt::format("svd: Jacobi sweeps did not converge after {} sweeps", sweep), sweep);
        }
        ++sweep;
        double off2 = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double alpha = col_norm2(i);
                const double beta = col_norm2(j);
                const Complex gamma = col_dot(i, j);
                const double g = std::abs(gamma);
                off2 += g * g;
                if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) {
                    continue;
                }
                // a_j e^{-i arg(gamma)} makes the pair's inner product real
                const Complex phase = std::conj(gamma) / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < m; ++r) {
                    const Complex wi = w(r, i);
                    const Complex wj = w(r, j) * phase;
                    w(r, i) = c * wi - s * wj;
                    w(r, j) = s * wi + c * wj;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex vi = v(r, i);
                    const Complex vj = v(r, j) * phase;
                    v(r, i) = c * vi - s * vj;
                    v(r, j) = s * vi + c * vj;
                }
            }
        }
        converged = std::sqrt(off2) <= kOffDiagonalTolerance * frob2;
    }

    RVector sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(col_norm2(j));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out{ComplexMatrix(m, m), RVector(n), ComplexMatrix(n, n)};
    const double s_max = sigma[order.front()];
    const double rank_floor = static_cast<double>(std::max(m, n)) * kEps * s_max;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.s[k] = sigma[j];
        out.v.set_column(k, v.column(j));
        if (sigma[j] > rank_floor && sigma[j] > 0.0) {
            CVector u = w.column(j);
            for (auto& z : u) {
                z /= sigma[j];
            }
            out.u.set_column(k, u);
            rank = k + 1;
        }
    }

    // Complete the left basis from canonical vectors by modified Gram-Schmidt,
    // picking the candidate with the largest residual each time.
    std::vector<CVector> basis;
    basis.reserve(m);
    for (std::size_t k = 0; k < rank; ++k) {
        basis.push_back(out.u.column(k));
    }
    auto orthogonalise = [&](CVector x) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const Complex p = inner(b, x);
                for (std::size_t r = 0; r < m; ++r) {
                    x[r] -= p * b[r];
                }
            }
        }
        return x;
    };
    std::vector<bool> used(m, false);
    while (basis.size() < m) {
        double best_norm = -1.0;
        std::size_t best = 0;
        CVector best_vec;
        for (std::size_t e = 0; e < m; ++e) {
            if (used[e]) {
                continue;
            }
            CVector x(m);
            x[e] = 1.0;
            x = orthogonalise(std::move(x));
            const double nx = norm(x);
            if (nx > best_norm) {
                best_norm = nx;
                best = e;
                best_vec = std::move(x);
            }
        }
        used[best] = true;
        for (auto& z : best_vec) {
            z /= best_norm;
        }
        basis.push_back(orthogonalise(std::move(best_vec)));
        const double nb = norm(basis.back());
        for (auto& z : basis.back()) {
            z /= nb;
        }
    }
    for (std::size_t k = rank; k < m; ++k) {
        out.u.set_column(k, basis[k]);
    }
    return out;
}

// Largest-magnitude entry of each left vector made real-positive.
void normalise_phases(SvdResult& r) {
    const std::size_t m = r.u.rows();
    const std::size_t paired = r.s.size();
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double mag = std::abs(r.u(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const Complex pivot = r.u(arg, j);
        if (pivot.imag() == 0.0 && pivot.real() > 0.0) {
            continue;
        }
        const Complex rot = std::conj(pivot) / std::abs(pivot);
        for (std::size_t i = 0; i < m; ++i) {
            r.u(i, j) *= rot;
        }
        r.u(arg, j) = Complex{std::abs(pivot), 0.0};
        if (j < paired) {
            for (std::size_t i = 0; i < r.v.rows(); ++i) {
                r.v(i, j) *= rot;
            }
        }
    }
}

} // namespace

SvdResult svd(const ComplexMatrix& a) {
    if (!a.all_finite()) {
        throw InvalidArgument("svd: matrix has non-finite entries");
    }
    SvdResult r = [&] {
        if (a.rows() >= a.cols()) {
            return svd_tall(a);
        }
        SvdResult t = svd_tall(a.adjoint());
        return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
    }();
    normalise_phases(r);
    return r;
}

ComplexMatrix invert(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError(fmt::format("invert: {}x{} is not square", a.rows(), a.cols()));
    }
    if (!a.all_finite()) {
        throw InvalidArgument("invert: matrix has non-finite entries");
    }
    const std::size_t n = a.rows();
    const double floor = 1e-12 * a.max_abs();
    ComplexMatrix lu = a;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, col));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best <= floor || best == 0.0) {
            throw SingularMatrix(
                fmt::format("invert: pivot {:.3e} in column {} below floor {:.3e}", best, col, floor));
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(lu(pivot, c), lu(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const Complex d = lu(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            lu(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const Complex f = lu(r, col);
            if (f == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                lu(r, c) -= f * lu(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

double condition_estimate(const ComplexMatrix& a) {
    const SvdResult r = svd(a);
    const double s_max = r.s.front();
    const double s_min = r.s.back();
    const double floor = static_cast<double>(std::max(a.rows(), a.cols())) * kEps * s_max;
    if (s_max == 0.0 || s_min <= floor) {
        return kConditionSentinel;
    }
    return std::min(s_max / s_min, kConditionSentinel);
}

} // namespace ncia::num
