#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace polarlam {

template <std::size_t N>
using Matrix = std::array<std::array<double, N>, N>;

template <std::size_t N>
using Vector = std::array<double, N>;

/// Determinant by Gaussian elimination with partial pivoting.
template <std::size_t N>
double determinant(Matrix<N> a) noexcept {
    double det = 1.0;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

/// Leading k x k block of `a`.
template <std::size_t K, std::size_t N>
Matrix<K> leading_block(const Matrix<N>& a) noexcept {
    static_assert(K <= N);
    Matrix<K> out{};
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) out[i][j] = a[i][j];
    return out;
}

template <std::size_t N>
double quadratic_form(const Matrix<N>& a, const Vector<N>& x) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) s += x[i] * a[i][j] * x[j];
    return s;
}

template <std::size_t N>
double max_abs_entry(const Matrix<N>& a) noexcept {
    double m = 0.0;
    for (const auto& row : a)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

template <std::size_t N>
bool is_symmetric(const Matrix<N>& a, double rel_tol = 1e-12) noexcept {
    const double tol = rel_tol * max_abs_entry(a);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (!(std::abs(a[i][j] - a[j][i]) <= tol)) return false;
    return true;
}

}  // namespace polarlam
