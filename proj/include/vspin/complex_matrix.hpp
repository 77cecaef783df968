#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <ostream>

#include "vspin/errors.hpp"

namespace vspin {

using Complex = std::complex<double>;

inline constexpr Complex kImag{0.0, 1.0};

// Default tolerance for operator equality checks. Callers can always pass
// their own; nothing below bakes this constant into a computation.
inline constexpr double kOperatorTol = 1e-12;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Dense NxN complex matrix, N fixed at compile time (2 for virtual-qubit
// factors, 4 for the full four-level space). Indices in the public interface
// are 1-based so that code reads like the level labels 1..4.
template <std::size_t N>
class ComplexMatrix {
    static_assert(N == 2 || N == 4, "only 2x2 and 4x4 matrices are supported");

  public:
    ComplexMatrix() : entries_{} {}

    // Row-major, 1-based construction helper.
    static ComplexMatrix from_rows(std::initializer_list<Complex> rows) {
        if (rows.size() != N * N) {
            throw Error("from_rows: expected " + std::to_string(N * N) + " entries");
        }
        ComplexMatrix m;
        std::size_t k = 0;
        for (Complex z : rows) {
            if (!is_finite(z)) {
                throw Error("from_rows: non-finite entry");
            }
            m.entries_[k++] = z;
        }
        return m;
    }

    static ComplexMatrix zero() { return ComplexMatrix{}; }

    static ComplexMatrix identity() {
        ComplexMatrix m;
        for (std::size_t i = 1; i <= N; ++i) {
            m.at(i, i) = 1.0;
        }
        return m;
    }

    // Single unit entry at (row, col); the projector P_mn for the 4x4 case.
    static ComplexMatrix unit(std::size_t row, std::size_t col) {
        check_index(row);
        check_index(col);
        ComplexMatrix m;
        m.at(row, col) = 1.0;
        return m;
    }

    static constexpr std::size_t dim() { return N; }

    Complex &at(std::size_t row, std::size_t col) {
        check_index(row);
        check_index(col);
        return entries_[(row - 1) * N + (col - 1)];
    }

    Complex at(std::size_t row, std::size_t col) const {
        check_index(row);
        check_index(col);
        return entries_[(row - 1) * N + (col - 1)];
    }

    ComplexMatrix &operator+=(const ComplexMatrix &other) {
        for (std::size_t k = 0; k < N * N; ++k) entries_[k] += other.entries_[k];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &other) {
        for (std::size_t k = 0; k < N * N; ++k) entries_[k] -= other.entries_[k];
        return *this;
    }

    ComplexMatrix &operator*=(Complex scale) {
        for (std::size_t k = 0; k < N * N; ++k) entries_[k] *= scale;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        ComplexMatrix c;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                const Complex aik = a.entries_[i * N + k];
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < N; ++j) {
                    c.entries_[i * N + j] += aik * b.entries_[k * N + j];
                }
            }
        }
        return c;
    }

  private:
    static void check_index(std::size_t i) {
        if (i < 1 || i > N) {
            throw Error("matrix index out of range (expected 1.." + std::to_string(N) + ")");
        }
    }

    std::array<Complex, N * N> entries_;
};

using Mat2 = ComplexMatrix<2>;
using Mat4 = ComplexMatrix<4>;

template <std::size_t N>
ComplexMatrix<N> adjoint(const ComplexMatrix<N> &a) {
    ComplexMatrix<N> b;
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t j = 1; j <= N; ++j) {
            b.at(j, i) = std::conj(a.at(i, j));
        }
    }
    return b;
}

template <std::size_t N>
Complex trace(const ComplexMatrix<N> &a) {
    Complex t = 0.0;
    for (std::size_t i = 1; i <= N; ++i) t += a.at(i, i);
    return t;
}

// Kronecker product; index (r,s) of the factors maps to 2(r-1)+s in the
// product, matching the level <-> virtual-qubit correspondence.
inline Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 c;
    for (std::size_t r = 1; r <= 2; ++r) {
        for (std::size_t rp = 1; rp <= 2; ++rp) {
            for (std::size_t s = 1; s <= 2; ++s) {
                for (std::size_t sp = 1; sp <= 2; ++sp) {
                    c.at(2 * (r - 1) + s, 2 * (rp - 1) + sp) = a.at(r, rp) * b.at(s, sp);
                }
            }
        }
    }
    return c;
}

template <std::size_t N>
double max_abs_diff(const ComplexMatrix<N> &a, const ComplexMatrix<N> &b) {
    double worst = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t j = 1; j <= N; ++j) {
            worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
        }
    }
    return worst;
}

template <std::size_t N>
bool approx_equal(const ComplexMatrix<N> &a, const ComplexMatrix<N> &b, double tol = kOperatorTol) {
    return max_abs_diff(a, b) <= tol;
}

template <std::size_t N>
bool is_unitary(const ComplexMatrix<N> &u, double tol = kOperatorTol) {
    return approx_equal(u * adjoint(u), ComplexMatrix<N>::identity(), tol);
}

template <std::size_t N>
bool is_hermitian(const ComplexMatrix<N> &a, double tol = kOperatorTol) {
    return approx_equal(a, adjoint(a), tol);
}

template <std::size_t N>
std::ostream &operator<<(std::ostream &os, const ComplexMatrix<N> &a) {
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t j = 1; j <= N; ++j) {
            const Complex z = a.at(i, j);
            os << (j == 1 ? "" : "  ") << z.real() << (z.imag() < 0 ? "-" : "+")
               << std::abs(z.imag()) << "i";
        }
        os << '\n';
    }
    return os;
}

}  // namespace vspin
