#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "residua/rational.hpp"

namespace residua {

using VecZ = std::vector<long long>;

/// Dense row-major integer matrix, sized at construction.
class MatZ {
public:
    MatZ() : rows_(0), cols_(0) {}
    MatZ(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

    static MatZ identity(int n) {
        MatZ m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static MatZ from_rows(const std::vector<VecZ>& rows) {
        MatZ m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows_; ++i)
            for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        return m;
    }
    static MatZ from_cols(const std::vector<VecZ>& cols) {
        MatZ m(cols.empty() ? 0 : static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols_; ++j)
            for (int i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long long& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    long long operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    VecZ row(int i) const {
        VecZ r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    VecZ col(int j) const {
        VecZ c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    MatZ transposed() const {
        MatZ t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend MatZ operator*(const MatZ& a, const MatZ& b) {
        assert(a.cols_ == b.rows_);
        MatZ c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                long long aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    __int128 v = (__int128)c(i, j) + (__int128)aik * b(k, j);
                    c(i, j) = detail::checked_cast(v, "matrix product");
                }
            }
        return c;
    }

    VecZ apply(const VecZ& x) const {
        assert(static_cast<int>(x.size()) == cols_);
        VecZ y(rows_, 0);
        for (int i = 0; i < rows_; ++i) {
            __int128 acc = 0;
            for (int j = 0; j < cols_; ++j) acc += (__int128)(*this)(i, j) * x[j];
            y[i] = detail::checked_cast(acc, "matrix apply");
        }
        return y;
    }

    VecQ apply(const VecQ& x) const {
        assert(static_cast<int>(x.size()) == cols_);
        VecQ y(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i) {
            Rational acc(0);
            for (int j = 0; j < cols_; ++j) acc += Rational((*this)(i, j)) * x[j];
            y[i] = acc;
        }
        return y;
    }

    bool operator==(const MatZ& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const MatZ& o) const { return !(*this == o); }
    bool operator<(const MatZ& o) const { return a_ < o.a_; } // size-compatible uses only

private:
    int rows_, cols_;
    std::vector<long long> a_;
};

inline long long dotzz(const VecZ& a, const VecZ& b) {
    assert(a.size() == b.size());
    __int128 acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += (__int128)a[i] * b[i];
    return detail::checked_cast(acc, "dot product");
}

inline Rational dotqz(const VecQ& a, const VecZ& b) {
    assert(a.size() == b.size());
    Rational acc(0);
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * Rational(b[i]);
    return acc;
}

inline VecZ addz(const VecZ& a, const VecZ& b) {
    VecZ c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}
inline VecZ subz(const VecZ& a, const VecZ& b) {
    VecZ c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}
inline VecZ negz(const VecZ& a) {
    VecZ c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
    return c;
}
inline VecZ scalez(long long s, const VecZ& a) {
    VecZ c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = detail::checked_cast((__int128)s * a[i], "vector scale");
    return c;
}
inline bool is_zerov(const VecZ& a) {
    for (long long x : a) if (x != 0) return false;
    return true;
}
inline long long content(const VecZ& a) {
    long long g = 0;
    for (long long x : a) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}
/// Sign of the first nonzero entry; 0 for the zero vector.
inline int lex_sign(const VecZ& a) {
    for (long long x : a) {
        if (x > 0) return 1;
        if (x < 0) return -1;
    }
    return 0;
}

/// Smith normal form  D = U * A * V  with U, V unimodular and the diagonal of
/// D satisfying d1 | d2 | ... >= 0.
struct SmithForm {
    MatZ d, u, v;
    int rank = 0;
    std::vector<long long> diag() const {
        std::vector<long long> out;
        int n = std::min(d.rows(), d.cols());
        for (int i = 0; i < n; ++i) out.push_back(d(i, i));
        return out;
    }
};

SmithForm smith_form(MatZ a);

/// Basis (as rows) of the integer kernel { x : A x = 0 }.
MatZ integer_kernel(const MatZ& a);

/// Solves A x = b over the rationals; nullopt when inconsistent.
std::optional<VecQ> solve_rational(const MatZ& a, const VecQ& b);

/// Determinant of a square matrix (via fraction-free elimination).
long long det(const MatZ& a);

/// Inverse of a unimodular matrix (det = +-1); throws otherwise.
MatZ unimodular_inverse(const MatZ& a);

/// Rational inverse as pair (integer matrix, common denominator).
struct MatQScaled {
    MatZ mat;
    long long den = 1;
    VecQ apply(const VecQ& x) const {
        VecQ y = mat.apply(x);
        for (auto& e : y) e /= Rational(den);
        return y;
    }
    VecQ apply(const VecZ& x) const {
        VecQ xq(x.size());
        for (size_t i = 0; i < x.size(); ++i) xq[i] = Rational(x[i]);
        return apply(xq);
    }
};
MatQScaled rational_inverse(const MatZ& a);

/// All solutions s (mod Z^n) of A s = c (mod Z^m).  Requires the solution set
/// to be finite, i.e. rank(A) = n; throws otherwise.  Entries returned in [0,1).
std::vector<VecQ> solve_congruences(const MatZ& a, const VecQ& c);

/// Saturation of the row span: basis (rows) of (row span of A) tensor Q, intersected with Z^n.
MatZ saturate_rows(const MatZ& a);

/// Index [super : sub] where rows of each matrix span lattices with
/// span_Q(sub) = span_Q(super); throws on rank mismatch.
long long lattice_index(const MatZ& super_rows, const MatZ& sub_rows);

/// Membership of x in the row lattice of A.
bool in_row_lattice(const MatZ& a, const VecQ& x);

/// Invariant factors (> 1) of the quotient (row lattice of super)/(row lattice of sub).
std::vector<long long> quotient_invariants(const MatZ& super_rows, const MatZ& sub_rows);

/// Row-style Hermite normal form of the row lattice: unique canonical basis
/// (row echelon, positive pivots, entries above pivots reduced). Zero rows dropped.
MatZ hermite_rows(const MatZ& a);

} // namespace residua
