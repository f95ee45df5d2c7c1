#include "residua/intmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace residua {

namespace {

void swap_rows(MatZ& m, int i, int j) {
    for (int k = 0; k < m.cols(); ++k) std::swap(m(i, k), m(j, k));
}
void swap_cols(MatZ& m, int i, int j) {
    for (int k = 0; k < m.rows(); ++k) std::swap(m(k, i), m(k, j));
}
// row i -= q * row j
void row_axpy(MatZ& m, int i, int j, long long q) {
    if (q == 0) return;
    for (int k = 0; k < m.cols(); ++k)
        m(i, k) = detail::checked_cast((__int128)m(i, k) - (__int128)q * m(j, k), "row op");
}
void col_axpy(MatZ& m, int i, int j, long long q) {
    if (q == 0) return;
    for (int k = 0; k < m.rows(); ++k)
        m(k, i) = detail::checked_cast((__int128)m(k, i) - (__int128)q * m(k, j), "col op");
}
void negate_row(MatZ& m, int i) {
    for (int k = 0; k < m.cols(); ++k) m(i, k) = -m(i, k);
}

} // namespace

SmithForm smith_form(MatZ a) {
    const int m = a.rows(), n = a.cols();
    SmithForm sf;
    sf.u = MatZ::identity(m);
    sf.v = MatZ::identity(n);

    auto diagonalize = [&]() {
        int t = 0;
        while (t < m && t < n) {
            int pi = -1, pj = -1;
            long long best = 0;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j) {
                    long long v = std::llabs(a(i, j));
                    if (v != 0 && (pi < 0 || v < best)) { best = v; pi = i; pj = j; }
                }
            if (pi < 0) break;
            if (pi != t) { swap_rows(a, t, pi); swap_rows(sf.u, t, pi); }
            if (pj != t) { swap_cols(a, t, pj); swap_cols(sf.v, t, pj); }
            bool clean = false;
            while (!clean) {
                clean = true;
                for (int i = t + 1; i < m; ++i) {
                    if (a(i, t) == 0) continue;
                    long long q = a(i, t) / a(t, t);
                    row_axpy(a, i, t, q);
                    row_axpy(sf.u, i, t, q);
                    if (a(i, t) != 0) {
                        swap_rows(a, t, i);
                        swap_rows(sf.u, t, i);
                        clean = false;
                    }
                }
                for (int j = t + 1; j < n; ++j) {
                    if (a(t, j) == 0) continue;
                    long long q = a(t, j) / a(t, t);
                    col_axpy(a, j, t, q);
                    col_axpy(sf.v, j, t, q);
                    if (a(t, j) != 0) {
                        swap_cols(a, t, j);
                        swap_cols(sf.v, t, j);
                        clean = false;
                    }
                }
            }
            ++t;
        }
        return t;
    };

    int rank = diagonalize();
    // divisibility chain: mix the offending column in and rediagonalize
    while (true) {
        for (int i = 0; i < rank; ++i)
            if (a(i, i) < 0) { negate_row(a, i); negate_row(sf.u, i); }
        int bad = -1;
        for (int i = 0; i + 1 < rank; ++i)
            if (a(i + 1, i + 1) % a(i, i) != 0) { bad = i; break; }
        if (bad < 0) break;
        col_axpy(a, bad, bad + 1, -1); // col bad += col bad+1
        col_axpy(sf.v, bad, bad + 1, -1);
        rank = diagonalize();
    }
    sf.rank = rank;
    sf.d = a;
    return sf;
}

MatZ integer_kernel(const MatZ& a) {
    SmithForm sf = smith_form(a);
    // A = U^-1 D V^-1; A x = 0 iff D (V^-1 x) = 0 iff the first rank coords of V^-1 x vanish.
    // Kernel basis: columns of V with index >= rank.
    std::vector<VecZ> rows;
    for (int j = sf.rank; j < sf.v.cols(); ++j) rows.push_back(sf.v.col(j));
    if (rows.empty()) return MatZ(0, a.cols());
    return MatZ::from_rows(rows);
}

std::optional<VecQ> solve_rational(const MatZ& a, const VecQ& b) {
    const int m = a.rows(), n = a.cols();
    std::vector<VecQ> w(m, VecQ(n + 1));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) w[i][j] = Rational(a(i, j));
        w[i][n] = b[i];
    }
    int r = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < n && r < m; ++c) {
        int p = -1;
        for (int i = r; i < m; ++i)
            if (!w[i][c].is_zero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(w[p], w[r]);
        Rational inv = Rational(1) / w[r][c];
        for (int j = c; j <= n; ++j) w[r][j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || w[i][c].is_zero()) continue;
            Rational f = w[i][c];
            for (int j = c; j <= n; ++j) w[i][j] -= f * w[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < m; ++i)
        if (!w[i][n].is_zero()) return std::nullopt;
    VecQ x(n, Rational(0));
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = w[i][n];
    return x;
}

long long det(const MatZ& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det of non-square matrix");
    SmithForm sf = smith_form(a);
    if (sf.rank < a.rows()) return 0;
    __int128 d = 1;
    for (int i = 0; i < a.rows(); ++i) d *= sf.d(i, i);
    // |det U| = |det V| = 1, so |det A| = prod d_i; recover the sign separately.
    // Sign via rational elimination on the original matrix.
    VecQ dummy;
    {
        const int n = a.rows();
        std::vector<VecQ> w(n, VecQ(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i][j] = Rational(a(i, j));
        int sign = 1;
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int i = c; i < n; ++i)
                if (!w[i][c].is_zero()) { p = i; break; }
            if (p < 0) return 0;
            if (p != c) { std::swap(w[p], w[c]); sign = -sign; }
            for (int i = c + 1; i < n; ++i) {
                if (w[i][c].is_zero()) continue;
                Rational f = w[i][c] / w[c][c];
                for (int j = c; j < n; ++j) w[i][j] -= f * w[c][j];
            }
        }
        if (sign < 0) d = -d;
    }
    return detail::checked_cast(d, "determinant");
}

MatZ unimodular_inverse(const MatZ& a) {
    SmithForm sf = smith_form(a);
    if (sf.rank != a.rows() || a.rows() != a.cols())
        throw std::invalid_argument("not invertible");
    for (int i = 0; i < a.rows(); ++i)
        if (sf.d(i, i) != 1) throw std::invalid_argument("matrix is not unimodular");
    // A = U^-1 V^-1  =>  A^-1 = V U
    return sf.v * sf.u;
}

MatQScaled rational_inverse(const MatZ& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const int n = a.rows();
    long long d = det(a);
    if (d == 0) throw std::invalid_argument("singular matrix");
    // adj via rational solve of A x = d e_i
    MatZ inv(n, n);
    for (int i = 0; i < n; ++i) {
        VecQ e(n, Rational(0));
        e[i] = Rational(d);
        auto x = solve_rational(a, e);
        if (!x) throw std::logic_error("inverse solve failed");
        for (int j = 0; j < n; ++j) {
            if (!(*x)[j].is_integer()) throw std::logic_error("adjugate not integral");
            inv(j, i) = (*x)[j].num();
        }
    }
    MatQScaled out;
    out.mat = inv;
    out.den = d;
    return out;
}

std::vector<VecQ> solve_congruences(const MatZ& a, const VecQ& c) {
    const int m = a.rows(), n = a.cols();
    SmithForm sf = smith_form(a);
    if (sf.rank != n)
        throw std::invalid_argument("congruence system with infinite solution set");
    // A s = c (mod 1), s = V t:  D t = U c (mod 1)
    VecQ uc(m, Rational(0));
    for (int i = 0; i < m; ++i) {
        Rational acc(0);
        for (int j = 0; j < m; ++j) acc += Rational(sf.u(i, j)) * c[j];
        uc[i] = acc;
    }
    for (int i = n; i < m; ++i)
        if (!uc[i].mod1().is_zero()) return {};
    std::vector<VecQ> ts{VecQ(n, Rational(0))};
    for (int i = 0; i < n; ++i) {
        long long di = sf.d(i, i);
        std::vector<VecQ> next;
        for (long long k = 0; k < di; ++k) {
            Rational ti = (uc[i] + Rational(k)) / Rational(di);
            for (auto t : ts) {
                t[i] = ti;
                next.push_back(t);
            }
        }
        ts = std::move(next);
    }
    std::vector<VecQ> out;
    out.reserve(ts.size());
    for (const auto& t : ts) {
        VecQ s(n, Rational(0));
        for (int i = 0; i < n; ++i) {
            Rational acc(0);
            for (int j = 0; j < n; ++j) acc += Rational(sf.v(i, j)) * t[j];
            s[i] = acc.mod1();
        }
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MatZ saturate_rows(const MatZ& a) {
    if (a.rows() == 0) return a;
    // Kernel of (kernel of A^T)^T ... simpler: SNF A = U^-1 D V^-1.
    // Row span saturation: rows of D V^-1 with diagonal set to 1.
    SmithForm sf = smith_form(a);
    MatZ vinv = unimodular_inverse(sf.v);
    std::vector<VecZ> rows;
    for (int i = 0; i < sf.rank; ++i) rows.push_back(vinv.row(i));
    if (rows.empty()) return MatZ(0, a.cols());
    return MatZ::from_rows(rows);
}

long long lattice_index(const MatZ& super_rows, const MatZ& sub_rows) {
    auto inv = quotient_invariants(super_rows, sub_rows);
    __int128 idx = 1;
    for (long long f : inv) idx *= f;
    return detail::checked_cast(idx, "lattice index");
}

bool in_row_lattice(const MatZ& a, const VecQ& x) {
    // solve y A = x over Q, require integrality
    auto y = solve_rational(a.transposed(), x);
    if (!y) return false;
    for (const auto& e : *y)
        if (!e.is_integer()) return false;
    return true;
}

MatZ hermite_rows(const MatZ& a) {
    const int m = a.rows(), n = a.cols();
    std::vector<VecZ> rows;
    for (int i = 0; i < m; ++i) rows.push_back(a.row(i));
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        // euclid on column c below row r
        while (true) {
            int p = -1;
            long long best = 0;
            for (int i = r; i < m; ++i) {
                long long v = std::llabs(rows[i][c]);
                if (v != 0 && (p < 0 || v < best)) { best = v; p = i; }
            }
            if (p < 0) break;
            std::swap(rows[p], rows[r]);
            bool done = true;
            for (int i = r + 1; i < m; ++i) {
                if (rows[i][c] == 0) continue;
                long long q = rows[i][c] / rows[r][c];
                for (int k = 0; k < n; ++k)
                    rows[i][k] = detail::checked_cast((__int128)rows[i][k] - (__int128)q * rows[r][k], "hnf");
                if (rows[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (int k = 0; k < n; ++k) rows[r][k] = -rows[r][k];
        // reduce entries above the pivot
        for (int i = 0; i < r; ++i) {
            long long q = rows[i][c] / rows[r][c];
            if (rows[i][c] % rows[r][c] < 0) --q;
            if (q != 0)
                for (int k = 0; k < n; ++k)
                    rows[i][k] = detail::checked_cast((__int128)rows[i][k] - (__int128)q * rows[r][k], "hnf");
        }
        ++r;
    }
    rows.resize(r);
    if (rows.empty()) return MatZ(0, n);
    return MatZ::from_rows(rows);
}

std::vector<long long> quotient_invariants(const MatZ& super_rows, const MatZ& sub_rows) {
    // Express sub basis in super coordinates: rows y with y * super = sub_row.
    const int k = super_rows.rows();
    MatZ coeff(sub_rows.rows(), k);
    for (int i = 0; i < sub_rows.rows(); ++i) {
        VecQ b(sub_rows.cols());
        for (int j = 0; j < sub_rows.cols(); ++j) b[j] = Rational(sub_rows(i, j));
        auto y = solve_rational(super_rows.transposed(), b);
        if (!y) throw std::invalid_argument("sub lattice not contained in rational span");
        for (int j = 0; j < k; ++j) {
            if (!(*y)[j].is_integer()) throw std::invalid_argument("sub lattice not contained in super lattice");
            coeff(i, j) = (*y)[j].num();
        }
    }
    SmithForm sf = smith_form(coeff);
    if (sf.rank != k) throw std::invalid_argument("quotient is infinite (rank defect)");
    std::vector<long long> inv;
    for (int i = 0; i < k; ++i)
        if (sf.d(i, i) != 1) inv.push_back(sf.d(i, i));
    return inv;
}

} // namespace residua
