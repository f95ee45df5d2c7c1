#include "residua/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "residua/intmat.hpp"

namespace residua {

namespace {

// quotient of integer polynomials, exact division assumed
std::vector<long long> divz(const std::vector<long long>& num, const std::vector<long long>& den) {
    std::vector<long long> r = num;
    std::vector<long long> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, 0);
    long long lead = den.back();
    for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(den.size()) - 1; --i) {
        long long c = r[i] / lead;
        if (r[i] % lead != 0) throw std::logic_error("inexact cyclotomic division");
        q[i - den.size() + 1] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < den.size(); ++j)
            r[i - den.size() + 1 + j] -= c * den[j];
    }
    for (long long v : r)
        if (v != 0) throw std::logic_error("inexact cyclotomic division");
    return q;
}

} // namespace

const std::vector<long long>& Cyclotomic::cyclotomic_poly(long long n) {
    static std::map<long long, std::vector<long long>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::vector<long long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (long long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        num = divz(num, cyclotomic_poly(d));
    }
    return cache.emplace(n, std::move(num)).first->second;
}

std::vector<Rational> Cyclotomic::mod_phi(std::vector<Rational> p, long long n) {
    const auto& phi = cyclotomic_poly(n);
    const size_t deg = phi.size() - 1;
    while (p.size() > deg) {
        Rational c = p.back();
        size_t top = p.size() - 1;
        p.pop_back();
        if (c.is_zero()) continue;
        for (size_t j = 0; j < deg; ++j)
            p[top - deg + j] -= c * Rational(phi[j]);
    }
    p.resize(deg, Rational(0));
    return p;
}

Cyclotomic Cyclotomic::root_of_unity(const Rational& t) {
    Rational u = t.mod1();
    long long n = u.den();
    long long k = u.num();
    if (n == 1) return Cyclotomic(Rational(1));
    std::vector<Rational> p(k + 1, Rational(0));
    p[k] = Rational(1);
    Cyclotomic z(n, mod_phi(std::move(p), n));
    z.reduce_conductor();
    return z;
}

bool Cyclotomic::is_zero() const {
    for (const auto& q : c_)
        if (!q.is_zero()) return false;
    return true;
}

Rational Cyclotomic::rational_value() const {
    if (n_ != 1) throw std::logic_error("cyclotomic value is not rational");
    return c_[0];
}

Cyclotomic Cyclotomic::raise(const Cyclotomic& x, long long m) {
    if (x.n_ == m) return x;
    if (m % x.n_ != 0) throw std::logic_error("bad conductor raise");
    long long s = m / x.n_;
    std::vector<Rational> p;
    for (size_t k = 0; k < x.c_.size(); ++k) {
        if (x.c_[k].is_zero()) continue;
        size_t e = k * s;
        if (p.size() <= e) p.resize(e + 1, Rational(0));
        p[e] += x.c_[k];
    }
    if (p.empty()) p.resize(1, Rational(0));
    return Cyclotomic(m, mod_phi(std::move(p), m));
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& q : r.c_) q = -q;
    return r;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    long long m = std::lcm(a.n_, b.n_);
    Cyclotomic x = Cyclotomic::raise(a, m), y = Cyclotomic::raise(b, m);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    x.reduce_conductor();
    return x;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.n_ == 1) {
        if (a.c_[0].is_zero()) return Cyclotomic();
        Cyclotomic r = b;
        for (auto& q : r.c_) q *= a.c_[0];
        r.reduce_conductor();
        return r;
    }
    if (b.n_ == 1) return b * a;
    long long m = std::lcm(a.n_, b.n_);
    Cyclotomic x = Cyclotomic::raise(a, m), y = Cyclotomic::raise(b, m);
    std::vector<Rational> p(x.c_.size() + y.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < x.c_.size(); ++i) {
        if (x.c_[i].is_zero()) continue;
        for (size_t j = 0; j < y.c_.size(); ++j) {
            if (y.c_[j].is_zero()) continue;
            p[i + j] += x.c_[i] * y.c_[j];
        }
    }
    Cyclotomic r(m, Cyclotomic::mod_phi(std::move(p), m));
    r.reduce_conductor();
    return r;
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero cyclotomic");
    if (n_ == 1) return Cyclotomic(Rational(1) / c_[0]);
    // Solve (this) * x = 1 as a linear system over Q in the power basis.
    size_t d = c_.size();
    std::vector<VecQ> cols;
    for (size_t j = 0; j < d; ++j) {
        std::vector<Rational> p(j + 1, Rational(0));
        p[j] = Rational(1);
        Cyclotomic basis(n_, mod_phi(std::move(p), n_));
        Cyclotomic prod = *this * basis;
        prod = raise(prod, n_);
        cols.push_back(prod.c_);
    }
    // matrix with columns cols, rhs e_0; rational gaussian solve
    size_t n = d;
    std::vector<VecQ> w(n, VecQ(n + 1, Rational(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) w[i][j] = cols[j][i];
    w[0][n] = Rational(1);
    for (size_t c = 0, r = 0; c < n && r < n; ++c) {
        size_t p = r;
        while (p < n && w[p][c].is_zero()) ++p;
        if (p == n) continue;
        std::swap(w[p], w[r]);
        Rational inv = Rational(1) / w[r][c];
        for (size_t j = c; j <= n; ++j) w[r][j] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == r || w[i][c].is_zero()) continue;
            Rational f = w[i][c];
            for (size_t j = c; j <= n; ++j) w[i][j] -= f * w[r][j];
        }
        ++r;
    }
    std::vector<Rational> x(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        size_t lead = n;
        for (size_t j = 0; j < n; ++j)
            if (!w[i][j].is_zero()) { lead = j; break; }
        if (lead < n) x[lead] = w[i][n];
        else if (!w[i][n].is_zero()) throw std::logic_error("cyclotomic inverse solve failed");
    }
    Cyclotomic r(n_, std::move(x));
    r.reduce_conductor();
    return r;
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

Cyclotomic Cyclotomic::galois(long long a) const {
    if (n_ == 1) return *this;
    a %= n_;
    if (a < 0) a += n_;
    if (std::gcd(a, n_) != 1) throw std::invalid_argument("galois exponent not coprime to conductor");
    std::vector<Rational> p;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        size_t e = (k * a) % n_;
        if (p.size() <= e) p.resize(e + 1, Rational(0));
        p[e] += c_[k];
    }
    if (p.empty()) p.resize(1, Rational(0));
    Cyclotomic r(n_, mod_phi(std::move(p), n_));
    r.reduce_conductor();
    return r;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    return n_ == o.n_ && c_ == o.c_; // canonical minimal conductor makes this exact
}

void Cyclotomic::reduce_conductor() {
    bool again = true;
    while (again && n_ > 1) {
        again = false;
        std::vector<long long> primes;
        long long n = n_;
        for (long long p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                primes.push_back(p);
                while (n % p == 0) n /= p;
            }
        if (n > 1) primes.push_back(n);
        for (long long p : primes) {
            long long m = n_ / p;
            if (m < 1) continue;
            // basis of Q(zeta_m) inside Q(zeta_n)
            size_t dm = cyclotomic_poly(m).size() - 1;
            size_t dn = c_.size();
            std::vector<VecQ> cols;
            for (size_t j = 0; j < dm; ++j) {
                std::vector<Rational> q(j * (n_ / m) + 1, Rational(0));
                q[j * (n_ / m)] = Rational(1);
                auto v = mod_phi(std::move(q), n_);
                cols.push_back(v);
            }
            // solve cols * y = c_
            size_t rows = dn, ncols = dm;
            std::vector<VecQ> w(rows, VecQ(ncols + 1, Rational(0)));
            for (size_t i = 0; i < rows; ++i) {
                for (size_t j = 0; j < ncols; ++j) w[i][j] = cols[j][i];
                w[i][ncols] = c_[i];
            }
            bool ok = true;
            size_t r = 0;
            std::vector<long long> piv(ncols, -1);
            for (size_t c = 0; c < ncols && r < rows; ++c) {
                size_t pp = r;
                while (pp < rows && w[pp][c].is_zero()) ++pp;
                if (pp == rows) continue;
                std::swap(w[pp], w[r]);
                Rational inv = Rational(1) / w[r][c];
                for (size_t j = c; j <= ncols; ++j) w[r][j] *= inv;
                for (size_t i = 0; i < rows; ++i) {
                    if (i == r || w[i][c].is_zero()) continue;
                    Rational f = w[i][c];
                    for (size_t j = c; j <= ncols; ++j) w[i][j] -= f * w[r][j];
                }
                piv[c] = static_cast<long long>(r);
                ++r;
            }
            for (size_t i = r; i < rows; ++i)
                if (!w[i][ncols].is_zero()) { ok = false; break; }
            if (!ok) continue;
            std::vector<Rational> y(ncols, Rational(0));
            for (size_t c = 0; c < ncols; ++c)
                if (piv[c] >= 0) y[c] = w[piv[c]][ncols];
            n_ = m;
            c_ = mod_phi(std::move(y), m);
            again = (n_ > 1);
            break;
        }
    }
    if (n_ == 1 && c_.empty()) c_.resize(1, Rational(0));
}

bool Cyclotomic::as_scaled_root(Rational& mag, Rational& rot_exp) const {
    if (is_zero()) return false;
    if (n_ == 1) {
        mag = c_[0].abs();
        rot_exp = c_[0].sign() > 0 ? Rational(0) : Rational(1, 2);
        return true;
    }
    // count nonzero coords: a scaled root of unity has exactly one in the power
    // basis only when the power is a basis element; otherwise test against all
    // conductor-many roots.
    for (long long k = 0; k < n_; ++k) {
        Cyclotomic z = root_of_unity(Rational(k, n_));
        Cyclotomic q = *this * z.complex_conjugate();
        if (q.is_rational()) {
            Rational v = q.rational_value();
            mag = v.abs();
            rot_exp = (Rational(k, n_) + (v.sign() < 0 ? Rational(1, 2) : Rational(0))).mod1();
            return true;
        }
    }
    return false;
}

std::complex<double> Cyclotomic::to_complex() const {
    std::complex<double> acc(0.0, 0.0);
    const double tau = 6.283185307179586476925286766559;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        double ang = tau * static_cast<double>(k) / static_cast<double>(n_);
        acc += c_[k].to_double() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

std::string Cyclotomic::str() const {
    if (n_ == 1) return c_[0].str();
    std::string out;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!first) out += " + ";
        first = false;
        out += c_[k].str();
        if (k > 0) out += "*z" + std::to_string(n_) + (k > 1 ? "^" + std::to_string(k) : "");
    }
    if (first) out = "0";
    return out;
}

} // namespace residua
