#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "residua/rational.hpp"

namespace residua {

/// Element of a cyclotomic field Q(zeta_N), stored as a polynomial in zeta_N
/// reduced modulo the N-th cyclotomic polynomial, with N kept minimal.
/// N = 1 is the plain-rational fast path.
class Cyclotomic {
public:
    Cyclotomic() : n_(1), c_(1, Rational(0)) {}
    Cyclotomic(const Rational& q) : n_(1), c_(1, q) {} // NOLINT: implicit by design
    Cyclotomic(long long q) : n_(1), c_(1, Rational(q)) {}

    /// e^{2 pi i t} for rational t.
    static Cyclotomic root_of_unity(const Rational& t);

    long long conductor() const { return n_; }
    bool is_zero() const;
    bool is_rational() const { return n_ == 1; }
    Rational rational_value() const; // throws when not rational
    bool is_one() const { return n_ == 1 && c_[0].is_one(); }

    /// If the element is q * (root of unity), returns (q, exponent of the root).
    /// Used for unit bookkeeping; nullopt-style via bool flag.
    bool as_scaled_root(Rational& mag, Rational& rot_exp) const;

    Cyclotomic operator-() const;
    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }
    Cyclotomic& operator/=(const Cyclotomic& o) { return *this = *this / o; }

    Cyclotomic inverse() const;
    /// Galois conjugate zeta -> zeta^a, gcd(a, conductor) = 1.
    Cyclotomic galois(long long a) const;
    Cyclotomic complex_conjugate() const { return galois(n_ == 1 ? 1 : n_ - 1); }

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    std::complex<double> to_complex() const;
    std::string str() const;

    /// Power-basis coordinates (size deg Phi_conductor).
    const std::vector<Rational>& coords() const { return c_; }
    /// Multiplies by a rational scalar without conductor churn.
    void scale(const Rational& q) {
        for (auto& e : c_) e *= q;
        if (is_zero()) *this = Cyclotomic();
    }

    /// Integer coefficients of the N-th cyclotomic polynomial (ascending degree).
    static const std::vector<long long>& cyclotomic_poly(long long n);

private:
    Cyclotomic(long long n, std::vector<Rational> c) : n_(n), c_(std::move(c)) {}
    static Cyclotomic raise(const Cyclotomic& x, long long m); // embed into Q(zeta_m), n_ | m
    void reduce_conductor();
    static std::vector<Rational> mod_phi(std::vector<Rational> p, long long n);

    long long n_;
    std::vector<Rational> c_; // size deg Phi_n, coefficients of 1, zeta, zeta^2, ...
};

} // namespace residua
