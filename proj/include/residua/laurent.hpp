#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

#include "residua/cyclotomic.hpp"

namespace residua {

/// Sparse Laurent polynomial in v with cyclotomic (usually rational) coefficients.
class Laurent {
public:
    Laurent() = default;
    explicit Laurent(const Cyclotomic& c) {
        if (!c.is_zero()) t_[0] = c;
    }
    static Laurent term(const Cyclotomic& c, int e) {
        Laurent p;
        if (!c.is_zero()) p.t_[e] = c;
        return p;
    }
    static Laurent v(int e = 1) { return term(Cyclotomic(Rational(1)), e); }
    static Laurent one() { return Laurent(Cyclotomic(Rational(1))); }

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == 0); }
    Cyclotomic constant_value() const {
        if (t_.empty()) return Cyclotomic();
        return t_.begin()->second;
    }
    bool is_rational_coeffs() const {
        for (auto& [e, c] : t_)
            if (!c.is_rational()) return false;
        return true;
    }
    int min_exp() const { return t_.empty() ? 0 : t_.begin()->first; }
    int max_exp() const { return t_.empty() ? 0 : t_.rbegin()->first; }
    const std::map<int, Cyclotomic>& terms() const { return t_; }

    Cyclotomic coeff(int e) const {
        auto it = t_.find(e);
        return it == t_.end() ? Cyclotomic() : it->second;
    }

    Laurent operator-() const {
        Laurent r;
        for (auto& [e, c] : t_) r.t_[e] = -c;
        return r;
    }
    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent r = a;
        for (auto& [e, c] : b.t_) {
            auto it = r.t_.find(e);
            if (it == r.t_.end()) r.t_[e] = c;
            else {
                it->second += c;
                if (it->second.is_zero()) r.t_.erase(it);
            }
        }
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) {
                Cyclotomic p = ca * cb;
                if (p.is_zero()) continue;
                auto it = r.t_.find(ea + eb);
                if (it == r.t_.end()) r.t_[ea + eb] = p;
                else {
                    it->second += p;
                    if (it->second.is_zero()) r.t_.erase(it);
                }
            }
        return r;
    }
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    bool operator==(const Laurent& o) const { return t_ == o.t_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    /// v -> v^-1
    Laurent invert_v() const {
        Laurent r;
        for (auto& [e, c] : t_) r.t_[-e] = c;
        return r;
    }
    /// v -> -v
    Laurent negate_v() const {
        Laurent r;
        for (auto& [e, c] : t_) r.t_[e] = (e % 2 == 0) ? c : -c;
        return r;
    }
    Laurent pow(int e) const;

    /// Exact division; throws when the division is not exact.
    Laurent div_exact(const Laurent& d) const;
    /// Polynomial division after clearing v-monomials: *this = q*d + r with
    /// deg r < deg d (as polynomials in v, both shifted to min_exp 0).
    /// Returned pair applies to the shifted polynomials.
    std::pair<Laurent, Laurent> shifted_divmod(const Laurent& d) const;

    /// Multiplicity of the zero at v = 1.
    int order_at_one() const;

    Cyclotomic eval(const Cyclotomic& v0) const;
    std::complex<double> eval_complex(const std::complex<double>& v0) const;

    /// Canonical text: terms by descending exponent, e.g. "v - v^-1".
    std::string str() const;

private:
    std::map<int, Cyclotomic> t_;
};

/// Reduced fraction of Laurent polynomials: denominator has least exponent 0,
/// unit leading coefficient, and gcd(num, den) = 1.
class RationalFunctionV {
public:
    RationalFunctionV() : num_(Laurent::one()), den_(Laurent::one()) { num_ = Laurent(); }
    RationalFunctionV(Laurent num, Laurent den);
    /// Trusts the caller that gcd(num, den) = 1; only normalizes the denominator.
    static RationalFunctionV from_coprime(Laurent num, Laurent den);
    explicit RationalFunctionV(const Laurent& num) : RationalFunctionV(num, Laurent::one()) {}
    static RationalFunctionV constant(const Rational& q) {
        return RationalFunctionV(Laurent(Cyclotomic(q)));
    }

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalFunctionV operator-() const { return RationalFunctionV(-num_, den_); }
    friend RationalFunctionV operator+(const RationalFunctionV& a, const RationalFunctionV& b) {
        return RationalFunctionV(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunctionV operator-(const RationalFunctionV& a, const RationalFunctionV& b) {
        return a + (-b);
    }
    friend RationalFunctionV operator*(const RationalFunctionV& a, const RationalFunctionV& b) {
        return RationalFunctionV(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunctionV operator/(const RationalFunctionV& a, const RationalFunctionV& b) {
        return RationalFunctionV(a.num_ * b.den_, a.den_ * b.num_);
    }
    bool operator==(const RationalFunctionV& o) const {
        return num_ * o.den_ == o.num_ * den_;
    }
    bool operator!=(const RationalFunctionV& o) const { return !(*this == o); }

    RationalFunctionV invert_v() const { return RationalFunctionV(num_.invert_v(), den_.invert_v()); }
    RationalFunctionV negate_v() const { return RationalFunctionV(num_.negate_v(), den_.negate_v()); }
    RationalFunctionV pow(int e) const;

    /// Vanishing order at v = 1 (negative for a pole).
    int order_at_one() const { return num_.order_at_one() - den_.order_at_one(); }

    /// Exact evaluation; throws std::domain_error at a pole.
    Cyclotomic eval(const Cyclotomic& v0) const;
    std::complex<double> eval_complex(const std::complex<double>& v0) const;

    /// "(v - v^-1)/(v + v^-1)" style canonical rendering.
    std::string str() const;

private:
    void reduce();
    Laurent num_, den_;
};

/// Element of the normalizing group M': positive rational constant times
/// (v - v^-1)^vexp times a product of q-integers [n]_q^e.
struct NormalizingElement {
    Rational constant{1};
    int vexp = 0;
    std::map<long long, long long> qints; // n >= 2 -> exponent

    static NormalizingElement one() { return {}; }
    bool is_one() const { return constant.is_one() && vexp == 0 && qints.empty(); }

    RationalFunctionV expand() const;
    Rational eval(const Rational& v0) const; // exact, v0 not a pole
    NormalizingElement operator*(const NormalizingElement& o) const;
    NormalizingElement inverse() const;
    bool operator==(const NormalizingElement& o) const {
        return constant == o.constant && vexp == o.vexp && qints == o.qints;
    }

    /// "3/2 * (v-v^-1)^2 * [2]^-1 * [3]" exact rendering.
    std::string str() const;
};

/// q-integer [n]_q = (v^n - v^-n)/(v - v^-1) as a rational function.
RationalFunctionV q_integer(long long n);

/// Factorization result of factor_into_M.
struct MFactorization {
    NormalizingElement d;
    int sign = 1; // expand(d) * sign == f
};

/// Certifies membership of f in +-M'; nullopt when f is not of that form.
std::optional<MFactorization> factor_into_M(const RationalFunctionV& f);

} // namespace residua
