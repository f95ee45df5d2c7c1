#include "residua/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace residua {

Laurent Laurent::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power of a polynomial");
    Laurent acc = Laurent::one();
    Laurent base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return acc;
}

std::pair<Laurent, Laurent> Laurent::shifted_divmod(const Laurent& d) const {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    // shift to honest polynomials
    Laurent a = *this, b = d;
    if (!a.is_zero() && a.min_exp() != 0) a = a * Laurent::v(-a.min_exp());
    if (b.min_exp() != 0) b = b * Laurent::v(-b.min_exp());
    Laurent q;
    Cyclotomic lead = b.coeff(b.max_exp());
    Cyclotomic lead_inv = lead.inverse();
    while (!a.is_zero() && a.max_exp() >= b.max_exp()) {
        int sh = a.max_exp() - b.max_exp();
        Cyclotomic c = a.coeff(a.max_exp()) * lead_inv;
        Laurent t = Laurent::term(c, sh);
        q += t;
        a -= t * b;
    }
    return {q, a};
}

Laurent Laurent::div_exact(const Laurent& d) const {
    if (is_zero()) return Laurent();
    auto [q, r] = shifted_divmod(d);
    if (!r.is_zero()) throw std::logic_error("inexact Laurent division");
    // restore the v-shift: this = v^(minA) * A, d = v^(minD) * D, A = q D
    int shift = min_exp() - d.min_exp();
    return q * Laurent::v(shift);
}

int Laurent::order_at_one() const {
    if (is_zero()) throw std::domain_error("order at 1 of zero polynomial");
    Laurent p = *this * Laurent::v(-min_exp());
    Laurent vm1 = Laurent::v(1) - Laurent::one();
    int ord = 0;
    while (true) {
        // p(1) == 0 ?
        Cyclotomic s;
        for (auto& [e, c] : p.terms()) s += c;
        if (!s.is_zero()) break;
        p = p.div_exact(vm1);
        ++ord;
    }
    return ord;
}

Cyclotomic Laurent::eval(const Cyclotomic& v0) const {
    Cyclotomic acc;
    for (auto& [e, c] : t_) {
        Cyclotomic p(Rational(1));
        int k = e >= 0 ? e : -e;
        Cyclotomic base = e >= 0 ? v0 : v0.inverse();
        for (int i = 0; i < k; ++i) p *= base;
        acc += c * p;
    }
    return acc;
}

std::complex<double> Laurent::eval_complex(const std::complex<double>& v0) const {
    std::complex<double> acc(0, 0);
    for (auto& [e, c] : t_) acc += c.to_complex() * std::pow(v0, e);
    return acc;
}

namespace {

std::string coeff_str(const Cyclotomic& c, bool with_sign, bool& negated) {
    negated = false;
    if (c.is_rational()) {
        Rational q = c.rational_value();
        if (q.sign() < 0) {
            negated = true;
            q = -q;
        }
        std::string s = q.str();
        (void)with_sign;
        return s;
    }
    return "(" + c.str() + ")";
}

} // namespace

std::string Laurent::str() const {
    if (t_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        int e = it->first;
        bool neg = false;
        std::string cs = coeff_str(it->second, !first, neg);
        std::string sep = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string body;
        if (e == 0) body = cs;
        else {
            std::string vs = (e == 1) ? "v" : "v^" + std::to_string(e);
            body = (cs == "1") ? vs : cs + "*" + vs;
        }
        out += sep + body;
        first = false;
    }
    return out;
}

RationalFunctionV::RationalFunctionV(Laurent num, Laurent den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("zero denominator rational function");
    reduce();
}

RationalFunctionV RationalFunctionV::from_coprime(Laurent num, Laurent den) {
    RationalFunctionV f;
    f.num_ = std::move(num);
    f.den_ = std::move(den);
    if (f.den_.is_zero()) throw std::domain_error("zero denominator rational function");
    if (f.num_.is_zero()) {
        f.den_ = Laurent::one();
        return f;
    }
    int sh = f.den_.min_exp();
    if (sh != 0) {
        f.den_ = f.den_ * Laurent::v(-sh);
        f.num_ = f.num_ * Laurent::v(-sh);
    }
    Cyclotomic lead = f.den_.coeff(f.den_.max_exp());
    if (!lead.is_one()) {
        Cyclotomic inv = lead.inverse();
        Laurent n2, d2;
        for (auto& [e, c] : f.num_.terms()) n2 += Laurent::term(c * inv, e);
        for (auto& [e, c] : f.den_.terms()) d2 += Laurent::term(c * inv, e);
        f.num_ = n2;
        f.den_ = d2;
    }
    return f;
}

namespace {

// rational content of a cyclotomic-coefficient polynomial
Rational poly_content(const Laurent& p) {
    long long num_gcd = 0, den_lcm = 1;
    for (auto& [e, c] : p.terms())
        for (const auto& q : c.coords()) {
            if (q.is_zero()) continue;
            long long n = q.num() < 0 ? -q.num() : q.num();
            num_gcd = std::gcd(num_gcd, n);
            den_lcm = std::lcm(den_lcm, q.den());
        }
    if (num_gcd == 0) return Rational(1);
    return Rational(num_gcd, den_lcm);
}

Laurent content_normalized(const Laurent& p) {
    if (p.is_zero()) return p;
    Rational c = poly_content(p);
    Rational inv = Rational(1) / c;
    Laurent out;
    for (auto& [e, cc] : p.terms()) {
        Cyclotomic s = cc;
        s.scale(inv);
        out += Laurent::term(s, e);
    }
    return out * Laurent::v(-out.min_exp());
}

// gcd by pseudo-remainder sequence with content normalization each step
Laurent poly_gcd(Laurent a, Laurent b) {
    a = content_normalized(a);
    b = content_normalized(b);
    while (!b.is_zero()) {
        // pseudo-remainder of a by b
        Laurent r = a;
        Cyclotomic lb = b.coeff(b.max_exp());
        while (!r.is_zero() && r.max_exp() >= b.max_exp()) {
            Cyclotomic lr = r.coeff(r.max_exp());
            int sh = r.max_exp() - b.max_exp();
            Laurent r2;
            for (auto& [e, c] : r.terms()) r2 += Laurent::term(c * lb, e);
            r = r2 - Laurent::term(lr, sh) * b;
        }
        a = b;
        b = content_normalized(r);
    }
    return a;
}

} // namespace

void RationalFunctionV::reduce() {
    if (num_.is_zero()) {
        den_ = Laurent::one();
        return;
    }
    Laurent a = poly_gcd(num_ * Laurent::v(-num_.min_exp()), den_ * Laurent::v(-den_.min_exp()));
    // a = gcd (as polynomial); make monic
    if (!(a.is_constant())) {
        Cyclotomic lead = a.coeff(a.max_exp());
        Laurent amon;
        Cyclotomic inv = lead.inverse();
        for (auto& [e, c] : a.terms()) amon += Laurent::term(c * inv, e);
        num_ = num_.div_exact(amon);
        den_ = den_.div_exact(amon);
    }
    // normalize denominator: least exponent 0, leading coefficient 1
    int sh = den_.min_exp();
    if (sh != 0) {
        den_ = den_ * Laurent::v(-sh);
        num_ = num_ * Laurent::v(-sh);
    }
    Cyclotomic lead = den_.coeff(den_.max_exp());
    if (!lead.is_one()) {
        Cyclotomic inv = lead.inverse();
        Laurent n2, d2;
        for (auto& [e, c] : num_.terms()) n2 += Laurent::term(c * inv, e);
        for (auto& [e, c] : den_.terms()) d2 += Laurent::term(c * inv, e);
        num_ = n2;
        den_ = d2;
    }
}

RationalFunctionV RationalFunctionV::pow(int e) const {
    if (e == 0) return RationalFunctionV(Laurent::one());
    bool inv = e < 0;
    int k = inv ? -e : e;
    RationalFunctionV acc(Laurent::one());
    RationalFunctionV base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k) base = base * base;
    }
    if (inv) return RationalFunctionV(Laurent::one()) / acc;
    return acc;
}

Cyclotomic RationalFunctionV::eval(const Cyclotomic& v0) const {
    Cyclotomic d = den_.eval(v0);
    if (d.is_zero()) throw std::domain_error("pole of rational function at evaluation point");
    return num_.eval(v0) / d;
}

std::complex<double> RationalFunctionV::eval_complex(const std::complex<double>& v0) const {
    return num_.eval_complex(v0) / den_.eval_complex(v0);
}

std::string RationalFunctionV::str() const {
    if (num_.is_zero()) return "0";
    if (den_ == Laurent::one()) return num_.str();
    // center the denominator for display: v^2 + 1 reads as v + v^-1
    int c = den_.min_exp() + den_.max_exp();
    Laurent n = num_, d = den_;
    if (c % 2 == 0 && c != 0) {
        n = n * Laurent::v(-c / 2);
        d = d * Laurent::v(-c / 2);
    }
    auto wrap = [](const Laurent& p, const std::string& s) {
        return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(n, n.str()) + "/" + wrap(d, d.str());
}

RationalFunctionV q_integer(long long n) {
    if (n < 1) throw std::invalid_argument("q-integer index must be positive");
    Laurent num = Laurent::v(static_cast<int>(n)) - Laurent::v(static_cast<int>(-n));
    Laurent den = Laurent::v(1) - Laurent::v(-1);
    return RationalFunctionV(num, den);
}

RationalFunctionV NormalizingElement::expand() const {
    // net cyclotomic exponents: (v - v^-1)^k = v^-k Phi_1^k Phi_2^k;
    // [n]_q = v^{1-n} prod_{d | 2n, d > 2} Phi_d.  Numerator and denominator
    // built coprime, so no polynomial gcd is ever needed.
    std::map<long long, long long> ephi;
    long long shift = -vexp;
    ephi[1] += vexp;
    ephi[2] += vexp;
    for (auto& [n, e] : qints) {
        shift += (1 - n) * e;
        for (long long d = 3; d <= 2 * n; ++d)
            if ((2 * n) % d == 0) ephi[d] += e;
    }
    Laurent num{Cyclotomic(constant)};
    Laurent den = Laurent::one();
    for (auto& [d, e] : ephi) {
        if (e == 0) continue;
        const auto& phi = Cyclotomic::cyclotomic_poly(d);
        Laurent p;
        for (size_t i = 0; i < phi.size(); ++i)
            if (phi[i] != 0) p += Laurent::term(Cyclotomic(Rational(phi[i])), static_cast<int>(i));
        for (long long i = 0; i < std::llabs(e); ++i) {
            if (e > 0) num *= p;
            else den *= p;
        }
    }
    num *= Laurent::v(static_cast<int>(shift));
    return RationalFunctionV::from_coprime(std::move(num), std::move(den));
}

Rational NormalizingElement::eval(const Rational& v0) const {
    Cyclotomic v(v0);
    Cyclotomic acc(constant);
    Cyclotomic vm = v - Cyclotomic(Rational(1) / v0);
    auto powr = [](Cyclotomic b, long long e) {
        Cyclotomic r(Rational(1));
        bool inv = e < 0;
        if (inv) e = -e;
        for (long long i = 0; i < e; ++i) r *= b;
        return inv ? r.inverse() : r;
    };
    acc *= powr(vm, vexp);
    for (auto& [n, e] : qints) {
        Cyclotomic qi = q_integer(n).eval(v);
        acc *= powr(qi, e);
    }
    return acc.rational_value();
}

NormalizingElement NormalizingElement::operator*(const NormalizingElement& o) const {
    NormalizingElement r = *this;
    r.constant *= o.constant;
    r.vexp += o.vexp;
    for (auto& [n, e] : o.qints) {
        r.qints[n] += e;
        if (r.qints[n] == 0) r.qints.erase(n);
    }
    return r;
}

NormalizingElement NormalizingElement::inverse() const {
    NormalizingElement r;
    r.constant = Rational(1) / constant;
    r.vexp = -vexp;
    for (auto& [n, e] : qints) r.qints[n] = -e;
    return r;
}

std::string NormalizingElement::str() const {
    std::vector<std::string> parts;
    if (!constant.is_one() || (vexp == 0 && qints.empty())) parts.push_back(constant.str());
    if (vexp != 0)
        parts.push_back(vexp == 1 ? "(v-v^-1)" : "(v-v^-1)^" + std::to_string(vexp));
    for (auto& [n, e] : qints) {
        std::string p = "[" + std::to_string(n) + "]";
        if (e != 1) p += "^" + std::to_string(e);
        parts.push_back(p);
    }
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " * ";
        out += parts[i];
    }
    return out;
}

namespace {

/// Structural profile of a rational Laurent polynomial:
/// p = c * v^shift * prod_d Phi_d^{e_d}, or nullopt when a non-cyclotomic
/// factor remains.
struct CycloProfile {
    Rational c;
    int shift = 0;
    std::map<long long, int> phi;
};

std::optional<CycloProfile> cyclo_profile(const Laurent& p_in) {
    if (p_in.is_zero()) return std::nullopt;
    if (!p_in.is_rational_coeffs()) return std::nullopt;
    CycloProfile pr;
    pr.shift = p_in.min_exp();
    Laurent p = p_in * Laurent::v(-pr.shift);
    long long bound = 3 * static_cast<long long>(p.max_exp()) + 8;
    for (long long d = 1; d <= bound && p.max_exp() >= 1; ++d) {
        const auto& phi = Cyclotomic::cyclotomic_poly(d);
        if (static_cast<int>(phi.size()) - 1 > p.max_exp()) continue;
        Laurent phl;
        for (size_t i = 0; i < phi.size(); ++i)
            if (phi[i] != 0) phl += Laurent::term(Cyclotomic(Rational(phi[i])), static_cast<int>(i));
        while (p.max_exp() >= static_cast<int>(phi.size()) - 1) {
            auto [q, r] = p.shifted_divmod(phl);
            if (!r.is_zero()) break;
            p = q;
            pr.phi[d] += 1;
        }
    }
    if (!p.is_constant()) return std::nullopt;
    pr.c = p.constant_value().rational_value();
    return pr;
}

} // namespace

std::optional<MFactorization> factor_into_M(const RationalFunctionV& f) {
    if (f.is_zero()) return std::nullopt;
    auto np = cyclo_profile(f.num());
    auto dp = cyclo_profile(f.den());
    if (!np || !dp) return std::nullopt;

    std::map<long long, int> e;
    for (auto& [d, k] : np->phi) e[d] += k;
    for (auto& [d, k] : dp->phi) e[d] -= k;
    int shift = np->shift - dp->shift;
    Rational c = np->c / dp->c;

    int k = e.count(1) ? e[1] : 0;
    int e2 = e.count(2) ? e[2] : 0;
    if (e2 != k) return std::nullopt; // (v - v^-1)^k carries Phi_1^k Phi_2^k
    e.erase(1);
    e.erase(2);

    long long dmax = 0;
    for (auto& [d, ed] : e)
        if (ed != 0) dmax = std::max(dmax, d);
    long long nmax = dmax / 2;

    std::map<long long, long long> qe;
    for (long long n = nmax; n >= 2; --n) {
        long long en = e.count(2 * n) ? e[2 * n] : 0;
        for (long long m = 2 * n; m <= nmax; m += n)
            if (qe.count(m)) en -= qe[m];
        if (en != 0) qe[n] = en;
    }
    // verify the full profile, including odd cyclotomic indices
    std::map<long long, long long> check;
    for (auto& [n, en] : qe) {
        for (long long d = 3; d <= 2 * n; ++d)
            if ((2 * n) % d == 0 && d % 2 != 0) check[d] += en; // odd divisors of 2n
        for (long long d = 4; d <= 2 * n; d += 2)
            if ((2 * n) % d == 0) check[d] += en; // even divisors > 2
    }
    for (auto& [d, ed] : e)
        if (ed != (check.count(d) ? check[d] : 0)) return std::nullopt;
    for (auto& [d, cd] : check)
        if (cd != (e.count(d) ? e.at(d) : 0)) return std::nullopt;

    // v-monomial accounting: (v-v^-1)^k gives v^-k, [n]^e gives v^{-e(n-1)}
    long long want = -k;
    for (auto& [n, en] : qe) want -= en * (n - 1);
    if (shift != want) return std::nullopt;

    MFactorization out;
    out.sign = c.sign();
    out.d.constant = c.abs();
    out.d.vexp = k;
    out.d.qints = qe;
    return out;
}

} // namespace residua
