#include "residua/mu.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace residua {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}

void FactoredTorusFunction::mul_constant(const Cyclotomic& c) {
    if (c.is_zero()) throw PullbackError("multiplying by zero constant");
    cst_ *= c;
}

void FactoredTorusFunction::mul_monomial(int vexp, const VecZ& x) {
    vexp_ += vexp;
    for (int i = 0; i < dim_; ++i) xmono_[i] += x[i];
}

void FactoredTorusFunction::mul_v_binomial(Rational t, int j, int e) {
    if (e == 0) return;
    t = t.mod1();
    if (j == 0) {
        if (t.is_zero()) throw PullbackError("identically vanishing factor (1 - 1)");
        Cyclotomic c = Cyclotomic(Rational(1)) - Cyclotomic::root_of_unity(t);
        for (int i = 0; i < std::abs(e); ++i)
            cst_ = e > 0 ? cst_ * c : cst_ / c;
        return;
    }
    if (j < 0) {
        // (1 - z v^j)^e = root(e(t+1/2)) v^{je} (1 - z^-1 v^-j)^e
        cst_ *= Cyclotomic::root_of_unity((Rational(e) * (t + Rational(1, 2))).mod1());
        vexp_ += j * e;
        mul_v_binomial((-t).mod1(), -j, e);
        return;
    }
    for (int k = 0; k < j; ++k) {
        Rational tk = ((t + Rational(k)) / Rational(j)).mod1();
        auto it = vfactors_.find(tk);
        if (it == vfactors_.end()) vfactors_[tk] = e;
        else {
            it->second += e;
            if (it->second == 0) vfactors_.erase(it);
        }
    }
}

void FactoredTorusFunction::mul_x_binomial(Rational t, int j, VecZ lam, int e) {
    if (e == 0) return;
    t = t.mod1();
    if (is_zerov(lam)) {
        mul_v_binomial(t, j, e);
        return;
    }
    if (static_cast<int>(lam.size()) != dim_) throw std::invalid_argument("x-binomial dimension");
    if (lex_sign(lam) < 0) {
        cst_ *= Cyclotomic::root_of_unity((Rational(e) * (t + Rational(1, 2))).mod1());
        vexp_ += j * e;
        for (int i = 0; i < dim_; ++i) xmono_[i] += lam[i] * e;
        mul_x_binomial((-t).mod1(), -j, negz(lam), e);
        return;
    }
    long long g = content(lam);
    long long d = (j == 0) ? g : std::gcd(g, static_cast<long long>(j < 0 ? -j : j));
    if (d > 1) {
        VecZ lam2(lam.size());
        for (size_t i = 0; i < lam.size(); ++i) lam2[i] = lam[i] / d;
        for (long long k = 0; k < d; ++k) {
            Rational tk = ((t + Rational(k)) / Rational(d)).mod1();
            mul_x_binomial(tk, j / static_cast<int>(d), lam2, e);
        }
        return;
    }
    BinKey key{t, j, std::move(lam)};
    auto it = xfactors_.find(key);
    if (it == xfactors_.end()) xfactors_[key] = e;
    else {
        it->second += e;
        if (it->second == 0) xfactors_.erase(it);
    }
}

void FactoredTorusFunction::mul_normalizing(const NormalizingElement& d, int e) {
    if (e == 0) return;
    Rational c = d.constant.pow(e);
    mul_constant(Cyclotomic(c));
    int k = d.vexp * e;
    if (k != 0) {
        // (v - v^-1)^k = (-1)^k v^-k (1 - v^2)^k
        if (k % 2 != 0) mul_constant(Cyclotomic(Rational(-1)));
        vexp_ -= k;
        mul_v_binomial(Rational(0), 2, k);
    }
    for (auto& [n, en] : d.qints) {
        int ee = static_cast<int>(en) * e;
        if (ee == 0) continue;
        // [n]_q = v^{1-n} (1 - v^{2n}) / (1 - v^2)
        vexp_ += static_cast<int>(1 - n) * ee;
        mul_v_binomial(Rational(0), static_cast<int>(2 * n), ee);
        mul_v_binomial(Rational(0), 2, -ee);
    }
}

void FactoredTorusFunction::mul(const FactoredTorusFunction& o, int e) {
    if (e == 0) return;
    if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch in product");
    for (int i = 0; i < std::abs(e); ++i)
        cst_ = e > 0 ? cst_ * o.cst_ : cst_ / o.cst_;
    vexp_ += o.vexp_ * e;
    for (int i = 0; i < dim_; ++i) xmono_[i] += o.xmono_[i] * e;
    for (auto& [t, k] : o.vfactors_) {
        auto it = vfactors_.find(t);
        if (it == vfactors_.end()) vfactors_[t] = k * e;
        else {
            it->second += k * e;
            if (it->second == 0) vfactors_.erase(it);
        }
    }
    for (auto& [key, k] : o.xfactors_) {
        auto it = xfactors_.find(key);
        if (it == xfactors_.end()) xfactors_[key] = k * e;
        else {
            it->second += k * e;
            if (it->second == 0) xfactors_.erase(it);
        }
    }
}

FactoredTorusFunction FactoredTorusFunction::pullback(const AffineTorusMap& phi) const {
    if (phi.target_dim() != dim_) throw std::invalid_argument("pullback dimension mismatch");
    FactoredTorusFunction out(phi.source_dim());
    out.cst_ = cst_;
    out.vexp_ = vexp_;
    out.vfactors_ = vfactors_;
    {
        auto [t, g] = phi.base.evaluate(xmono_);
        if (!g.is_integer()) throw PullbackError("monomial pullback has fractional v-exponent");
        out.mul_constant(Cyclotomic::root_of_unity(t));
        out.vexp_ += static_cast<int>(g.num());
        out.xmono_ = phi.char_pullback.apply(xmono_);
    }
    for (auto& [key, e] : xfactors_) {
        auto [t, g] = phi.base.evaluate(key.lam);
        if (!g.is_integer())
            throw PullbackError("factor pullback has fractional v-exponent (base is not an L-point)");
        Rational t2 = (key.zeta + t).mod1();
        int j2 = key.vexp + static_cast<int>(g.num());
        VecZ lam2 = phi.char_pullback.apply(key.lam);
        out.mul_x_binomial(t2, j2, lam2, e);
    }
    return out;
}

std::optional<RationalFunctionV> FactoredTorusFunction::ratio_to(const FactoredTorusFunction& g,
                                                                 std::string* witness) const {
    auto describe = [](const BinKey& key, int e) {
        std::ostringstream os;
        os << "(1 - e(" << key.zeta.str() << ")";
        if (key.vexp != 0) os << " v^" << key.vexp;
        os << " x^(";
        for (size_t i = 0; i < key.lam.size(); ++i) os << (i ? "," : "") << key.lam[i];
        os << "))^" << e;
        return os.str();
    };
    if (g.dim_ != dim_) {
        if (witness) *witness = "dimension mismatch";
        return std::nullopt;
    }
    if (xfactors_ != g.xfactors_) {
        if (witness) {
            witness->clear();
            for (auto& [key, e] : xfactors_) {
                auto it = g.xfactors_.find(key);
                if (it == g.xfactors_.end() || it->second != e) {
                    *witness = "left factor " + describe(key, e) + " unmatched";
                    break;
                }
            }
            if (witness->empty())
                for (auto& [key, e] : g.xfactors_) {
                    auto it = xfactors_.find(key);
                    if (it == xfactors_.end() || it->second != e) {
                        *witness = "right factor " + describe(key, e) + " unmatched";
                        break;
                    }
                }
        }
        return std::nullopt;
    }
    if (xmono_ != g.xmono_) {
        if (witness) *witness = "monomial mismatch (ratio not constant on the torus)";
        return std::nullopt;
    }
    Laurent num(cst_), den(g.cst_);
    int dv = vexp_ - g.vexp_;
    if (dv > 0) num *= Laurent::v(dv);
    if (dv < 0) den *= Laurent::v(-dv);
    std::map<Rational, int> all = vfactors_;
    for (auto& [t, e] : g.vfactors_) all[t] -= e;
    for (auto& [t, e] : all) {
        if (e == 0) continue;
        Laurent f = Laurent::one() - Laurent::term(Cyclotomic::root_of_unity(t), 1);
        for (int i = 0; i < std::abs(e); ++i) {
            if (e > 0) num *= f;
            else den *= f;
        }
    }
    return RationalFunctionV(num, den);
}

RationalFunctionV FactoredTorusFunction::as_rational_function() const {
    if (!xfactors_.empty() || !is_zerov(xmono_))
        throw std::logic_error("function depends on the torus variables");
    FactoredTorusFunction one(dim_);
    auto r = ratio_to(one);
    return *r;
}

std::complex<double> FactoredTorusFunction::eval(const NumericPoint& p, double v0) const {
    std::complex<double> acc = cst_.to_complex();
    acc *= std::pow(v0, vexp_);
    auto xval = [&](const VecZ& lam) {
        std::complex<double> v(1, 0);
        for (int i = 0; i < dim_; ++i) v *= std::pow(p.coord[i], static_cast<double>(lam[i]));
        return v;
    };
    acc *= xval(xmono_);
    for (auto& [t, e] : vfactors_) {
        double ang = kTau * t.to_double();
        std::complex<double> f = 1.0 - std::complex<double>(std::cos(ang), std::sin(ang)) * v0;
        acc *= std::pow(f, e);
    }
    for (auto& [key, e] : xfactors_) {
        double ang = kTau * key.zeta.to_double();
        std::complex<double> f =
            1.0 - std::complex<double>(std::cos(ang), std::sin(ang)) * std::pow(v0, key.vexp) * xval(key.lam);
        acc *= std::pow(f, e);
    }
    return acc;
}

std::string FactoredTorusFunction::str() const {
    std::ostringstream os;
    os << cst_.str();
    if (vexp_ != 0) os << " * v^" << vexp_;
    if (!is_zerov(xmono_)) {
        os << " * x^(";
        for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << xmono_[i];
        os << ")";
    }
    for (auto& [t, e] : vfactors_) {
        os << " * (1 - e(" << t.str() << ")v)";
        if (e != 1) os << "^" << e;
    }
    for (auto& [key, e] : xfactors_) {
        os << " * (1 - e(" << key.zeta.str() << ")";
        if (key.vexp != 0) os << "v^" << key.vexp;
        os << "x^(";
        for (size_t i = 0; i < key.lam.size(); ++i) os << (i ? "," : "") << key.lam[i];
        os << "))";
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

CFactors c_factors(const BasedRootDatum& datum, const ParameterFunction& m, int root) {
    (void)datum;
    CFactors out;
    out.root = root;
    out.num_plus_vexp = -m.two_m_minus(root);
    out.num_minus_vexp = -m.two_m_plus(root);
    return out;
}

MuFunction build_mu(const BasedRootDatum& datum, const WeylGroup& w0, const ParameterFunction& m,
                    const NormalizingElement& d) {
    MuFunction mu;
    mu.datum = &datum;
    mu.w0 = &w0;
    mu.m = m;
    mu.d = d;
    mu.prefactor_vexp = static_cast<int>(-2 * m_W(datum, w0, m, w0.longest()));
    for (int r = 0; r < datum.num_roots(); ++r) {
        CFactors cf = c_factors(datum, m, r);
        mu.factors.push_back({r, MuFactorKind::NumPlus, 0});
        mu.factors.push_back({r, MuFactorKind::NumMinus, 0});
        mu.factors.push_back({r, MuFactorKind::DenPlus, cf.num_plus_vexp});
        mu.factors.push_back({r, MuFactorKind::DenMinus, cf.num_minus_vexp});
    }
    return mu;
}

namespace {

void apply_factor(FactoredTorusFunction& f, const BasedRootDatum& datum, const MuFactor& mf) {
    VecZ lam = negz(datum.root(mf.root)); // character x^{-alpha}
    switch (mf.kind) {
        case MuFactorKind::NumPlus:
            f.mul_x_binomial(Rational(1, 2), static_cast<int>(mf.vexp), lam, 1);
            break;
        case MuFactorKind::NumMinus:
            f.mul_x_binomial(Rational(0), static_cast<int>(mf.vexp), lam, 1);
            break;
        case MuFactorKind::DenPlus:
            f.mul_x_binomial(Rational(1, 2), static_cast<int>(mf.vexp), lam, -1);
            break;
        case MuFactorKind::DenMinus:
            f.mul_x_binomial(Rational(0), static_cast<int>(mf.vexp), lam, -1);
            break;
    }
}

} // namespace

FactoredTorusFunction MuFunction::to_torus_function() const {
    FactoredTorusFunction f(datum->rank());
    f.mul_monomial(prefactor_vexp, VecZ(datum->rank(), 0));
    f.mul_normalizing(d);
    for (const auto& mf : factors) apply_factor(f, *datum, mf);
    return f;
}

std::string MuFunction::str() const {
    std::ostringstream os;
    os << "v^" << prefactor_vexp;
    if (!d.is_one()) os << " * " << d.str();
    std::ostringstream num, den;
    for (const auto& mf : factors) {
        bool isnum = mf.kind == MuFactorKind::NumPlus || mf.kind == MuFactorKind::NumMinus;
        bool plus = mf.kind == MuFactorKind::NumPlus || mf.kind == MuFactorKind::DenPlus;
        std::ostringstream& os2 = isnum ? num : den;
        os2 << "(1 " << (plus ? "+" : "-") << " ";
        if (mf.vexp != 0) os2 << "v^" << mf.vexp << "*";
        os2 << "x^(";
        const VecZ& a = datum->root(mf.root);
        for (size_t i = 0; i < a.size(); ++i) os2 << (i ? "," : "") << -a[i];
        os2 << "))";
    }
    os << " * [" << num.str() << "] / [" << den.str() << "]";
    return os.str();
}

PoleZeroReport pole_zero_sets(const MuFunction& mu, const Coset& L) {
    PoleZeroReport rep;
    rep.codim = L.codim();
    const BasedRootDatum& d = *mu.datum;
    for (int r : roots_constant_on(d, L)) {
        auto [t, g] = L.base.evaluate(d.root(r));
        if (t.is_zero() && g.is_zero()) rep.z_plus.push_back(r);
        if (t == Rational(1, 2) && g.is_zero()) rep.z_minus.push_back(r);
        if (t.is_zero() && g == Rational(-mu.m.two_m_plus(r))) rep.p_plus.push_back(r);
        if (t == Rational(1, 2) && g == Rational(-mu.m.two_m_minus(r))) rep.p_minus.push_back(r);
    }
    rep.lhs = static_cast<int>(rep.p_plus.size() + rep.p_minus.size()) -
              static_cast<int>(rep.z_plus.size() + rep.z_minus.size());
    rep.residual = rep.lhs >= rep.codim;
    rep.equality = rep.lhs == rep.codim;
    return rep;
}

RestrictedMu regularize(const MuFunction& mu, const Coset& L, bool force) {
    RestrictedMu out{FactoredTorusFunction(L.dim()), FactoredTorusFunction(mu.datum->rank()), {}, {}};
    out.report = pole_zero_sets(mu, L);
    if (!out.report.residual && !force)
        throw std::invalid_argument("coset is not residual; cannot regularize");
    const BasedRootDatum& d = *mu.datum;
    auto in = [](const std::vector<int>& v, int x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    FactoredTorusFunction full(d.rank());
    full.mul_monomial(mu.prefactor_vexp, VecZ(d.rank(), 0));
    full.mul_normalizing(mu.d);
    for (const auto& mf : mu.factors) {
        bool removed = false;
        switch (mf.kind) {
            case MuFactorKind::NumPlus: removed = in(out.report.z_minus, mf.root); break;
            case MuFactorKind::NumMinus: removed = in(out.report.z_plus, mf.root); break;
            case MuFactorKind::DenPlus: removed = in(out.report.p_minus, mf.root); break;
            case MuFactorKind::DenMinus: removed = in(out.report.p_plus, mf.root); break;
        }
        if (removed) continue;
        out.kept.push_back(mf);
        apply_factor(full, d, mf);
    }
    AffineTorusMap incl{L.subtorus_rows, L.base};
    out.fn = full.pullback(incl);
    out.kept_full = std::move(full);
    return out;
}

std::optional<MFactorization> factor_into_M_linear(const FactoredTorusFunction& f) {
    if (!f.x_factors().empty() || !is_zerov(f.x_monomial())) return std::nullopt;
    if (!f.constant().is_rational()) return std::nullopt;
    const auto& vf = f.v_factors();
    auto expo = [&](const Rational& t) {
        auto it = vf.find(t);
        return it == vf.end() ? 0 : it->second;
    };
    long long k = expo(Rational(0));
    if (expo(Rational(1, 2)) != k) return std::nullopt;
    // exponents per reduced denominator d >= 3: constant and complete
    std::map<long long, long long> cd;
    for (auto& [t, e] : vf) {
        long long d = t.den();
        if (d <= 2) continue;
        auto it = cd.find(d);
        if (it == cd.end()) cd[d] = e;
        else if (it->second != e) return std::nullopt;
    }
    for (auto& [d, e] : cd) {
        long long count = 0;
        for (auto& [t, e2] : vf)
            if (t.den() == d) ++count;
        long long phi = 0;
        for (long long a = 1; a < d; ++a)
            if (std::gcd(a, d) == 1) ++phi;
        if (count != phi) return std::nullopt;
    }
    long long dmax = 0;
    for (auto& [d, e] : cd)
        if (e != 0) dmax = std::max(dmax, d);
    long long nmax = dmax / 2;
    std::map<long long, long long> qe;
    for (long long n = nmax; n >= 2; --n) {
        long long en = cd.count(2 * n) ? cd[2 * n] : 0;
        for (long long m2 = 2 * n; m2 <= nmax; m2 += n)
            if (qe.count(m2)) en -= qe[m2];
        if (en != 0) qe[n] = en;
    }
    std::map<long long, long long> check;
    for (auto& [n, en] : qe)
        for (long long d = 3; d <= 2 * n; ++d)
            if ((2 * n) % d == 0) check[d] += en;
    for (auto& [d, e] : cd)
        if (e != (check.count(d) ? check[d] : 0)) return std::nullopt;
    for (auto& [d, e] : check)
        if (e != (cd.count(d) ? cd.at(d) : 0)) return std::nullopt;
    // v-monomial: (v - v^-1)^k gives v^-k, [n]^e gives v^{(1-n)e}
    long long want = -k;
    for (auto& [n, en] : qe) want += (1 - n) * en;
    if (f.v_monomial() != want) return std::nullopt;
    Rational c = f.constant().rational_value();
    if (c.is_zero()) return std::nullopt;
    int sign = c.sign() * (k % 2 != 0 ? -1 : 1);
    MFactorization out;
    out.sign = sign;
    out.d.constant = c.abs();
    out.d.vexp = static_cast<int>(k);
    out.d.qints = qe;
    return out;
}

MuSplit split_mu(const MuFunction& mu, const Coset& L, const std::vector<int>& P) {
    const BasedRootDatum& d = *mu.datum;
    const WeylGroup& w0 = *mu.w0;
    MuSplit out{FactoredTorusFunction(L.dim()), FactoredTorusFunction(L.dim()), false};
    out.lhs = regularize(mu, L).fn;

    // point part: mu^({r}) of the parabolic quotient at r = q(L)
    ParabolicDatum pd = parabolic_restriction(d, P, &mu.m);
    WeylGroup wp(pd.datum);
    MuFunction mup = build_mu(pd.datum, wp, pd.m, mu.d);
    const int p = pd.projection.rows();
    TorusPoint r{VecQ(p, Rational(0)), VecQ(p, Rational(0))};
    if (p > 0) {
        // integer section S of the projection (pi S = I), so that evaluating the
        // base on the columns of S gives the T_P-coordinates of q(base)
        SmithForm sf = smith_form(pd.projection);
        for (int i = 0; i < p; ++i)
            if (sf.d(i, i) != 1) throw std::logic_error("projection is not surjective");
        MatZ lift(pd.projection.cols(), p);
        for (int i = 0; i < pd.projection.cols(); ++i)
            for (int j = 0; j < p; ++j) {
                long long acc = 0;
                for (int k = 0; k < p; ++k) acc += sf.v(i, k) * sf.u(k, j);
                lift(i, j) = acc;
            }
        for (int i = 0; i < p; ++i) {
            auto [t, g] = L.base.evaluate(lift.col(i));
            r.torsion[i] = t;
            r.gamma[i] = g;
        }
    }
    RestrictedMu point_part = regularize(mup, Coset::point(r));

    // w^P = w0 wP^-1 with wP the longest element of W(R_P)
    int wPidx;
    {
        std::vector<int> gens;
        for (int q : P) gens.push_back(w0.simple_reflection(q));
        std::set<int> group{w0.identity()};
        std::vector<int> order{w0.identity()};
        for (size_t i = 0; i < order.size(); ++i)
            for (int g : gens) {
                int nxt = w0.multiply(order[i], g);
                if (group.insert(nxt).second) order.push_back(nxt);
            }
        int best = w0.identity(), bestlen = -1;
        for (int a : order) {
            int len = w0.num_inversions(a);
            if (len > bestlen) {
                bestlen = len;
                best = a;
            }
        }
        wPidx = w0.multiply(w0.longest(), w0.inverse(best));
    }

    FactoredTorusFunction rhs_full(d.rank());
    rhs_full.mul_monomial(static_cast<int>(-2 * m_W(d, w0, mu.m, wPidx)), VecZ(d.rank(), 0));
    std::set<int> proots(pd.root_map.begin(), pd.root_map.end());
    auto mul_c_inverse = [&](int root) {
        CFactors cf = c_factors(d, mu.m, root);
        VecZ lam = negz(d.root(root));
        rhs_full.mul_x_binomial(Rational(1, 2), static_cast<int>(cf.num_plus_vexp), lam, -1);
        rhs_full.mul_x_binomial(Rational(0), static_cast<int>(cf.num_minus_vexp), lam, -1);
        rhs_full.mul_x_binomial(Rational(0), 0, scalez(2, lam), 1);
    };
    int wPinv = w0.inverse(wPidx);
    for (int a = 0; a < d.num_positive(); ++a) {
        if (proots.count(a)) continue;
        mul_c_inverse(a);
        mul_c_inverse(w0.act_on_root(wPinv, a)); // c^{w^P}_alpha = c_{(w^P)^-1 alpha}
    }
    AffineTorusMap incl{L.subtorus_rows, L.base};
    out.rhs = rhs_full.pullback(incl);

    // transplant the point part (v-only data) onto the coset coordinates
    FactoredTorusFunction pp(L.dim());
    pp.mul_constant(point_part.fn.constant());
    pp.mul_monomial(point_part.fn.v_monomial(), VecZ(L.dim(), 0));
    for (auto& [t, e] : point_part.fn.v_factors()) pp.mul_v_binomial(t, 1, e);
    out.rhs.mul(pp);

    out.equal = out.lhs == out.rhs;
    return out;
}

} // namespace residua
