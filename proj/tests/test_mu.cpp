#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "residua/mu.hpp"

using namespace residua;

namespace {

MuFunction mk_mu(const BasedRootDatum& d, const WeylGroup& w, long long label,
                 NormalizingElement nd = NormalizingElement::one()) {
    return build_mu(d, w, ParameterFunction::constant(d, label), nd);
}

} // namespace

TEST_CASE("c-factor exponents") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    auto m1 = ParameterFunction::constant(a1, 1);
    CFactors cf = c_factors(a1, m1, a1.simple_indices()[0]);
    CHECK(cf.num_plus_vexp == 0);   // (1 + alpha^-1), m_- = 0
    CHECK(cf.num_minus_vexp == -2); // (1 - v^-2 alpha^-1), m_+ = 1

    auto m0 = ParameterFunction::constant(a1, 0);
    CFactors cf0 = c_factors(a1, m0, a1.simple_indices()[0]);
    CHECK(cf0.num_plus_vexp == 0);
    CHECK(cf0.num_minus_vexp == 0);

    // C-type root with labels a, b gives exponents -(a+b), -(a-b)
    std::map<AffineReflectionClass, long long> labels{{{0, 0}, 3}, {{0, 1}, 1}};
    ParameterFunction mc(a1, labels); // alpha^vee in 2Y here, so the split is legal
    CFactors cfc = c_factors(a1, mc, a1.simple_indices()[0]);
    CHECK(cfc.num_minus_vexp == -(3 + 1));
    CHECK(cfc.num_plus_vexp == -(3 - 1));
}

TEST_CASE("mu of A1 with unit labels") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w(a1);
    MuFunction mu = mk_mu(a1, w, 1);
    CHECK(mu.prefactor_vexp == -2);

    // mu = v^-2 (1 - a)(1 - a^-1) / ((1 - v^-2 a)(1 - v^-2 a^-1))
    FactoredTorusFunction want(1);
    want.mul_monomial(-2, {0});
    want.mul_x_binomial(Rational(0), 0, {1}, 1);
    want.mul_x_binomial(Rational(0), 0, {-1}, 1);
    want.mul_x_binomial(Rational(0), -2, {1}, -1);
    want.mul_x_binomial(Rational(0), -2, {-1}, -1);
    CHECK(mu.to_torus_function() == want);

    // with m = 0 mu is just d
    MuFunction mu0 = mk_mu(a1, w, 0);
    CHECK(mu0.to_torus_function() == FactoredTorusFunction(1));

    // linearity in d
    NormalizingElement d2;
    d2.qints[2] = 1;
    MuFunction mu2 = mk_mu(a1, w, 1, d2);
    FactoredTorusFunction scaled = mu.to_torus_function();
    scaled.mul_normalizing(d2);
    CHECK(mu2.to_torus_function() == scaled);
}

TEST_CASE("mu is W0-invariant") {
    for (const char* type : {"A1", "A2", "B2"}) {
        auto d = BasedRootDatum::build(type, LatticeChoice::Q());
        WeylGroup w(d);
        MuFunction mu = mk_mu(d, w, 1);
        FactoredTorusFunction f = mu.to_torus_function();
        for (int a = 0; a < w.size(); ++a) {
            AffineTorusMap phi{w.element(w.inverse(a)).mx, TorusPoint::identity(d.rank())};
            CHECK(f.pullback(phi) == f);
        }
    }
}

TEST_CASE("pole/zero sets of A1 cosets") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w(a1);
    MuFunction mu = mk_mu(a1, w, 1);

    // L = T
    auto repT = pole_zero_sets(mu, Coset::full(1));
    CHECK(repT.p_plus.empty());
    CHECK(repT.z_plus.empty());
    CHECK(repT.residual);
    CHECK(repT.equality);

    // L = {r}, alpha(r) = v^-2: gamma = -alpha^vee
    TorusPoint r{{Rational(0)}, {Rational(-2)}};
    auto repr = pole_zero_sets(mu, Coset::point(r));
    CHECK(repr.p_plus.size() == 1);
    CHECK(repr.p_minus.empty());
    CHECK(repr.z_plus.empty());
    CHECK(repr.z_minus.empty());
    CHECK(repr.lhs == 1);
    CHECK(repr.equality);

    // L = {e}: z+ = {alpha, -alpha}, lhs = -2 < 1
    auto repe = pole_zero_sets(mu, Coset::point(TorusPoint::identity(1)));
    CHECK(repe.z_plus.size() == 2);
    CHECK(repe.lhs == -2);
    CHECK_FALSE(repe.residual);
}

TEST_CASE("regularization at the A1 residual point") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w(a1);
    MuFunction mu = mk_mu(a1, w, 1);
    TorusPoint r{{Rational(0)}, {Rational(-2)}};
    RestrictedMu reg = regularize(mu, Coset::point(r));
    RationalFunctionV val = reg.fn.as_rational_function();
    RationalFunctionV want =
        -RationalFunctionV(Laurent::v(1) - Laurent::v(-1), Laurent::v(1) + Laurent::v(-1));
    CHECK(val == want);
    // vanishing order 1 = 0 + rank, certified through the M-factorization
    auto cert = factor_into_M(val);
    REQUIRE(cert.has_value());
    CHECK(cert->d.vexp == 1);
    CHECK(cert->sign == -1);
    CHECK(cert->d.constant == Rational(1));
    CHECK(cert->d.qints == std::map<long long, long long>{{2, -1}});

    // numeric cross check at v0 = 2: |value| = 3/5
    Rational at2 = val.eval(Cyclotomic(Rational(2))).rational_value();
    CHECK(at2 == Rational(-3, 5));

    // mu^(T) = mu
    RestrictedMu regT = regularize(mu, Coset::full(1));
    CHECK(regT.fn == mu.to_torus_function());

    CHECK_THROWS(regularize(mu, Coset::point(TorusPoint::identity(1))));
}

TEST_CASE("mu splitting for A1 edge cosets") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w(a1);
    MuFunction mu = mk_mu(a1, w, 1);

    // L = {r}: both sides are mu^({r})
    TorusPoint r{{Rational(0)}, {Rational(-2)}};
    MuSplit s1 = split_mu(mu, Coset::point(r), {0});
    CHECK(s1.equal);

    // L = T with P empty: point part is rank-0 d, coset part mu/d
    MuSplit s2 = split_mu(mu, Coset::full(1), {});
    CHECK(s2.equal);
}

TEST_CASE("pole/zero sets are W0-equivariant") {
    auto d = BasedRootDatum::build("B2", LatticeChoice::Q());
    WeylGroup w(d);
    MuFunction mu = mk_mu(d, w, 1);
    // cosets: a residual point and a one-dimensional coset
    TorusPoint r{{Rational(0), Rational(0)}, {Rational(-4), Rational(1)}};
    MatZ rows(1, 2);
    rows(0, 1) = 1;
    std::vector<Coset> cosets{Coset::point(r),
                              Coset{TorusPoint{{Rational(0), Rational(0)}, {Rational(2), Rational(-1)}}, rows}};
    for (auto& L : cosets) {
        auto rep = pole_zero_sets(mu, L);
        for (int a = 0; a < w.size(); ++a) {
            Coset wL = L.acted(w.y_action(a));
            auto repw = pole_zero_sets(mu, wL);
            auto mapped = [&](std::vector<int> v) {
                for (auto& x : v) x = w.act_on_root(a, x);
                std::sort(v.begin(), v.end());
                return v;
            };
            auto sorted = [](std::vector<int> v) {
                std::sort(v.begin(), v.end());
                return v;
            };
            CHECK(sorted(repw.p_plus) == mapped(rep.p_plus));
            CHECK(sorted(repw.p_minus) == mapped(rep.p_minus));
            CHECK(sorted(repw.z_plus) == mapped(rep.z_plus));
            CHECK(sorted(repw.z_minus) == mapped(rep.z_minus));
        }
    }
}

TEST_CASE("mu splitting through the A2 middle parabolic") {
    auto a2 = BasedRootDatum::build("A2", LatticeChoice::Q());
    WeylGroup w(a2);
    MuFunction mu = mk_mu(a2, w, 1);
    // L = r T^P for P = {0}: lift of the parabolic residual point
    ParabolicDatum pd = parabolic_restriction(a2, {0}, &mu.m);
    // parabolic residual point: gamma with <gamma_P, root> = -2
    VecZ alphaP = pd.datum.root(pd.datum.simple_indices()[0]);
    TorusPoint rP{{Rational(0)}, {Rational(-2, alphaP[0])}};
    TorusPoint base{pd.projection.transposed().apply(rP.torsion),
                    pd.projection.transposed().apply(rP.gamma)};
    Coset L{base.canonicalize(), pd.t_quot_cochar};
    MuSplit s = split_mu(mu, L, {0});
    CHECK(s.equal);
}

TEST_CASE("factored engine splits reducible binomials") {
    // (1 - x^2) = (1 - x)(1 + x)
    FactoredTorusFunction f(1);
    f.mul_x_binomial(Rational(0), 0, {2}, 1);
    FactoredTorusFunction g(1);
    g.mul_x_binomial(Rational(0), 0, {1}, 1);
    g.mul_x_binomial(Rational(1, 2), 0, {1}, 1);
    CHECK(f == g);

    // (1 - v^-2 x^-2) = (1 - v^-1 x^-1)(1 + v^-1 x^-1), canonicalized
    FactoredTorusFunction h(1);
    h.mul_x_binomial(Rational(0), -2, {-2}, 1);
    FactoredTorusFunction h2(1);
    h2.mul_x_binomial(Rational(0), -1, {-1}, 1);
    h2.mul_x_binomial(Rational(1, 2), -1, {-1}, 1);
    CHECK(h == h2);

    // (1 + x^2) needs fourth roots of unity
    FactoredTorusFunction k(1);
    k.mul_x_binomial(Rational(1, 2), 0, {2}, 1);
    FactoredTorusFunction k2(1);
    k2.mul_x_binomial(Rational(1, 4), 0, {1}, 1);
    k2.mul_x_binomial(Rational(3, 4), 0, {1}, 1);
    CHECK(k == k2);

    // pullback through a 2:1 covering splits (1 - y) into (1 - x)(1 + x)
    FactoredTorusFunction base(1);
    base.mul_x_binomial(Rational(0), 0, {1}, 1);
    MatZ two(1, 1);
    two(0, 0) = 2;
    AffineTorusMap cover{two, TorusPoint::identity(1)};
    FactoredTorusFunction pulled = base.pullback(cover);
    FactoredTorusFunction expect(1);
    expect.mul_x_binomial(Rational(0), 0, {1}, 1);
    expect.mul_x_binomial(Rational(1, 2), 0, {1}, 1);
    CHECK(pulled == expect);
}

TEST_CASE("ratio detection") {
    FactoredTorusFunction f(1);
    f.mul_x_binomial(Rational(0), -2, {-1}, 1);
    f.mul_constant(Cyclotomic(Rational(3)));
    f.mul_normalizing([] {
        NormalizingElement d;
        d.qints[2] = 1;
        return d;
    }());
    FactoredTorusFunction g(1);
    g.mul_x_binomial(Rational(0), -2, {-1}, 1);
    auto ratio = f.ratio_to(g);
    REQUIRE(ratio.has_value());
    NormalizingElement d;
    d.qints[2] = 1;
    CHECK(*ratio == RationalFunctionV::constant(Rational(3)) * d.expand());

    FactoredTorusFunction h(1);
    h.mul_x_binomial(Rational(0), -2, {1}, 1);
    std::string why;
    CHECK_FALSE(f.ratio_to(h, &why).has_value());
    CHECK(!why.empty());
}
