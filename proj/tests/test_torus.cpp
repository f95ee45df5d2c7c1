#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "residua/torus.hpp"

using namespace residua;

TEST_CASE("character evaluation and polar decomposition") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    VecZ alpha = a1.root(a1.simple_indices()[0]);

    TorusPoint e = TorusPoint::identity(1);
    auto [t0, g0] = e.evaluate(alpha);
    CHECK(t0.is_zero());
    CHECK(g0.is_zero());

    TorusPoint r{{Rational(0)}, {Rational(-2)}}; // gamma = -alpha^vee
    auto [t1, g1] = r.evaluate(alpha);
    CHECK(t1.is_zero());
    CHECK(g1 == Rational(-2));

    TorusPoint s{{Rational(1, 2)}, {Rational(0)}};
    auto [t2, g2] = s.evaluate(alpha);
    CHECK(t2 == Rational(1, 2)); // alpha-value -1
    CHECK(g2.is_zero());

    // polar round trip: r = s * c with s the torsion part
    TorusPoint p{{Rational(1, 3)}, {Rational(5, 2)}};
    TorusPoint torsion_part{p.torsion, VecQ{Rational(0)}};
    TorusPoint radial_part{VecQ{Rational(0)}, p.gamma};
    CHECK(torsion_part.mul(radial_part) == p);
    CHECK(p.is_L_point() == false);
    CHECK(TorusPoint{{Rational(0)}, {Rational(3)}}.is_L_point());
    CHECK(p.str() == "zeta=(1/3) gamma=(5/2)");
}

TEST_CASE("coset membership and canonical keys") {
    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    (void)b2;
    Coset T = Coset::full(2);
    CHECK(T.contains(TorusPoint{{Rational(1, 7), Rational(2, 3)}, {Rational(1), Rational(-4)}}));

    // coset of the subtorus in direction y1
    MatZ rows(1, 2);
    rows(0, 0) = 1;
    Coset L{TorusPoint{{Rational(0), Rational(1, 2)}, {Rational(0), Rational(-1)}}, rows};
    CHECK(L.contains(TorusPoint{{Rational(1, 5), Rational(1, 2)}, {Rational(2), Rational(-1)}}));
    CHECK_FALSE(L.contains(TorusPoint{{Rational(0), Rational(0)}, {Rational(0), Rational(-1)}}));
    Coset L2{TorusPoint{{Rational(9, 10), Rational(1, 2)}, {Rational(7), Rational(-1)}}, rows};
    CHECK(L.same_coset(L2));
    CHECK(L.key() == L2.key());
}

TEST_CASE("coset groups for B2") {
    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    WeylGroup w(b2);

    // L = T: K trivial, N = W0
    auto gT = coset_groups(b2, w, Coset::full(2));
    CHECK(gT.k_elements.size() == 1);
    CHECK(static_cast<int>(gT.normalizer.size()) == w.size());

    // L a point: K_L trivial as well (T^L = 1)
    auto gp = coset_groups(b2, w, Coset::point(TorusPoint::identity(2)));
    CHECK(gp.k_elements.size() == 1);

    // L = r T^P for P = {alpha_long}: K_L of order 2
    ParabolicDatum pd = parabolic_restriction(b2, {0});
    // lift of a parabolic residual point with alpha_long(r) = v^-2
    const int p = pd.projection.rows();
    REQUIRE(p == 1);
    // r in T_P coords: gamma with <gamma_P, alpha_P> = -2
    VecZ alphaP = pd.datum.root(pd.datum.simple_indices()[0]);
    REQUIRE(alphaP.size() == 1);
    TorusPoint rP{{Rational(0)}, {Rational(-2, alphaP[0])}};
    TorusPoint base{pd.projection.transposed().apply(rP.torsion),
                    pd.projection.transposed().apply(rP.gamma)};
    Coset L{base.canonicalize(), pd.t_quot_cochar};
    auto gL = coset_groups(b2, w, L);
    CHECK(gL.k_group.order() == 2);
    CHECK(gL.k_elements.size() == 2);
    CHECK(gL.kn_elements.size() >= 1);
    CHECK(!gL.normalizer.empty());
    // centralizer subset of normalizer
    for (int z : gL.centralizer)
        CHECK(std::find(gL.normalizer.begin(), gL.normalizer.end(), z) != gL.normalizer.end());
}

TEST_CASE("tempered membership") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    (void)a1;
    Coset T = Coset::full(1);
    NumericPoint u;
    u.coord = {std::polar(1.0, 1.234)};
    CHECK(tempered_membership(T, 2.0, u).member);

    TorusPoint r{{Rational(0)}, {Rational(-2)}};
    Coset L = Coset::point(r);
    NumericPoint rv = specialize(r, 2.0);
    auto chk = tempered_membership(L, 2.0, rv);
    CHECK(chk.member);
    CHECK(chk.distance == doctest::Approx(0.0));
    NumericPoint e;
    e.coord = {std::complex<double>(1.0, 0.0)};
    auto chk2 = tempered_membership(L, 2.0, e);
    CHECK_FALSE(chk2.member);
    CHECK(chk2.distance > 0.5); // |alpha(e)| = 1 vs 2^-2

    // sampling stays on the tempered form
    MatZ rows(1, 1);
    rows(0, 0) = 1;
    Coset full{r, rows};
    for (auto& s : sample_tempered(full, 2.0, 25, 7)) {
        CHECK(tempered_membership(full, 2.0, s, 1e-9).member);
        CHECK(distance_to_tempered(full, 2.0, s) < 1e-6);
    }
}
