#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "residua/diagrams.hpp"

using namespace residua;

TEST_CASE("spectral diagram of A1") {
    auto d = BasedRootDatum::build("A1", LatticeChoice::Q());
    auto m = ParameterFunction::constant(d, 1);
    auto sd = spectral_diagram(d, m);
    REQUIRE(sd.nodes.size() == 2);
    CHECK(sd.nodes[0].label == 1);
    CHECK(sd.nodes[1].label == 1);
    CHECK(sd.lattice_group.order() == 2); // Y/Q(R_m^vee) for X = Q
    // the nontrivial element swaps the two nodes
    bool has_swap = false;
    for (auto& p : sd.group_action)
        if (p == std::vector<int>{1, 0}) has_swap = true;
    CHECK(has_swap);

    auto m0 = ParameterFunction::constant(d, 0);
    auto sd0 = spectral_diagram(d, m0);
    CHECK(sd0.nodes[0].label == 0);
    CHECK(sd0.nodes[1].label == 0);
}

TEST_CASE("spectral diagram of a C1-type with unequal labels") {
    auto d = BasedRootDatum::build("A1", LatticeChoice::Q()); // alpha^vee in 2Y
    std::map<AffineReflectionClass, long long> lb{{{0, 0}, 3}, {{0, 1}, 1}};
    ParameterFunction m(d, lb);
    CHECK(m.n_m(d.simple_indices()[0]) == 2);
    auto sd = spectral_diagram(d, m);
    REQUIRE(sd.nodes.size() == 2);
    // labels {2m_+, 2m_-} = {a+b, a-b} placed by the signature
    CHECK(sd.nodes[0].label == 4); // finite node: 2 m_+ = a + b
    CHECK(sd.nodes[1].label == 2); // affine node: 2 m_- = a - b
    CHECK(sd.lattice_group.trivial()); // Q(R_m^vee) = Y here
}

TEST_CASE("arithmetic diagrams") {
    auto d = BasedRootDatum::build("A1", LatticeChoice::Q());
    auto m = ParameterFunction::constant(d, 1);
    auto ad = arithmetic_diagram(d, m);
    REQUIRE(ad.nodes.size() == 2);
    CHECK(ad.nodes[0].label == 1);
    CHECK(ad.nodes[1].label == 1);
    CHECK(ad.nodes[1].marked);
    CHECK_FALSE(ad.nodes[0].marked);
    CHECK(ad.lattice_group.trivial()); // Omega_X = X/Q = 1 for X = Q

    // product type: disjoint union of components
    auto dd = BasedRootDatum::build("A1xA1", LatticeChoice::Q());
    auto mm = ParameterFunction::constant(dd, 1);
    auto add = arithmetic_diagram(dd, mm);
    CHECK(add.nodes.size() == 4);
    int marked = 0;
    for (auto& nd : add.nodes) marked += nd.marked ? 1 : 0;
    CHECK(marked == 2);
    for (size_t i = 0; i < add.nodes.size(); ++i)
        for (size_t j = 0; j < add.nodes.size(); ++j)
            if (add.nodes[i].component != add.nodes[j].component)
                CHECK(add.bonds(static_cast<int>(i), static_cast<int>(j)) == 0);

    // B2 with labels (long, short, affine) = (1, 2, 1)
    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    std::map<AffineReflectionClass, long long> lb;
    for (int i = 0; i < b2.num_roots(); ++i) {
        int orb = b2.root_orbit_ids()[i];
        bool split = b2.coroot_in_2Y(i);
        bool is_long = !split; // long simple root has primitive coroot
        lb[{orb, 0}] = is_long ? 1 : 2;
        if (split) lb[{orb, 1}] = 1; // affine class
    }
    ParameterFunction mb(b2, lb);
    auto adb = arithmetic_diagram(b2, mb);
    REQUIRE(adb.nodes.size() == 3);
    std::multiset<long long> labels;
    for (auto& nd : adb.nodes) labels.insert(nd.label);
    CHECK(labels == std::multiset<long long>{1, 1, 2});
}

TEST_CASE("standardization doubles vanishing-end orbits without changing mu") {
    auto d = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w(d);
    // C_1^(1)-type with m_R(alpha_0^C) = 0: labels (a, b) = (2, 0)
    std::map<AffineReflectionClass, long long> lb{{{0, 0}, 2}, {{0, 1}, 0}};
    ParameterFunction m(d, lb);
    CHECK(m.is_semistandard());
    CHECK_FALSE(m.is_standard(d));
    Standardization s = standardize(d, m);
    CHECK(s.changed);
    CHECK(s.doubled_orbits.size() == 1);
    CHECK(s.m.is_standard(s.datum));
    // roots doubled
    CHECK(s.datum.root(s.datum.simple_indices()[0]) == VecZ{2});
    // mu unchanged
    WeylGroup ws(s.datum);
    auto mu1 = build_mu(d, w, m, NormalizingElement::one());
    auto mu2 = build_mu(s.datum, ws, s.m, NormalizingElement::one());
    CHECK(mu1.to_torus_function() == mu2.to_torus_function());

    // the flipped variant (a = 0): same after a sign twist
    std::map<AffineReflectionClass, long long> lb2{{{0, 0}, 0}, {{0, 1}, 2}};
    ParameterFunction m2(d, lb2);
    Standardization s2 = standardize(d, m2);
    CHECK(s2.changed);
    CHECK(s2.flipped_orbits.size() == 1);
    WeylGroup ws2(s2.datum);
    auto mu3 = build_mu(d, w, m2, NormalizingElement::one());
    auto mu4 = build_mu(s2.datum, ws2, s2.m, NormalizingElement::one());
    CHECK(mu3.to_torus_function() == mu4.to_torus_function());

    // already standard input is returned unchanged
    auto mstd = ParameterFunction::constant(d, 1);
    Standardization s3 = standardize(d, mstd);
    CHECK_FALSE(s3.changed);
    CHECK_THROWS(standardize(d, ParameterFunction::constant(d, 0)));
}

TEST_CASE("spectral diagram round trip through standardization") {
    auto d = BasedRootDatum::build("B2", LatticeChoice::Q());
    // semi-standard: vanishing label on the odd class of the split orbit
    std::map<AffineReflectionClass, long long> lb;
    for (int i = 0; i < d.num_roots(); ++i) {
        int orb = d.root_orbit_ids()[i];
        lb[{orb, 0}] = 1;
        if (d.coroot_in_2Y(i)) lb[{orb, 1}] = 0;
    }
    ParameterFunction m(d, lb);
    auto before = spectral_diagram(d, m);
    auto after = respectralize(d, m);
    CHECK(before.render() == after.render());
    // and for standard data the round trip is the identity on the diagram
    auto mstd = ParameterFunction::constant(d, 2);
    CHECK(spectral_diagram(d, mstd).render() == respectralize(d, mstd).render());
}

TEST_CASE("out_T_mu sizes and exactness") {
    auto a1q = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w1(a1q);
    auto o1 = out_T_mu(a1q, w1, ParameterFunction::constant(a1q, 1));
    CHECK(o1.elements.size() == 1);

    auto a1p = BasedRootDatum::build("A1", LatticeChoice::P());
    WeylGroup w2(a1p);
    auto o2 = out_T_mu(a1p, w2, ParameterFunction::constant(a1p, 1));
    CHECK(o2.elements.size() == 2); // translation by the order-2 torsion point

    auto a2 = BasedRootDatum::build("A2", LatticeChoice::Q());
    WeylGroup w3(a2);
    auto o3 = out_T_mu(a2, w3, ParameterFunction::constant(a2, 1));
    CHECK(o3.elements.size() == 2); // diagram flip

    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    WeylGroup w4(b2);
    auto o4 = out_T_mu(b2, w4, ParameterFunction::constant(b2, 1));
    CHECK(o4.elements.size() == 1);

    // exact sequence orders: |Omega_m^*| |Omega_0^Y| = |Omega_Y^vee| |Out_T(mu)|
    for (auto* o : {&o1, &o2, &o3, &o4})
        CHECK(o->omega_m_star_order * o->diagram_auto_order ==
              o->omega_y_vee_order * static_cast<long long>(o->elements.size()));
}

TEST_CASE("out_T_mu contains triality for D4") {
    auto d4 = BasedRootDatum::build("D4", LatticeChoice::Q());
    WeylGroup w(d4);
    auto o = out_T_mu(d4, w, ParameterFunction::constant(d4, 1));
    CHECK(o.elements.size() == 6); // S3 diagram automorphisms
    bool order3 = false;
    for (auto& e : o.elements) {
        // sigma of order 3?
        std::vector<int> s = e.sigma;
        std::vector<int> s2(s.size()), s3(s.size());
        for (size_t i = 0; i < s.size(); ++i) s2[i] = s[s[i]];
        for (size_t i = 0; i < s.size(); ++i) s3[i] = s[s2[i]];
        std::vector<int> id(s.size());
        std::iota(id.begin(), id.end(), 0);
        if (s != id && s3 == id) order3 = true;
    }
    CHECK(order3);
}

TEST_CASE("eta involutions") {
    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    WeylGroup w(b2);
    auto m = ParameterFunction::constant(b2, 1);
    // split orbit (short roots of B2)
    int split_orbit = -1;
    for (int i = 0; i < b2.num_roots(); ++i)
        if (b2.coroot_in_2Y(i)) split_orbit = b2.root_orbit_ids()[i];
    REQUIRE(split_orbit >= 0);

    AffineReflectionClass c0{split_orbit, 0}, c1{split_orbit, 1};
    auto e0 = spectral_isomorphism_eta(b2, w, m, c0);
    CHECK_FALSE(e0.is_translation);
    auto e00 = spectral_isomorphism_eta(b2, w, e0.new_m, c0);
    CHECK(e00.new_m.labels() == m.labels()); // involution

    auto e1 = spectral_isomorphism_eta(b2, w, m, c1);
    CHECK(e1.is_translation);
    // translation point: alpha = -1 on the split orbit, +1 elsewhere
    for (int i = 0; i < b2.num_roots(); ++i) {
        auto [t, g] = e1.map.base.evaluate(b2.root(i));
        CHECK(g.is_zero());
        CHECK(t == (b2.root_orbit_ids()[i] == split_orbit ? Rational(1, 2) : Rational(0)));
    }
    auto e11 = spectral_isomorphism_eta(b2, w, e1.new_m, c1);
    CHECK(e11.new_m.labels() == m.labels());

    // dihedral group of order 8 on the C2^(1) component
    CHECK(eta_group_order(b2, w, m, {c0, c1}) == 8);
}

TEST_CASE("numeric mirrors match the labels at rank <= 2") {
    for (const char* type : {"A1", "B2"}) {
        auto d = BasedRootDatum::build(type, LatticeChoice::Q());
        WeylGroup w(d);
        // pick a parameter with both kinds of mirrors when possible
        std::map<AffineReflectionClass, long long> lb;
        for (int i = 0; i < d.num_roots(); ++i) {
            int orb = d.root_orbit_ids()[i];
            lb[{orb, 0}] = 2;
            if (d.coroot_in_2Y(i)) lb[{orb, 1}] = 1;
        }
        ParameterFunction m(d, lb);
        MuFunction mu = build_mu(d, w, m, NormalizingElement::one());
        FactoredTorusFunction f = mu.to_torus_function();
        auto pred = predicted_mirrors(d, m);
        auto predicted = [&](int r, bool half) {
            for (auto& mf : pred)
                if (mf.root == r && mf.half == half) return true;
            return false;
        };
        for (int r = 0; r < d.num_positive(); ++r) {
            for (bool half : {false, true}) {
                // generic point on the candidate mirror {<alpha, y> = offset}
                VecZ alpha = d.root(r);
                MatZ arow(1, d.rank());
                for (int j = 0; j < d.rank(); ++j) arow(0, j) = alpha[j];
                VecQ rhs{half ? Rational(1, 2) : Rational(0)};
                auto tau = solve_rational(arow, rhs);
                REQUIRE(tau.has_value());
                // add a generic kernel direction
                MatZ ker = integer_kernel(arow);
                for (int kk = 0; kk < ker.rows(); ++kk)
                    for (int j = 0; j < d.rank(); ++j)
                        (*tau)[j] += Rational(3 + 2 * kk, 17 + 5 * kk) * Rational(ker(kk, j));
                TorusPoint p{*tau, VecQ(d.rank(), Rational(0))};
                NumericPoint np = specialize(p, 2.0);
                double val = std::abs(f.eval(np, 2.0));
                if (predicted(r, half)) CHECK(val < 1e-9);
                else CHECK(val > 1e-6);
            }
        }
    }
}
