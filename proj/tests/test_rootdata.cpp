#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "residua/rootdata.hpp"

using namespace residua;

TEST_CASE("A1 on root and weight lattices") {
    auto dq = BasedRootDatum::build("A1", LatticeChoice::Q());
    CHECK(dq.rank() == 1);
    CHECK(dq.num_roots() == 2);
    CHECK(dq.root(dq.simple_indices()[0]) == VecZ{1});
    CHECK(dq.coroot(dq.simple_indices()[0]) == VecZ{2}); // Y = Z(alpha^vee/2)
    CHECK(dq.coroot_in_2Y(dq.simple_indices()[0]));

    auto dp = BasedRootDatum::build("A1", LatticeChoice::P());
    CHECK(dp.root(dp.simple_indices()[0]) == VecZ{2}); // X = Z(alpha/2)
    CHECK(dp.coroot(dp.simple_indices()[0]) == VecZ{1}); // Y = Z alpha^vee
    CHECK_FALSE(dp.coroot_in_2Y(dp.simple_indices()[0]));
}

TEST_CASE("B2 on the root lattice") {
    auto d = BasedRootDatum::build("B2", LatticeChoice::Q());
    CHECK(d.num_roots() == 8);
    CHECK(d.num_simple() == 2);
    WeylGroup w(d);
    CHECK(w.size() == 8);
    CHECK(d.type_string() == "B2");
    // C2 is the transposed labelling, kept distinct
    auto c = BasedRootDatum::build("C2", LatticeChoice::Q());
    CHECK(c.type_string() == "C2");
    // in B2 the first simple root is long (its coroot is primitive in Y)
    CHECK_FALSE(d.coroot_in_2Y(d.simple_indices()[0]));
    CHECK(d.coroot_in_2Y(d.simple_indices()[1]));
}

TEST_CASE("weyl group sizes and longest elements") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w1(a1);
    CHECK(w1.size() == 2);
    CHECK(w1.element(w1.longest()).length() == 1);

    auto a2 = BasedRootDatum::build("A2", LatticeChoice::Q());
    WeylGroup w2(a2);
    CHECK(w2.size() == 6);
    CHECK(w2.element(w2.longest()).length() == 3);

    auto g2 = BasedRootDatum::build("G2", LatticeChoice::Q());
    WeylGroup wg(g2);
    CHECK(wg.size() == 12);
    CHECK(wg.element(wg.longest()).length() == 6);

    CHECK_THROWS(WeylGroup(g2, 8)); // size bound exceeded
}

TEST_CASE("length equals inversion count and w0 involution") {
    for (const char* type : {"A2", "B2", "G2", "A1"}) {
        auto d = BasedRootDatum::build(type, LatticeChoice::Q());
        WeylGroup w(d);
        for (int a = 0; a < w.size(); ++a)
            CHECK(w.element(a).length() == w.num_inversions(a));
        int w0 = w.longest();
        CHECK(w.multiply(w0, w0) == w.identity());
        // w0 sends F0 to -(permutation of F0)
        for (int s : d.simple_indices()) {
            int img = w.act_on_root(w0, s);
            bool is_neg_simple = false;
            for (int t : d.simple_indices())
                if (img == d.negative_of(t)) is_neg_simple = true;
            CHECK(is_neg_simple);
        }
    }
}

TEST_CASE("m_W values") {
    auto a1 = BasedRootDatum::build("A1", LatticeChoice::Q());
    WeylGroup w1(a1);
    auto m1 = ParameterFunction::constant(a1, 1);
    CHECK(m_W(a1, w1, m1, w1.identity()) == 0);
    CHECK(m_W(a1, w1, m1, w1.longest()) == 1);

    auto a2 = BasedRootDatum::build("A2", LatticeChoice::Q());
    WeylGroup w2(a2);
    auto m2 = ParameterFunction::constant(a2, 1);
    CHECK(m_W(a2, w2, m2, w2.longest()) == 3);
    // additive on length-additive products
    for (int a = 0; a < w2.size(); ++a)
        for (int b = 0; b < w2.size(); ++b) {
            int ab = w2.multiply(a, b);
            if (w2.element(ab).length() == w2.element(a).length() + w2.element(b).length())
                CHECK(m_W(a2, w2, m2, ab) == m_W(a2, w2, m2, a) + m_W(a2, w2, m2, b));
        }
}

TEST_CASE("parameter function validation") {
    auto a1p = BasedRootDatum::build("A1", LatticeChoice::P());
    // non-split orbit rejects odd-parity labels
    std::map<AffineReflectionClass, long long> bad{{{0, 0}, 1}, {{0, 1}, 2}};
    CHECK_THROWS(ParameterFunction(a1p, bad));
    // split orbit accepts them
    auto a1q = BasedRootDatum::build("A1", LatticeChoice::Q());
    std::map<AffineReflectionClass, long long> ok{{{0, 0}, 1}, {{0, 1}, 2}};
    ParameterFunction m(a1q, ok);
    int s = a1q.simple_indices()[0];
    CHECK(m.label_a(s) == 1);
    CHECK(m.label_b(s) == 2);
    CHECK(m.two_m_plus(s) == 3);
    CHECK(m.two_m_minus(s) == -1);
    CHECK(m.n_m(s) == 2);
}

TEST_CASE("parabolic restriction") {
    auto b2 = BasedRootDatum::build("B2", LatticeChoice::Q());
    auto m = ParameterFunction::constant(b2, 1);

    auto empty = parabolic_restriction(b2, {});
    CHECK(empty.datum.rank() == 0);
    CHECK(empty.t_quot_cochar.rows() == 2); // T^empty = T

    auto full = parabolic_restriction(b2, {0, 1}, &m);
    CHECK(full.datum.num_roots() == 8);
    CHECK(full.datum.rank() == 2);

    // P = {long simple root}: A1-type datum with K_P of order 2
    auto p0 = parabolic_restriction(b2, {0}, &m);
    CHECK(p0.datum.rank() == 1);
    CHECK(p0.datum.num_roots() == 2);
    CHECK(p0.k_group.order() == 2);
    // independent oracle: index of Z a_long + Z (1,2) in Z^2 via explicit SNF
    {
        MatZ rows(2, 2);
        rows(0, 0) = 1; rows(0, 1) = 0;  // alpha_long has X-coords (1,0)
        rows(1, 0) = 1; rows(1, 1) = 2;  // kernel of <alpha_long^vee, .> = <(2,-1),.>
        CHECK(lattice_index(MatZ::identity(2), rows) == 2);
    }
    CHECK(p0.k_group.generator_torsion.size() == 2);

    // P = {short simple}: also A1-type
    auto p1 = parabolic_restriction(b2, {1}, &m);
    CHECK(p1.datum.num_roots() == 2);
}

TEST_CASE("lattice quotients") {
    auto a1q = BasedRootDatum::build("A1", LatticeChoice::Q());
    auto a1p = BasedRootDatum::build("A1", LatticeChoice::P());
    // P(A1)/Q(A1) = Z/2: in P-coordinates the root lattice is generated by (2)
    auto g = lattice_quotient(MatZ::identity(1), a1p.root_lattice_rows());
    CHECK(g.invariants == std::vector<long long>{2});
    CHECK(a1q.omega_X().trivial());

    auto a2p = BasedRootDatum::build("A2", LatticeChoice::P());
    auto g3 = a2p.omega_X();
    CHECK(g3.invariants == std::vector<long long>{3});

    // Z^n / Q(D_n) = Z/2 (n = 3): D3 root lattice inside Z^3
    {
        MatZ zn = MatZ::identity(3);
        MatZ dn = MatZ::from_rows({{1, -1, 0}, {0, 1, -1}, {0, 1, 1}});
        auto q = lattice_quotient(zn, dn);
        CHECK(q.invariants == std::vector<long long>{2});
    }
}

TEST_CASE("standard parabolic conjugation at rank <= 3") {
    // every subsystem R0 cap span(subset) is W0-conjugate to a standard one
    for (const char* type : {"B2", "A2", "B3"}) {
        auto d = BasedRootDatum::build(type, LatticeChoice::Q());
        WeylGroup w(d);
        int npos = d.num_positive();
        for (int i = 0; i < npos; ++i) {
            for (int j = i; j < npos; ++j) {
                // span of roots i, j
                std::vector<VecZ> gens{d.root(i)};
                if (j != i) gens.push_back(d.root(j));
                MatZ span = saturate_rows(MatZ::from_rows(gens));
                // subsystem: roots inside the rational span
                std::set<int> sub;
                for (int r = 0; r < d.num_roots(); ++r) {
                    VecQ rq(d.rank());
                    for (int k = 0; k < d.rank(); ++k) rq[k] = Rational(d.root(r)[k]);
                    if (solve_rational(span.transposed(), rq)) sub.insert(r);
                }
                bool found = false;
                for (int a = 0; a < w.size() && !found; ++a) {
                    std::set<int> img;
                    for (int r : sub) img.insert(w.act_on_root(a, r));
                    // standard iff the simple roots contained in img generate it
                    std::vector<int> P;
                    for (int spos = 0; spos < d.num_simple(); ++spos)
                        if (img.count(d.simple_indices()[spos])) P.push_back(spos);
                    auto pd = parabolic_restriction(d, P);
                    if (pd.datum.num_roots() == static_cast<int>(img.size())) {
                        bool all = true;
                        for (int r : pd.root_map)
                            if (!img.count(r)) all = false;
                        found = all;
                    }
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("direct summand property when a coroot is divisible by 2") {
    // B2 x A1 on Q: the B2 component contains alpha with alpha^vee in 2Y and
    // must be a direct summand (sum of component sublattices is everything)
    auto d = BasedRootDatum::build("B2xA1", LatticeChoice::Q());
    CHECK(d.components().size() == 2);
    bool has2y = false;
    for (int i = 0; i < d.num_roots(); ++i)
        if (d.coroot_in_2Y(i)) has2y = true;
    CHECK(has2y);
    std::vector<VecZ> rows;
    for (auto& compidx : d.components()) {
        std::vector<VecZ> comp_roots;
        for (int r : compidx) comp_roots.push_back(d.root(r));
        MatZ sat = saturate_rows(MatZ::from_rows(comp_roots));
        for (int i = 0; i < sat.rows(); ++i) rows.push_back(sat.row(i));
    }
    CHECK(lattice_index(MatZ::identity(d.rank()), MatZ::from_rows(rows)) == 1);
}

TEST_CASE("smith normal form properties") {
    std::mt19937 rng(4242);
    for (int it = 0; it < 300; ++it) {
        int m = 1 + static_cast<int>(rng() % 4), n = 1 + static_cast<int>(rng() % 4);
        MatZ a(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = static_cast<long long>(rng() % 13) - 6;
        SmithForm sf = smith_form(a);
        // D = U A V
        CHECK(sf.d == sf.u * a * sf.v);
        // unimodular transforms
        CHECK(std::llabs(det(sf.u)) == 1);
        CHECK(std::llabs(det(sf.v)) == 1);
        // diagonal, nonnegative, divisibility chain
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) CHECK(sf.d(i, j) == 0);
        auto diag = sf.diag();
        for (size_t i = 0; i + 1 < diag.size(); ++i) {
            CHECK(diag[i] >= 0);
            if (diag[i] != 0 && diag[i + 1] != 0) CHECK(diag[i + 1] % diag[i] == 0);
            if (diag[i] == 0) CHECK(diag[i + 1] == 0);
        }
    }
}

TEST_CASE("explicit basis matches the weight-lattice shortcut") {
    // X = P(A2) built explicitly: rows = fundamental weights in simple coords
    std::vector<VecQ> rows{{Rational(2, 3), Rational(1, 3)}, {Rational(1, 3), Rational(2, 3)}};
    auto exp = BasedRootDatum::build("A2", LatticeChoice::explicit_basis(rows));
    auto ref = BasedRootDatum::build("A2", LatticeChoice::P());
    CHECK(exp.num_roots() == ref.num_roots());
    for (int i = 0; i < exp.num_roots(); ++i) {
        CHECK(ref.root_index(exp.root(i)) >= 0);
    }
    CHECK(exp.omega_X().order() == 3);
}

TEST_CASE("type recognition") {
    auto t = recognize_type(standard_cartan({'G', 2}));
    REQUIRE(t.has_value());
    CHECK(t->letter == 'G');
    auto d3 = recognize_type(standard_cartan({'D', 3}));
    REQUIRE(d3.has_value());
    CHECK(d3->letter == 'A'); // D3 = A3, alphabetically least name wins
    CHECK(d3->rank == 3);
    auto f4 = recognize_type(standard_cartan({'F', 4}));
    REQUIRE(f4.has_value());
    CHECK(f4->letter == 'F');
}
