#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "residua/laurent.hpp"

using namespace residua;

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK(Rational(7, 3).mod1() == Rational(1, 3));
    CHECK(Rational(-1, 3).mod1() == Rational(2, 3));
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-5") == Rational(-5));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("cyclotomic roots of unity") {
    Cyclotomic i = Cyclotomic::root_of_unity(Rational(1, 4));
    CHECK((i * i) == Cyclotomic(Rational(-1)));
    Cyclotomic w = Cyclotomic::root_of_unity(Rational(1, 3));
    CHECK((w * w * w) == Cyclotomic(Rational(1)));
    CHECK((w * w + w + Cyclotomic(Rational(1))).is_zero());
    // conductor reduction: zeta_6^3 = -1 must come back rational
    Cyclotomic z6 = Cyclotomic::root_of_unity(Rational(1, 6));
    CHECK((z6 * z6 * z6) == Cyclotomic(Rational(-1)));
    CHECK((z6 * z6 * z6).is_rational());
    // inverse
    CHECK((w.inverse() * w) == Cyclotomic(Rational(1)));
    Cyclotomic mix = w + Cyclotomic(Rational(2));
    CHECK((mix.inverse() * mix) == Cyclotomic(Rational(1)));
    // scaled-root detection
    Rational mag, rot;
    Cyclotomic v = Cyclotomic(Rational(-3, 2)) * Cyclotomic::root_of_unity(Rational(1, 3));
    CHECK(v.as_scaled_root(mag, rot));
    CHECK(mag == Rational(3, 2));
    CHECK(rot == Rational(5, 6));
    // 1 + zeta_3 = zeta_6 is a root of unity; 1 + i is not (magnitude sqrt 2)
    Cyclotomic z6check = w + Cyclotomic(Rational(1));
    CHECK(z6check.as_scaled_root(mag, rot));
    CHECK(mag == Rational(1));
    CHECK(rot == Rational(1, 6));
    Cyclotomic notroot = i + Cyclotomic(Rational(1));
    CHECK_FALSE(notroot.as_scaled_root(mag, rot));
}

TEST_CASE("laurent arithmetic and division") {
    Laurent p = Laurent::v(1) - Laurent::v(-1); // v - v^-1
    Laurent q = Laurent::v(1) + Laurent::v(-1);
    Laurent prod = p * q;
    CHECK(prod == Laurent::v(2) - Laurent::v(-2));
    CHECK(prod.div_exact(p) == q);
    CHECK(p.order_at_one() == 1);
    CHECK((p * p).order_at_one() == 2);
    CHECK(q.order_at_one() == 0);
    CHECK(p.str() == "v - v^-1");
    CHECK((Laurent::term(Cyclotomic(Rational(3, 2)), 2) + Laurent::one()).str() == "3/2*v^2 + 1");
}

TEST_CASE("rational function normalization is canonical") {
    // (v^2 - 1)/(v^2 + v) reduces to (v - 1)/v ~ 1 - v^-1
    RationalFunctionV f(Laurent::v(2) - Laurent::one(), Laurent::v(2) + Laurent::v(1));
    RationalFunctionV g(Laurent::v(1) - Laurent::one(), Laurent::v(1));
    CHECK(f == g);
    CHECK(f.num() == g.num());
    CHECK(f.den() == g.den());
    // evaluation
    CHECK(f.eval(Cyclotomic(Rational(2))).rational_value() == Rational(1, 2));
    CHECK(RationalFunctionV(Laurent::v(2)).eval(Cyclotomic(Rational(3))).rational_value() == Rational(9));
}

TEST_CASE("random ring identities") {
    std::mt19937 rng(12345);
    auto rnd_poly = [&]() {
        Laurent p;
        int terms = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < terms; ++i) {
            int e = static_cast<int>(rng() % 9) - 4;
            long long c = static_cast<long long>(rng() % 7) - 3;
            p += Laurent::term(Cyclotomic(Rational(c)), e);
        }
        return p;
    };
    for (int it = 0; it < 200; ++it) {
        Laurent a = rnd_poly(), b = rnd_poly(), c = rnd_poly();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!b.is_zero()) {
            auto red1 = RationalFunctionV(a, b);
            auto red2 = RationalFunctionV(red1.num(), red1.den());
            CHECK(red1.num() == red2.num()); // reduction idempotent
            CHECK(red1.den() == red2.den());
        }
    }
}

TEST_CASE("q-integers and normalizing elements") {
    CHECK(q_integer(2).str() == "v + v^-1");
    CHECK(q_integer(3).str() == "v^2 + 1 + v^-2");
    NormalizingElement d;
    d.constant = Rational(1);
    d.vexp = 1;
    d.qints[2] = -1;
    RationalFunctionV e = d.expand();
    RationalFunctionV want(Laurent::v(1) - Laurent::v(-1), Laurent::v(1) + Laurent::v(-1));
    CHECK(e == want);
    CHECK(d.str() == "(v-v^-1) * [2]^-1");
    NormalizingElement d2;
    d2.constant = Rational(3, 2);
    d2.qints[3] = 1;
    CHECK(d2.expand() == RationalFunctionV::constant(Rational(3, 2)) * q_integer(3));
    CHECK(d2.str() == "3/2 * [3]");
    CHECK(d2.eval(Rational(2)) == Rational(3, 2) * Rational(21, 4));
}

TEST_CASE("factor_into_M round trips and failures") {
    // inverse of expand on the spec examples
    NormalizingElement d;
    d.vexp = 1;
    d.qints[2] = -1;
    auto f = factor_into_M(d.expand());
    REQUIRE(f.has_value());
    CHECK(f->sign == 1);
    CHECK(f->d == d);

    auto c5 = factor_into_M(RationalFunctionV::constant(Rational(5)));
    REQUIRE(c5.has_value());
    CHECK(c5->d.constant == Rational(5));
    CHECK(c5->d.vexp == 0);
    CHECK(c5->d.qints.empty());

    auto bad = factor_into_M(RationalFunctionV(Laurent::v(1) + Laurent::one()));
    CHECK_FALSE(bad.has_value());

    // minus sign recovered
    auto neg = factor_into_M(RationalFunctionV::constant(Rational(-7, 3)));
    REQUIRE(neg.has_value());
    CHECK(neg->sign == -1);
    CHECK(neg->d.constant == Rational(7, 3));

    // round-trip on random M' elements
    std::mt19937 rng(99);
    for (int it = 0; it < 50; ++it) {
        NormalizingElement x;
        x.constant = Rational(1 + static_cast<long long>(rng() % 6), 1 + static_cast<long long>(rng() % 6));
        x.vexp = static_cast<int>(rng() % 5) - 2;
        for (long long n = 2; n <= 5; ++n)
            if (rng() % 2) x.qints[n] = static_cast<long long>(rng() % 3) - 1;
        for (auto it2 = x.qints.begin(); it2 != x.qints.end();)
            it2 = it2->second == 0 ? x.qints.erase(it2) : std::next(it2);
        int sgn = rng() % 2 ? 1 : -1;
        RationalFunctionV f2 = x.expand() * RationalFunctionV::constant(Rational(sgn));
        auto back = factor_into_M(f2);
        REQUIRE(back.has_value());
        CHECK(back->sign == sgn);
        CHECK(back->d == x);
        // M-symmetry d(1/v) = +- d(v)
        Rational at2 = x.eval(Rational(2));
        Rational athalf = x.eval(Rational(1, 2));
        CHECK((at2 == athalf || at2 == -athalf));
        CHECK(x.eval(Rational(2)) > Rational(0)); // positivity on v > 1
    }
}
