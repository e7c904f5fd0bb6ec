#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "va/identities.hpp"
#include "va/series.hpp"

#include <cstdlib>
#include <random>

using namespace va;

namespace {

std::mt19937_64 seeded_rng() {
    const char* s = std::getenv("VA_SEED");
    return std::mt19937_64(s ? std::strtoull(s, nullptr, 10) : 20240811ull);
}

Series monomial_series(std::initializer_list<std::pair<Var, long>> exps, Scalar c = Scalar(1)) {
    Monomial m;
    for (const auto& [v, e] : exps) m.set(v, Exponent(e));
    Series s;
    s.add_term(m, c);
    return s;
}

Series random_laurent(std::mt19937_64& rng, const Var& v, long max_abs, int nterms) {
    std::uniform_int_distribution<long> exp(-max_abs, max_abs);
    std::uniform_int_distribution<long> num(-5, 5);
    Series f;
    for (int i = 0; i < nterms; ++i)
        f.add_term(Monomial::power(v, Exponent(exp(rng))),
                   Scalar(Rational(num(rng)), Rational(num(rng))));
    return f;
}

} // namespace

TEST_CASE("scalar field arithmetic") {
    Scalar a(Rational(1, 2), Rational(3));
    Scalar b(Rational(-2), Rational(1, 5));
    CHECK(a * b / b == a);
    CHECK((a - a).is_zero());
    CHECK(a.pow(3) == a * a * a);
    CHECK(a.pow(-2) == (a * a).inv());
    CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
    CHECK(Scalar(Rational(2)).pow(-3) == Scalar(Rational(1, 8)));
}

TEST_CASE("binomial coefficients by falling-factorial recurrence") {
    CHECK(binomial(4, 2) == Scalar(6));
    CHECK(binomial(-1, 3) == Scalar(-1));
    CHECK(binomial(-2, 3) == Scalar(-4));
    // C(1/2,2) = (1/2)(-1/2)/2 = -1/8
    CHECK(binomial(Exponent(Rational(1, 2)), 2) == Scalar(Rational(-1, 8)));
    CHECK(binomial(Exponent(3), 5).is_zero());
}

TEST_CASE("delta materialization and residue") {
    Window w = Window::box({"x"}, 2);
    Series d = delta("x", w);
    CHECK(d.size() == 5);
    for (long n = -2; n <= 2; ++n)
        CHECK(d.coeff(Monomial::power("x", Exponent(n))) == Scalar(1));

    CHECK(residue(d, "x") == monomial_series({}));

    Series f = monomial_series({{"x", -1}}) + monomial_series({{"x", 0}}, Scalar(7));
    f.add_term(Monomial::power("x", Exponent(Rational(-1, 2))), Scalar(9));
    CHECK(residue(f, "x") == monomial_series({}));
}

TEST_CASE("f(x) delta(x) = f(1) delta(x)") {
    Window w = Window::box({"x"}, 6);
    // x * delta(x) = delta(x)
    Series x = monomial_series({{"x", 1}});
    Series prod = multiply_clipped(x, delta("x", w.padded(1)), w);
    CHECK(prod == delta("x", w));

    // monomial basis plus random Laurent polynomials
    auto rng = seeded_rng();
    for (long k = -6; k <= 6; ++k) {
        CheckReport r = verify_delta_substitution_single(monomial_series({{"x", k}}), "x", w);
        CHECK(r.all_pass());
    }
    for (int i = 0; i < 10; ++i) {
        CheckReport r = verify_delta_substitution_single(random_laurent(rng, "x", 6, 4), "x", w);
        CHECK(r.all_pass());
    }
}

TEST_CASE("multiply: well-definedness static test") {
    Window w = Window::box({"x"}, 8);
    Series d = delta("x", w);
    CHECK_THROWS_AS((void)multiply(d, d), UndefinedProduct);

    // geometric series squared: sum (n+1) x^n
    Series geo;
    for (long n = 0; n <= 8; ++n) geo.add_term(Monomial::power("x", Exponent(n)), Scalar(1));
    geo.set_tag("x", SupportTag{true, false});
    Series sq = multiply(geo, geo).clip(w);
    for (long n = 0; n <= 8; ++n)
        CHECK(sq.coeff(Monomial::power("x", Exponent(n))) == Scalar(n + 1));

    // delta times a power series is not provably finite
    CHECK_THROWS_AS((void)multiply(d, geo), UndefinedProduct);

    // but delta times a Laurent polynomial is fine
    Series p = monomial_series({{"x", 3}}, Scalar(2)) + monomial_series({{"x", -2}});
    CHECK_NOTHROW((void)multiply(p, d));
}

TEST_CASE("parallel convolution agrees with serial reference") {
    auto rng = seeded_rng();
    for (int trial = 0; trial < 5; ++trial) {
        Series f, g;
        std::uniform_int_distribution<long> exp(0, 40);
        std::uniform_int_distribution<long> num(-9, 9);
        for (int i = 0; i < 120; ++i) {
            Monomial m;
            m.set("x", Exponent(exp(rng)));
            m.set("y", Exponent(exp(rng)));
            f.add_term(m, Scalar(Rational(num(rng))));
            Monomial m2;
            m2.set("x", Exponent(exp(rng)));
            m2.set("y", Exponent(exp(rng)));
            g.add_term(m2, Scalar(Rational(num(rng))));
        }
        CHECK(multiply(f, g) == multiply_serial(f, g));
        Window w = Window::box({"x", "y"}, Rational(0), Rational(30));
        CHECK(multiply_clipped(f, g, w) == multiply_serial(f, g, &w));
    }
}

TEST_CASE("binomial expansion convention") {
    Window w = Window::box({"x", "y"}, 8);

    Series sq = binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"), Exponent(2), w);
    Series expect = monomial_series({{"x", 2}}) + monomial_series({{"x", 1}, {"y", 1}}, Scalar(2)) +
                    monomial_series({{"y", 2}});
    CHECK(sq == expect);

    Series inv = binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"), Exponent(-1), w);
    for (long n = 0; n <= 7; ++n)
        CHECK(inv.coeff(Monomial{{"x", Exponent(-1 - n)}, {"y", Exponent(n)}}) == sign_pow(n));

    Series sqrt = binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"),
                               Exponent(Rational(1, 2)), w);
    Monomial y2{{"x", Exponent(Rational(-3, 2))}, {"y", Exponent(2)}};
    CHECK(sqrt.coeff(y2) == Scalar(Rational(-1, 8)));

    CHECK_THROWS_AS((void)binom_expand(ExpandArg::number(Scalar(1)), ExpandArg::number(Scalar(2)),
                                       Exponent(2), w),
                    BothArgumentsNumeric);
}

TEST_CASE("formal Taylor theorem") {
    Window w = Window::box({"x", "y"}, 12);

    Series x2 = monomial_series({{"x", 2}});
    Series t = formal_taylor(x2, "x", "y", w);
    CHECK(t == binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"), Exponent(2), w));

    Series xm1 = monomial_series({{"x", -1}});
    CHECK(formal_taylor(xm1, "x", "y", w) ==
          binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"), Exponent(-1), w));

    Series root;
    root.add_term(Monomial::power("x", Exponent(Rational(1, 2))), Scalar(1));
    Series tr = formal_taylor(root, "x", "y", w);
    Monomial y1{{"x", Exponent(Rational(-1, 2))}, {"y", Exponent(1)}};
    CHECK(tr.coeff(y1) == Scalar(Rational(1, 2)));

    CHECK_THROWS_AS((void)formal_taylor(tr, "x", "y", w), VariableCollision);
}

TEST_CASE("Taylor-binomial coherence across rational exponents") {
    Window w = Window::box({"x", "y"}, 12);
    for (const Rational& lam : {Rational(-3), Rational(-1), Rational(-1, 2), Rational(0),
                                Rational(1, 2), Rational(2), Rational(7, 3)}) {
        Series f;
        f.add_term(Monomial::power("x", Exponent(lam)), Scalar(1));
        CHECK(formal_taylor(f, "x", "y", w) ==
              binom_expand(ExpandArg::variable("x"), ExpandArg::variable("y"), Exponent(lam), w));
    }
}

TEST_CASE("derivative") {
    Series x3 = monomial_series({{"x", 3}});
    CHECK(derivative(x3, "x") == monomial_series({{"x", 2}}, Scalar(3)));

    Series root;
    root.add_term(Monomial::power("x", Exponent(Rational(1, 2))), Scalar(1));
    Series dr = derivative(root, "x");
    CHECK(dr.coeff(Monomial::power("x", Exponent(Rational(-1, 2)))) == Scalar(Rational(1, 2)));

    Window w = Window::box({"x"}, 4);
    Series dd = derivative(delta("x", w.padded(1)), "x").clip(w);
    for (long n = -4; n <= 4; ++n)
        CHECK(dd.coeff(Monomial::power("x", Exponent(n))) == Scalar(n + 1));
}

TEST_CASE("three-variable delta expansions") {
    Window w = Window::box({"x0", "x1", "x2"}, 4);
    Series d3 = delta3("x0", "x1", "x2", Delta3Sign::plus, w);

    // brute-force oracle for the double sum
    Series oracle;
    for (long n = -5; n <= 5; ++n)
        for (long m = 0; m <= 10; ++m) {
            Monomial mono;
            mono.set("x0", Exponent(-n - 1));
            mono.set("x1", Exponent(n - m));
            mono.set("x2", Exponent(m));
            if (!w.contains(mono)) continue;
            oracle.add_term(mono, sign_pow(m) * binomial(n, m));
        }
    CHECK(d3.terms() == oracle.terms());

    Monomial probe{{"x1", Exponent(-1)}};
    CHECK(d3.coeff(probe) == Scalar(1));

    // Res_x0 of x0^-1 d((x1-x2)/x0) is the n=0 term: 1
    CHECK(residue(d3, "x0") == monomial_series({}));

    // Res_x2 of x2^-1 d((x1-x0)/x2) = 1
    Series lhs2 = delta3_core("x2", "x1", "x0", true, false, w);
    CHECK(residue(lhs2, "x2") == monomial_series({}));
}

TEST_CASE("delta identities on windows") {
    for (long width : {3L, 6L}) {
        Window w = Window::box({"x0", "x1", "x2"}, width);
        CHECK(verify_delta_identity(DeltaIdentity::two_term, w).all_pass());
        CHECK(verify_delta_identity(DeltaIdentity::three_term, w).all_pass());
        CHECK(verify_delta_identity(DeltaIdentity::three_term_lhs_inequality, w).all_pass());
    }
    Window ws = Window::box({"x1", "x2", "y"}, 3);
    CHECK(verify_delta_identity(DeltaIdentity::substitution, ws).all_pass());
}

TEST_CASE("series canonicality") {
    auto rng = seeded_rng();
    for (int trial = 0; trial < 20; ++trial) {
        Series a = random_laurent(rng, "x", 5, 6);
        Series b = random_laurent(rng, "x", 5, 6);
        Series c = random_laurent(rng, "x", 5, 6);
        Series sum = a + b;
        for (const auto& [m, coeff] : sum.terms()) CHECK(!coeff.is_zero());
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("support classes") {
    Window w = Window::box({"x"}, 5);
    CHECK(support_class(delta("x", w)) == SupportClass::doubly_infinite);
    CHECK(support_class(monomial_series({{"x", 2}})) == SupportClass::polynomial);
    CHECK(support_class(monomial_series({{"x", -2}})) == SupportClass::laurent_polynomial);
    Series geo;
    geo.add_term(Monomial::power("x", Exponent(0)), Scalar(1));
    geo.set_tag("x", SupportTag{true, false});
    CHECK(support_class(geo) == SupportClass::power_series);
    Series root;
    root.add_term(Monomial::power("x", Exponent(Rational(1, 2))), Scalar(1));
    CHECK(support_class(root) == SupportClass::complex_power);
}

TEST_CASE("eval_partial geometric tail") {
    // iota_12-style expansion of 1/(x1-x2) evaluated at (2,1)
    Window w = Window::box({"x1", "x2"}, Rational(-31), Rational(30));
    Series exp12 = binom_expand(ExpandArg::variable("x1"),
                                ExpandArg::variable("x2", Scalar(-1)), Exponent(-1), w);
    for (long n : {10L, 20L, 30L}) {
        Window wn;
        wn.set("x1", Rational(-n - 1), Rational(n));
        wn.set("x2", Rational(0), Rational(n));
        Scalar partial = eval_partial(exp12, {{"x1", Scalar(2)}, {"x2", Scalar(1)}}, wn);
        Scalar tail = Scalar(1) - partial;
        CHECK(tail == Scalar(Rational(1)) * Scalar(Rational(2)).pow(-n - 1));
    }
}
