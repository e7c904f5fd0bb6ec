#include "va/identities.hpp"

namespace va {

namespace {

long max_abs_exp(const Series& f) {
    long m = 0;
    for (const auto& [mono, c] : f.terms())
        for (const auto& [v, e] : mono.entries()) {
            Rational a = abs(e.re());
            m = std::max(m, ceil_to_long(a));
        }
    return m;
}

long window_span(const Window& w) {
    long s = 0;
    for (const auto& [v, r] : w.bounds()) {
        Rational width = r.hi - r.lo;
        s = std::max(s, ceil_to_long(width));
    }
    return s;
}

void compare_on_window(CheckReport& rep, const std::string& name, const Series& lhs,
                       const Series& rhs, const Window& w) {
    Series l = lhs.clip(w);
    Series r = rhs.clip(w);
    if (auto m = Series::first_difference(l, r)) {
        rep.fail(name,
                 Witness{"", m->str(), l.coeff(*m).str(), r.coeff(*m).str()});
        return;
    }
    rep.pass(name, std::to_string(l.size()) + " coefficients compared");
}

Series default_substitution_f() {
    Series f;
    f.add_term(Monomial{{"x1", Exponent(2)}, {"x2", Exponent(-1)}}, Scalar(1));
    f.add_term(Monomial{{"x1", Exponent(-3)}, {"y", Exponent(2)}}, Scalar(3));
    f.add_term(Monomial{{"x1", Exponent(1)}, {"x2", Exponent(1)}, {"y", Exponent(-1)}},
               Scalar(Rational(-1, 2)));
    f.add_term(Monomial{{"x1", Exponent(-1)}, {"x2", Exponent(3)}}, Scalar::i());
    return f;
}

} // namespace

CheckReport verify_delta_identity(DeltaIdentity kind, const Window& window, const Series* f) {
    CheckReport rep;
    if (window.bounds().empty()) {
        rep.error("delta.window", "window is empty");
        return rep;
    }

    switch (kind) {
        case DeltaIdentity::two_term: {
            Series lhs = delta3_core("x2", "x1", "x0", true, false, window);
            Series rhs = delta3_core("x1", "x2", "x0", false, false, window);
            compare_on_window(rep, "delta.two_term", lhs, rhs, window);
            break;
        }
        case DeltaIdentity::three_term: {
            Series a = delta3_core("x0", "x1", "x2", true, false, window);
            Series b = delta3_core("x0", "x2", "x1", true, true, window);
            Series rhs = delta3_core("x2", "x1", "x0", true, false, window);
            compare_on_window(rep, "delta.three_term", a - b, rhs, window);
            break;
        }
        case DeltaIdentity::three_term_lhs_inequality: {
            Series a = delta3_core("x0", "x1", "x2", true, false, window);
            Series b = delta3_core("x0", "x2", "x1", true, true, window);
            auto m = Series::first_difference(a, b);
            if (m) {
                rep.pass("delta.three_term_lhs_inequality",
                         "terms differ at " + m->str() + ": " + a.coeff(*m).str() + " vs " +
                             b.coeff(*m).str());
            } else {
                rep.fail("delta.three_term_lhs_inequality",
                         Witness{"", "", "no differing coefficient on window", ""},
                         "expected the two left-hand terms to differ");
            }
            break;
        }
        case DeltaIdentity::substitution: {
            Series fv = f ? *f : default_substitution_f();
            for (const auto& [m, c] : fv.terms())
                if (!m.exponent("x1").is_integer()) {
                    rep.error("delta.substitution", "f must have integral powers of x1");
                    return rep;
                }
            long pad = max_abs_exp(fv) + window_span(window) + 2;
            Window wide = window.padded(pad);
            Series d = delta3_core("x1", "x2", "y", true, false, wide);
            Series lhs = multiply_clipped(d, fv, window);
            Series fsub = subst_binomial(fv, "x1", ExpandArg::variable("x2"),
                                         ExpandArg::variable("y", Scalar(-1)), wide);
            Series rhs = multiply_clipped(d, fsub, window);
            compare_on_window(rep, "delta.substitution", lhs, rhs, window);
            break;
        }
    }
    return rep;
}

CheckReport verify_delta_substitution_single(const Series& f, const Var& x, const Window& window) {
    CheckReport rep;
    for (const auto& [m, c] : f.terms())
        for (const auto& [v, e] : m.entries())
            if (v != x || !e.is_integer()) {
                rep.error("delta.f_delta", "f must be a Laurent polynomial in " + x);
                return rep;
            }
    long pad = max_abs_exp(f);
    Series d = delta(x, window.padded(pad));
    Series lhs = multiply_clipped(f, d, window);
    Scalar f1 = eval_partial(f, {{x, Scalar(1)}}, window.padded(pad));
    Series rhs = delta(x, window).scaled(f1);
    compare_on_window(rep, "delta.f_delta", lhs, rhs, window);
    return rep;
}

} // namespace va
