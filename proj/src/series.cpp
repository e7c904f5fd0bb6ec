#include "va/series.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>

namespace va {

Exponent Monomial::exponent(const Var& v) const {
    for (const auto& [name, e] : entries_)
        if (name == v) return e;
    return Exponent(0);
}

bool Monomial::has(const Var& v) const {
    for (const auto& [name, e] : entries_)
        if (name == v) return true;
    return false;
}

void Monomial::set(const Var& v, Exponent e) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& a, const Var& b) { return a.first < b; });
    if (it != entries_.end() && it->first == v) {
        if (e.is_zero()) entries_.erase(it);
        else it->second = std::move(e);
    } else if (!e.is_zero()) {
        entries_.insert(it, {v, std::move(e)});
    }
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    auto a = entries_.begin();
    auto b = o.entries_.begin();
    while (a != entries_.end() && b != o.entries_.end()) {
        if (a->first < b->first) {
            r.entries_.push_back(*a++);
        } else if (b->first < a->first) {
            r.entries_.push_back(*b++);
        } else {
            Exponent e = a->second + b->second;
            if (!e.is_zero()) r.entries_.push_back({a->first, std::move(e)});
            ++a;
            ++b;
        }
    }
    r.entries_.insert(r.entries_.end(), a, entries_.end());
    r.entries_.insert(r.entries_.end(), b, o.entries_.end());
    return r;
}

Monomial Monomial::without(const Var& v) const {
    Monomial r;
    for (const auto& e : entries_)
        if (e.first != v) r.entries_.push_back(e);
    return r;
}

Monomial Monomial::shifted(const Var& v, const Exponent& e) const {
    Monomial r = *this;
    r.set(v, exponent(v) + e);
    return r;
}

Rational Monomial::total_re() const {
    Rational t(0);
    for (const auto& [v, e] : entries_) t += abs(e.re());
    return t;
}

bool operator<(const Monomial& a, const Monomial& b) {
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() && ib != b.entries_.end()) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia;
        ++ib;
    }
    return ia == a.entries_.end() && ib != b.entries_.end();
}

std::string Monomial::str() const {
    if (entries_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : entries_) {
        if (!first) os << "*";
        first = false;
        os << v;
        if (e != Exponent(1)) {
            std::string es = e.str();
            bool plain = es.find_first_of("/+-i") == std::string::npos;
            os << "^" << (plain ? es : "(" + es + ")");
        }
    }
    return os.str();
}

Window Window::box(const std::vector<Var>& vars, const Rational& lo, const Rational& hi) {
    Window w;
    for (const auto& v : vars) w.set(v, lo, hi);
    return w;
}

Window& Window::set(const Var& v, Rational lo, Rational hi) {
    if (cmp(lo, hi) > 0) throw Error("window for " + v + " has min > max");
    bounds_[v] = ExpRange{std::move(lo), std::move(hi)};
    return *this;
}

std::optional<ExpRange> Window::range(const Var& v) const {
    auto it = bounds_.find(v);
    if (it == bounds_.end()) return std::nullopt;
    return it->second;
}

bool Window::contains(const Var& v, const Exponent& e) const {
    auto it = bounds_.find(v);
    if (it == bounds_.end()) return true;
    return cmp(e.re(), it->second.lo) >= 0 && cmp(e.re(), it->second.hi) <= 0;
}

bool Window::contains(const Monomial& m) const {
    for (const auto& [v, e] : m.entries())
        if (!contains(v, e)) return false;
    if (total_ && cmp(m.total_re(), *total_) > 0) return false;
    return true;
}

std::pair<long, long> Window::int_range(const Var& v) const {
    auto it = bounds_.find(v);
    if (it == bounds_.end())
        throw Error("window required for variable " + v);
    return {ceil_to_long(it->second.lo), floor_to_long(it->second.hi)};
}

Window Window::padded(long pad) const {
    Window w = *this;
    for (auto& [v, r] : w.bounds_) {
        r.lo -= pad;
        r.hi += pad;
    }
    return w;
}

std::string support_class_name(SupportClass c) {
    switch (c) {
        case SupportClass::polynomial: return "polynomial";
        case SupportClass::laurent_polynomial: return "laurent_polynomial";
        case SupportClass::power_series: return "power_series";
        case SupportClass::truncated_laurent: return "truncated_laurent";
        case SupportClass::doubly_infinite: return "doubly_infinite";
        case SupportClass::complex_power: return "complex_power";
    }
    return "?";
}

SupportClass support_class(const Series& f) {
    bool integral = true;
    bool nonneg = true;
    for (const auto& [m, c] : f.terms())
        for (const auto& [v, e] : m.entries()) {
            if (!e.is_integer()) integral = false;
            else if (e.as_long() < 0) nonneg = false;
        }
    bool below = true, above = true;
    for (const auto& [v, t] : f.tags()) {
        below = below && t.below;
        above = above && t.above;
    }
    if (!integral) return SupportClass::complex_power;
    if (below && above)
        return nonneg ? SupportClass::polynomial : SupportClass::laurent_polynomial;
    if (below) return nonneg ? SupportClass::power_series : SupportClass::truncated_laurent;
    return SupportClass::doubly_infinite;
}

bool product_defined(const Series& f, const Series& g, std::string* why) {
    std::set<Var> vars = f.variables();
    for (const auto& v : g.variables()) vars.insert(v);
    for (const auto& v : vars) {
        SupportTag a = f.tag(v);
        SupportTag b = g.tag(v);
        bool ok = a.finite() || b.finite() || (a.below && b.below) || (a.above && b.above);
        if (!ok) {
            if (why)
                *why = "coefficient sums in " + v + " are not provably finite";
            return false;
        }
    }
    return true;
}

Series multiply(const Series& f, const Series& g) {
    std::string why;
    if (!product_defined(f, g, &why)) throw UndefinedProduct(why);
    return detail::convolve<Scalar>(f, g, nullptr);
}

Series multiply_clipped(const Series& f, const Series& g, const Window& w) {
    return detail::convolve<Scalar>(f, g, &w);
}

Series multiply_serial(const Series& f, const Series& g, const Window* w) {
    return detail::convolve_serial<Scalar>(f, g, w);
}

Series binom_expand(const ExpandArg& first, const ExpandArg& second,
                    const Exponent& lambda, const Window& w) {
    if (!first.is_var() && !second.is_var()) throw BothArgumentsNumeric();

    long n_lo = 0, n_hi;
    if (second.is_var()) {
        n_hi = w.int_range(*second.var).second;
        n_lo = std::max(0L, w.int_range(*second.var).first);
    } else {
        // first is a variable with exponents lambda - n; its lower window
        // bound caps n: lambda.re - n >= lo  =>  n <= lambda.re - lo.
        auto r = w.range(*first.var);
        if (!r) throw Error("window required for variable " + *first.var);
        Rational cap = lambda.re() - r->lo;
        n_hi = floor_to_long(cap);
    }

    bool terminating = lambda.is_integer() && lambda.as_long() >= 0;
    if (terminating) n_hi = std::min(n_hi, lambda.as_long());

    Series out;
    Scalar coef(1);
    for (long n = 0; n <= n_hi; ++n) {
        if (n > 0) {
            coef *= (lambda.as_scalar() - Scalar(n - 1));
            coef /= Scalar(n);
        }
        if (n < n_lo) continue;
        Exponent efirst = lambda - Exponent(n);
        Scalar c = coef;
        Monomial m;
        if (first.is_var()) {
            if (!w.contains(*first.var, efirst)) continue;
            m.set(*first.var, efirst);
            if (!first.value.is_one()) {
                if (!efirst.is_integer())
                    throw Error("scaled variable with non-integral exponent " + efirst.str());
                c *= first.value.pow(efirst.as_long());
            }
        } else {
            if (!efirst.is_integer())
                throw Error("numeric base with non-integral exponent " + efirst.str());
            c *= first.value.pow(efirst.as_long());
        }
        if (second.is_var()) {
            m.set(*second.var, Exponent(n));
            if (!second.value.is_one()) c *= second.value.pow(n);
        } else {
            c *= second.value.pow(n);
        }
        out.add_term(m, c);
    }

    if (!terminating) {
        if (first.is_var()) out.set_tag(*first.var, SupportTag{false, true});
        if (second.is_var()) out.set_tag(*second.var, SupportTag{true, false});
    }
    return out;
}

Series formal_taylor(const Series& f, const Var& x, const Var& y, const Window& w) {
    if (f.variables().count(y)) throw VariableCollision(y);

    auto [ylo, yhi] = w.int_range(y);
    long k_lo = std::max(0L, ylo);

    Series out;
    bool terminating = true;
    for (const auto& [m, c] : f.terms()) {
        Exponent lam = m.exponent(x);
        if (!(lam.is_integer() && lam.as_long() >= 0)) terminating = false;
        Monomial base = m.without(x);
        Scalar coef(1);
        for (long k = 0; k <= yhi; ++k) {
            if (k > 0) {
                coef *= (lam.as_scalar() - Scalar(k - 1));
                coef /= Scalar(k);
            }
            if (coef.is_zero()) break;
            if (k < k_lo) continue;
            Exponent ex = lam - Exponent(k);
            if (!w.contains(x, ex)) continue;
            Monomial mm = base.shifted(y, Exponent(k));
            if (!ex.is_zero()) mm = mm.shifted(x, ex);
            out.add_term(mm, c * coef);
        }
    }

    SupportTag xt = f.tag(x);
    out.set_tag(x, terminating ? xt : SupportTag{false, xt.above});
    if (!terminating) out.set_tag(y, SupportTag{true, false});
    for (const auto& [v, t] : f.tags())
        if (v != x) out.set_tag(v, t);
    return out;
}

Series subst_binomial(const Series& f, const Var& replaced, const ExpandArg& first,
                      const ExpandArg& second, const Window& w) {
    Series out;
    for (const auto& [m, c] : f.terms()) {
        Exponent e = m.exponent(replaced);
        Series rest;
        rest.add_term(m.without(replaced), c);
        if (e.is_zero()) {
            out += rest;
            continue;
        }
        // Widen the expansion window so products of the expansion with the
        // remaining monomial still cover w.
        Window local = w;
        auto fix = [&](const ExpandArg& a) {
            if (!a.is_var()) return;
            auto r = w.range(*a.var);
            if (!r) return;
            Exponent off = m.exponent(*a.var);
            if (*a.var != replaced && !off.is_zero())
                local.set(*a.var, r->lo - off.re(), r->hi - off.re());
        };
        fix(first);
        fix(second);
        out += multiply_clipped(binom_expand(first, second, e, local), rest, w);
    }
    return out;
}

Series delta(const Var& v, const Window& w) {
    Series out;
    auto [lo, hi] = w.int_range(v);
    for (long n = lo; n <= hi; ++n)
        out.add_term(Monomial::power(v, Exponent(n)), Scalar(1));
    out.set_tag(v, SupportTag{false, false});
    return out;
}

Series delta_ratio(const Var& a, const Var& b, const Window& w) {
    if (a == b) throw DuplicateVariable(a);
    Series out;
    auto [alo, ahi] = w.int_range(a);
    auto [blo, bhi] = w.int_range(b);
    for (long n = std::max(alo, -bhi); n <= std::min(ahi, -blo); ++n) {
        Monomial m = Monomial::power(a, Exponent(n));
        m.set(b, Exponent(-n));
        out.add_term(m, Scalar(1));
    }
    out.set_tag(a, SupportTag{false, false});
    out.set_tag(b, SupportTag{false, false});
    return out;
}

Series delta3_core(const Var& out_var, const Var& a, const Var& b, bool b_negative,
                   bool out_negative, const Window& w) {
    if (out_var == a || out_var == b || a == b)
        throw DuplicateVariable(out_var == a ? out_var : (a == b ? a : b));

    Series out;
    auto [olo, ohi] = w.int_range(out_var);
    auto [alo, ahi] = w.int_range(a);
    auto [blo, bhi] = w.int_range(b);
    long m_lo = std::max(0L, blo);

    // out-exponent is -n-1; a negated denominator contributes (-1)^n.
    for (long n = -ohi - 1; n <= -olo - 1; ++n) {
        Scalar outer = out_negative ? sign_pow(n) : Scalar(1);
        Scalar coef(1);
        long m_hi = std::min(bhi, n - alo);
        for (long m = 0; m <= m_hi; ++m) {
            if (m > 0) {
                coef *= Scalar(n - (m - 1));
                coef /= Scalar(m);
            }
            if (coef.is_zero()) break;
            if (m < m_lo) continue;
            long ea = n - m;
            if (ea < alo || ea > ahi) continue;
            Monomial mono = Monomial::power(out_var, Exponent(-n - 1));
            if (ea != 0) mono.set(a, Exponent(ea));
            if (m != 0) mono.set(b, Exponent(m));
            Scalar c = coef * outer;
            if (b_negative && m % 2 == 1) c = -c;
            out.add_term(mono, c);
        }
    }
    out.set_tag(out_var, SupportTag{false, false});
    out.set_tag(a, SupportTag{false, false});
    out.set_tag(b, SupportTag{true, false});
    return out;
}

Series delta3(const Var& out, const Var& a, const Var& b, Delta3Sign sign, const Window& w) {
    if (sign == Delta3Sign::plus) return delta3_core(out, a, b, true, false, w);
    return delta3_core(out, b, a, true, true, w);
}

Scalar eval_partial(const Series& f, const std::map<Var, Scalar>& point, const Window& w) {
    Scalar acc;
    for (const auto& [m, c] : f.terms()) {
        if (!w.contains(m)) continue;
        Scalar term = c;
        for (const auto& [v, e] : m.entries()) {
            auto it = point.find(v);
            if (it == point.end()) throw Error("no value assigned to " + v);
            if (it->second.is_zero()) throw Error("assignment of 0 to " + v);
            if (!e.is_integer())
                throw Error("cannot evaluate non-integral power " + v + "^" + e.str());
            term *= it->second.pow(e.as_long());
        }
        acc += term;
    }
    return acc;
}

std::string to_string(const Series& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        std::string cs = c.str();
        bool neg = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
        if (first) {
            first = false;
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        bool composite = cs.find_first_of("+-", 1) != std::string::npos || cs.find('i') != std::string::npos;
        if (composite) cs = "(" + cs + ")";
        if (m.is_unit()) os << cs;
        else if (cs == "1") os << m.str();
        else if (cs == "-1") os << "-" << m.str();
        else os << cs << "*" << m.str();
    }
    return os.str();
}

} // namespace va
