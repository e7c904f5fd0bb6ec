#ifndef VA_SERIES_HPP
#define VA_SERIES_HPP

#include "va/error.hpp"
#include "va/scalar.hpp"

#include <omp.h>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace va {

using Var = std::string;

// Product of formal-variable powers. Entries are sorted by variable name and
// a zero exponent is never stored (absent variable = exponent 0).
class Monomial {
public:
    using Entry = std::pair<Var, Exponent>;

    Monomial() = default;
    Monomial(std::initializer_list<Entry> init) {
        for (const auto& [v, e] : init) set(v, e);
    }
    static Monomial unit() { return Monomial(); }
    static Monomial power(const Var& v, Exponent e) {
        Monomial m;
        m.set(v, std::move(e));
        return m;
    }

    bool is_unit() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }
    Exponent exponent(const Var& v) const;
    bool has(const Var& v) const;

    void set(const Var& v, Exponent e);
    Monomial times(const Monomial& o) const;
    Monomial without(const Var& v) const;
    // this * v^e
    Monomial shifted(const Var& v, const Exponent& e) const;

    Rational total_re() const;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
    friend bool operator<(const Monomial& a, const Monomial& b);

    std::string str() const;

private:
    std::vector<Entry> entries_;
};

struct ExpRange {
    Rational lo, hi;
};

// Per-variable exponent bounds on real parts, plus an optional bound on the
// sum of |Re| over all variables.
class Window {
public:
    Window() = default;
    static Window box(const std::vector<Var>& vars, const Rational& lo, const Rational& hi);
    static Window box(const std::vector<Var>& vars, long half_width) {
        return box(vars, Rational(-half_width), Rational(half_width));
    }

    Window& set(const Var& v, Rational lo, Rational hi);
    Window& set_total(Rational t) {
        total_ = std::move(t);
        return *this;
    }

    std::optional<ExpRange> range(const Var& v) const;
    const std::optional<Rational>& total() const { return total_; }

    bool contains(const Monomial& m) const;
    bool contains(const Var& v, const Exponent& e) const;

    // Integer exponents of v inside the window; throws if v has no bounds.
    std::pair<long, long> int_range(const Var& v) const;

    bool empty() const { return bounds_.empty() && !total_; }
    const std::map<Var, ExpRange>& bounds() const { return bounds_; }

    // Window with every range widened by pad on both sides.
    Window padded(long pad) const;

private:
    std::map<Var, ExpRange> bounds_;
    std::optional<Rational> total_;
};

// Boundedness of the abstract support in one variable. A materialized series
// is always a finite map; the tag records what the series stands for, which
// is what decides whether a product exists.
struct SupportTag {
    bool below = true;
    bool above = true;
    bool finite() const { return below && above; }
};

enum class SupportClass {
    polynomial,
    laurent_polynomial,
    power_series,
    truncated_laurent,
    doubly_infinite,
    complex_power,
};

std::string support_class_name(SupportClass c);

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Scalar> {
    static Scalar zero() { return Scalar(); }
    static bool is_zero(const Scalar& c) { return c.is_zero(); }
    static void add_into(Scalar& a, const Scalar& b) { a += b; }
    static Scalar neg(const Scalar& c) { return -c; }
    static Scalar scale(const Scalar& c, const Scalar& s) { return c * s; }
    static std::string str(const Scalar& c) { return c.str(); }
};

// Sparse exact series: finitely many materialized terms plus support tags.
// Values are immutable in practice: operations return new series.
template <class C>
class BasicSeries {
public:
    using Ops = CoeffOps<C>;
    using TermMap = std::map<Monomial, C>;

    BasicSeries() = default;

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    C coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Ops::zero() : it->second;
    }

    void add_term(const Monomial& m, C c) {
        if (Ops::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, std::move(c));
        } else {
            Ops::add_into(it->second, c);
            if (Ops::is_zero(it->second)) terms_.erase(it);
        }
    }

    void set_tag(const Var& v, SupportTag t) {
        if (t.finite()) tags_.erase(v);
        else tags_[v] = t;
    }
    SupportTag tag(const Var& v) const {
        auto it = tags_.find(v);
        return it == tags_.end() ? SupportTag{} : it->second;
    }
    const std::map<Var, SupportTag>& tags() const { return tags_; }

    std::set<Var> variables() const {
        std::set<Var> vs;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.entries()) vs.insert(v);
        for (const auto& [v, t] : tags_) vs.insert(v);
        return vs;
    }

    BasicSeries& operator+=(const BasicSeries& o) {
        if (this == &o) {
            for (auto& [m, c] : terms_) Ops::add_into(c, c);
            return *this;
        }
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        merge_tags(o);
        return *this;
    }
    BasicSeries& operator-=(const BasicSeries& o) {
        if (this == &o) {
            terms_.clear();
            return *this;
        }
        for (const auto& [m, c] : o.terms_) add_term(m, Ops::neg(c));
        merge_tags(o);
        return *this;
    }
    friend BasicSeries operator+(BasicSeries a, const BasicSeries& b) { return a += b; }
    friend BasicSeries operator-(BasicSeries a, const BasicSeries& b) { return a -= b; }
    BasicSeries operator-() const {
        BasicSeries r;
        r.tags_ = tags_;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, Ops::neg(c));
        return r;
    }

    BasicSeries scaled(const Scalar& s) const {
        BasicSeries r;
        if (s.is_zero()) return r;
        r.tags_ = tags_;
        for (const auto& [m, c] : terms_) r.add_term(m, Ops::scale(c, s));
        return r;
    }

    // this * monomial (exponent shift).
    BasicSeries shifted(const Monomial& by) const {
        BasicSeries r;
        r.tags_ = tags_;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m.times(by), c);
        return r;
    }

    BasicSeries clip(const Window& w) const {
        BasicSeries r;
        r.tags_ = tags_;
        for (const auto& [m, c] : terms_)
            if (w.contains(m)) r.terms_.emplace(m, c);
        return r;
    }

    friend bool operator==(const BasicSeries& a, const BasicSeries& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const BasicSeries& a, const BasicSeries& b) { return !(a == b); }

    // First monomial where the two series differ, if any.
    static std::optional<Monomial> first_difference(const BasicSeries& a, const BasicSeries& b) {
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ia == a.terms_.end()) return ib->first;
            if (ib == b.terms_.end()) return ia->first;
            if (ia->first < ib->first) return ia->first;
            if (ib->first < ia->first) return ib->first;
            if (!(ia->second == ib->second)) return ia->first;
            ++ia;
            ++ib;
        }
        return std::nullopt;
    }

private:
    void merge_tags(const BasicSeries& o) {
        for (const auto& [v, t] : o.tags_) {
            SupportTag mine = tag(v);
            set_tag(v, SupportTag{mine.below && t.below, mine.above && t.above});
        }
    }

    TermMap terms_;
    std::map<Var, SupportTag> tags_;
};

using Series = BasicSeries<Scalar>;

// --- kernel operations on scalar series ---

// Whether f*g provably has finite coefficient sums, per shared variable:
// one factor finite, or both bounded below, or both bounded above.
bool product_defined(const Series& f, const Series& g, std::string* why = nullptr);

// Exact product; throws UndefinedProduct when the static support test fails.
Series multiply(const Series& f, const Series& g);

// Product of windowed materializations, clipped to w. The caller asserts the
// abstract product exists (e.g. finiteness guaranteed by a grading); no
// static test is run.
Series multiply_clipped(const Series& f, const Series& g, const Window& w);

// Serial reference convolution, kept for cross-checking the parallel path.
Series multiply_serial(const Series& f, const Series& g, const Window* w = nullptr);

namespace detail {
template <class C>
void combine_product_tags(const Series& f, const BasicSeries<C>& g, BasicSeries<C>& out) {
    std::set<Var> vars;
    for (const auto& [v, t] : f.tags()) vars.insert(v);
    for (const auto& [v, t] : g.tags()) vars.insert(v);
    for (const auto& v : vars) {
        SupportTag a = f.tag(v);
        SupportTag b = g.tag(v);
        out.set_tag(v, SupportTag{a.below && b.below, a.above && b.above});
    }
}

template <class C>
BasicSeries<C> convolve_serial(const Series& f, const BasicSeries<C>& g, const Window* w) {
    BasicSeries<C> out;
    combine_product_tags(f, g, out);
    for (const auto& [mf, cf] : f.terms())
        for (const auto& [mg, cg] : g.terms()) {
            Monomial m = mf.times(mg);
            if (w && !w->contains(m)) continue;
            out.add_term(m, CoeffOps<C>::scale(cg, cf));
        }
    return out;
}

// Parallel convolution: the left factor is split across threads with
// per-thread accumulation maps. Exact rational addition is associative and
// commutative, so the merged result does not depend on scheduling.
template <class C>
BasicSeries<C> convolve(const Series& f, const BasicSeries<C>& g, const Window* w) {
    if (f.size() * g.size() < 4096) return convolve_serial(f, g, w);

    BasicSeries<C> out;
    combine_product_tags(f, g, out);
    std::vector<const std::pair<const Monomial, Scalar>*> lhs;
    lhs.reserve(f.size());
    for (const auto& t : f.terms()) lhs.push_back(&t);

    std::vector<BasicSeries<C>> partial;
#pragma omp parallel
    {
#pragma omp single
        partial.resize(omp_get_num_threads());
        BasicSeries<C>& mine = partial[omp_get_thread_num()];
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(lhs.size()); ++i) {
            for (const auto& [mg, cg] : g.terms()) {
                Monomial m = lhs[i]->first.times(mg);
                if (w && !w->contains(m)) continue;
                mine.add_term(m, CoeffOps<C>::scale(cg, lhs[i]->second));
            }
        }
    }
    for (auto& p : partial)
        for (const auto& [m, c] : p.terms()) out.add_term(m, c);
    return out;
}
} // namespace detail

// Scalar-by-vector product of windowed materializations (same contract as the
// scalar multiply_clipped).
template <class C>
BasicSeries<C> multiply_clipped(const Series& f, const BasicSeries<C>& g, const Window& w) {
    return detail::convolve<C>(f, g, &w);
}

// Coefficient of v^-1: a series in the remaining variables.
template <class C>
BasicSeries<C> residue(const BasicSeries<C>& f, const Var& v) {
    BasicSeries<C> r;
    for (const auto& [vv, t] : f.tags())
        if (vv != v) r.set_tag(vv, t);
    for (const auto& [m, c] : f.terms())
        if (m.exponent(v) == Exponent(-1)) r.add_term(m.without(v), c);
    return r;
}

// Termwise d/dv.
template <class C>
BasicSeries<C> derivative(const BasicSeries<C>& f, const Var& v) {
    BasicSeries<C> r;
    for (const auto& [vv, t] : f.tags()) r.set_tag(vv, t);
    for (const auto& [m, c] : f.terms()) {
        Exponent e = m.exponent(v);
        if (e.is_zero()) continue;
        Monomial m2 = m.without(v);
        Exponent e2 = e - Exponent(1);
        if (!e2.is_zero()) m2 = m2.shifted(v, e2);
        r.add_term(m2, CoeffOps<C>::scale(c, e.as_scalar()));
    }
    return r;
}

// A scaled variable (coef * var) or an exact number, for binomial expansions.
struct ExpandArg {
    std::optional<Var> var;
    Scalar value; // the number itself, or the coefficient on the variable

    static ExpandArg variable(Var v, Scalar coef = Scalar(1)) {
        return ExpandArg{std::move(v), std::move(coef)};
    }
    static ExpandArg number(Scalar s) { return ExpandArg{std::nullopt, std::move(s)}; }
    bool is_var() const { return var.has_value(); }
};

// (first + second)^lambda expanded in nonnegative integral powers of second,
// truncated to w. Throws BothArgumentsNumeric when neither argument is a
// formal variable.
Series binom_expand(const ExpandArg& first, const ExpandArg& second,
                    const Exponent& lambda, const Window& w);

// e^{y d/dx} f, truncated to w (which must bound y). Throws VariableCollision
// if y occurs in f. Equals f(x+y) under the binomial expansion convention.
Series formal_taylor(const Series& f, const Var& x, const Var& y, const Window& w);

// Replace each power replaced^e in f by the binomial expansion of
// (first + second)^e, truncated to w.
Series subst_binomial(const Series& f, const Var& replaced, const ExpandArg& first,
                      const ExpandArg& second, const Window& w);

// The formal delta function sum_{n in Z} v^n, materialized on w.
Series delta(const Var& v, const Window& w);

// delta(a/b) = sum_{n in Z} a^n b^-n, materialized on w.
Series delta_ratio(const Var& a, const Var& b, const Window& w);

// Workhorse for the three-variable delta expressions:
//   out^-1 delta( (a + s_b * b) / (s_out * out) )
// with s_b = -1 if b_negative else +1, s_out likewise, expanded with b in
// nonnegative integral powers.
Series delta3_core(const Var& out, const Var& a, const Var& b, bool b_negative,
                   bool out_negative, const Window& w);

enum class Delta3Sign { plus, minus };

// plus:  out^-1 delta((a - b)/out);  minus:  out^-1 delta((b - a)/(-out)).
Series delta3(const Var& out, const Var& a, const Var& b, Delta3Sign sign, const Window& w);

// Partial sum of f on w at the given nonzero point; exponents must be
// integral.
Scalar eval_partial(const Series& f, const std::map<Var, Scalar>& point, const Window& w);

SupportClass support_class(const Series& f);

std::string to_string(const Series& f);

} // namespace va

#endif
