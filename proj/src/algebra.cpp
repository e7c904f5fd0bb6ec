#include "va/algebra.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace va {

void ModeTable::set(int u, int v, long n, Vec value) {
    ModeLine& line = lines_[{u, v}];
    if (value.is_zero()) line.modes.erase(n);
    else line.modes[n] = std::move(value);
}

void ModeTable::set_known_below(int u, int v, long lo) {
    lines_[{u, v}].known_below = lo;
}

const ModeLine* ModeTable::line(int u, int v) const {
    auto it = lines_.find({u, v});
    return it == lines_.end() ? nullptr : &it->second;
}

bool ModeTable::knows(int u, int v, long n) const {
    const ModeLine* l = line(u, v);
    return l && n >= l->known_below;
}

Vec ModeTable::mode(int u, int v, long n) const {
    const ModeLine* l = line(u, v);
    if (!l)
        throw MissingTableEntry("no modes for basis pair (#" + std::to_string(u) + ",#" +
                                std::to_string(v) + ")");
    if (n < l->known_below)
        throw MissingTableEntry("mode " + std::to_string(n) + " of pair (#" + std::to_string(u) +
                                ",#" + std::to_string(v) + ") below materialized window");
    auto it = l->modes.find(n);
    return it == l->modes.end() ? Vec() : it->second;
}

std::size_t ModeTable::entry_count() const {
    std::size_t n = 0;
    for (const auto& [k, l] : lines_) n += l.modes.size();
    return n;
}

Vec LinOp::column(int i) const {
    auto it = cols_.find(i);
    if (it == cols_.end())
        throw MissingTableEntry("operator column #" + std::to_string(i) + " not materialized");
    return it->second;
}

Vec LinOp::apply(const Vec& v) const {
    Vec out;
    for (const auto& [i, c] : v.entries()) out += column(i).scaled(c);
    return out;
}

LinOp LinOp::zero_on(int dim) {
    LinOp op;
    for (int i = 0; i < dim; ++i) op.set(i, Vec());
    return op;
}

const LinOp& Sl2Ops::L(int j) const {
    switch (j) {
        case -1: return l_minus1;
        case 0: return l_0;
        case 1: return l_1;
    }
    throw Error("sl(2) operator index must be -1, 0 or 1");
}

LinOp& Sl2Ops::L(int j) {
    return const_cast<LinOp&>(static_cast<const Sl2Ops*>(this)->L(j));
}

const ConformalData& VertexAlgebra::conformal() const {
    if (!conformal_) throw Error("algebra has no conformal vector");
    return *conformal_;
}

const Sl2Ops& VertexAlgebra::sl2_raw() const {
    if (!sl2_) throw Error("algebra has no explicit sl(2) operators");
    return *sl2_;
}

Vec VertexAlgebra::mode(const Vec& u, const Vec& v, long n) const {
    Vec out;
    for (const auto& [i, ci] : u.entries())
        for (const auto& [j, cj] : v.entries())
            out += table_.mode(i, j, n).scaled(ci * cj);
    return out;
}

Vec VertexAlgebra::apply_L(int j, const Vec& v) const {
    if (sl2_) return sl2_->L(j).apply(v);
    if (conformal_) return mode(conformal_->omega, v, j + 1);
    throw Error("algebra has neither sl(2) operators nor a conformal vector");
}

Vec VertexAlgebra::apply_Ln(long n, const Vec& v) const {
    return mode(conformal().omega, v, n + 1);
}

VecSeries vertex_op(const VertexAlgebra& alg, const Vec& u, const Vec& v, const Var& x,
                    const Window& w) {
    VecSeries out;
    auto [lo, hi] = w.int_range(x);
    // exponent -n-1 in [lo, hi]
    for (long n = -hi - 1; n <= -lo - 1; ++n)
        out.add_term(Monomial::power(x, Exponent(-n - 1)), alg.mode(u, v, n));
    out.set_tag(x, SupportTag{false, true});
    return out;
}

namespace {

std::optional<long> max_mode_of(const ModeTable& t, const Vec& u, const Vec& v) {
    std::optional<long> m;
    for (const auto& [i, ci] : u.entries())
        for (const auto& [j, cj] : v.entries()) {
            const ModeLine* l = t.line(i, j);
            if (!l) throw MissingTableEntry("no modes for pair in sample");
            if (auto mm = l->max_nonzero())
                if (!m || *mm > *m) m = *mm;
        }
    return m;
}

std::string describe_inputs(const Space& v_space, const Space& w_space, const Vec& u,
                            const Vec& v, const Vec& w) {
    return "u=" + v_space.describe(u) + ", v=" + v_space.describe(v) +
           ", w=" + w_space.describe(w);
}

} // namespace

// Shared coefficientwise Jacobi engine. act_W(v, w, n) applies the n-th mode
// of v (an algebra vector) to w; act_V is the algebra product used in the
// iterate. Monomials (p, q, r) run over the window in (x0, x1, x2) with the
// homogeneous target weight restricted to the materialized range.
CheckReport jacobi_coefficient_check(
    const Space& v_space, const Space& w_space, const ModeTable& act_V, const ModeTable& act_W,
    const Vec& u, const Vec& v, const Vec& w, const Window& window, const std::string& name,
    bool parallel) {
    CheckReport rep;

    auto wt_u = v_space.weight_of(u);
    auto wt_v = v_space.weight_of(v);
    auto wt_w = w_space.weight_of(w);
    if (!wt_u || !wt_v || !wt_w) {
        rep.error(name, "sample vectors must be homogeneous and nonzero");
        return rep;
    }
    Rational total = wt_u->re() + wt_v->re() + wt_w->re();
    Rational wt_max = max_weight_re(w_space);

    auto [p_lo, p_hi] = window.int_range("x0");
    auto [q_lo, q_hi] = window.int_range("x1");
    auto [r_lo, r_hi] = window.int_range("x2");

    auto act_w = [&](const Vec& a, const Vec& b, long n) {
        Vec out;
        for (const auto& [i, ci] : a.entries())
            for (const auto& [j, cj] : b.entries()) out += act_W.mode(i, j, n).scaled(ci * cj);
        return out;
    };
    auto act_v = [&](const Vec& a, const Vec& b, long n) {
        Vec out;
        for (const auto& [i, ci] : a.entries())
            for (const auto& [j, cj] : b.entries()) out += act_V.mode(i, j, n).scaled(ci * cj);
        return out;
    };

    std::optional<long> vw_max = max_mode_of(act_W, v, w);
    std::optional<long> uw_max = max_mode_of(act_W, u, w);
    std::optional<long> uv_max = max_mode_of(act_V, u, v);

    struct Target {
        long p, q, r;
    };
    std::vector<Target> targets;
    for (long p = p_lo; p <= p_hi; ++p)
        for (long q = q_lo; q <= q_hi; ++q)
            for (long r = r_lo; r <= r_hi; ++r) {
                Rational target_wt = total - p - q - r - 3;
                if (cmp(target_wt, wt_max) > 0) continue; // outside materialization
                targets.push_back({p, q, r});
            }

    std::vector<std::string> errors(targets.size());
    std::vector<std::optional<Witness>> bad(targets.size());

#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long ti = 0; ti < static_cast<long>(targets.size()); ++ti) {
        const auto [p, q, r] = targets[ti];
        const long n = -p - 1;
        try {
            Vec lhs;
            // product term
            if (vw_max) {
                Scalar binom(1);
                for (long m = 0; m <= *vw_max + r + 1; ++m) {
                    if (m > 0) {
                        binom *= Scalar(n - (m - 1));
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = act_w(v, w, m - r - 1);
                    if (inner.is_zero()) continue;
                    Vec term = act_w(u, inner, n - m - q - 1);
                    if (m % 2 == 1) term = -term;
                    lhs += term.scaled(binom);
                }
            }
            // reversed product term
            if (uw_max) {
                Scalar binom(1);
                for (long m = 0; m <= *uw_max + q + 1; ++m) {
                    if (m > 0) {
                        binom *= Scalar(n - (m - 1));
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = act_w(u, w, m - q - 1);
                    if (inner.is_zero()) continue;
                    Vec term = act_w(v, inner, n - m - r - 1);
                    if ((n + m) % 2 == 0) term = -term; // -(-1)^n (-1)^m
                    lhs += term.scaled(binom);
                }
            }
            // iterate term
            Vec rhs;
            if (uv_max) {
                Scalar binom(1);
                for (long m = 0; m <= *uv_max + p + 1; ++m) {
                    if (m > 0) {
                        binom *= Scalar(q + m); // C(q+m, m) = C(q+m-1, m-1) (q+m)/m
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = act_v(u, v, m - p - 1);
                    if (inner.is_zero()) continue;
                    Vec term = act_w(inner, w, -q - m - r - 2);
                    if (m % 2 == 1) term = -term;
                    rhs += term.scaled(binom);
                }
            }
            if (lhs != rhs)
                bad[ti] = Witness{describe_inputs(v_space, w_space, u, v, w),
                                  "x0^" + std::to_string(p) + " x1^" + std::to_string(q) +
                                      " x2^" + std::to_string(r),
                                  w_space.describe(lhs), w_space.describe(rhs)};
        } catch (const Error& e) {
            errors[ti] = e.what();
        }
    }

    std::size_t compared = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (bad[i]) {
            rep.fail(name, *bad[i]);
            return rep;
        }
        if (!errors[i].empty()) {
            rep.error(name, errors[i] + " (window too small for sample)");
            return rep;
        }
        ++compared;
    }
    rep.pass(name, std::to_string(compared) + " monomials compared");
    return rep;
}

CheckReport check_jacobi_triple(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                const Vec& w, const Window& window) {
    return jacobi_coefficient_check(alg.space(), alg.space(), alg.table(), alg.table(), u, v, w,
                                    window, "algebra.jacobi", true);
}

namespace {

// Apply Y(u, x)* termwise to a series with vector coefficients.
VecSeries vertex_on_series(const VertexAlgebra& alg, const ModeTable& act, const Vec& u,
                           const VecSeries& s, const Var& x, const Window& w) {
    VecSeries out;
    auto [lo, hi] = w.int_range(x);
    for (const auto& [mono, vec] : s.terms()) {
        for (long n = -hi - 1; n <= -lo - 1; ++n) {
            Vec img;
            for (const auto& [i, ci] : u.entries())
                for (const auto& [j, cj] : vec.entries()) img += act.mode(i, j, n).scaled(ci * cj);
            if (img.is_zero()) continue;
            out.add_term(mono.shifted(x, Exponent(-n - 1)), img);
        }
    }
    return out;
}

} // namespace

CheckReport check_jacobi_triple_series(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                       const Vec& w, const Window& window) {
    CheckReport rep;
    const std::string name = "algebra.jacobi_series";
    try {
        long N = 0;
        for (const auto& [var, r] : window.bounds())
            N = std::max({N, std::abs(floor_to_long(r.lo)), std::abs(floor_to_long(r.hi))});

        std::optional<long> vw_max = max_mode_of(alg.table(), v, w);
        std::optional<long> uw_max = max_mode_of(alg.table(), u, w);
        std::optional<long> uv_max = max_mode_of(alg.table(), u, v);
        long M1 = (vw_max ? *vw_max : 0) + N + 1;
        long M2 = (uw_max ? *uw_max : 0) + N + 1;
        long M3 = (uv_max ? *uv_max : 0) + N + 1;

        Vec zero;
        VecSeries wconst;
        wconst.add_term(Monomial::unit(), w);

        // product: delta((x1-x2)/x0) Y(u,x1) Y(v,x2) w
        Window wp1;
        wp1.set("x2", Rational(-(N + M1)), Rational(N + M1));
        VecSeries p1 = vertex_on_series(alg, alg.table(), v, wconst, "x2", wp1);
        Window wp1b = wp1;
        wp1b.set("x1", Rational(-(2 * N + 1 + M1)), Rational(2 * N + 1 + M1));
        p1 = vertex_on_series(alg, alg.table(), u, p1, "x1", wp1b);
        Window wd1;
        wd1.set("x0", window.range("x0")->lo, window.range("x0")->hi);
        wd1.set("x1", Rational(-(N + M1 + 1)), Rational(N + M1 + 1));
        wd1.set("x2", Rational(0), Rational(M1));
        VecSeries t1 = multiply_clipped(delta3_core("x0", "x1", "x2", true, false, wd1), p1, window);

        // reversed: delta((x2-x1)/-x0) Y(v,x2) Y(u,x1) w
        Window wp2;
        wp2.set("x1", Rational(-(N + M2)), Rational(N + M2));
        VecSeries p2 = vertex_on_series(alg, alg.table(), u, wconst, "x1", wp2);
        Window wp2b = wp2;
        wp2b.set("x2", Rational(-(2 * N + 1 + M2)), Rational(2 * N + 1 + M2));
        p2 = vertex_on_series(alg, alg.table(), v, p2, "x2", wp2b);
        Window wd2;
        wd2.set("x0", window.range("x0")->lo, window.range("x0")->hi);
        wd2.set("x2", Rational(-(N + M2 + 1)), Rational(N + M2 + 1));
        wd2.set("x1", Rational(0), Rational(M2));
        VecSeries t2 = multiply_clipped(delta3_core("x0", "x2", "x1", true, true, wd2), p2, window);

        // iterate: delta((x1-x0)/x2) Y(Y(u,x0)v, x2) w
        Window wq;
        wq.set("x0", Rational(-(N + M3 + 1)), Rational(N + M3 + 1));
        VecSeries q = vertex_op(alg, u, v, "x0", wq);
        VecSeries r;
        Window wr;
        wr.set("x2", Rational(-(2 * N + M3 + 2)), Rational(2 * N + M3 + 2));
        for (const auto& [mono, vec] : q.terms()) {
            auto [lo2, hi2] = wr.int_range("x2");
            for (long d = -hi2 - 1; d <= -lo2 - 1; ++d) {
                Vec img;
                for (const auto& [i, ci] : vec.entries())
                    for (const auto& [j, cj] : w.entries())
                        img += alg.table().mode(i, j, d).scaled(ci * cj);
                if (!img.is_zero()) r.add_term(mono.shifted("x2", Exponent(-d - 1)), img);
            }
        }
        Window wd3;
        wd3.set("x2", Rational(-(N + M3 + 1)), Rational(N + M3 + 1));
        wd3.set("x1", window.range("x1")->lo, window.range("x1")->hi);
        wd3.set("x0", Rational(0), Rational(M3));
        VecSeries t3 = multiply_clipped(delta3_core("x2", "x1", "x0", true, false, wd3), r, window);

        VecSeries lhs = t1 - t2;
        if (auto m = VecSeries::first_difference(lhs, t3)) {
            rep.fail(name, Witness{describe_inputs(alg.space(), alg.space(), u, v, w), m->str(),
                                   alg.space().describe(lhs.coeff(*m)),
                                   alg.space().describe(t3.coeff(*m))});
        } else {
            rep.pass(name, std::to_string(t3.size()) + " nonzero coefficients matched");
        }
    } catch (const Error& e) {
        rep.error(name, e.what());
    }
    return rep;
}

namespace {

void check_vacuum_property(const VertexAlgebra& alg, CheckReport& rep) {
    const Vec& vac = alg.vacuum();
    std::size_t compared = 0;
    for (int i = 0; i < alg.space().dim(); ++i) {
        // gather all modes stored on the vacuum lines
        std::set<long> ns{-1};
        for (const auto& [iv, c] : vac.entries())
            if (const ModeLine* l = alg.table().line(iv, i))
                for (const auto& [n, val] : l->modes) ns.insert(n);
        for (long n : ns) {
            Vec got = alg.mode(vac, Vec::basis(i), n);
            Vec want = n == -1 ? Vec::basis(i) : Vec();
            ++compared;
            if (got != want) {
                rep.fail("algebra.vacuum",
                         Witness{"v=" + alg.space().at(i).name, "mode " + std::to_string(n),
                                 alg.space().describe(got), alg.space().describe(want)});
                return;
            }
        }
    }
    rep.pass("algebra.vacuum", std::to_string(compared) + " modes compared");
}

void check_creation_property(const VertexAlgebra& alg, CheckReport& rep) {
    const Vec& vac = alg.vacuum();
    std::size_t compared = 0;
    for (int i = 0; i < alg.space().dim(); ++i) {
        std::set<long> ns{-1, 0, 1};
        for (const auto& [iv, c] : vac.entries())
            if (const ModeLine* l = alg.table().line(i, iv))
                for (const auto& [n, val] : l->modes) ns.insert(n);
        for (long n : ns) {
            Vec got = alg.mode(Vec::basis(i), vac, n);
            ++compared;
            if (n >= 0 && !got.is_zero()) {
                rep.fail("algebra.creation",
                         Witness{"v=" + alg.space().at(i).name, "mode " + std::to_string(n),
                                 alg.space().describe(got), "0"});
                return;
            }
            if (n == -1 && got != Vec::basis(i)) {
                rep.fail("algebra.creation",
                         Witness{"v=" + alg.space().at(i).name, "mode -1",
                                 alg.space().describe(got), alg.space().at(i).name});
                return;
            }
        }
    }
    rep.pass("algebra.creation", std::to_string(compared) + " modes compared");
}

void check_l0_grading(const VertexAlgebra& alg, CheckReport& rep) {
    for (int i = 0; i < alg.space().dim(); ++i) {
        const BasisVector& b = alg.space().at(i);
        if (!b.weight.is_integer()) {
            rep.fail("algebra.z_grading", Witness{b.name, "", b.weight.str(), "an integer"});
            return;
        }
        Vec got;
        try {
            got = alg.apply_L(0, Vec::basis(i));
        } catch (const MissingTableEntry&) {
            continue;
        }
        if (got != Vec::basis(i).scaled(b.weight.as_scalar())) {
            rep.fail("algebra.L0_grading",
                     Witness{b.name, "", alg.space().describe(got),
                             b.weight.str() + "*" + b.name});
            return;
        }
    }
    rep.pass("algebra.L0_grading");
    rep.pass("algebra.z_grading");
}

} // namespace

void check_mode_l_minus1_derivative(const VertexAlgebra& alg, const ModeTable& act,
                                    const Space& w_space, const std::string& name,
                                    CheckReport& rep) {
    std::size_t compared = 0, skipped = 0;
    for (const auto& [pair, line] : act.lines()) {
        auto [vi, wi] = pair;
        if (line.modes.empty() && line.known_below == LONG_MIN) continue;
        long lo = line.modes.empty() ? 0 : line.modes.begin()->first;
        long hi = line.modes.empty() ? 0 : line.modes.rbegin()->first;
        for (long n = lo; n <= hi + 1; ++n) {
            try {
                Vec lv = alg.apply_L(-1, Vec::basis(vi));
                Vec lhs;
                for (const auto& [k, c] : lv.entries())
                    lhs += act.mode(k, wi, n).scaled(c);
                Vec rhs = n == 0 ? Vec() : act.mode(vi, wi, n - 1).scaled(Scalar(-n));
                ++compared;
                if (lhs != rhs) {
                    rep.fail(name, Witness{"v=" + alg.space().at(vi).name +
                                               ", w=" + w_space.at(wi).name,
                                           "mode " + std::to_string(n), w_space.describe(lhs),
                                           w_space.describe(rhs)});
                    return;
                }
            } catch (const MissingTableEntry&) {
                ++skipped;
            }
        }
    }
    rep.pass(name, std::to_string(compared) + " modes compared, " + std::to_string(skipped) +
                       " outside window");
}

// The three sl(2) mode-commutator identities for an action of V on w_space.
// applyL must give the operators on the target space; applyLV those on V.
void check_sl2_commutators(const VertexAlgebra& alg, const ModeTable& act, const Space& w_space,
                           const std::function<Vec(int, const Vec&)>& applyLW,
                           const std::string& prefix, CheckReport& rep) {
    for (int j : {-1, 0, 1}) {
        std::size_t compared = 0, skipped = 0;
        std::string name = prefix + ".commutator.L" + (j < 0 ? "m1" : std::to_string(j));
        for (const auto& [pair, line] : act.lines()) {
            auto [vi, wi] = pair;
            if (line.modes.empty()) continue;
            long lo = line.modes.begin()->first;
            long hi = line.modes.rbegin()->first;
            for (long n = lo - 1; n <= hi; ++n) {
                try {
                    Vec w = Vec::basis(wi);
                    Vec vnw;
                    if (act.knows(vi, wi, n)) vnw = act.mode(vi, wi, n);
                    else { ++skipped; continue; }
                    Vec lhs = applyLW(j, vnw);
                    Vec wj = applyLW(j, w);
                    for (const auto& [k, c] : wj.entries())
                        lhs -= act.mode(vi, k, n).scaled(c);

                    Vec rhs;
                    for (int kk = 0; kk <= j + 1; ++kk) {
                        // C(j+1, kk) x^kk Y(L(j-kk)v, x): mode shift n+kk
                        Vec lv = alg.apply_L(j - kk, Vec::basis(vi));
                        Vec term;
                        for (const auto& [m, c] : lv.entries())
                            term += act.mode(m, wi, n + kk).scaled(c);
                        rhs += term.scaled(binomial(static_cast<long>(j) + 1, kk));
                    }
                    ++compared;
                    if (lhs != rhs) {
                        rep.fail(name,
                                 Witness{"v=" + alg.space().at(vi).name + ", w=" +
                                             w_space.at(wi).name,
                                         "mode " + std::to_string(n), w_space.describe(lhs),
                                         w_space.describe(rhs)});
                        return;
                    }
                } catch (const MissingTableEntry&) {
                    ++skipped;
                }
            }
        }
        rep.pass(name, std::to_string(compared) + " modes compared, " + std::to_string(skipped) +
                           " outside window");
    }
}

// [L_0, L_-1] = L_-1, [L_0, L_1] = -L_1, [L_-1, L_1] = -2 L_0 on the basis.
void check_sl2_brackets(const Space& space, const std::function<Vec(int, const Vec&)>& applyL,
                        const std::string& prefix, CheckReport& rep) {
    struct Case {
        int a, b;
        int target; // coefficient on L(target)
        Scalar coef;
    };
    const Case cases[] = {{0, -1, -1, Scalar(1)}, {0, 1, 1, Scalar(-1)}, {-1, 1, 0, Scalar(-2)}};
    for (const auto& cs : cases) {
        std::size_t compared = 0, skipped = 0;
        std::string name = prefix + ".bracket.[L" + (cs.a < 0 ? "m1" : std::to_string(cs.a)) +
                           ",L" + (cs.b < 0 ? "m1" : std::to_string(cs.b)) + "]";
        for (int i = 0; i < space.dim(); ++i) {
            try {
                Vec e = Vec::basis(i);
                Vec lhs = applyL(cs.a, applyL(cs.b, e)) - applyL(cs.b, applyL(cs.a, e));
                Vec rhs = applyL(cs.target, e).scaled(cs.coef);
                ++compared;
                if (lhs != rhs) {
                    rep.fail(name, Witness{space.at(i).name, "", space.describe(lhs),
                                           space.describe(rhs)});
                    return;
                }
            } catch (const MissingTableEntry&) {
                ++skipped;
            }
        }
        rep.pass(name, std::to_string(compared) + " basis vectors compared, " +
                           std::to_string(skipped) + " outside window");
    }
}

// Virasoro relations with central charge on any space with L(n) given.
void check_virasoro(const Space& space, const std::function<Vec(long, const Vec&)>& applyLn,
                    const Scalar& c, long mode_range, const std::string& prefix,
                    CheckReport& rep) {
    std::size_t compared = 0, skipped = 0;
    std::string name = prefix + ".virasoro";
    for (long m = -mode_range; m <= mode_range; ++m)
        for (long n = m; n <= mode_range; ++n)
            for (int i = 0; i < space.dim(); ++i) {
                try {
                    Vec e = Vec::basis(i);
                    Vec lhs = applyLn(m, applyLn(n, e)) - applyLn(n, applyLn(m, e));
                    Vec rhs = applyLn(m + n, e).scaled(Scalar(m - n));
                    if (m + n == 0) {
                        Scalar central = Scalar(Rational(m * m * m - m, 12)) * c;
                        rhs += e.scaled(central);
                    }
                    ++compared;
                    if (lhs != rhs) {
                        rep.fail(name, Witness{space.at(i).name,
                                               "[L(" + std::to_string(m) + "),L(" +
                                                   std::to_string(n) + ")]",
                                               space.describe(lhs), space.describe(rhs)});
                        return;
                    }
                } catch (const MissingTableEntry&) {
                    ++skipped;
                }
            }
    rep.pass(name, std::to_string(compared) + " relations compared, " + std::to_string(skipped) +
                       " outside window");
}

std::vector<std::array<int, 3>> sample_triples(const Space& sp, const SampleSpec& spec) {
    std::vector<std::array<int, 3>> out;
    for (int a = 0; a < sp.dim(); ++a)
        for (int b = 0; b < sp.dim(); ++b)
            for (int c = 0; c < sp.dim(); ++c) {
                Rational t = abs(sp.at(a).weight.re()) + abs(sp.at(b).weight.re()) +
                             abs(sp.at(c).weight.re());
                if (cmp(t, spec.max_total_wt) > 0) continue;
                out.push_back({a, b, c});
                if (out.size() >= spec.max_triples) return out;
            }
    return out;
}

CheckReport check_axioms(const VertexAlgebra& alg, const Window& window,
                         const SampleSpec& sample) {
    CheckReport rep;

    check_vacuum_property(alg, rep);
    check_creation_property(alg, rep);
    check_l0_grading(alg, rep);
    check_mode_l_minus1_derivative(alg, alg.table(), alg.space(), "algebra.L-1_derivative", rep);

    auto applyL = [&](int j, const Vec& v) { return alg.apply_L(j, v); };
    check_sl2_brackets(alg.space(), applyL, "algebra", rep);
    check_sl2_commutators(alg, alg.table(), alg.space(), applyL, "algebra", rep);

    if (alg.is_conformal()) {
        long range = 3;
        for (const auto& [v, r] : window.bounds())
            range = std::max(range, floor_to_long(r.hi));
        check_virasoro(alg.space(),
                       [&](long n, const Vec& v) { return alg.apply_Ln(n, v); },
                       alg.conformal().central_charge, std::min(range, 4L), "algebra", rep);
        // omega placement
        const Vec& om = alg.conformal().omega;
        auto wt = alg.space().weight_of(om);
        if (om.is_zero() || (wt && *wt == Exponent(2)))
            rep.pass("algebra.omega_weight");
        else
            rep.fail("algebra.omega_weight",
                     Witness{"omega", "", wt ? wt->str() : "mixed", "2"});
    }

    // Jacobi over sampled triples
    auto triples = sample_triples(alg.space(), sample);
    std::size_t monomials = 0;
    for (const auto& [a, b, c] : triples) {
        CheckReport one = check_jacobi_triple(alg, Vec::basis(a), Vec::basis(b), Vec::basis(c),
                                              window);
        if (!one.all_pass()) {
            rep.merge(one);
            return rep;
        }
        for (const auto& cr : one.checks())
            if (cr.status == Status::pass && !cr.detail.empty())
                monomials += std::strtoull(cr.detail.c_str(), nullptr, 10);
    }
    rep.pass("algebra.jacobi", std::to_string(triples.size()) + " triples, " +
                                   std::to_string(monomials) + " monomials compared");
    return rep;
}

CheckReport check_strong_grading(const VertexAlgebra& alg) {
    CheckReport rep;
    const Space& sp = alg.space();

    CheckReport space_rep = check_space_consistency(sp);
    rep.merge(space_rep);

    // vacuum in degree 0, weight 0
    bool vac_ok = true;
    for (const auto& [i, c] : alg.vacuum().entries()) {
        const BasisVector& b = sp.at(i);
        if (b.degree != group_zero(sp.group_rank()) || !b.weight.is_zero()) vac_ok = false;
    }
    if (vac_ok) rep.pass("strong_grading.vacuum_cell");
    else
        rep.fail("strong_grading.vacuum_cell",
                 Witness{"vacuum", "", sp.describe(alg.vacuum()), "degree 0, weight 0"});

    // modes add degrees
    std::size_t checked = 0;
    for (const auto& [pair, line] : alg.table().lines()) {
        auto [ui, vi] = pair;
        GroupElement want = group_add(sp.at(ui).degree, sp.at(vi).degree);
        for (const auto& [n, val] : line.modes) {
            for (const auto& [k, c] : val.entries()) {
                ++checked;
                if (sp.at(k).degree != want) {
                    rep.fail("strong_grading.mode_degree",
                             Witness{sp.at(ui).name + "_" + std::to_string(n) + " " +
                                         sp.at(vi).name,
                                     "", group_str(sp.at(k).degree), group_str(want)});
                    return rep;
                }
            }
        }
    }
    rep.pass("strong_grading.mode_degree", std::to_string(checked) + " entries");

    // L(j) preserve degree
    bool lok = true;
    for (int j : {-1, 0, 1}) {
        for (int i = 0; i < sp.dim() && lok; ++i) {
            Vec img;
            try {
                img = alg.apply_L(j, Vec::basis(i));
            } catch (const MissingTableEntry&) {
                continue;
            }
            for (const auto& [k, c] : img.entries())
                if (sp.at(k).degree != sp.at(i).degree) {
                    rep.fail("strong_grading.L_degree",
                             Witness{"L(" + std::to_string(j) + ") " + sp.at(i).name, "",
                                     group_str(sp.at(k).degree), group_str(sp.at(i).degree)});
                    lok = false;
                    break;
                }
        }
    }
    if (lok) rep.pass("strong_grading.L_degree");

    if (alg.is_conformal()) {
        bool ok = true;
        for (const auto& [i, c] : alg.conformal().omega.entries()) {
            const BasisVector& b = sp.at(i);
            if (b.degree != group_zero(sp.group_rank()) || b.weight != Exponent(2)) ok = false;
        }
        if (ok) rep.pass("strong_grading.omega_cell");
        else
            rep.fail("strong_grading.omega_cell",
                     Witness{"omega", "", sp.describe(alg.conformal().omega),
                             "degree 0, weight 2"});
    }
    return rep;
}

CheckReport weight_shift_check(const VertexAlgebra& alg, const Window& window) {
    CheckReport rep;
    const Space& sp = alg.space();
    std::size_t checked = 0;
    for (const auto& [pair, line] : alg.table().lines()) {
        auto [ui, vi] = pair;
        Exponent base = sp.at(ui).weight + sp.at(vi).weight;
        for (const auto& [n, val] : line.modes) {
            Exponent want = base - Exponent(n) - Exponent(1);
            for (const auto& [k, c] : val.entries()) {
                ++checked;
                if (sp.at(k).weight != want) {
                    rep.fail("algebra.weight_shift",
                             Witness{sp.at(ui).name + "_" + std::to_string(n) + " " +
                                         sp.at(vi).name,
                                     "", sp.at(k).weight.str(), want.str()});
                    return rep;
                }
            }
        }
    }
    rep.pass("algebra.weight_shift", std::to_string(checked) + " table entries");

    std::size_t lchecked = 0;
    for (int j : {-1, 0, 1})
        for (int i = 0; i < sp.dim(); ++i) {
            Vec img;
            try {
                img = alg.apply_L(j, Vec::basis(i));
            } catch (const MissingTableEntry&) {
                continue;
            }
            Exponent want = sp.at(i).weight - Exponent(j);
            for (const auto& [k, c] : img.entries()) {
                ++lchecked;
                if (sp.at(k).weight != want) {
                    rep.fail("algebra.L_weight_shift",
                             Witness{"L(" + std::to_string(j) + ") " + sp.at(i).name, "",
                                     sp.at(k).weight.str(), want.str()});
                    return rep;
                }
            }
        }
    rep.pass("algebra.L_weight_shift", std::to_string(lchecked) + " images");
    return rep;
}

CheckReport check_commutator_formula(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                     const Vec& w, long p, long q) {
    CheckReport rep;
    const std::string name = "algebra.commutator_formula";
    try {
        Vec lhs = alg.mode(u, alg.mode(v, w, q), p) - alg.mode(v, alg.mode(u, w, p), q);
        Vec rhs;
        std::optional<long> uv_max = max_mode_of(alg.table(), u, v);
        if (uv_max) {
            Scalar binom(1);
            for (long m = 0; m <= *uv_max; ++m) {
                if (m > 0) {
                    binom *= Scalar(p - (m - 1));
                    binom /= Scalar(m);
                }
                if (binom.is_zero()) break;
                Vec inner = alg.mode(u, v, m);
                if (inner.is_zero()) continue;
                rhs += alg.mode(inner, w, p + q - m).scaled(binom);
            }
        }
        if (lhs != rhs) {
            rep.fail(name, Witness{describe_inputs(alg.space(), alg.space(), u, v, w),
                                   "modes p=" + std::to_string(p) + ", q=" + std::to_string(q),
                                   alg.space().describe(lhs), alg.space().describe(rhs)});
            return rep;
        }
        rep.pass(name);
    } catch (const Error& e) {
        rep.error(name, e.what());
    }
    return rep;
}

std::vector<int> verify_l1_nilpotent(const VertexAlgebra& alg) {
    std::vector<int> orders(alg.space().dim(), 0);
    for (int i = 0; i < alg.space().dim(); ++i) {
        Vec v = Vec::basis(i);
        int m = 0;
        const int cap = alg.space().dim() + 2;
        while (!v.is_zero()) {
            if (m > cap)
                throw NotLocallyNilpotent("L(1)^m " + alg.space().at(i).name +
                                          " does not vanish within the window");
            try {
                v = alg.apply_L(1, v);
            } catch (const MissingTableEntry&) {
                throw NotLocallyNilpotent("L(1)^m " + alg.space().at(i).name +
                                          " escaped the materialized window without vanishing");
            }
            ++m;
        }
        orders[i] = m;
    }
    return orders;
}

} // namespace va
