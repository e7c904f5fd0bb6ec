#include "va/modules.hpp"

#include <algorithm>
#include <sstream>

namespace va {

Vec Module::act(const Vec& v, const Vec& w, long n) const {
    Vec out;
    for (const auto& [i, ci] : v.entries())
        for (const auto& [j, cj] : w.entries()) out += action_.mode(i, j, n).scaled(ci * cj);
    return out;
}

Vec Module::apply_L(int j, const Vec& w) const {
    if (sl2_) return sl2_->L(j).apply(w);
    if (conformal_action_) return act(algebra().conformal().omega, w, j + 1);
    throw Error("module has neither sl(2) operators nor a conformal action");
}

Vec Module::apply_Ln(long n, const Vec& w) const {
    return act(algebra().conformal().omega, w, n + 1);
}

Module self_module(std::shared_ptr<const VertexAlgebra> alg) {
    Module m(alg, alg->space());
    m.action() = alg->table();
    if (alg->is_conformal()) m.set_conformal_action();
    else m.set_sl2(alg->sl2_raw());
    m.name = alg->name.empty() ? "self" : alg->name + ".self";
    return m;
}

VecSeries module_action(const Module& mod, const Vec& v, const Vec& w, const Var& x,
                        const Window& window) {
    VecSeries out;
    auto [lo, hi] = window.int_range(x);
    for (long n = -hi - 1; n <= -lo - 1; ++n)
        out.add_term(Monomial::power(x, Exponent(-n - 1)), mod.act(v, w, n));
    out.set_tag(x, SupportTag{false, true});
    return out;
}

CheckReport check_module_jacobi_triple(const Module& mod, const Vec& u, const Vec& v,
                                       const Vec& w, const Window& window) {
    return jacobi_coefficient_check(mod.algebra().space(), mod.space(), mod.algebra().table(),
                                    mod.action(), u, v, w, window, "module.jacobi", true);
}

namespace {

void check_module_vacuum(const Module& mod, CheckReport& rep) {
    const Vec& vac = mod.algebra().vacuum();
    std::size_t compared = 0;
    for (int i = 0; i < mod.space().dim(); ++i) {
        std::set<long> ns{-1};
        for (const auto& [iv, c] : vac.entries())
            if (const ModeLine* l = mod.action().line(iv, i))
                for (const auto& [n, val] : l->modes) ns.insert(n);
        for (long n : ns) {
            Vec got;
            try {
                got = mod.act(vac, Vec::basis(i), n);
            } catch (const MissingTableEntry&) {
                continue;
            }
            Vec want = n == -1 ? Vec::basis(i) : Vec();
            ++compared;
            if (got != want) {
                rep.fail("module.vacuum",
                         Witness{"w=" + mod.space().at(i).name, "mode " + std::to_string(n),
                                 mod.space().describe(got), mod.space().describe(want)});
                return;
            }
        }
    }
    rep.pass("module.vacuum", std::to_string(compared) + " modes compared");
}

std::vector<std::array<int, 3>> sample_module_triples(const Space& vsp, const Space& wsp,
                                                      const SampleSpec& spec) {
    std::vector<std::array<int, 3>> out;
    for (int a = 0; a < vsp.dim(); ++a)
        for (int b = 0; b < vsp.dim(); ++b)
            for (int c = 0; c < wsp.dim(); ++c) {
                Rational t = abs(vsp.at(a).weight.re()) + abs(vsp.at(b).weight.re()) +
                             abs(wsp.at(c).weight.re());
                if (cmp(t, spec.max_total_wt) > 0) continue;
                out.push_back({a, b, c});
                if (out.size() >= spec.max_triples) return out;
            }
    return out;
}

int nilpotency_height(const Module& mod, int id) {
    const Exponent& wt = mod.space().at(id).weight;
    Vec x = Vec::basis(id);
    int h = -1;
    const int cap = mod.space().dim() + 1;
    while (!x.is_zero()) {
        x = mod.apply_L(0, x) - x.scaled(wt.as_scalar());
        ++h;
        if (h > cap) return -1; // not nilpotent
    }
    return h;
}

} // namespace

CheckReport check_ordinary_weights(const Module& mod) {
    CheckReport rep;
    for (int i = 0; i < mod.space().dim(); ++i) {
        const BasisVector& b = mod.space().at(i);
        Vec got;
        try {
            got = mod.apply_L(0, Vec::basis(i));
        } catch (const MissingTableEntry&) {
            continue;
        }
        if (got != Vec::basis(i).scaled(b.weight.as_scalar())) {
            rep.fail("module.L0_eigenvalues",
                     Witness{b.name, "", mod.space().describe(got),
                             b.weight.str() + "*" + b.name});
            return rep;
        }
    }
    rep.pass("module.L0_eigenvalues");
    return rep;
}

CheckReport check_generalized_weights(const Module& mod) {
    CheckReport rep;
    for (int i = 0; i < mod.space().dim(); ++i) {
        const BasisVector& b = mod.space().at(i);
        int h;
        try {
            h = nilpotency_height(mod, i);
        } catch (const MissingTableEntry&) {
            continue;
        }
        if (h < 0) {
            rep.fail("module.L0_nilpotence",
                     Witness{b.name, "", "(L(0)-wt) not nilpotent on " + b.name, ""});
            return rep;
        }
        if (h != b.jordan_index) {
            rep.fail("module.jordan_heights",
                     Witness{b.name, "", "height " + std::to_string(h),
                             "declared " + std::to_string(b.jordan_index)});
            return rep;
        }
    }
    rep.pass("module.L0_nilpotence");
    rep.pass("module.jordan_heights");
    return rep;
}

CheckReport check_module_axioms(const Module& mod, const Window& window,
                                const SampleSpec& sample) {
    CheckReport rep;
    const VertexAlgebra& alg = mod.algebra();

    check_module_vacuum(mod, rep);
    check_mode_l_minus1_derivative(alg, mod.action(), mod.space(), "module.L-1_derivative", rep);

    auto applyLW = [&](int j, const Vec& w) { return mod.apply_L(j, w); };
    check_sl2_brackets(mod.space(), applyLW, "module", rep);
    check_sl2_commutators(alg, mod.action(), mod.space(), applyLW, "module", rep);

    if (mod.conformal_action()) {
        long range = 3;
        for (const auto& [v, r] : window.bounds()) range = std::max(range, floor_to_long(r.hi));
        check_virasoro(mod.space(),
                       [&](long n, const Vec& w) { return mod.apply_Ln(n, w); },
                       alg.conformal().central_charge, std::min(range, 4L), "module", rep);
    }

    if (mod.space().flags().generalized) rep.merge(check_generalized_weights(mod));
    else rep.merge(check_ordinary_weights(mod));

    auto triples = sample_module_triples(alg.space(), mod.space(), sample);
    std::size_t monomials = 0;
    for (const auto& [a, b, c] : triples) {
        CheckReport one = check_module_jacobi_triple(mod, Vec::basis(a), Vec::basis(b),
                                                     Vec::basis(c), window);
        if (!one.all_pass()) {
            rep.merge(one);
            return rep;
        }
        for (const auto& cr : one.checks())
            if (cr.status == Status::pass && !cr.detail.empty())
                monomials += std::strtoull(cr.detail.c_str(), nullptr, 10);
    }
    rep.pass("module.jacobi", std::to_string(triples.size()) + " triples, " +
                                  std::to_string(monomials) + " monomials compared");
    return rep;
}

CheckReport weight_formula_check(const Module& mod, const Window& window) {
    CheckReport rep;
    const Space& vsp = mod.algebra().space();
    const Space& wsp = mod.space();

    std::size_t checked = 0;
    for (const auto& [pair, line] : mod.action().lines()) {
        auto [vi, wi] = pair;
        Exponent base = vsp.at(vi).weight + wsp.at(wi).weight;
        for (const auto& [n, val] : line.modes) {
            Exponent want = base - Exponent(n) - Exponent(1);
            for (const auto& [k, c] : val.entries()) {
                ++checked;
                if (wsp.at(k).weight != want) {
                    rep.fail("module.weight_formula",
                             Witness{vsp.at(vi).name + "_" + std::to_string(n) + " " +
                                         wsp.at(wi).name,
                                     "", wsp.at(k).weight.str(), want.str()});
                    return rep;
                }
            }
        }
    }
    rep.pass("module.weight_formula", std::to_string(checked) + " table entries");

    std::size_t lchecked = 0;
    for (int j : {-1, 0, 1})
        for (int i = 0; i < wsp.dim(); ++i) {
            Vec img;
            try {
                img = mod.apply_L(j, Vec::basis(i));
            } catch (const MissingTableEntry&) {
                continue;
            }
            Exponent want = wsp.at(i).weight - Exponent(j);
            for (const auto& [k, c] : img.entries()) {
                ++lchecked;
                if (wsp.at(k).weight != want) {
                    rep.fail("module.L_weight_shift",
                             Witness{"L(" + std::to_string(j) + ") " + wsp.at(i).name, "",
                                     wsp.at(k).weight.str(), want.str()});
                    return rep;
                }
            }
        }
    rep.pass("module.L_weight_shift", std::to_string(lchecked) + " images");

    // [L(0), v_n] = (L(0)v)_n + (-n-1) v_n on the window
    std::size_t cchecked = 0, skipped = 0;
    for (const auto& [pair, line] : mod.action().lines()) {
        auto [vi, wi] = pair;
        if (line.modes.empty()) continue;
        long lo = line.modes.begin()->first;
        long hi = line.modes.rbegin()->first;
        for (long n = lo; n <= hi; ++n) {
            try {
                Vec vnw = mod.action().mode(vi, wi, n);
                Vec lhs = mod.apply_L(0, vnw) -
                          mod.act(Vec::basis(vi), mod.apply_L(0, Vec::basis(wi)), n);
                Vec l0v = mod.algebra().apply_L(0, Vec::basis(vi));
                Vec rhs = mod.act(l0v, Vec::basis(wi), n) + vnw.scaled(Scalar(-n - 1));
                ++cchecked;
                if (lhs != rhs) {
                    rep.fail("module.L0_mode_commutator",
                             Witness{vsp.at(vi).name + ", " + wsp.at(wi).name,
                                     "mode " + std::to_string(n), wsp.describe(lhs),
                                     wsp.describe(rhs)});
                    return rep;
                }
            } catch (const MissingTableEntry&) {
                ++skipped;
            }
        }
    }
    rep.pass("module.L0_mode_commutator", std::to_string(cchecked) + " modes compared, " +
                                              std::to_string(skipped) + " outside window");
    return rep;
}

CheckReport semisimple_part_check(const Module& mod, const Window& window) {
    CheckReport rep;
    const Space& wsp = mod.space();
    auto l0s = [&](const Vec& w) {
        Vec out;
        for (const auto& [i, c] : w.entries())
            out += Vec::basis(i).scaled(c * wsp.at(i).weight.as_scalar());
        return out;
    };

    std::size_t checked = 0, skipped = 0;
    for (const auto& [pair, line] : mod.action().lines()) {
        auto [vi, wi] = pair;
        for (const auto& [n, val] : line.modes) {
            try {
                Vec w = Vec::basis(wi);
                Vec lhs = l0s(val) - mod.act(Vec::basis(vi), l0s(w), n);
                Vec rhs = mod.apply_L(0, val) - mod.act(Vec::basis(vi), mod.apply_L(0, w), n);
                ++checked;
                if (lhs != rhs) {
                    rep.fail("module.semisimple_vs_L0_modes",
                             Witness{mod.algebra().space().at(vi).name + ", " + wsp.at(wi).name,
                                     "mode " + std::to_string(n), wsp.describe(lhs),
                                     wsp.describe(rhs)});
                    return rep;
                }
            } catch (const MissingTableEntry&) {
                ++skipped;
            }
        }
    }
    rep.pass("module.semisimple_vs_L0_modes", std::to_string(checked) + " modes compared, " +
                                                  std::to_string(skipped) + " outside window");

    std::size_t lchecked = 0;
    for (int j : {-1, 0, 1})
        for (int i = 0; i < wsp.dim(); ++i) {
            try {
                Vec w = Vec::basis(i);
                Vec lj = mod.apply_L(j, w);
                Vec lhs = l0s(lj) - mod.apply_L(j, l0s(w));
                Vec rhs = mod.apply_L(0, lj) - mod.apply_L(j, mod.apply_L(0, w));
                ++lchecked;
                if (lhs != rhs) {
                    rep.fail("module.semisimple_vs_L0_sl2",
                             Witness{"L(" + std::to_string(j) + "), " + wsp.at(i).name, "",
                                     wsp.describe(lhs), wsp.describe(rhs)});
                    return rep;
                }
            } catch (const MissingTableEntry&) {
            }
        }
    rep.pass("module.semisimple_vs_L0_sl2", std::to_string(lchecked) + " pairs compared");
    return rep;
}

// --- opposite vertex operators ---

namespace {

// Components of v by integral weight, with L(1)-power chains attached.
struct OppositePlan {
    struct Piece {
        long k;                 // weight of the homogeneous component
        std::vector<Vec> l1pow; // L(1)^m applied to it, up to the vanishing power
    };
    std::vector<Piece> pieces;
};

OppositePlan opposite_plan(const Module& mod, const Vec& v) {
    const Space& vsp = mod.algebra().space();
    std::map<long, Vec> by_wt;
    for (const auto& [i, c] : v.entries()) {
        const Exponent& w = vsp.at(i).weight;
        if (!w.is_integer())
            throw Error("opposite operator needs integral algebra weights, got " + w.str());
        by_wt[w.as_long()] += Vec::basis(i).scaled(c);
    }
    OppositePlan plan;
    const int cap = vsp.dim() + 2;
    for (auto& [k, comp] : by_wt) {
        OppositePlan::Piece piece;
        piece.k = k;
        Vec x = comp;
        int m = 0;
        while (!x.is_zero()) {
            if (m > cap)
                throw NotLocallyNilpotent("L(1) powers of " + vsp.describe(comp) +
                                          " do not vanish");
            piece.l1pow.push_back(x);
            try {
                x = mod.algebra().apply_L(1, x);
            } catch (const MissingTableEntry&) {
                throw NotLocallyNilpotent("L(1) powers of " + vsp.describe(comp) +
                                          " escaped the materialized window");
            }
            ++m;
        }
        plan.pieces.push_back(std::move(piece));
    }
    return plan;
}

} // namespace

Vec opposite_mode(const Module& mod, const Vec& v, const Vec& w, long n) {
    OppositePlan plan = opposite_plan(mod, v);
    Vec out;
    for (const auto& piece : plan.pieces) {
        Scalar sign = sign_pow(piece.k);
        Scalar mfact(1);
        for (std::size_t m = 0; m < piece.l1pow.size(); ++m) {
            if (m > 0) mfact /= Scalar(static_cast<long>(m));
            long mode = -n - static_cast<long>(m) - 2 + 2 * piece.k;
            out += mod.act(piece.l1pow[m], w, mode).scaled(sign * mfact);
        }
    }
    return out;
}

long opposite_min_mode(const Module& mod, const Vec& v, const Vec& w) {
    OppositePlan plan = opposite_plan(mod, v);
    std::optional<long> lo;
    for (const auto& piece : plan.pieces)
        for (std::size_t m = 0; m < piece.l1pow.size(); ++m) {
            std::optional<long> mm;
            for (const auto& [i, ci] : piece.l1pow[m].entries())
                for (const auto& [j, cj] : w.entries()) {
                    const ModeLine* l = mod.action().line(i, j);
                    if (!l) continue;
                    if (auto top = l->max_nonzero())
                        if (!mm || *top > *mm) mm = *top;
                }
            if (!mm) continue;
            // act mode -n-m-2+2k <= mm  =>  n >= 2k-2-m-mm
            long cand = 2 * piece.k - 2 - static_cast<long>(m) - *mm;
            if (!lo || cand < *lo) lo = cand;
        }
    return lo ? *lo : 0;
}

VecSeries opposite_op(const Module& mod, const Vec& v, const Vec& w, const Var& x,
                      const Window& window) {
    VecSeries out;
    auto [lo, hi] = window.int_range(x);
    for (long n = -hi - 1; n <= -lo - 1; ++n)
        out.add_term(Monomial::power(x, Exponent(-n - 1)), opposite_mode(mod, v, w, n));
    out.set_tag(x, SupportTag{true, false});
    return out;
}

namespace {

// Coefficientwise opposite Jacobi identity for one basis triple.
CheckReport opposite_jacobi_triple(const Module& mod, const Vec& u, const Vec& v, const Vec& w,
                                   const Window& window) {
    CheckReport rep;
    const std::string name = "module.opposite_jacobi";
    const Space& vsp = mod.algebra().space();
    const Space& wsp = mod.space();

    auto wt_u = vsp.weight_of(u);
    auto wt_v = vsp.weight_of(v);
    auto wt_w = wsp.weight_of(w);
    if (!wt_u || !wt_v || !wt_w) {
        rep.error(name, "sample vectors must be homogeneous and nonzero");
        return rep;
    }

    auto [p_lo, p_hi] = window.int_range("x0");
    auto [q_lo, q_hi] = window.int_range("x1");
    auto [r_lo, r_hi] = window.int_range("x2");

    long min_uw = opposite_min_mode(mod, u, w);
    long min_vw = opposite_min_mode(mod, v, w);
    std::optional<long> uv_max;
    {
        for (const auto& [i, ci] : u.entries())
            for (const auto& [j, cj] : v.entries()) {
                const ModeLine* l = mod.algebra().table().line(i, j);
                if (!l) continue;
                if (auto top = l->max_nonzero())
                    if (!uv_max || *top > *uv_max) uv_max = *top;
            }
    }

    Rational wt_max = max_weight_re(wsp);
    Rational total = -wt_u->re() - wt_v->re() + wt_w->re();

    struct Target {
        long p, q, r;
    };
    std::vector<Target> targets;
    for (long p = p_lo; p <= p_hi; ++p)
        for (long q = q_lo; q <= q_hi; ++q)
            for (long r = r_lo; r <= r_hi; ++r) {
                // wt(coefficient) = wt w - wt u - wt v - p - q - r - 1
                Rational tw = total - p - q - r - 1;
                if (cmp(tw, wt_max) > 0) continue;
                targets.push_back({p, q, r});
            }

    std::vector<std::string> errors(targets.size());
    std::vector<std::optional<Witness>> bad(targets.size());

#pragma omp parallel for schedule(dynamic, 8)
    for (long ti = 0; ti < static_cast<long>(targets.size()); ++ti) {
        const auto [p, q, r] = targets[ti];
        const long n = -p - 1;
        try {
            Vec lhs;
            {
                Scalar binom(1);
                for (long m = 0; m <= n - q - 1 - min_uw; ++m) {
                    if (m > 0) {
                        binom *= Scalar(n - (m - 1));
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = opposite_mode(mod, u, w, n - m - q - 1);
                    if (inner.is_zero()) continue;
                    Vec term = opposite_mode(mod, v, inner, m - r - 1);
                    if (m % 2 == 1) term = -term;
                    lhs += term.scaled(binom);
                }
            }
            {
                Scalar binom(1);
                for (long m = 0; m <= n - r - 1 - min_vw; ++m) {
                    if (m > 0) {
                        binom *= Scalar(n - (m - 1));
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = opposite_mode(mod, v, w, n - m - r - 1);
                    if (inner.is_zero()) continue;
                    Vec term = opposite_mode(mod, u, inner, m - q - 1);
                    if ((n + m) % 2 == 0) term = -term;
                    lhs += term.scaled(binom);
                }
            }
            Vec rhs;
            if (uv_max) {
                Scalar binom(1);
                for (long m = 0; m <= *uv_max + p + 1; ++m) {
                    if (m > 0) {
                        binom *= Scalar(q + m);
                        binom /= Scalar(m);
                    }
                    if (binom.is_zero()) break;
                    Vec inner = mod.algebra().mode(u, v, m - p - 1);
                    if (inner.is_zero()) continue;
                    Vec term = opposite_mode(mod, inner, w, -q - m - r - 2);
                    if (m % 2 == 1) term = -term;
                    rhs += term.scaled(binom);
                }
            }
            if (lhs != rhs)
                bad[ti] = Witness{"u=" + vsp.describe(u) + ", v=" + vsp.describe(v) +
                                      ", w=" + wsp.describe(w),
                                  "x0^" + std::to_string(p) + " x1^" + std::to_string(q) +
                                      " x2^" + std::to_string(r),
                                  wsp.describe(lhs), wsp.describe(rhs)};
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

} // namespace

CheckReport check_opposite_identities(const Module& mod, const Window& window,
                                      const SampleSpec& sample) {
    CheckReport rep;
    const Space& vsp = mod.algebra().space();
    const Space& wsp = mod.space();

    // opposite Jacobi over sampled triples
    auto triples = sample_module_triples(vsp, wsp, sample);
    std::size_t monomials = 0;
    for (const auto& [a, b, c] : triples) {
        CheckReport one =
            opposite_jacobi_triple(mod, Vec::basis(a), Vec::basis(b), Vec::basis(c), window);
        if (!one.all_pass()) {
            rep.merge(one);
            return rep;
        }
        for (const auto& cr : one.checks())
            if (cr.status == Status::pass && !cr.detail.empty())
                monomials += std::strtoull(cr.detail.c_str(), nullptr, 10);
    }
    rep.pass("module.opposite_jacobi", std::to_string(triples.size()) + " triples, " +
                                           std::to_string(monomials) + " monomials compared");

    // d/dx Y^o(v,x) = Y^o(L(-1)v, x): (L(-1)v)^o_n = -n v^o_{n-1}
    std::size_t dchecked = 0, dskipped = 0;
    long span = 0;
    for (const auto& [var, r] : window.bounds())
        span = std::max(span, floor_to_long(r.hi) - ceil_to_long(r.lo));
    for (int vi = 0; vi < vsp.dim(); ++vi)
        for (int wi = 0; wi < wsp.dim(); ++wi) {
            Vec v = Vec::basis(vi);
            Vec w = Vec::basis(wi);
            long base = opposite_min_mode(mod, v, w);
            for (long n = base - 1; n <= base + span; ++n) {
                try {
                    Vec lv = mod.algebra().apply_L(-1, v);
                    Vec lhs = opposite_mode(mod, lv, w, n);
                    Vec rhs = opposite_mode(mod, v, w, n - 1).scaled(Scalar(-n));
                    ++dchecked;
                    if (lhs != rhs) {
                        rep.fail("module.opposite_L-1_derivative",
                                 Witness{"v=" + vsp.at(vi).name + ", w=" + wsp.at(wi).name,
                                         "mode " + std::to_string(n), wsp.describe(lhs),
                                         wsp.describe(rhs)});
                        return rep;
                    }
                } catch (const MissingTableEntry&) {
                    ++dskipped;
                }
            }
        }
    rep.pass("module.opposite_L-1_derivative", std::to_string(dchecked) + " modes compared, " +
                                                   std::to_string(dskipped) + " outside window");

    // opposite sl(2) commutators: [v^o_n, L(1)] = (L(-1)v)^o_n, etc.
    struct OppCase {
        int j;                      // operator in the commutator
        std::vector<int> lv;        // weights L(j') applied to v per shift
    };
    const OppCase cases[] = {{1, {-1}}, {0, {0, -1}}, {-1, {1, 0, -1}}};
    for (const auto& cs : cases) {
        std::string name = "module.opposite_commutator.L" +
                           std::string(cs.j < 0 ? "m1" : std::to_string(cs.j));
        std::size_t checked = 0, skipped = 0;
        for (int vi = 0; vi < vsp.dim(); ++vi)
            for (int wi = 0; wi < wsp.dim(); ++wi) {
                Vec v = Vec::basis(vi);
                Vec w = Vec::basis(wi);
                long base = opposite_min_mode(mod, v, w);
                for (long n = base - 2; n <= base + span; ++n) {
                    try {
                        Vec lhs = opposite_mode(mod, v, mod.apply_L(cs.j, w), n) -
                                  mod.apply_L(cs.j, opposite_mode(mod, v, w, n));
                        Vec rhs;
                        for (std::size_t s = 0; s < cs.lv.size(); ++s) {
                            Vec lv = mod.algebra().apply_L(cs.lv[s], v);
                            Scalar coef = binomial(static_cast<long>(cs.lv.size()) - 1,
                                                   static_cast<long>(s));
                            rhs += opposite_mode(mod, lv, w, n + static_cast<long>(s))
                                       .scaled(coef);
                        }
                        ++checked;
                        if (lhs != rhs) {
                            rep.fail(name, Witness{"v=" + vsp.at(vi).name +
                                                       ", w=" + wsp.at(wi).name,
                                                   "mode " + std::to_string(n),
                                                   wsp.describe(lhs), wsp.describe(rhs)});
                            return rep;
                        }
                    } catch (const MissingTableEntry&) {
                        ++skipped;
                    }
                }
            }
        rep.pass(name, std::to_string(checked) + " modes compared, " + std::to_string(skipped) +
                           " outside window");
    }

    // x^{L(0)} L(j) x^{-L(0)} = x^{-j} L(j): L(j) shifts homogeneous weight
    // by -j; meaningful as stated on true eigenvectors.
    std::size_t hchecked = 0;
    bool generalized = mod.space().flags().generalized;
    for (int j : {-1, 0, 1})
        for (int i = 0; i < wsp.dim(); ++i) {
            if (generalized && wsp.at(i).jordan_index != 0) continue;
            Vec img;
            try {
                img = mod.apply_L(j, Vec::basis(i));
            } catch (const MissingTableEntry&) {
                continue;
            }
            Exponent want = wsp.at(i).weight - Exponent(j);
            for (const auto& [k, c] : img.entries()) {
                ++hchecked;
                if (wsp.at(k).weight != want) {
                    rep.fail("module.xL0_conjugation",
                             Witness{"L(" + std::to_string(j) + ") " + wsp.at(i).name, "",
                                     wsp.at(k).weight.str(), want.str()});
                    return rep;
                }
            }
        }
    rep.pass("module.xL0_conjugation", std::to_string(hchecked) + " images compared");
    return rep;
}

// --- contragredient ---

Module contragredient(const Module& mod) {
    const Space& wsp = mod.space();
    const Space& vsp = mod.algebra().space();

    if (wsp.flags().weight_lower_unbounded)
        throw NotStronglyGraded("weights are unbounded below in every column");
    CheckReport audit = check_space_consistency(wsp);
    if (!audit.all_pass()) throw NotStronglyGraded(audit.to_text());
    verify_l1_nilpotent(mod.algebra()); // throws NotLocallyNilpotent

    Module dual(mod.algebra_ptr(), wsp.dual());
    dual.name = (mod.name.empty() ? "module" : mod.name) + "'";

    // The space declares itself faithful below its top window (checked
    // above), so cells outside the materialized weights are genuinely zero.
    const Rational wt_min = min_weight_re(wsp);
    const Rational wt_max = max_weight_re(wsp);

    // Dual action: v_n (dual of b) = sum_c <b*, v^o_n c> c*.
    for (int vi = 0; vi < vsp.dim(); ++vi) {
        const Exponent& kx = vsp.at(vi).weight;
        if (!kx.is_integer()) throw Error("algebra weights must be integral");
        long k = kx.as_long();
        for (int bi = 0; bi < wsp.dim(); ++bi) {
            // Source weight for mode n is wt(b) + k - n - 1; materialized
            // range requires it <= wt_max; below wt_min it is zero only for
            // lower-bounded modules.
            Rational wb = wsp.at(bi).weight.re();
            long n_lo = ceil_to_long(wb + k - 1 - wt_max);
            long n_hi = floor_to_long(wb + k - 1 - wt_min);
            bool complete = true;
            std::map<long, Vec> modes;
            for (long n = n_lo; n <= n_hi; ++n) {
                Exponent src_wt(wb + k - n - 1, wsp.at(bi).weight.im());
                Vec row;
                for (int c = 0; c < wsp.dim(); ++c) {
                    if (wsp.at(c).weight != src_wt) continue;
                    Vec img;
                    try {
                        img = opposite_mode(mod, Vec::basis(vi), Vec::basis(c), n);
                    } catch (const MissingTableEntry&) {
                        complete = false;
                        break;
                    }
                    row.add(c, img.coeff(bi));
                }
                if (!complete) break;
                if (!row.is_zero()) dual.action().set(vi, bi, n, row);
            }
            if (complete) dual.action().set_known_below(vi, bi, n_lo);
            else dual.action().set_known_below(vi, bi, LONG_MAX);
        }
    }

    // L'(j) = transpose of L(-j).
    Sl2Ops ops;
    for (int j : {-1, 0, 1}) {
        LinOp& op = ops.L(j);
        for (int bi = 0; bi < wsp.dim(); ++bi) {
            Vec col;
            bool ok = true;
            Exponent src_wt = wsp.at(bi).weight + Exponent(j);
            for (int c = 0; c < wsp.dim(); ++c) {
                if (wsp.at(c).weight != src_wt) continue;
                try {
                    col.add(c, mod.apply_L(-j, Vec::basis(c)).coeff(bi));
                } catch (const MissingTableEntry&) {
                    ok = false;
                    break;
                }
            }
            if (ok) op.set(bi, col);
        }
    }
    dual.set_sl2(ops);

    // Recompute Jordan heights from the transposed L(0).
    for (int i = 0; i < dual.space().dim(); ++i) {
        Vec x = Vec::basis(i);
        const Exponent& wt = dual.space().at(i).weight;
        int h = -1;
        const int cap = dual.space().dim() + 1;
        while (!x.is_zero() && h <= cap) {
            x = dual.apply_L(0, x) - x.scaled(wt.as_scalar());
            ++h;
        }
        dual.space().set_jordan(i, std::max(h, 0));
    }
    return dual;
}

CheckReport compare_module_structures(const Module& a, const Module& b, const std::string& name) {
    CheckReport rep;
    if (a.space().dim() != b.space().dim()) {
        rep.fail(name, Witness{"", "", "dim " + std::to_string(a.space().dim()),
                               "dim " + std::to_string(b.space().dim())});
        return rep;
    }
    for (int i = 0; i < a.space().dim(); ++i) {
        const BasisVector& ba = a.space().at(i);
        const BasisVector& bb = b.space().at(i);
        if (ba.degree != bb.degree || ba.weight != bb.weight ||
            ba.jordan_index != bb.jordan_index) {
            rep.fail(name, Witness{"basis #" + std::to_string(i), "",
                                   group_str(ba.degree) + " wt " + ba.weight.str() + " h" +
                                       std::to_string(ba.jordan_index),
                                   group_str(bb.degree) + " wt " + bb.weight.str() + " h" +
                                       std::to_string(bb.jordan_index)});
            return rep;
        }
    }

    std::size_t compared = 0;
    for (const auto& [pair, la] : a.action().lines()) {
        const ModeLine* lb = b.action().line(pair.first, pair.second);
        long lo = la.known_below;
        if (lb) lo = std::max(lo, lb->known_below);
        else if (!la.modes.empty()) lo = LONG_MAX;
        for (const auto& [n, val] : la.modes) {
            if (n < lo) continue;
            Vec other = lb ? (lb->modes.count(n) ? lb->modes.at(n) : Vec()) : Vec();
            ++compared;
            if (val != other) {
                rep.fail(name,
                         Witness{"pair (#" + std::to_string(pair.first) + ",#" +
                                     std::to_string(pair.second) + ")",
                                 "mode " + std::to_string(n), a.space().describe(val),
                                 b.space().describe(other)});
                return rep;
            }
        }
    }
    for (const auto& [pair, lb] : b.action().lines()) {
        const ModeLine* la = a.action().line(pair.first, pair.second);
        long lo = lb.known_below;
        if (la) lo = std::max(lo, la->known_below);
        else if (!lb.modes.empty()) lo = LONG_MAX;
        for (const auto& [n, val] : lb.modes) {
            if (n < lo) continue;
            Vec other = la ? (la->modes.count(n) ? la->modes.at(n) : Vec()) : Vec();
            ++compared;
            if (val != other) {
                rep.fail(name,
                         Witness{"pair (#" + std::to_string(pair.first) + ",#" +
                                     std::to_string(pair.second) + ")",
                                 "mode " + std::to_string(n), b.space().describe(val),
                                 a.space().describe(other)});
                return rep;
            }
        }
    }
    rep.pass(name, std::to_string(compared) + " table entries compared");
    return rep;
}

void require_homomorphism(const Module& w1, const Module& w2, const LinOp& f) {
    const Space& s1 = w1.space();
    const Space& s2 = w2.space();
    for (int i = 0; i < s1.dim(); ++i) {
        if (!f.has(i)) throw NotAHomomorphism("map not defined on " + s1.at(i).name);
        Vec img = f.column(i);
        for (const auto& [k, c] : img.entries())
            if (s2.at(k).weight != s1.at(i).weight || s2.at(k).degree != s1.at(i).degree)
                throw NotAHomomorphism("map does not preserve the grading on " + s1.at(i).name);
    }
    for (int j : {-1, 0, 1})
        for (int i = 0; i < s1.dim(); ++i) {
            try {
                Vec lhs = f.apply(w1.apply_L(j, Vec::basis(i)));
                Vec rhs = w2.apply_L(j, f.column(i));
                if (lhs != rhs)
                    throw NotAHomomorphism("map does not intertwine L(" + std::to_string(j) +
                                           ") on " + s1.at(i).name);
            } catch (const MissingTableEntry&) {
            }
        }
    for (const auto& [pair, line] : w1.action().lines()) {
        auto [vi, wi] = pair;
        for (const auto& [n, val] : line.modes) {
            try {
                Vec lhs = f.apply(val);
                Vec rhs = w2.act(Vec::basis(vi), f.column(wi), n);
                if (lhs != rhs)
                    throw NotAHomomorphism("map does not intertwine mode " + std::to_string(n) +
                                           " of " + w1.algebra().space().at(vi).name);
            } catch (const MissingTableEntry&) {
            }
        }
    }
}

LinOp dual_hom(const Module& w1, const Module& w2, const Module& w1p, const Module& w2p,
               const LinOp& f) {
    require_homomorphism(w1, w2, f);
    LinOp fp;
    for (int j = 0; j < w2.space().dim(); ++j) {
        Vec col;
        for (int i = 0; i < w1.space().dim(); ++i)
            if (f.has(i)) col.add(i, f.column(i).coeff(j));
        fp.set(j, col);
    }
    require_homomorphism(w2p, w1p, fp);
    return fp;
}

CheckReport check_dual_truncation(const Module& modprime) {
    CheckReport rep;
    const Space& vsp = modprime.algebra().space();
    const Space& wsp = modprime.space();
    std::size_t checked = 0;
    for (const auto& [pair, line] : modprime.action().lines()) {
        auto [vi, wi] = pair;
        if (line.modes.empty()) continue;
        ++checked;
        if (auto top = line.max_nonzero()) {
            // all modes above the top stored one are known zero
            if (line.known_below > *top) {
                rep.fail("contragredient.truncation",
                         Witness{vsp.at(vi).name + " on " + wsp.at(wi).name, "",
                                 "stored mode below known region", ""});
                return rep;
            }
        }
    }
    rep.pass("contragredient.truncation",
             std::to_string(checked) + " lines have a finite top mode inside the window");
    return rep;
}

CheckReport check_congruence_closure(const Module& mod) {
    CheckReport rep;
    const Space& wsp = mod.space();
    auto classes = congruence_decompose(wsp);
    std::vector<int> class_of(wsp.dim(), -1);
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        for (int id : classes[ci].members) class_of[id] = static_cast<int>(ci);

    std::size_t checked = 0;
    for (const auto& [pair, line] : mod.action().lines()) {
        auto [vi, wi] = pair;
        for (const auto& [n, val] : line.modes)
            for (const auto& [k, c] : val.entries()) {
                ++checked;
                if (class_of[k] != class_of[wi]) {
                    rep.fail("module.congruence_closure",
                             Witness{mod.algebra().space().at(vi).name + "_" +
                                         std::to_string(n) + " " + wsp.at(wi).name,
                                     "", wsp.at(k).name + " in class " +
                                         std::to_string(class_of[k]),
                                     "class " + std::to_string(class_of[wi])});
                    return rep;
                }
            }
    }
    for (int j : {-1, 0, 1})
        for (int i = 0; i < wsp.dim(); ++i) {
            Vec img;
            try {
                img = mod.apply_L(j, Vec::basis(i));
            } catch (const MissingTableEntry&) {
                continue;
            }
            for (const auto& [k, c] : img.entries()) {
                ++checked;
                if (class_of[k] != class_of[i]) {
                    rep.fail("module.congruence_closure",
                             Witness{"L(" + std::to_string(j) + ") " + wsp.at(i).name, "",
                                     wsp.at(k).name, "same class"});
                    return rep;
                }
            }
        }
    rep.pass("module.congruence_closure", std::to_string(checked) + " images checked");
    return rep;
}

} // namespace va
