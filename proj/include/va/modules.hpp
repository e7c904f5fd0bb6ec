#ifndef VA_MODULES_HPP
#define VA_MODULES_HPP

#include "va/algebra.hpp"

#include <memory>

namespace va {

// (Generalized) module over a vertex algebra: an action table of the algebra
// basis on the module basis plus sl(2) (or conformal) operators on the module
// space. Weights may be any Gaussian rationals.
class Module {
public:
    Module() = default;
    Module(std::shared_ptr<const VertexAlgebra> over, Space space)
        : over_(std::move(over)), space_(std::move(space)) {}

    const VertexAlgebra& algebra() const {
        if (!over_) throw Error("module has no underlying algebra");
        return *over_;
    }
    std::shared_ptr<const VertexAlgebra> algebra_ptr() const { return over_; }

    const Space& space() const { return space_; }
    Space& space() { return space_; }

    ModeTable& action() { return action_; }
    const ModeTable& action() const { return action_; }

    void set_sl2(Sl2Ops ops) { sl2_ = std::move(ops); }
    void set_conformal_action() { conformal_action_ = true; }
    bool conformal_action() const { return conformal_action_; }

    // v_n w extended bilinearly (v in the algebra, w here).
    Vec act(const Vec& v, const Vec& w, long n) const;
    // L(j) on the module, j in {-1, 0, 1}.
    Vec apply_L(int j, const Vec& w) const;
    // Conformal case: L(n) = omega_{n+1} acting here.
    Vec apply_Ln(long n, const Vec& w) const;

    std::string name;

private:
    std::shared_ptr<const VertexAlgebra> over_;
    Space space_;
    ModeTable action_;
    std::optional<Sl2Ops> sl2_;
    bool conformal_action_ = false; // L(j) from the omega line of the action
};

// The algebra as a module over itself.
Module self_module(std::shared_ptr<const VertexAlgebra> alg);

// Y_W(v, x)w restricted to the window of x.
VecSeries module_action(const Module& mod, const Vec& v, const Vec& w, const Var& x,
                        const Window& window);

// Module Jacobi identity for one triple (coefficientwise kernel).
CheckReport check_module_jacobi_triple(const Module& mod, const Vec& u, const Vec& v,
                                       const Vec& w, const Window& window);

// Vacuum, Jacobi (sampled), sl(2)/Virasoro relations on the module,
// L(-1)-derivative, and the (generalized) weight conditions.
CheckReport check_module_axioms(const Module& mod, const Window& window,
                                const SampleSpec& sample = {});

// (L(0) - wt) = 0 on every homogeneous basis vector (fails on honest Jordan
// blocks; that is the point of keeping it separate).
CheckReport check_ordinary_weights(const Module& mod);

// (L(0) - wt)^{h+1} kills each basis vector at its declared height h, and the
// cell-level exponent N = max height + 1 kills the whole cell.
CheckReport check_generalized_weights(const Module& mod);

// wt(v_n w) = wt v + wt w - n - 1, wt(L(j)w) = wt w - j, and the commutator
// identity [L(0), v_n] = (L(0)v)_n + (-n-1) v_n on the window.
CheckReport weight_formula_check(const Module& mod, const Window& window);

// [L(0)_s, v_n] = [L(0), v_n] and [L(0)_s, L(j)] = [L(0), L(j)] with L(0)_s
// read off the grading; equivalently L(0) - L(0)_s is a module self-map.
CheckReport semisimple_part_check(const Module& mod, const Window& window);

// Opposite modes v^o_n w; v must be homogeneous of integral weight. Requires
// L(1) locally nilpotent on the algebra.
Vec opposite_mode(const Module& mod, const Vec& v, const Vec& w, long n);

// Y^o(v, x)w; the series lives in W((x^-1)).
VecSeries opposite_op(const Module& mod, const Vec& v, const Vec& w, const Var& x,
                      const Window& window);

// Smallest opposite mode of v on w that can be nonzero (truncation from
// below, mirroring the usual truncation from above).
long opposite_min_mode(const Module& mod, const Vec& v, const Vec& w);

// Opposite Jacobi identity, the opposite L(-1)-derivative, the three opposite
// sl(2) commutators, and homogeneity of x^{L(0)} L(j) x^{-L(0)} = x^{-j} L(j).
CheckReport check_opposite_identities(const Module& mod, const Window& window,
                                      const SampleSpec& sample = {});

// The contragredient module W': dual cells with negated group degrees, action
// = transposed opposite modes, L'(j) = transpose of L(-j). Requires strong
// grading flags and locally nilpotent L(1).
Module contragredient(const Module& mod);

// Structure tables compare equal entry-for-entry (used for W'' = W).
CheckReport compare_module_structures(const Module& a, const Module& b, const std::string& name);

// A grading-preserving linear map W1 -> W2 given column-by-column on basis
// indices of W1.
struct ModuleMap {
    LinOp map;
};

// Verify f intertwines the action and sl(2); throws NotAHomomorphism.
void require_homomorphism(const Module& w1, const Module& w2, const LinOp& f);

// The dual map W2' -> W1' of a module homomorphism, with intertwining
// re-verified on the result.
LinOp dual_hom(const Module& w1, const Module& w2, const Module& w1p, const Module& w2p,
               const LinOp& f);

// Lower truncation of the dual action: for each (v, w') the computed bound
// above which all modes vanish on the window.
CheckReport check_dual_truncation(const Module& modprime);

// Every congruence class of weights mod Z is stable under all v_n and L(j).
CheckReport check_congruence_closure(const Module& mod);

} // namespace va

#endif
