#ifndef VA_BUILDERS_HPP
#define VA_BUILDERS_HPP

#include "va/modules.hpp"

#include <memory>

namespace va {

// A commutative associative unital algebra with a derivation, given by a
// multiplication table. Absent products fell outside the basis window.
struct CommAlgSpec {
    std::vector<std::string> basis;
    int unit = 0;
    std::map<std::pair<int, int>, Vec> mult; // absent = not materialized
    LinOp derivation;
    std::vector<Exponent> weights; // display grading; defaults to all 0
    bool weight_lower_unbounded = false;

    const Vec* product(int i, int j) const {
        auto it = mult.find({i, j});
        return it == mult.end() ? nullptr : &it->second;
    }
};

// Validates the spec (associativity, commutativity, unit, Leibniz) and turns
// it into a vertex algebra with Y(a,x)b = (e^{xD}a)b, i.e. modes
// a_{-1-m} b = (D^m a / m!) b and a_n b = 0 for n >= 0. Throws SpecInvalid.
std::shared_ptr<VertexAlgebra> build_comm_alg_va(const CommAlgSpec& spec);

// C[t] with D = -d/dt as a Mobius vertex algebra: L(-1) = D, L(0) = tD,
// L(1) = t^2 D, weights nonpositive. Basis 1, t, ..., t^max_index.
std::shared_ptr<VertexAlgebra> build_poly_dneg(int max_index);

// The plain (non-Mobius) C[t] vertex algebra with D = -d/dt.
CommAlgSpec poly_dneg_spec(int max_index);

// Lower-bounded variant: C[t] with D = t^2 d/dt and sl(2) =
// (t^2 d/dt, t d/dt, d/dt); weights are the polynomial degrees. Strongly
// graded with respect to the trivial group.
std::shared_ptr<VertexAlgebra> build_poly_mobius_lb(int max_index);

// The two-dimensional algebra C1 + Ca, a^2 = 0, D(1) = 0, D(a) = a.
std::shared_ptr<VertexAlgebra> build_two_dim_nilpotent();

// V = C1 with Y(1,x)1 = 1; optionally carries omega = 0 with central charge
// 0 as the minimal conformal fixture.
std::shared_ptr<VertexAlgebra> build_trivial_algebra(bool conformal = false);

// Two-dimensional generalized module over the trivial algebra with
// L(0) = [[wt, 1], [0, wt]] (one Jordan block) and trivial action.
Module build_jordan_toy_module(std::shared_ptr<const VertexAlgebra> trivial, long wt = 1);

// Mobius impossibility / feasibility analysis. Stage 1 solves the linear
// system {L(-1) = D forced by creation + L(-1)-derivative, [L(0), L(-1)] =
// L(-1), L(0) vacuum = 0} for L(0); an inconsistent reduction is reported as
// an exact certificate. If feasible, stage 2 solves for L(1) and the full
// bracket relations are verified on the result (window-qualified when the
// space is a truncation of an infinite family).
CheckReport prove_no_sl2(const VertexAlgebra& alg, const Sl2Ops* witness = nullptr);

// D = v -> v_{-2} vacuum, the derivation forced on any candidate L(-1).
LinOp derivation_from_table(const VertexAlgebra& alg);

// Reports why a conformal vector cannot exist when the forced derivation is
// nonzero (omega_0 = D and omega = L(0)omega/2 = 0 force D = 0).
CheckReport conformal_vector_search(const VertexAlgebra& alg);

} // namespace va

#endif
