#ifndef VA_IDENTITIES_HPP
#define VA_IDENTITIES_HPP

#include "va/report.hpp"
#include "va/series.hpp"

namespace va {

enum class DeltaIdentity {
    two_term,                  // x2^-1 d((x1-x0)/x2) = x1^-1 d((x2+x0)/x1)
    three_term,                // x0^-1 d((x1-x2)/x0) - x0^-1 d((x2-x1)/-x0) = x2^-1 d((x1-x0)/x2)
    three_term_lhs_inequality, // the two left-hand terms above differ
    substitution,              // x1^-1 d((x2-y)/x1) f(x1,x2,y) = x1^-1 d((x2-y)/x1) f(x2-y,x2,y)
};

// Coefficientwise verification of the delta-function identities on the given
// window (variables x0,x1,x2 and, for substitution, y). For substitution an
// explicit f may be supplied; it must have only finitely many negative powers
// of y and integral exponents in x1. When absent, a built-in Laurent family
// is used.
CheckReport verify_delta_identity(DeltaIdentity kind, const Window& window,
                                  const Series* f = nullptr);

// f(x) delta(x) = f(1) delta(x) for a Laurent polynomial f in x.
CheckReport verify_delta_substitution_single(const Series& f, const Var& x, const Window& window);

} // namespace va

#endif
