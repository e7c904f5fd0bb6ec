#ifndef VA_ALGEBRA_HPP
#define VA_ALGEBRA_HPP

#include "va/grading.hpp"
#include "va/linalg.hpp"
#include "va/report.hpp"

#include <array>
#include <climits>
#include <functional>
#include <memory>

namespace va {

// All modes of one basis vector acting on another. Entries with n >=
// known_below are complete (absent = zero); modes below that were not
// materialized and reading them raises MissingTableEntry.
struct ModeLine {
    std::map<long, Vec> modes;
    long known_below = LONG_MIN;

    // Largest n with a nonzero entry; nullopt when the line is zero.
    std::optional<long> max_nonzero() const {
        if (modes.empty()) return std::nullopt;
        return modes.rbegin()->first;
    }
};

// Sparse structure-constant table (u, v, n) -> u_n v.
class ModeTable {
public:
    void set(int u, int v, long n, Vec value);
    void set_known_below(int u, int v, long lo);
    const ModeLine* line(int u, int v) const;

    bool knows(int u, int v, long n) const;
    // u_n v for basis indices; throws MissingTableEntry outside the
    // materialized region.
    Vec mode(int u, int v, long n) const;

    const std::map<std::pair<int, int>, ModeLine>& lines() const { return lines_; }
    std::size_t entry_count() const;

private:
    std::map<std::pair<int, int>, ModeLine> lines_;
};

// Linear operator on a graded space, column by column. Absent columns were
// not materialized (distinct from zero columns, which must be set).
class LinOp {
public:
    void set(int i, Vec image) { cols_[i] = std::move(image); }
    bool has(int i) const { return cols_.count(i) != 0; }
    const std::map<int, Vec>& cols() const { return cols_; }

    Vec column(int i) const;
    Vec apply(const Vec& v) const;

    static LinOp zero_on(int dim);

private:
    std::map<int, Vec> cols_;
};

struct Sl2Ops {
    LinOp l_minus1, l_0, l_1;
    const LinOp& L(int j) const;
    LinOp& L(int j);
};

struct ConformalData {
    Vec omega;
    Scalar central_charge;
};

// Structure constants for Y plus vacuum and either a conformal vector or an
// sl(2) triple. Weights of the underlying space are integers.
class VertexAlgebra {
public:
    VertexAlgebra() = default;
    VertexAlgebra(Space space, Vec vacuum) : space_(std::move(space)), vacuum_(std::move(vacuum)) {}

    const Space& space() const { return space_; }
    Space& space() { return space_; }
    const Vec& vacuum() const { return vacuum_; }
    void set_vacuum(Vec v) { vacuum_ = std::move(v); }

    ModeTable& table() { return table_; }
    const ModeTable& table() const { return table_; }

    void set_conformal(ConformalData c) { conformal_ = std::move(c); }
    void set_sl2(Sl2Ops s) { sl2_ = std::move(s); }
    bool is_conformal() const { return conformal_.has_value(); }
    bool has_sl2() const { return sl2_.has_value() || conformal_.has_value(); }
    const ConformalData& conformal() const;
    const Sl2Ops& sl2_raw() const;

    // u_n v extended bilinearly.
    Vec mode(const Vec& u, const Vec& v, long n) const;
    Vec mode(int u, int v, long n) const { return table_.mode(u, v, n); }

    // L(j) for j in {-1,0,1}: the sl(2) operators, or omega modes in the
    // conformal case.
    Vec apply_L(int j, const Vec& v) const;
    // Conformal only: L(n) = omega_{n+1} for any n.
    Vec apply_Ln(long n, const Vec& v) const;

    std::string name;

private:
    Space space_;
    Vec vacuum_;
    ModeTable table_;
    std::optional<ConformalData> conformal_;
    std::optional<Sl2Ops> sl2_;
};

// Y(u, x)v restricted to the window of var.
VecSeries vertex_op(const VertexAlgebra& alg, const Vec& u, const Vec& v, const Var& x,
                    const Window& w);

struct SampleSpec {
    // Basis triples (u, v, w) with total |Re wt| at most this enter the
    // Jacobi sample; modes and monomials come from the window.
    Rational max_total_wt = Rational(4);
    std::size_t max_triples = 400;
};

// Coefficientwise Jacobi identity for one basis-vector triple on the window
// (variables x0, x1, x2). Runs the direct per-monomial kernel; the series
// reference route is exposed separately for cross-checking.
CheckReport check_jacobi_triple(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                const Vec& w, const Window& window);

// Reference implementation via full series expansion of all three terms.
CheckReport check_jacobi_triple_series(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                       const Vec& w, const Window& window);

// Vacuum, creation, Jacobi (sampled), Virasoro or sl(2) relations, the three
// mode commutators, L(-1)-derivative, L(0) grading.
CheckReport check_axioms(const VertexAlgebra& alg, const Window& window,
                         const SampleSpec& sample = {});

// Second-grading audit: lower truncation per column, finite cells, vacuum
// placement, degree additivity of modes, L(j) degree preservation, omega
// placement in the conformal case.
CheckReport check_strong_grading(const VertexAlgebra& alg);

// wt(u_n v) = wt u + wt v - n - 1 and wt(L(j)v) = wt v - j over the table.
CheckReport weight_shift_check(const VertexAlgebra& alg, const Window& window);

// Res_x0 of the Jacobi identity: [u_p, v_q] = sum_m C(p,m) (u_m v)_{p+q-m},
// checked on sampled pairs; holds whenever Jacobi does.
CheckReport check_commutator_formula(const VertexAlgebra& alg, const Vec& u, const Vec& v,
                                     const Vec& w, long p, long q);

// L(1) is locally nilpotent on the windowed basis; returns per-basis
// nilpotency orders, or throws NotLocallyNilpotent.
std::vector<int> verify_l1_nilpotent(const VertexAlgebra& alg);

// --- shared check machinery (also used by the module suite) ---

// Coefficientwise Jacobi engine for an action act_W of the algebra underlying
// act_V on w_space, with the iterate routed through act_V.
CheckReport jacobi_coefficient_check(const Space& v_space, const Space& w_space,
                                     const ModeTable& act_V, const ModeTable& act_W, const Vec& u,
                                     const Vec& v, const Vec& w, const Window& window,
                                     const std::string& name, bool parallel);

void check_sl2_commutators(const VertexAlgebra& alg, const ModeTable& act, const Space& w_space,
                           const std::function<Vec(int, const Vec&)>& applyLW,
                           const std::string& prefix, CheckReport& rep);

void check_sl2_brackets(const Space& space, const std::function<Vec(int, const Vec&)>& applyL,
                        const std::string& prefix, CheckReport& rep);

void check_virasoro(const Space& space, const std::function<Vec(long, const Vec&)>& applyLn,
                    const Scalar& c, long mode_range, const std::string& prefix, CheckReport& rep);

void check_mode_l_minus1_derivative(const VertexAlgebra& alg, const ModeTable& act,
                                    const Space& w_space, const std::string& name,
                                    CheckReport& rep);

std::vector<std::array<int, 3>> sample_triples(const Space& sp, const SampleSpec& spec);

} // namespace va

#endif
