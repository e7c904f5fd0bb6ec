#ifndef VA_GRADING_HPP
#define VA_GRADING_HPP

#include "va/report.hpp"
#include "va/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace va {

// Element of the free abelian grading group Z^r.
using GroupElement = std::vector<int>;

GroupElement group_zero(int rank);
GroupElement group_add(const GroupElement& a, const GroupElement& b);
GroupElement group_neg(const GroupElement& a);
std::string group_str(const GroupElement& a);

struct BasisVector {
    std::string name;
    GroupElement degree;
    Exponent weight;
    // Nilpotency height under L(0)-wt: smallest h with (L(0)-wt)^{h+1} v = 0.
    // 0 for true eigenvectors.
    int jordan_index = 0;
};

// Sparse element of a graded space: basis index -> coefficient, no zeros.
class Vec {
public:
    Vec() = default;
    static Vec basis(int id) {
        Vec v;
        v.entries_[id] = Scalar(1);
        return v;
    }

    const std::map<int, Scalar>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    Scalar coeff(int id) const {
        auto it = entries_.find(id);
        return it == entries_.end() ? Scalar() : it->second;
    }

    void add(int id, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = entries_.find(id);
        if (it == entries_.end()) {
            entries_.emplace(id, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    Vec& operator+=(const Vec& o) {
        if (this == &o) {
            for (auto& [i, c] : entries_) c += c;
            return *this;
        }
        for (const auto& [i, c] : o.entries_) add(i, c);
        return *this;
    }
    Vec& operator-=(const Vec& o);
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    Vec operator-() const;
    Vec scaled(const Scalar& s) const;

    friend bool operator==(const Vec& a, const Vec& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

    std::string str(const std::vector<BasisVector>& basis) const;

private:
    std::map<int, Scalar> entries_;
};

template <>
struct CoeffOps<Vec> {
    static Vec zero() { return Vec(); }
    static bool is_zero(const Vec& v) { return v.is_zero(); }
    static void add_into(Vec& a, const Vec& b) { a += b; }
    static Vec neg(const Vec& v) { return -v; }
    static Vec scale(const Vec& v, const Scalar& s) { return v.scaled(s); }
    static std::string str(const Vec& v);
};

using VecSeries = BasicSeries<Vec>;

struct SpaceFlags {
    bool generalized = false;
    bool lower_bounded = false;
    // The abstract family keeps producing cells below any materialization
    // window (e.g. a polynomial algebra graded by nonpositive integers).
    bool weight_lower_unbounded = false;
    // No meaningful weight grading (plain vertex algebras); stored weights
    // are placeholders and weight-based checks do not apply.
    bool ungraded = false;
};

// Basis-indexed space graded by Z^r and by weights. Materialized cells are
// finite; flags describe the abstract family the materialization came from.
class Space {
public:
    Space() = default;
    explicit Space(int group_rank, SpaceFlags flags = {})
        : rank_(group_rank), flags_(flags) {}

    int group_rank() const { return rank_; }
    const SpaceFlags& flags() const { return flags_; }
    SpaceFlags& flags() { return flags_; }

    int add_basis(std::string name, GroupElement degree, Exponent weight, int jordan_index = 0);
    int add_basis(std::string name, Exponent weight) {
        return add_basis(std::move(name), group_zero(rank_), std::move(weight), 0);
    }

    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<BasisVector>& basis() const { return basis_; }
    const BasisVector& at(int id) const { return basis_.at(id); }
    void set_jordan(int id, int h) { basis_.at(id).jordan_index = h; }
    int find(const std::string& name) const; // -1 if absent
    int require(const std::string& name) const;

    const std::vector<int>& cell(const GroupElement& degree, const Exponent& weight) const;
    std::vector<int> ids_of_weight(const Exponent& w) const;

    // Weight of a homogeneous vector; nullopt for 0 or mixed-weight vectors.
    std::optional<Exponent> weight_of(const Vec& v) const;
    std::optional<GroupElement> degree_of(const Vec& v) const;

    // All distinct (degree, weight) cells in canonical order.
    std::vector<std::pair<GroupElement, Exponent>> cells() const;

    // The graded dual: cell (beta, n) of the result is spanned by duals of
    // cell (-beta, n), index-aligned with this space (dual of basis i is i).
    Space dual(const std::string& suffix = "'") const;

    std::string describe(const Vec& v) const { return v.str(basis_); }

private:
    int rank_ = 0;
    SpaceFlags flags_;
    std::vector<BasisVector> basis_;
    std::map<std::string, int> by_name_;
    std::map<std::pair<GroupElement, Exponent>, std::vector<int>> cells_;
};

// Element of the formal completion, supplied per weight on a finite window.
struct CompletionElement {
    std::map<Exponent, Vec> parts; // each part homogeneous of its weight
    Rational max_wt_re = 0;        // weights with Re <= this are materialized

    Vec project(const Exponent& n) const {
        auto it = parts.find(n);
        return it == parts.end() ? Vec() : it->second;
    }
    void add(const Exponent& wt, const Vec& v) {
        if (v.is_zero()) return;
        auto it = parts.find(wt);
        if (it == parts.end()) parts.emplace(wt, v);
        else {
            it->second += v;
            if (it->second.is_zero()) parts.erase(it);
        }
    }
};

// Weight-n homogeneous component.
Vec project(const Space& sp, const Vec& v, const Exponent& n);

// Canonical pairing of a dual-space vector against a vector or completion
// element; only matching (degree, weight) cells contribute.
Scalar pair_dual(const Space& sp, const Vec& wprime, const Vec& w);
Scalar pair_dual(const Space& sp, const Vec& wprime, const CompletionElement& w);

struct CongruenceClass {
    Exponent representative; // weight of the first member
    std::vector<int> members;
};

// Partition of the basis by weight modulo Z (equal imaginary parts and
// integral difference of real parts).
std::vector<CongruenceClass> congruence_decompose(const Space& sp);

// Structural audit: cell consistency, finite dimensions, minimal weight per
// (degree, congruence class) column, global minimum when lower_bounded.
CheckReport check_space_consistency(const Space& sp);

Rational min_weight_re(const Space& sp);
Rational max_weight_re(const Space& sp);

} // namespace va

#endif
