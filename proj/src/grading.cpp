#include "va/grading.hpp"

#include <algorithm>
#include <sstream>

namespace va {

GroupElement group_zero(int rank) {
    return GroupElement(rank, 0);
}

GroupElement group_add(const GroupElement& a, const GroupElement& b) {
    if (a.size() != b.size()) throw Error("grading group rank mismatch");
    GroupElement r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

GroupElement group_neg(const GroupElement& a) {
    GroupElement r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

std::string group_str(const GroupElement& a) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << a[i];
    }
    os << ")";
    return os.str();
}

Vec& Vec::operator-=(const Vec& o) {
    if (this == &o) {
        entries_.clear();
        return *this;
    }
    for (const auto& [i, c] : o.entries_) add(i, -c);
    return *this;
}

Vec Vec::operator-() const {
    Vec r;
    for (const auto& [i, c] : entries_) r.entries_.emplace(i, -c);
    return r;
}

Vec Vec::scaled(const Scalar& s) const {
    Vec r;
    if (s.is_zero()) return r;
    for (const auto& [i, c] : entries_) r.entries_.emplace(i, c * s);
    return r;
}

std::string Vec::str(const std::vector<BasisVector>& basis) const {
    if (entries_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : entries_) {
        std::string cs = c.str();
        if (!first) os << " + ";
        first = false;
        std::string name = i >= 0 && i < static_cast<int>(basis.size())
                               ? basis[i].name
                               : "#" + std::to_string(i);
        if (cs == "1") os << name;
        else if (cs == "-1") os << "-" << name;
        else if (cs.find_first_of("+-", 1) != std::string::npos || cs.find('i') != std::string::npos)
            os << "(" << cs << ")*" << name;
        else os << cs << "*" << name;
    }
    return os.str();
}

std::string CoeffOps<Vec>::str(const Vec& v) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : v.entries()) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*#" << i;
    }
    return first ? "0" : os.str();
}

int Space::add_basis(std::string name, GroupElement degree, Exponent weight, int jordan_index) {
    if (static_cast<int>(degree.size()) != rank_)
        throw Error("degree rank mismatch for basis vector " + name);
    if (by_name_.count(name)) throw Error("duplicate basis name " + name);
    int id = dim();
    by_name_.emplace(name, id);
    cells_[{degree, weight}].push_back(id);
    basis_.push_back(BasisVector{std::move(name), std::move(degree), std::move(weight), jordan_index});
    return id;
}

int Space::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
}

int Space::require(const std::string& name) const {
    int id = find(name);
    if (id < 0) throw Error("no basis vector named " + name);
    return id;
}

const std::vector<int>& Space::cell(const GroupElement& degree, const Exponent& weight) const {
    static const std::vector<int> empty;
    auto it = cells_.find({degree, weight});
    return it == cells_.end() ? empty : it->second;
}

std::vector<int> Space::ids_of_weight(const Exponent& w) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (basis_[i].weight == w) out.push_back(i);
    return out;
}

std::optional<Exponent> Space::weight_of(const Vec& v) const {
    std::optional<Exponent> wt;
    for (const auto& [i, c] : v.entries()) {
        const Exponent& w = at(i).weight;
        if (!wt) wt = w;
        else if (*wt != w) return std::nullopt;
    }
    return wt;
}

std::optional<GroupElement> Space::degree_of(const Vec& v) const {
    std::optional<GroupElement> deg;
    for (const auto& [i, c] : v.entries()) {
        const GroupElement& d = at(i).degree;
        if (!deg) deg = d;
        else if (*deg != d) return std::nullopt;
    }
    return deg;
}

std::vector<std::pair<GroupElement, Exponent>> Space::cells() const {
    std::vector<std::pair<GroupElement, Exponent>> out;
    out.reserve(cells_.size());
    for (const auto& [key, ids] : cells_) out.push_back(key);
    return out;
}

Space Space::dual(const std::string& suffix) const {
    Space d(rank_, flags_);
    for (const auto& b : basis_)
        d.add_basis(b.name + suffix, group_neg(b.degree), b.weight, b.jordan_index);
    return d;
}

Vec project(const Space& sp, const Vec& v, const Exponent& n) {
    Vec out;
    for (const auto& [i, c] : v.entries())
        if (sp.at(i).weight == n) out.add(i, c);
    return out;
}

Scalar pair_dual(const Space& sp, const Vec& wprime, const Vec& w) {
    Scalar acc;
    for (const auto& [i, c] : wprime.entries()) acc += c * w.coeff(i);
    return acc;
}

Scalar pair_dual(const Space& sp, const Vec& wprime, const CompletionElement& w) {
    Scalar acc;
    for (const auto& [i, c] : wprime.entries()) {
        const Exponent& wt = sp.at(i).weight;
        auto it = w.parts.find(wt);
        if (it != w.parts.end()) acc += c * it->second.coeff(i);
    }
    return acc;
}

namespace {
bool congruent_mod_z(const Exponent& a, const Exponent& b) {
    if (a.im() != b.im()) return false;
    Rational d = a.re() - b.re();
    return d.get_den() == 1;
}
} // namespace

std::vector<CongruenceClass> congruence_decompose(const Space& sp) {
    std::vector<CongruenceClass> classes;
    for (int i = 0; i < sp.dim(); ++i) {
        const Exponent& w = sp.at(i).weight;
        bool placed = false;
        for (auto& cls : classes)
            if (congruent_mod_z(cls.representative, w)) {
                cls.members.push_back(i);
                placed = true;
                break;
            }
        if (!placed) classes.push_back(CongruenceClass{w, {i}});
    }
    return classes;
}

Rational min_weight_re(const Space& sp) {
    Rational m(0);
    bool first = true;
    for (const auto& b : sp.basis()) {
        if (first || cmp(b.weight.re(), m) < 0) m = b.weight.re();
        first = false;
    }
    return m;
}

Rational max_weight_re(const Space& sp) {
    Rational m(0);
    bool first = true;
    for (const auto& b : sp.basis()) {
        if (first || cmp(b.weight.re(), m) > 0) m = b.weight.re();
        first = false;
    }
    return m;
}

CheckReport check_space_consistency(const Space& sp) {
    CheckReport rep;

    bool cells_ok = true;
    for (const auto& key : sp.cells())
        for (int id : sp.cell(key.first, key.second)) {
            const BasisVector& b = sp.at(id);
            if (b.degree != key.first || b.weight != key.second) cells_ok = false;
        }
    if (cells_ok)
        rep.pass("grading.cells", std::to_string(sp.cells().size()) + " cells consistent");
    else
        rep.fail("grading.cells", Witness{"", "", "cell membership", "basis data"});

    // Minimal weight per (degree, congruence class) column within the window.
    std::map<std::vector<int>, std::map<int, Rational>> col_min_by_class;
    auto classes = congruence_decompose(sp);
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        for (int id : classes[ci].members) {
            const BasisVector& b = sp.at(id);
            auto key = b.degree;
            auto& mins = col_min_by_class[key];
            auto it = mins.find(static_cast<int>(ci));
            if (it == mins.end() || cmp(b.weight.re(), it->second) < 0)
                mins[static_cast<int>(ci)] = b.weight.re();
        }
    if (sp.flags().weight_lower_unbounded) {
        rep.fail("grading.lower_truncation",
                 Witness{"", "", "weights declared unbounded below",
                         "every materialization window extends downward"},
                 "abstract family has no minimal weight");
    } else {
        std::size_t cols = 0;
        for (const auto& [deg, mins] : col_min_by_class) cols += mins.size();
        rep.pass("grading.lower_truncation",
                 std::to_string(cols) + " (degree, class mod Z) columns have minimal weights");
    }

    if (sp.flags().lower_bounded) {
        if (sp.flags().weight_lower_unbounded)
            rep.fail("grading.lower_bounded",
                     Witness{"", "", "lower_bounded flag", "weights unbounded below"});
        else
            rep.pass("grading.lower_bounded");
    }

    if (!sp.flags().generalized) {
        bool ok = true;
        std::string bad;
        for (const auto& b : sp.basis())
            if (b.jordan_index != 0) {
                ok = false;
                bad = b.name;
                break;
            }
        if (ok) rep.pass("grading.ordinary_jordan");
        else
            rep.fail("grading.ordinary_jordan",
                     Witness{bad, "", "jordan_index != 0", "ordinary space"});
    }
    return rep;
}

} // namespace va
