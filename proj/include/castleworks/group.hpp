#pragma once

// Group descriptors and exact element arithmetic.
//
// Supported kinds: the integers Z, finite groups given by multiplication
// tables, the infinite dihedral group D (presentation <s,t | t^2, (ts)^2>,
// elements written s^n t^r), direct products, and wreath-type lamplighter
// groups (finite base) ⋉ Z.  Three extension structures are available for
// quotient/lift work: a direct product over its left factor, a lamplighter
// over its shift, and the dihedral group over its reflection parity.

#include "core.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace castleworks {

// One element type for every kind; unused fields stay at their defaults so
// structural comparison is kind-agnostic.
struct Elem {
    long long n = 0;  // Z: value; dihedral: translation; lamplighter: shift; table: index
    int r = 0;        // dihedral reflection bit
    std::vector<std::pair<long long, int>> lamps;  // lamplighter: sorted (position, base index)
    std::shared_ptr<const Elem> a, b;              // direct product components

    static Elem of_int(long long v) {
        Elem e;
        e.n = v;
        return e;
    }
    static Elem of_index(int i) {
        Elem e;
        e.n = i;
        return e;
    }
    static Elem dihedral(long long n, int r) {
        Elem e;
        e.n = n;
        e.r = r & 1;
        return e;
    }
    static Elem pair(Elem l, Elem rgt) {
        Elem e;
        e.a = std::make_shared<const Elem>(std::move(l));
        e.b = std::make_shared<const Elem>(std::move(rgt));
        return e;
    }
    static Elem lamp_shift(std::vector<std::pair<long long, int>> lamps, long long shift) {
        Elem e;
        e.lamps = std::move(lamps);
        e.n = shift;
        return e;
    }
};

inline int elem_cmp(const Elem& x, const Elem& y) {
    if (x.n != y.n) return x.n < y.n ? -1 : 1;
    if (x.r != y.r) return x.r < y.r ? -1 : 1;
    if (x.lamps != y.lamps) return x.lamps < y.lamps ? -1 : 1;
    auto cmp_child = [](const std::shared_ptr<const Elem>& p, const std::shared_ptr<const Elem>& q) {
        if (!p && !q) return 0;
        if (!p) return -1;
        if (!q) return 1;
        return elem_cmp(*p, *q);
    };
    if (int c = cmp_child(x.a, y.a); c != 0) return c;
    return cmp_child(x.b, y.b);
}

inline bool operator==(const Elem& x, const Elem& y) { return elem_cmp(x, y) == 0; }
inline bool operator!=(const Elem& x, const Elem& y) { return elem_cmp(x, y) != 0; }
inline bool elem_less(const Elem& x, const Elem& y) { return elem_cmp(x, y) < 0; }

struct ElemLess {
    bool operator()(const Elem& x, const Elem& y) const { return elem_cmp(x, y) < 0; }
};

inline std::size_t elem_hash(const Elem& e) {
    std::size_t h = std::hash<long long>()(e.n);
    hash_mix(h, static_cast<std::size_t>(e.r));
    for (const auto& [p, v] : e.lamps) {
        hash_mix(h, std::hash<long long>()(p));
        hash_mix(h, static_cast<std::size_t>(v));
    }
    if (e.a) hash_mix(h, elem_hash(*e.a));
    if (e.b) hash_mix(h, elem_hash(*e.b) ^ 0x517cc1b727220a95ULL);
    return h;
}

struct ElemHash {
    std::size_t operator()(const Elem& e) const { return elem_hash(e); }
};

using ElemSet = std::unordered_set<Elem, ElemHash>;
template <class V>
using ElemMap = std::unordered_map<Elem, V, ElemHash>;

// ---- descriptors ---------------------------------------------------------

struct GroupDesc;
using GroupPtr = std::shared_ptr<const GroupDesc>;

struct GroupDesc {
    enum class Kind { integers, finite_table, dihedral, product, lamplighter };
    enum class ExtRule { none, left_factor, shift, parity };

    Kind kind = Kind::integers;

    // finite_table
    std::vector<std::vector<int>> table;
    std::vector<std::string> names;
    int identity_index = 0;
    std::vector<int> inverse_of;  // filled by finalize_group

    // product
    GroupPtr left, right;

    // lamplighter
    GroupPtr base;

    // word-metric generators; symmetric-closed and sorted by finalize_group
    std::vector<Elem> generators;

    // extension structure (optional)
    ExtRule ext_rule = ExtRule::none;
    GroupPtr quotient;  // filled by finalize_group when ext_rule != none
};

inline Elem group_identity(const GroupDesc& d) {
    switch (d.kind) {
        case GroupDesc::Kind::integers: return Elem::of_int(0);
        case GroupDesc::Kind::finite_table: return Elem::of_index(d.identity_index);
        case GroupDesc::Kind::dihedral: return Elem::dihedral(0, 0);
        case GroupDesc::Kind::product:
            return Elem::pair(group_identity(*d.left), group_identity(*d.right));
        case GroupDesc::Kind::lamplighter: return Elem::lamp_shift({}, 0);
    }
    fail(ErrKind::internal, "unknown group kind");
}

inline Elem group_mul(const GroupDesc& d, const Elem& x, const Elem& y) {
    switch (d.kind) {
        case GroupDesc::Kind::integers: return Elem::of_int(x.n + y.n);
        case GroupDesc::Kind::finite_table: {
            auto i = static_cast<std::size_t>(x.n), j = static_cast<std::size_t>(y.n);
            if (i >= d.table.size() || j >= d.table.size())
                fail(ErrKind::config, "finite-table element index out of range");
            return Elem::of_index(d.table[i][j]);
        }
        case GroupDesc::Kind::dihedral:
            return Elem::dihedral(x.n + (x.r ? -y.n : y.n), (x.r + y.r) & 1);
        case GroupDesc::Kind::product:
            return Elem::pair(group_mul(*d.left, *x.a, *y.a), group_mul(*d.right, *x.b, *y.b));
        case GroupDesc::Kind::lamplighter: {
            // (f, m)(g, n) = (f * shift_m g, m + n); lamp of g at p lands at p + m.
            const GroupDesc& B = *d.base;
            std::vector<std::pair<long long, int>> out;
            out.reserve(x.lamps.size() + y.lamps.size());
            std::size_t i = 0, j = 0;
            while (i < x.lamps.size() || j < y.lamps.size()) {
                long long px = i < x.lamps.size() ? x.lamps[i].first : INT64_MAX;
                long long py = j < y.lamps.size() ? y.lamps[j].first + x.n : INT64_MAX;
                if (px < py) {
                    out.push_back(x.lamps[i++]);
                } else if (py < px) {
                    out.emplace_back(py, y.lamps[j++].second);
                } else {
                    int v = B.table[static_cast<std::size_t>(x.lamps[i].second)]
                                   [static_cast<std::size_t>(y.lamps[j].second)];
                    if (v != B.identity_index) out.emplace_back(px, v);
                    ++i, ++j;
                }
            }
            return Elem::lamp_shift(std::move(out), x.n + y.n);
        }
    }
    fail(ErrKind::internal, "unknown group kind");
}

inline Elem group_inv(const GroupDesc& d, const Elem& x) {
    switch (d.kind) {
        case GroupDesc::Kind::integers: return Elem::of_int(-x.n);
        case GroupDesc::Kind::finite_table: {
            auto i = static_cast<std::size_t>(x.n);
            if (i >= d.inverse_of.size())
                fail(ErrKind::config, "finite-table element index out of range");
            return Elem::of_index(d.inverse_of[i]);
        }
        case GroupDesc::Kind::dihedral: return Elem::dihedral(x.r ? x.n : -x.n, x.r);
        case GroupDesc::Kind::product:
            return Elem::pair(group_inv(*d.left, *x.a), group_inv(*d.right, *x.b));
        case GroupDesc::Kind::lamplighter: {
            const GroupDesc& B = *d.base;
            std::vector<std::pair<long long, int>> out;
            out.reserve(x.lamps.size());
            for (const auto& [p, v] : x.lamps)
                out.emplace_back(p - x.n, B.inverse_of[static_cast<std::size_t>(v)]);
            std::sort(out.begin(), out.end());
            return Elem::lamp_shift(std::move(out), -x.n);
        }
    }
    fail(ErrKind::internal, "unknown group kind");
}

inline std::string elem_str(const GroupDesc& d, const Elem& x) {
    switch (d.kind) {
        case GroupDesc::Kind::integers: return std::to_string(x.n);
        case GroupDesc::Kind::finite_table: {
            auto i = static_cast<std::size_t>(x.n);
            if (i < d.names.size() && !d.names[i].empty()) return d.names[i];
            return "g" + std::to_string(x.n);
        }
        case GroupDesc::Kind::dihedral: {
            if (x.n == 0 && x.r == 0) return "e";
            std::string s;
            if (x.n != 0) s += "s^" + std::to_string(x.n);
            if (x.r) s += (s.empty() ? "t" : " t");
            return s;
        }
        case GroupDesc::Kind::product:
            return "(" + elem_str(*d.left, *x.a) + ", " + elem_str(*d.right, *x.b) + ")";
        case GroupDesc::Kind::lamplighter: {
            std::string s = "(lamps{";
            for (std::size_t i = 0; i < x.lamps.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(x.lamps[i].first) + ":" +
                     elem_str(*d.base, Elem::of_index(x.lamps[i].second));
            }
            s += "}, shift " + std::to_string(x.n) + ")";
            return s;
        }
    }
    fail(ErrKind::internal, "unknown group kind");
}

// ---- validation / finalization -------------------------------------------

namespace detail {

inline void validate_finite_table(GroupDesc& d) {
    const std::size_t k = d.table.size();
    require(k > 0, ErrKind::config, "finite-table group: empty multiplication table");
    require(k <= 256, ErrKind::cap, "finite-table group: table larger than 256 not supported");
    for (const auto& row : d.table) {
        require(row.size() == k, ErrKind::config, "finite-table group: table is not square");
        for (int v : row)
            require(v >= 0 && static_cast<std::size_t>(v) < k, ErrKind::config,
                    "finite-table group: table entry out of range");
    }
    require(d.identity_index >= 0 && static_cast<std::size_t>(d.identity_index) < k,
            ErrKind::config, "finite-table group: identity index out of range");
    for (std::size_t i = 0; i < k; ++i) {
        if (d.table[static_cast<std::size_t>(d.identity_index)][i] != static_cast<int>(i) ||
            d.table[i][static_cast<std::size_t>(d.identity_index)] != static_cast<int>(i))
            fail(ErrKind::config,
                 "finite-table group: identity law fails at index " + std::to_string(i));
    }
    // exhaustive associativity (k <= 256 so at most 2^24 products)
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                auto t1 = d.table[static_cast<std::size_t>(d.table[i][j])][l];
                auto t2 = d.table[i][static_cast<std::size_t>(d.table[j][l])];
                if (t1 != t2)
                    fail(ErrKind::config,
                         "finite-table group: associativity fails at (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(l) + ")");
            }
    d.inverse_of.assign(k, -1);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            if (d.table[i][j] == d.identity_index && d.table[j][i] == d.identity_index) {
                d.inverse_of[i] = static_cast<int>(j);
                break;
            }
        if (d.inverse_of[i] < 0)
            fail(ErrKind::config, "finite-table group: no inverse for index " + std::to_string(i));
    }
    if (d.names.empty())
        for (std::size_t i = 0; i < k; ++i) d.names.push_back("g" + std::to_string(i));
    require(d.names.size() == k, ErrKind::config, "finite-table group: names/table size mismatch");
}

inline std::vector<Elem> default_generators(const GroupDesc& d) {
    switch (d.kind) {
        case GroupDesc::Kind::integers: return {Elem::of_int(1), Elem::of_int(-1)};
        case GroupDesc::Kind::finite_table: {
            std::vector<Elem> g;
            for (std::size_t i = 0; i < d.table.size(); ++i)
                if (static_cast<int>(i) != d.identity_index)
                    g.push_back(Elem::of_index(static_cast<int>(i)));
            return g;
        }
        case GroupDesc::Kind::dihedral:
            return {Elem::dihedral(1, 0), Elem::dihedral(-1, 0), Elem::dihedral(0, 1)};
        case GroupDesc::Kind::product: {
            std::vector<Elem> g;
            for (const Elem& l : d.left->generators)
                g.push_back(Elem::pair(l, group_identity(*d.right)));
            for (const Elem& r : d.right->generators)
                g.push_back(Elem::pair(group_identity(*d.left), r));
            return g;
        }
        case GroupDesc::Kind::lamplighter: {
            std::vector<Elem> g = {Elem::lamp_shift({}, 1), Elem::lamp_shift({}, -1)};
            for (std::size_t i = 0; i < d.base->table.size(); ++i)
                if (static_cast<int>(i) != d.base->identity_index)
                    g.push_back(Elem::lamp_shift({{0, static_cast<int>(i)}}, 0));
            return g;
        }
    }
    fail(ErrKind::internal, "unknown group kind");
}

}  // namespace detail

// Validates the descriptor tree, fills inverse tables, installs default
// generators when none are given, symmetric-closes and sorts the generator
// list, and derives the quotient descriptor for the extension rule.
inline void finalize_group(GroupDesc& d) {
    switch (d.kind) {
        case GroupDesc::Kind::finite_table: detail::validate_finite_table(d); break;
        case GroupDesc::Kind::product:
            require(d.left && d.right, ErrKind::config, "product group: missing factor");
            break;
        case GroupDesc::Kind::lamplighter:
            require(d.base && d.base->kind == GroupDesc::Kind::finite_table, ErrKind::config,
                    "lamplighter group: base must be a finite-table group");
            break;
        default: break;
    }
    if (d.generators.empty()) d.generators = detail::default_generators(d);
    {
        std::vector<Elem> closed = d.generators;
        for (const Elem& g : d.generators) closed.push_back(group_inv(d, g));
        std::sort(closed.begin(), closed.end(), ElemLess{});
        closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
        // the identity is not a generator
        Elem e = group_identity(d);
        closed.erase(std::remove(closed.begin(), closed.end(), e), closed.end());
        // only the one-element group is generated by nothing
        bool trivial = d.kind == GroupDesc::Kind::finite_table && d.table.size() == 1;
        require(!closed.empty() || trivial, ErrKind::config, "group: empty generator set");
        d.generators = std::move(closed);
    }
    switch (d.ext_rule) {
        case GroupDesc::ExtRule::none: break;
        case GroupDesc::ExtRule::left_factor:
            require(d.kind == GroupDesc::Kind::product, ErrKind::config,
                    "extension rule 'left-factor' requires a direct product");
            d.quotient = d.left;
            break;
        case GroupDesc::ExtRule::shift: {
            require(d.kind == GroupDesc::Kind::lamplighter, ErrKind::config,
                    "extension rule 'shift' requires a lamplighter group");
            auto q = std::make_shared<GroupDesc>();
            q->kind = GroupDesc::Kind::integers;
            finalize_group(*q);
            d.quotient = q;
            break;
        }
        case GroupDesc::ExtRule::parity: {
            require(d.kind == GroupDesc::Kind::dihedral, ErrKind::config,
                    "extension rule 'parity' requires the dihedral group");
            auto q = std::make_shared<GroupDesc>();
            q->kind = GroupDesc::Kind::finite_table;
            q->table = {{0, 1}, {1, 0}};
            q->names = {"e", "u"};
            q->identity_index = 0;
            finalize_group(*q);
            d.quotient = q;
            break;
        }
    }
}

// ---- factories ------------------------------------------------------------

inline GroupPtr make_integers() {
    auto d = std::make_shared<GroupDesc>();
    d->kind = GroupDesc::Kind::integers;
    finalize_group(*d);
    return d;
}

inline GroupPtr make_dihedral(bool with_parity_extension = true) {
    auto d = std::make_shared<GroupDesc>();
    d->kind = GroupDesc::Kind::dihedral;
    if (with_parity_extension) d->ext_rule = GroupDesc::ExtRule::parity;
    finalize_group(*d);
    return d;
}

inline GroupPtr make_table_group(std::vector<std::vector<int>> table,
                                 std::vector<std::string> names = {}, int identity = 0) {
    auto d = std::make_shared<GroupDesc>();
    d->kind = GroupDesc::Kind::finite_table;
    d->table = std::move(table);
    d->names = std::move(names);
    d->identity_index = identity;
    finalize_group(*d);
    return d;
}

inline GroupPtr make_cyclic(int k, const std::string& prefix = "c") {
    std::vector<std::vector<int>> t(static_cast<std::size_t>(k),
                                    std::vector<int>(static_cast<std::size_t>(k)));
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) {
        names.push_back(i == 0 ? "e" : prefix + std::to_string(i));
        for (int j = 0; j < k; ++j) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % k;
    }
    return make_table_group(std::move(t), std::move(names));
}

inline GroupPtr make_z2() { return make_table_group({{0, 1}, {1, 0}}, {"e", "u"}); }

inline GroupPtr make_product(GroupPtr left, GroupPtr right, bool with_left_factor_extension = true) {
    auto d = std::make_shared<GroupDesc>();
    d->kind = GroupDesc::Kind::product;
    d->left = std::move(left);
    d->right = std::move(right);
    if (with_left_factor_extension) d->ext_rule = GroupDesc::ExtRule::left_factor;
    finalize_group(*d);
    return d;
}

inline GroupPtr make_lamplighter(GroupPtr base, bool with_shift_extension = true) {
    auto d = std::make_shared<GroupDesc>();
    d->kind = GroupDesc::Kind::lamplighter;
    d->base = std::move(base);
    if (with_shift_extension) d->ext_rule = GroupDesc::ExtRule::shift;
    finalize_group(*d);
    return d;
}

// ---- extension projection / section ---------------------------------------

inline const GroupDesc& quotient_desc(const GroupDesc& d) {
    require(d.ext_rule != GroupDesc::ExtRule::none && d.quotient, ErrKind::precondition,
            "group has no extension structure");
    return *d.quotient;
}

inline Elem project_to_quotient(const GroupDesc& d, const Elem& g) {
    switch (d.ext_rule) {
        case GroupDesc::ExtRule::left_factor: return *g.a;
        case GroupDesc::ExtRule::shift: return Elem::of_int(g.n);
        case GroupDesc::ExtRule::parity: return Elem::of_index(g.r);
        case GroupDesc::ExtRule::none: break;
    }
    fail(ErrKind::precondition, "group has no extension structure");
}

// Deterministic section: identity second coordinate / zero lamps / zero
// translation, so lifts compose predictably in tests and reports.
inline Elem lift_from_quotient(const GroupDesc& d, const Elem& q) {
    switch (d.ext_rule) {
        case GroupDesc::ExtRule::left_factor: return Elem::pair(q, group_identity(*d.right));
        case GroupDesc::ExtRule::shift: return Elem::lamp_shift({}, q.n);
        case GroupDesc::ExtRule::parity: return Elem::dihedral(0, static_cast<int>(q.n));
        case GroupDesc::ExtRule::none: break;
    }
    fail(ErrKind::precondition, "group has no extension structure");
}

// Elements of the fiber subgroup (kernel of the projection) enumerated for
// finite fibers; errors for the lamplighter whose fiber is infinite.
inline std::vector<Elem> fiber_elements(const GroupDesc& d) {
    switch (d.ext_rule) {
        case GroupDesc::ExtRule::left_factor: {
            require(d.right->kind == GroupDesc::Kind::finite_table, ErrKind::precondition,
                    "fiber enumeration requires a finite right factor");
            std::vector<Elem> out;
            for (std::size_t i = 0; i < d.right->table.size(); ++i)
                out.push_back(Elem::pair(group_identity(*d.left), Elem::of_index(static_cast<int>(i))));
            return out;
        }
        case GroupDesc::ExtRule::parity: fail(ErrKind::precondition,
                                              "dihedral parity fiber (translations) is infinite");
        case GroupDesc::ExtRule::shift:
            fail(ErrKind::precondition, "lamplighter shift fiber (lamp subgroup) is infinite");
        case GroupDesc::ExtRule::none: break;
    }
    fail(ErrKind::precondition, "group has no extension structure");
}

// ---- balls ----------------------------------------------------------------

struct Ball {
    std::vector<Elem> elems;      // BFS layer by layer, each layer sorted canonically
    std::vector<int> radius_of;   // word length of elems[i] w.r.t. the generators used
    std::vector<int> layer_start; // layer_start[r] = first index at radius r; size radius+2

    int count_within(int radius) const {
        if (radius + 1 >= static_cast<int>(layer_start.size()))
            return static_cast<int>(elems.size());
        return layer_start[static_cast<std::size_t>(radius) + 1];
    }
};

inline Ball group_ball(const GroupDesc& d, int radius, const std::vector<Elem>* gens_opt = nullptr) {
    require(radius >= 0, ErrKind::config, "ball radius must be >= 0");
    const std::vector<Elem>& gens = gens_opt ? *gens_opt : d.generators;
    Ball out;
    ElemSet seen;
    std::vector<Elem> frontier = {group_identity(d)};
    seen.insert(frontier[0]);
    out.layer_start.push_back(0);
    for (int r = 0; r <= radius && !frontier.empty(); ++r) {
        std::sort(frontier.begin(), frontier.end(), ElemLess{});
        for (const Elem& g : frontier) {
            out.elems.push_back(g);
            out.radius_of.push_back(r);
        }
        out.layer_start.push_back(static_cast<int>(out.elems.size()));
        if (r == radius) break;
        std::vector<Elem> next;
        for (const Elem& g : frontier)
            for (const Elem& s : gens) {
                Elem h = group_mul(d, g, s);
                if (seen.insert(h).second) next.push_back(h);
            }
        if (static_cast<long long>(seen.size()) > kEnumerationCap)
            fail(ErrKind::cap,
                 "ball enumeration exceeded the cap of " + std::to_string(kEnumerationCap));
        frontier = std::move(next);
    }
    while (static_cast<int>(out.layer_start.size()) < radius + 2)
        out.layer_start.push_back(static_cast<int>(out.elems.size()));
    return out;
}

}  // namespace castleworks
