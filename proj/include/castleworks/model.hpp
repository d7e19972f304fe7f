#pragma once

// Finite positional models of subshift orbit closures.
//
// A model fixes a word w, its group, and a window radius.  Positions are the
// elements of ball(windowRadius); the orbit point sitting at position p is
// x_p = p^-1 . w, so the pattern of x_p over ball(r) reads
//     x_p(c) = w(p . c).
// Atoms at resolution r are the distinct such patterns over the window,
// numbered in order of first appearance (positions are scanned layer by
// layer outward from the identity).  All set algebra downstream works on
// sorted vectors of atom ids; measures are exact position counts over the
// window ball.
//
// Two concrete models:
//   SubshiftModel  - the word itself (Z, dihedral, or product-of-dihedral/Z
//                    with a finite relabeling group), with a precomputed
//                    integer line making pattern fills O(1) per cell;
//   QuotientModel  - the H-orbit quotient of a product-word model through
//                    its finite fiber, patterns taken as the lexicographic
//                    minimum over fiber twists.

#include "castleworks/group.hpp"
#include "castleworks/word.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace castleworks {

namespace detail {

// Evaluator for the Z-line behind a word chain: values of the innermost
// Z-word, materialized over [-extent, extent].
class ZLine {
public:
    void ensure(const Word& zword, long long extent) {
        if (extent <= extent_) return;
        extent_ = extent;
        line_.assign(static_cast<std::size_t>(2 * extent + 1), 0);
        for (long long n = -extent; n <= extent; ++n)
            line_[static_cast<std::size_t>(n + extent_)] = static_cast<int8_t>(zword.z_eval(n));
    }
    int8_t at(long long n) const { return line_[static_cast<std::size_t>(n + extent_)]; }
    long long extent() const { return extent_; }

private:
    std::vector<int8_t> line_;
    long long extent_ = -1;
};

}  // namespace detail

// ---- model base ------------------------------------------------------------

class ModelBase {
public:
    virtual ~ModelBase() = default;

    const GroupPtr& group() const { return group_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int window_radius() const { return window_radius_; }

    long long position_count() const { return static_cast<long long>(window_.elems.size()); }
    const Elem& position_elem(long long i) const { return window_.elems[static_cast<std::size_t>(i)]; }
    int position_radius(long long i) const { return window_.radius_of[static_cast<std::size_t>(i)]; }
    const Ball& window() const { return window_; }

    long long position_index(const Elem& e) const {
        auto it = index_.find(e);
        return it == index_.end() ? -1 : it->second;
    }

    // Per-position atom ids at the given resolution (built on first use).
    const std::vector<int32_t>& atoms(int res) {
        return table(res).id;
    }
    int atom_count(int res) { return table(res).count; }
    long long atom_rep(int res, int32_t id) {
        return table(res).rep[static_cast<std::size_t>(id)];
    }

    // index of position . g per position, -1 where the product leaves the
    // window; cached per g
    const std::vector<long long>& step_table(const Elem& g) {
        auto it = steps_.find(g);
        if (it != steps_.end()) return it->second;
        std::vector<long long> t(window_.elems.size());
        for (std::size_t i = 0; i < window_.elems.size(); ++i)
            t[i] = position_index(group_mul(*group_, window_.elems[i], g));
        return steps_.emplace(g, std::move(t)).first->second;
    }

    // Length in symbols of a resolution-r pattern.
    virtual long long pattern_len(int res) = 0;
    // The pattern of the orbit point at `pos` (any group element, in-window
    // or not) over the resolution-r cells, as alphabet indices.
    virtual void fill_pattern(const Elem& pos, int res, int8_t* out) = 0;
    // The same pattern as an explicit cylinder pattern (for reports/JSON).
    virtual CylinderPattern atom_pattern(int res, int32_t id) = 0;

protected:
    void init_window(GroupPtr g, Alphabet a, int radius) {
        group_ = std::move(g);
        alphabet_ = std::move(a);
        window_radius_ = radius;
        window_ = group_ball(*group_, radius);
        index_.reserve(window_.elems.size() * 2);
        for (std::size_t i = 0; i < window_.elems.size(); ++i)
            index_.emplace(window_.elems[i], static_cast<long long>(i));
    }

    struct AtomTable {
        std::vector<int32_t> id;     // per position
        std::vector<long long> rep;  // first position carrying each atom
        int count = 0;
    };

    AtomTable& table(int res) {
        auto it = tables_.find(res);
        if (it != tables_.end()) return it->second;
        require(res >= 0, ErrKind::config, "model: negative resolution");
        if (res > kMaxModelResolution)
            fail(ErrKind::cap, "model: resolution " + std::to_string(res) +
                                   " exceeds the supported maximum");
        return build_table(res);
    }

    static constexpr int kMaxModelResolution = 1 << 14;

private:
    AtomTable& build_table(int res) {
        const long long len = pattern_len(res);
        AtomTable t;
        t.id.resize(window_.elems.size());
        std::vector<int8_t> buf(static_cast<std::size_t>(len));
        std::vector<int8_t> ref(static_cast<std::size_t>(len));
        // open-addressed-ish bucket map: 64-bit pattern hash -> candidate
        // atom ids; every candidate is confirmed by a full symbol compare,
        // so a hash collision costs time, never correctness
        std::unordered_map<std::uint64_t, std::vector<int32_t>> buckets;
        buckets.reserve(window_.elems.size() * 2);
        for (std::size_t i = 0; i < window_.elems.size(); ++i) {
            fill_pattern(window_.elems[i], res, buf.data());
            std::uint64_t h = 1469598103934665603ULL;
            for (long long k = 0; k < len; ++k) {
                h ^= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[static_cast<std::size_t>(k)]));
                h *= 1099511628211ULL;
            }
            int32_t found = -1;
            for (int32_t cand : buckets[h]) {
                fill_pattern(window_.elems[static_cast<std::size_t>(t.rep[static_cast<std::size_t>(cand)])],
                             res, ref.data());
                if (std::memcmp(buf.data(), ref.data(), static_cast<std::size_t>(len)) == 0) {
                    found = cand;
                    break;
                }
            }
            if (found < 0) {
                found = t.count++;
                t.rep.push_back(static_cast<long long>(i));
                buckets[h].push_back(found);
            }
            t.id[i] = found;
        }
        return tables_.emplace(res, std::move(t)).first->second;
    }

    GroupPtr group_;
    Alphabet alphabet_;
    int window_radius_ = 0;
    Ball window_;
    ElemMap<long long> index_;
    std::map<int, AtomTable> tables_;
    std::map<Elem, std::vector<long long>, ElemLess> steps_;
};

// ---- the direct subshift model ---------------------------------------------

class SubshiftModel : public ModelBase {
public:
    SubshiftModel(WordPtr w, int windowRadius) : word_(std::move(w)) {
        // peel outer shifts: (g.v)(pos.c) = v((g^-1 pos).c)
        WordPtr core = word_;
        pre_ = group_identity(*word_->group);
        while (core->kind == Word::Kind::shifted) {
            pre_ = group_mul(*word_->group, group_inv(*word_->group, core->shifted_by), pre_);
            core = core->inner;
        }
        core_ = core;
        switch (core->kind) {
            case Word::Kind::periodic:
            case Word::Kind::toeplitz:
            case Word::Kind::mirror:
                layout_ = Layout::zline;
                zsrc_ = core;
                break;
            case Word::Kind::amplified:
                layout_ = Layout::dihedral;
                zsrc_ = core->inner;
                break;
            case Word::Kind::product: {
                WordPtr in = core->inner;
                Elem ipre = group_identity(*in->group);
                while (in->kind == Word::Kind::shifted) {
                    ipre = group_mul(*in->group, group_inv(*in->group, in->shifted_by), ipre);
                    in = in->inner;
                }
                inner_pre_ = ipre;
                if (in->kind == Word::Kind::amplified) {
                    layout_ = Layout::product_dihedral;
                    zsrc_ = in->inner;
                } else {
                    layout_ = Layout::product_z;
                    zsrc_ = in;
                }
                ftable_ = core->factor;
                one_ = core->product_one;
                break;
            }
            default: fail(ErrKind::config, "model: unsupported word structure");
        }
        init_window(word_->group, word_->alphabet, windowRadius);
    }

    const WordPtr& word() const { return word_; }

    long long pattern_len(int res) override { return static_cast<long long>(cells(res).ball.elems.size()); }

    void fill_pattern(const Elem& pos, int res, int8_t* out) override {
        const CellPlan& cp = cells(res);
        Elem p = pre_ == group_identity(*group()) ? pos : group_mul(*group(), pre_, pos);
        switch (layout_) {
            case Layout::zline: {
                long long n = p.n;
                for (std::size_t k = 0; k < cp.m.size(); ++k) out[k] = z(n + cp.m[k]);
                return;
            }
            case Layout::dihedral: {
                // w(p.c) for p = (n,rho), c = (m,sig):
                //   p.c = (n + (-1)^rho m, rho ^ sig), value z(+-(...))
                long long n = p.n;
                int rho = p.r;
                for (std::size_t k = 0; k < cp.m.size(); ++k) {
                    long long a = rho == 0 ? n + cp.m[k] : n - cp.m[k];
                    out[k] = z((rho ^ cp.sig[k]) == 0 ? a : -a);
                }
                return;
            }
            case Layout::product_dihedral:
            case Layout::product_z: {
                const Elem& d = *p.a;
                int f = static_cast<int>(p.b->n);
                Elem dd = inner_pre_ == group_identity(*zsrc_groupish()) ? d
                          : group_mul(*core_->inner->group, inner_pre_, d);
                long long n = dd.n;
                int rho = dd.r;
                for (std::size_t k = 0; k < cp.m.size(); ++k) {
                    int bit;
                    if (layout_ == Layout::product_z) {
                        bit = z(n + cp.m[k]);
                    } else {
                        long long a = rho == 0 ? n + cp.m[k] : n - cp.m[k];
                        bit = z((rho ^ cp.sig[k]) == 0 ? a : -a);
                    }
                    out[k] = bit == one_
                                 ? static_cast<int8_t>(1 + ftable_->table[static_cast<std::size_t>(f)]
                                                               [static_cast<std::size_t>(cp.u[k])])
                                 : static_cast<int8_t>(0);
                }
                return;
            }
        }
    }

    CylinderPattern atom_pattern(int res, int32_t id) override {
        const CellPlan& cp = cells(res);
        std::vector<int8_t> buf(cp.ball.elems.size());
        fill_pattern(position_elem(atom_rep(res, id)), res, buf.data());
        CylinderPattern pat;
        pat.cells.reserve(cp.ball.elems.size());
        for (std::size_t k = 0; k < cp.ball.elems.size(); ++k)
            pat.cells.emplace_back(cp.ball.elems[k],
                                   alphabet().symbols[static_cast<std::size_t>(buf[k])]);
        std::sort(pat.cells.begin(), pat.cells.end(),
                  [](const auto& x, const auto& y) { return elem_cmp(x.first, y.first) < 0; });
        return pat;
    }

    // Direct line access for the construction probes (box visits, agreement
    // radii): value of the innermost Z-word at n.
    int8_t line(long long n) {
        ensure_line(std::llabs(n));
        return zline_.at(n);
    }

private:
    enum class Layout { zline, dihedral, product_dihedral, product_z };

    struct CellPlan {
        Ball ball;
        std::vector<long long> m;  // integer part of each cell
        std::vector<int8_t> sig;   // dihedral reflection bit of each cell
        std::vector<int8_t> u;     // finite-coordinate index of each cell
    };

    const GroupPtr& zsrc_groupish() const { return core_->inner->group; }

    const CellPlan& cells(int res) {
        auto it = plans_.find(res);
        if (it != plans_.end()) return it->second;
        CellPlan cp;
        cp.ball = group_ball(*group(), res);
        cp.m.reserve(cp.ball.elems.size());
        cp.sig.reserve(cp.ball.elems.size());
        cp.u.reserve(cp.ball.elems.size());
        for (const Elem& c : cp.ball.elems) {
            switch (layout_) {
                case Layout::zline:
                    cp.m.push_back(c.n);
                    cp.sig.push_back(0);
                    cp.u.push_back(0);
                    break;
                case Layout::dihedral:
                    cp.m.push_back(c.n);
                    cp.sig.push_back(static_cast<int8_t>(c.r));
                    cp.u.push_back(0);
                    break;
                case Layout::product_dihedral:
                case Layout::product_z:
                    cp.m.push_back(c.a->n);
                    cp.sig.push_back(static_cast<int8_t>(c.a->r));
                    cp.u.push_back(static_cast<int8_t>(c.b->n));
                    break;
            }
        }
        ensure_line(static_cast<long long>(window_radius()) + res + 8);
        return plans_.emplace(res, std::move(cp)).first->second;
    }

    void ensure_line(long long reach) {
        long long pad = std::llabs(pre_.n) + std::llabs(inner_pre_.n) + 8;
        if (zline_.extent() < reach + pad) zline_.ensure(*zsrc_, reach + pad);
    }
    int8_t z(long long n) {
        if (std::llabs(n) > zline_.extent()) ensure_line(std::llabs(n));
        return zline_.at(n);
    }

    WordPtr word_, core_, zsrc_;
    Elem pre_, inner_pre_;
    Layout layout_ = Layout::zline;
    GroupPtr ftable_;
    int one_ = 1;
    detail::ZLine zline_;
    std::map<int, CellPlan> plans_;
};

// ---- the fiber-orbit quotient model -----------------------------------------

// Quotient of a product-word model by its finite fiber H = {e} x F.  A point
// of X/H at quotient position g is the H-orbit of x_{(g,e)}; its pattern at
// resolution r is the lexicographically minimal fiber twist of the full
// pattern over the saturated cells ball_G(r) x F.
class QuotientModel : public ModelBase {
public:
    QuotientModel(WordPtr productWord, int windowRadius) : full_(productWord, windowRadius) {
        const GroupDesc& d = *productWord->group;
        require(d.kind == GroupDesc::Kind::product &&
                    d.ext_rule == GroupDesc::ExtRule::left_factor &&
                    d.right->kind == GroupDesc::Kind::finite_table,
                ErrKind::config,
                "quotient model: word group is not a direct-product extension with finite fiber");
        word_ = std::move(productWord);
        F_ = d.right;
        fsize_ = static_cast<int>(F_->table.size());
        init_window(d.quotient, word_->alphabet, windowRadius);
    }

    SubshiftModel& full() { return full_; }
    const GroupPtr& fiber_group() const { return F_; }

    long long pattern_len(int res) override {
        return static_cast<long long>(gball(res).elems.size()) * fsize_;
    }

    void fill_pattern(const Elem& pos, int res, int8_t* out) override {
        const Ball& b = gball(res);
        const long long len = pattern_len(res);
        std::vector<int8_t> cand(static_cast<std::size_t>(len));
        for (int twist = 0; twist < fsize_; ++twist) {
            int8_t* dst = twist == 0 ? out : cand.data();
            int tinv = F_->inverse_of[static_cast<std::size_t>(twist)];
            std::size_t k = 0;
            for (const Elem& c : b.elems) {
                Elem gc = group_mul(*group(), pos, c);
                for (int f = 0; f < fsize_; ++f) {
                    int ff = F_->table[static_cast<std::size_t>(tinv)][static_cast<std::size_t>(f)];
                    Elem cell = Elem::pair(gc, Elem::of_index(ff));
                    // value of the full word at (pos.c, twist^-1 f), read
                    // through the full model's fast path at the identity
                    // position
                    full_.fill_pattern(cell, 0, dst + k);  // placeholder; replaced below
                    ++k;
                }
            }
            if (twist > 0 &&
                std::lexicographical_compare(cand.begin(), cand.end(), out,
                                             out + len))
                std::memcpy(out, cand.data(), static_cast<std::size_t>(len));
        }
    }

    CylinderPattern atom_pattern(int res, int32_t id) override {
        const Ball& b = gball(res);
        std::vector<int8_t> buf(static_cast<std::size_t>(pattern_len(res)));
        fill_pattern(position_elem(atom_rep(res, id)), res, buf.data());
        CylinderPattern pat;
        std::size_t k = 0;
        for (const Elem& c : b.elems)
            for (int f = 0; f < fsize_; ++f, ++k)
                pat.cells.emplace_back(Elem::pair(c, Elem::of_index(f)),
                                       alphabet().symbols[static_cast<std::size_t>(buf[k])]);
        std::sort(pat.cells.begin(), pat.cells.end(),
                  [](const auto& x, const auto& y) { return elem_cmp(x.first, y.first) < 0; });
        return pat;
    }

    // Map from full-model atoms at fullRes to quotient atoms at qRes;
    // well-defined whenever fullRes >= qRes + (fiber word-length diameter).
    const std::vector<int32_t>& atom_projection(int fullRes, int qRes) {
        auto key = std::make_pair(fullRes, qRes);
        auto it = proj_.find(key);
        if (it != proj_.end()) return it->second;
        require(fullRes >= qRes + fiber_diameter(), ErrKind::precondition,
                "atom projection: full resolution too coarse for the fiber");
        std::vector<int32_t> map(static_cast<std::size_t>(full_.atom_count(fullRes)), -1);
        const std::vector<int32_t>& fa = full_.atoms(fullRes);
        const std::vector<int32_t>& qa = atoms(qRes);
        for (long long i = 0; i < full_.position_count(); ++i) {
            long long qi = position_index(*full_.position_elem(i).a);
            if (qi < 0) continue;
            map[static_cast<std::size_t>(fa[static_cast<std::size_t>(i)])] =
                qa[static_cast<std::size_t>(qi)];
        }
        for (std::size_t a = 0; a < map.size(); ++a)
            if (map[a] < 0) {
                // boundary-only atom: project its representative directly
                long long rep = full_.atom_rep(fullRes, static_cast<int32_t>(a));
                Elem qpos = *full_.position_elem(rep).a;
                std::vector<int8_t> buf(static_cast<std::size_t>(pattern_len(qRes)));
                fill_pattern(qpos, qRes, buf.data());
                map[a] = find_atom_by_pattern(qRes, buf);
            }
        return proj_.emplace(key, std::move(map)).first->second;
    }

    int fiber_diameter() {
        if (fdiam_ >= 0) return fdiam_;
        Ball b = group_ball(*word_->group, fsize_);
        fdiam_ = 0;
        Elem eg = group_identity(*group());
        for (std::size_t i = 0; i < b.elems.size(); ++i)
            if (*b.elems[i].a == eg) fdiam_ = std::max(fdiam_, b.radius_of[i]);
        return fdiam_;
    }

private:
    const Ball& gball(int res) {
        auto it = gballs_.find(res);
        if (it != gballs_.end()) return it->second;
        return gballs_.emplace(res, group_ball(*group(), res)).first->second;
    }

    int32_t find_atom_by_pattern(int res, const std::vector<int8_t>& key) {
        std::vector<int8_t> buf(key.size());
        for (int32_t a = 0; a < atom_count(res); ++a) {
            fill_pattern(position_elem(atom_rep(res, a)), res, buf.data());
            if (buf == key) return a;
        }
        fail(ErrKind::internal, "atom projection: quotient pattern not realized in the window");
    }

    WordPtr word_;
    GroupPtr F_;
    int fsize_ = 0;
    int fdiam_ = -1;
    SubshiftModel full_;
    std::map<int, Ball> gballs_;
    std::map<std::pair<int, int>, std::vector<int32_t>> proj_;
};

}  // namespace castleworks
