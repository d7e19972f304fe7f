#pragma once

// Lazily evaluable configurations ("words") over the supported groups.
//
// A word is an immutable evaluation closure: periodic and Toeplitz words over
// Z, the mirror of a Z-word, the amplification of a Z-word to the infinite
// dihedral group, the product-relabeling of a binary word over a finite
// group, and left shifts of any of these.  Evaluation is pure and total on
// the word's group; nothing is memoized.

#include "castleworks/group.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace castleworks {

// ---- alphabet -------------------------------------------------------------

struct Alphabet {
    std::vector<std::string> symbols;  // ordered, distinct, nonempty

    int index_of(const std::string& tok) const {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i] == tok) return static_cast<int>(i);
        return -1;
    }
};

inline Alphabet make_alphabet(std::vector<std::string> symbols) {
    require(!symbols.empty(), ErrKind::config, "alphabet: no symbols");
    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (std::size_t j = i + 1; j < symbols.size(); ++j)
            if (symbols[i] == symbols[j])
                fail(ErrKind::config, "alphabet: duplicate symbol '" + symbols[i] + "'");
    Alphabet a;
    a.symbols = std::move(symbols);
    return a;
}

// ---- word generators ------------------------------------------------------

// One residue-class assignment of a Toeplitz specification: positions
// congruent to `residue` mod `period` carry the symbol, unless an earlier
// stage already claimed them.
struct Stage {
    long long period = 1;
    long long residue = 0;
    int sym = 0;  // alphabet index
};

class Word;
using WordPtr = std::shared_ptr<const Word>;

namespace detail {

inline long long floor_mod(long long n, long long p) {
    long long m = n % p;
    return m < 0 ? m + p : m;
}

// Structural membership test: does this element have the shape the
// descriptor's kind expects?  Cheap, recursive through products.
inline bool elem_shape_ok(const GroupDesc& d, const Elem& e) {
    switch (d.kind) {
        case GroupDesc::Kind::integers:
            return e.r == 0 && e.lamps.empty() && !e.a && !e.b;
        case GroupDesc::Kind::finite_table:
            return e.r == 0 && e.lamps.empty() && !e.a && !e.b && e.n >= 0 &&
                   e.n < static_cast<long long>(d.table.size());
        case GroupDesc::Kind::dihedral:
            return (e.r == 0 || e.r == 1) && e.lamps.empty() && !e.a && !e.b;
        case GroupDesc::Kind::product:
            return e.n == 0 && e.r == 0 && e.lamps.empty() && e.a && e.b &&
                   elem_shape_ok(*d.left, *e.a) && elem_shape_ok(*d.right, *e.b);
        case GroupDesc::Kind::lamplighter:
            if (e.r != 0 || e.a || e.b) return false;
            for (const auto& [pos, v] : e.lamps) {
                (void)pos;
                if (v <= 0 || v >= static_cast<int>(d.base->table.size())) return false;
            }
            return true;
    }
    return false;
}

}  // namespace detail

class Word {
public:
    enum class Kind { periodic, toeplitz, mirror, amplified, product, shifted };

    Kind kind = Kind::periodic;
    GroupPtr group;  // the domain of evaluation
    Alphabet alphabet;

    std::vector<int> cycle;     // periodic: alphabet indices, repeated over Z
    std::vector<Stage> stages;  // toeplitz: earliest stage wins
    WordPtr inner;              // mirror / amplified / product / shifted
    Elem shifted_by;            // shifted: the acting element g
    GroupPtr factor;            // product: the finite group F
    int product_one = 1;        // product: inner alphabet index spelling "1"

    // Fast evaluation for the Z-domain words (periodic, toeplitz, mirror,
    // and shifts thereof); callers on other domains use eval_idx.
    int z_eval(long long n) const {
        switch (kind) {
            case Kind::periodic:
                return cycle[detail::floor_mod(n, static_cast<long long>(cycle.size()))];
            case Kind::toeplitz:
                for (const Stage& st : stages)
                    if (detail::floor_mod(n, st.period) == st.residue) return st.sym;
                fail(ErrKind::internal, "toeplitz: unassigned position survived validation");
            case Kind::mirror: return inner->z_eval(-n);
            case Kind::shifted: return inner->z_eval(n - shifted_by.n);
            default: fail(ErrKind::internal, "z_eval on a non-Z word");
        }
    }

    int eval_idx(const Elem& g) const {
        if (!detail::elem_shape_ok(*group, g))
            fail(ErrKind::config, "word: element " + elem_str(*group, g) +
                                      " does not belong to the word's group");
        return eval_unchecked(g);
    }

    const std::string& eval(const Elem& g) const { return alphabet.symbols[eval_idx(g)]; }

    int eval_unchecked(const Elem& g) const {
        switch (kind) {
            case Kind::periodic:
            case Kind::toeplitz:
            case Kind::mirror: return z_eval(g.n);
            case Kind::amplified:
                // wh(s^n) = w(n), wh(s^n t) = w(-n)
                return inner->z_eval(g.r == 0 ? g.n : -g.n);
            case Kind::product: {
                // x0((g,s)) = a_s when the inner word reads '1' at g, else '0'
                int bit = inner->eval_unchecked(*g.a);
                return bit == product_one ? 1 + static_cast<int>(g.b->n) : 0;
            }
            case Kind::shifted: {
                if (group->kind == GroupDesc::Kind::integers)
                    return inner->z_eval(g.n - shifted_by.n);
                Elem h = group_mul(*group, group_inv(*group, shifted_by), g);
                return inner->eval_unchecked(h);
            }
        }
        fail(ErrKind::internal, "unknown word kind");
    }
};

// ---- constructors ---------------------------------------------------------

namespace detail {

// Alphabet from tokens in order of first appearance.
inline Alphabet collect_alphabet(const std::vector<std::string>& toks) {
    std::vector<std::string> syms;
    for (const std::string& t : toks)
        if (std::find(syms.begin(), syms.end(), t) == syms.end()) syms.push_back(t);
    return make_alphabet(std::move(syms));
}

}  // namespace detail

inline WordPtr make_periodic(const std::vector<std::string>& cycle_tokens) {
    require(!cycle_tokens.empty(), ErrKind::config, "periodic word: empty cycle");
    auto w = std::make_shared<Word>();
    w->kind = Word::Kind::periodic;
    w->group = make_integers();
    w->alphabet = detail::collect_alphabet(cycle_tokens);
    for (const std::string& t : cycle_tokens) w->cycle.push_back(w->alphabet.index_of(t));
    return w;
}

// Convenience: "01" -> cycle {"0","1"}.
inline WordPtr make_periodic(const std::string& cycle_chars) {
    std::vector<std::string> toks;
    for (char c : cycle_chars) toks.emplace_back(1, c);
    return make_periodic(toks);
}

// Toeplitz word from (period, residue, token) stages.  Earliest applicable
// stage wins.  Periods must divide their successors, and the stages must
// jointly assign every integer; both are validated here, completeness by
// scanning all residues modulo the final period and reporting the unassigned
// position nearest to zero (ties broken toward the negative side).
inline WordPtr make_toeplitz(const std::vector<std::tuple<long long, long long, std::string>>& spec) {
    require(!spec.empty(), ErrKind::config, "toeplitz word: no stages");
    std::vector<std::string> toks;
    for (const auto& [p, r, tok] : spec) {
        if (p <= 0) fail(ErrKind::config, "toeplitz word: nonpositive period");
        if (r < 0 || r >= p)
            fail(ErrKind::config, "toeplitz word: residue " + std::to_string(r) +
                                      " outside [0," + std::to_string(p) + ")");
        toks.push_back(tok);
    }
    for (std::size_t k = 0; k + 1 < spec.size(); ++k) {
        long long p = std::get<0>(spec[k]), q = std::get<0>(spec[k + 1]);
        if (q % p != 0)
            fail(ErrKind::config, "toeplitz word: period " + std::to_string(p) +
                                      " does not divide its successor " + std::to_string(q));
    }
    auto w = std::make_shared<Word>();
    w->kind = Word::Kind::toeplitz;
    w->group = make_integers();
    w->alphabet = detail::collect_alphabet(toks);
    for (const auto& [p, r, tok] : spec)
        w->stages.push_back(Stage{p, r, w->alphabet.index_of(tok)});

    // completeness: with dividing periods, coverage of the residues modulo
    // the last period is coverage of all of Z
    long long pmax = w->stages.back().period;
    require(pmax <= (1LL << 22), ErrKind::cap, "toeplitz word: validation window too large");
    std::vector<char> covered(static_cast<std::size_t>(pmax), 0);
    for (const Stage& st : w->stages)
        for (long long x = st.residue; x < pmax; x += st.period)
            covered[static_cast<std::size_t>(x)] = 1;
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        for (long long n = 0;; ++n) {
            for (long long cand : {-n, n}) {
                if (!covered[static_cast<std::size_t>(detail::floor_mod(cand, pmax))])
                    fail(ErrKind::config,
                         "toeplitz word: stages leave position " + std::to_string(cand) +
                             " unassigned (smallest uncovered |n|)");
            }
        }
    }
    return w;
}

// The period-doubling word: stages (2^k, 2^(k-1)-1) for k = 1..K alternating
// '0','1', closed off by the terminal stage (2^K, 2^K-1).
inline WordPtr make_period_doubling(int K = 15) {
    require(K >= 1 && K <= 21, ErrKind::config, "period-doubling depth out of range");
    std::vector<std::tuple<long long, long long, std::string>> spec;
    auto sym = [](int k) { return std::string(k % 2 == 1 ? "0" : "1"); };
    for (int k = 1; k <= K; ++k) spec.emplace_back(1LL << k, (1LL << (k - 1)) - 1, sym(k));
    spec.emplace_back(1LL << K, (1LL << K) - 1, sym(K + 1));
    return make_toeplitz(spec);
}

inline WordPtr mirror(const WordPtr& w) {
    require(w->group->kind == GroupDesc::Kind::integers, ErrKind::config,
            "mirror: word is not over Z");
    if (w->kind == Word::Kind::mirror) return w->inner;  // involution, collapsed
    auto m = std::make_shared<Word>();
    m->kind = Word::Kind::mirror;
    m->group = w->group;
    m->alphabet = w->alphabet;
    m->inner = w;
    return m;
}

// Amplify a Z-word to the infinite dihedral group: the translation copy reads
// the word, the reflected copy reads its mirror.
inline WordPtr amplify(const WordPtr& w, GroupPtr dihedral = nullptr) {
    require(w->group->kind == GroupDesc::Kind::integers, ErrKind::config,
            "amplify: inner word is not over Z");
    auto a = std::make_shared<Word>();
    a->kind = Word::Kind::amplified;
    a->group = dihedral ? std::move(dihedral) : make_dihedral();
    require(a->group->kind == GroupDesc::Kind::dihedral, ErrKind::config,
            "amplify: target descriptor is not dihedral");
    a->alphabet = w->alphabet;
    a->inner = w;
    return a;
}

// Relabel a binary word over G into a word over G x F whose symbol at (g,s)
// names the F-coordinate s wherever the inner word reads '1'.
inline WordPtr product_word(const WordPtr& w, const GroupPtr& F, GroupPtr product = nullptr) {
    require(F->kind == GroupDesc::Kind::finite_table, ErrKind::config,
            "product word: relabeling group is not a finite-table group");
    {
        std::vector<std::string> syms = w->alphabet.symbols;
        std::sort(syms.begin(), syms.end());
        require(syms == std::vector<std::string>{"0", "1"}, ErrKind::config,
                "product word: inner word is not binary over {0,1}");
    }
    auto p = std::make_shared<Word>();
    p->kind = Word::Kind::product;
    p->group = product ? std::move(product) : make_product(w->group, F);
    require(p->group->kind == GroupDesc::Kind::product && p->group->right->kind == F->kind,
            ErrKind::config, "product word: target descriptor is not a matching product");
    std::vector<std::string> syms{"0"};
    for (const std::string& name : F->names) syms.push_back("a_" + name);
    p->alphabet = make_alphabet(std::move(syms));
    p->factor = F;
    p->inner = w;
    p->product_one = w->alphabet.index_of("1");
    return p;
}

inline WordPtr shift(const Elem& g, const WordPtr& w) {
    if (!detail::elem_shape_ok(*w->group, g))
        fail(ErrKind::config, "shift: element " + elem_str(*w->group, g) +
                                  " does not belong to the word's group");
    if (g == group_identity(*w->group)) return w;
    auto s = std::make_shared<Word>();
    s->kind = Word::Kind::shifted;
    s->group = w->group;
    s->alphabet = w->alphabet;
    if (w->kind == Word::Kind::shifted) {  // flatten chains: g.(h.w) = (gh).w
        s->inner = w->inner;
        s->shifted_by = group_mul(*w->group, g, w->shifted_by);
        if (s->shifted_by == group_identity(*w->group)) return w->inner;
    } else {
        s->inner = w;
        s->shifted_by = g;
    }
    return s;
}

// ---- cylinder patterns ----------------------------------------------------

// A finite partial configuration: cells sorted by the canonical element
// order, each carrying a symbol token.
struct CylinderPattern {
    std::vector<std::pair<Elem, std::string>> cells;

    bool operator==(const CylinderPattern& o) const { return cells == o.cells; }
    bool operator<(const CylinderPattern& o) const {
        return std::lexicographical_compare(
            cells.begin(), cells.end(), o.cells.begin(), o.cells.end(),
            [](const auto& x, const auto& y) {
                if (int c = elem_cmp(x.first, y.first); c != 0) return c < 0;
                return x.second < y.second;
            });
    }
};

inline CylinderPattern make_pattern(std::vector<std::pair<Elem, std::string>> cells,
                                    const Alphabet& alphabet) {
    std::sort(cells.begin(), cells.end(),
              [](const auto& x, const auto& y) { return elem_cmp(x.first, y.first) < 0; });
    for (std::size_t i = 0; i + 1 < cells.size(); ++i)
        if (cells[i].first == cells[i + 1].first)
            fail(ErrKind::config, "pattern: duplicate cell");
    for (const auto& [e, tok] : cells) {
        (void)e;
        if (alphabet.index_of(tok) < 0)
            fail(ErrKind::config, "pattern: symbol '" + tok + "' is not in the alphabet");
    }
    CylinderPattern p;
    p.cells = std::move(cells);
    return p;
}

// The pattern of w around g at the given radius: h -> eval(w, g.h) for h in
// ball(radius).
inline CylinderPattern pattern_at(const Word& w, const Elem& g, const Ball& ball) {
    CylinderPattern p;
    p.cells.reserve(ball.elems.size());
    for (const Elem& h : ball.elems)
        p.cells.emplace_back(h, w.alphabet.symbols[w.eval_unchecked(group_mul(*w.group, g, h))]);
    std::sort(p.cells.begin(), p.cells.end(),
              [](const auto& x, const auto& y) { return elem_cmp(x.first, y.first) < 0; });
    return p;
}

// All radius-r patterns of w seen from the window: the finite approximation
// of the orbit closure's clopen atoms.
inline std::vector<CylinderPattern> factor_language(const WordPtr& w, int radius,
                                                    const std::vector<Elem>& window) {
    Ball ball = group_ball(*w->group, radius);
    {
        std::vector<Elem> win = window;
        std::sort(win.begin(), win.end(), ElemLess{});
        for (const Elem& h : ball.elems)
            if (!std::binary_search(win.begin(), win.end(), h, ElemLess{}))
                fail(ErrKind::precondition, "factor_language: window does not contain ball(" +
                                                std::to_string(radius) + ")");
    }
    require(static_cast<long long>(window.size()) *
                    static_cast<long long>(ball.elems.size()) <=
                kEnumerationCap,
            ErrKind::cap, "factor_language: enumeration cap exceeded");
    std::vector<CylinderPattern> out;
    out.reserve(window.size());
    for (const Elem& g : window) out.push_back(pattern_at(*w, g, ball));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Largest radius r <= ball.radius such that the two words agree on ball(r);
// -1 when they already differ at the identity.  The word metric's agreement
// radius: d(x,y) = 2^(-r).
inline int agreement_radius(const Word& x, const Word& y, const Ball& ball) {
    // layer-major ordering: the first mismatch sits in the smallest
    // disagreeing layer, so everything strictly inside it already agreed
    for (std::size_t i = 0; i < ball.elems.size(); ++i) {
        const std::string& sx = x.alphabet.symbols[x.eval_unchecked(ball.elems[i])];
        const std::string& sy = y.alphabet.symbols[y.eval_unchecked(ball.elems[i])];
        if (sx != sy) return ball.radius_of[i] - 1;
    }
    return static_cast<int>(ball.layer_start.size()) - 2;  // the ball's own radius
}

}  // namespace castleworks
