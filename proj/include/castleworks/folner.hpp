#pragma once

// Exact Følner defects and Følner sets in extensions.
//
// verify_folner computes |K·A \ A| / |A| exactly.  folner_in_extension builds
// A = S̃·F_n from a Følner set S of the quotient and a finite subgroup stage
// F_n of the kernel, checking every precondition exhaustively (with witnesses)
// and re-verifying the defect exactly.
//
// For lamplighter groups over a two-element base whose lamp positions fit in
// [-32, 31] there is a packed fast path (one 64-bit mask + shift per element)
// so the multi-million-element acceptance instance stays in tens of MB.

#include "core.hpp"
#include "group.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace castleworks {

// ---- packed lamplighter-over-Z2 elements ----------------------------------

namespace detail {

struct PackedLamp {
    std::uint64_t mask = 0;  // bit (p + 32) set <=> lamp at position p
    long long shift = 0;
    friend bool operator<(const PackedLamp& x, const PackedLamp& y) {
        return x.shift != y.shift ? x.shift < y.shift : x.mask < y.mask;
    }
    friend bool operator==(const PackedLamp& x, const PackedLamp& y) {
        return x.shift == y.shift && x.mask == y.mask;
    }
};

inline bool lamp_packable_group(const GroupDesc& d) {
    return d.kind == GroupDesc::Kind::lamplighter && d.base->table.size() == 2;
}

inline std::optional<PackedLamp> pack_lamp(const Elem& e) {
    PackedLamp p;
    p.shift = e.n;
    for (const auto& [pos, idx] : e.lamps) {
        if (pos < -32 || pos > 31 || idx != 1) return std::nullopt;
        p.mask |= (std::uint64_t{1} << (pos + 32));
    }
    return p;
}

inline Elem unpack_lamp(const PackedLamp& p) {
    std::vector<std::pair<long long, int>> lamps;
    for (int b = 0; b < 64; ++b)
        if (p.mask & (std::uint64_t{1} << b)) lamps.emplace_back(b - 32, 1);
    return Elem::lamp_shift(std::move(lamps), p.shift);
}

// x * y in packed form; nullopt when the shifted mask would leave the window.
inline std::optional<PackedLamp> packed_mul(const PackedLamp& x, const PackedLamp& y) {
    std::uint64_t m = y.mask;
    if (x.shift > 0) {
        if (x.shift >= 64 || (m >> (64 - x.shift)) != 0) return std::nullopt;
        m <<= x.shift;
    } else if (x.shift < 0) {
        long long s = -x.shift;
        if (s >= 64 || (m & ((std::uint64_t{1} << s) - 1)) != 0) return std::nullopt;
        m >>= s;
    }
    return PackedLamp{x.mask ^ m, x.shift + y.shift};
}

}  // namespace detail

// ---- verify_folner ---------------------------------------------------------

// Exact defect |K·A \ A| / |A| (K taken with set semantics).
inline Rat verify_folner(const GroupDesc& d, const std::vector<Elem>& A,
                         const std::vector<Elem>& K) {
    require(!A.empty(), ErrKind::precondition, "verify_folner: empty set A");
    std::vector<Elem> Kd = K;
    std::sort(Kd.begin(), Kd.end(), ElemLess{});
    Kd.erase(std::unique(Kd.begin(), Kd.end()), Kd.end());

    if (detail::lamp_packable_group(d)) {
        std::vector<detail::PackedLamp> pa;
        pa.reserve(A.size());
        bool ok = true;
        std::vector<detail::PackedLamp> pk;
        for (const Elem& a : A) {
            auto p = detail::pack_lamp(a);
            if (!p) { ok = false; break; }
            pa.push_back(*p);
        }
        for (const Elem& k : Kd) {
            if (!ok) break;
            auto p = detail::pack_lamp(k);
            if (!p) { ok = false; break; }
            pk.push_back(*p);
        }
        if (ok) {
            std::sort(pa.begin(), pa.end());
            pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
            std::vector<detail::PackedLamp> esc;
            for (const auto& k : pk)
                for (const auto& a : pa) {
                    auto m = detail::packed_mul(k, a);
                    if (!m) fail(ErrKind::cap, "verify_folner: packed lamp window exceeded");
                    if (!std::binary_search(pa.begin(), pa.end(), *m)) esc.push_back(*m);
                }
            std::sort(esc.begin(), esc.end());
            esc.erase(std::unique(esc.begin(), esc.end()), esc.end());
            return Rat(static_cast<long long>(esc.size()), static_cast<long long>(pa.size()));
        }
    }

    std::vector<Elem> sa = A;
    std::sort(sa.begin(), sa.end(), ElemLess{});
    sa.erase(std::unique(sa.begin(), sa.end(), [](const Elem& x, const Elem& y) { return x == y; }),
             sa.end());
    std::vector<Elem> esc;
    for (const Elem& k : Kd)
        for (const Elem& a : sa) {
            Elem m = group_mul(d, k, a);
            if (!std::binary_search(sa.begin(), sa.end(), m, ElemLess{})) esc.push_back(m);
        }
    std::sort(esc.begin(), esc.end(), ElemLess{});
    esc.erase(std::unique(esc.begin(), esc.end(), [](const Elem& x, const Elem& y) { return x == y; }),
              esc.end());
    return Rat(static_cast<long long>(esc.size()), static_cast<long long>(sa.size()));
}

// ---- folner_in_extension ---------------------------------------------------

struct FolnerCertificate {
    std::vector<Elem> K;  // deduplicated
    Rat eps{0};
    Rat defect{0};        // exact; guaranteed < eps
    long long a_size = 0;
    // trace
    std::vector<Elem> S;       // quotient Følner set
    std::vector<Elem> Stilde;  // its lifts (deterministic section)
    std::vector<Elem> Fn;      // kernel subgroup stage
    // A = ⊔ s̃·F_n is materialized only when small; it is always reproducible
    // from the trace (deterministic section and coset order).
    std::vector<Elem> A;
    bool a_materialized = false;
};

namespace detail {

// Subgroup closure by generator extraction: walks F sorted, adds each element
// not yet generated as a generator and closes under right multiplication.
// Errors with a witness as soon as the closure leaves F.
inline void check_subgroup_closure(const GroupDesc& d, const std::vector<Elem>& F) {
    Elem e = group_identity(d);
    std::vector<Elem> sorted = F;
    std::sort(sorted.begin(), sorted.end(), ElemLess{});
    sorted.erase(
        std::unique(sorted.begin(), sorted.end(), [](const Elem& x, const Elem& y) { return x == y; }),
        sorted.end());
    require(std::binary_search(sorted.begin(), sorted.end(), e, ElemLess{}), ErrKind::precondition,
            "folner_in_extension: F_n does not contain the identity");
    auto in_F = [&](const Elem& x) {
        return std::binary_search(sorted.begin(), sorted.end(), x, ElemLess{});
    };
    ElemSet closed;
    closed.insert(e);
    std::vector<Elem> order = {e};
    std::vector<Elem> gens;
    for (const Elem& f : sorted) {
        if (closed.count(f)) continue;
        gens.push_back(f);
        gens.push_back(group_inv(d, f));
        // re-close from every known element under the enlarged generator set
        std::vector<Elem> queue = order;
        while (!queue.empty()) {
            Elem x = queue.back();
            queue.pop_back();
            for (const Elem& g : gens) {
                Elem y = group_mul(d, x, g);
                if (closed.count(y)) continue;
                if (!in_F(y))
                    fail(ErrKind::precondition,
                         "folner_in_extension: F_n is not closed under multiplication; witness " +
                             elem_str(d, y) + " = " + elem_str(d, x) + " * " + elem_str(d, g) +
                             " escapes F_n");
                closed.insert(y);
                order.push_back(y);
                queue.push_back(y);
            }
        }
    }
    require(closed.size() == sorted.size(), ErrKind::internal,
            "folner_in_extension: closure bookkeeping mismatch");
}

}  // namespace detail

inline FolnerCertificate folner_in_extension(const GroupDesc& d, const std::vector<Elem>& K_in,
                                             const Rat& eps, const std::vector<Elem>& S_in,
                                             const std::vector<Elem>& Fn_in) {
    require(d.ext_rule != GroupDesc::ExtRule::none, ErrKind::precondition,
            "folner_in_extension: group has no extension structure");
    const GroupDesc& q = quotient_desc(d);

    FolnerCertificate cert;
    cert.eps = eps;
    cert.K = K_in;
    std::sort(cert.K.begin(), cert.K.end(), ElemLess{});
    cert.K.erase(std::unique(cert.K.begin(), cert.K.end(),
                             [](const Elem& x, const Elem& y) { return x == y; }),
                 cert.K.end());
    require(!cert.K.empty(), ErrKind::precondition, "folner_in_extension: empty K");

    cert.S = S_in;
    std::sort(cert.S.begin(), cert.S.end(), ElemLess{});
    cert.S.erase(std::unique(cert.S.begin(), cert.S.end(),
                             [](const Elem& x, const Elem& y) { return x == y; }),
                 cert.S.end());
    require(!cert.S.empty(), ErrKind::precondition, "folner_in_extension: empty S");

    cert.Fn = Fn_in;
    std::sort(cert.Fn.begin(), cert.Fn.end(), ElemLess{});
    cert.Fn.erase(std::unique(cert.Fn.begin(), cert.Fn.end(),
                              [](const Elem& x, const Elem& y) { return x == y; }),
                  cert.Fn.end());
    require(!cert.Fn.empty(), ErrKind::precondition, "folner_in_extension: empty F_n");

    // F_n must sit inside the kernel H.
    Elem eq = group_identity(q);
    for (const Elem& f : cert.Fn)
        if (!(project_to_quotient(d, f) == eq))
            fail(ErrKind::precondition,
                 "folner_in_extension: F_n element " + elem_str(d, f) + " is not in the kernel");

    // Precondition 1: S is (project(K), eps/|K|)-Følner in the quotient.
    std::vector<Elem> KQ;
    for (const Elem& k : cert.K) KQ.push_back(project_to_quotient(d, k));
    Rat quotient_defect = verify_folner(q, cert.S, KQ);
    Rat threshold = eps / Rat(static_cast<long long>(cert.K.size()));
    if (!(quotient_defect < threshold))
        fail(ErrKind::precondition,
             "folner_in_extension: S is not (project(K), eps/|K|)-Folner in the quotient: defect " +
                 rat_str(quotient_defect) + " >= " + rat_str(threshold));

    // Precondition 2: F_n is a subgroup (closure, with witness).
    detail::check_subgroup_closure(d, cert.Fn);

    // Lifts.
    for (const Elem& s : cert.S) cert.Stilde.push_back(lift_from_quotient(d, s));

    // Precondition 3: S̃^{-1} K S̃ ∩ H ⊆ F_n, by enumeration over all triples.
    {
        auto in_Fn = [&](const Elem& x) {
            return std::binary_search(cert.Fn.begin(), cert.Fn.end(), x, ElemLess{});
        };
        for (const Elem& s1 : cert.Stilde) {
            Elem s1i = group_inv(d, s1);
            for (const Elem& k : cert.K) {
                Elem s1ik = group_mul(d, s1i, k);
                for (const Elem& s2 : cert.Stilde) {
                    Elem h = group_mul(d, s1ik, s2);
                    if (!(project_to_quotient(d, h) == eq)) continue;
                    if (!in_Fn(h))
                        fail(ErrKind::precondition,
                             "folner_in_extension: S~^-1 K S~ n H escapes F_n; witness " +
                                 elem_str(d, h));
                }
            }
        }
    }

    const long long expected =
        static_cast<long long>(cert.S.size()) * static_cast<long long>(cert.Fn.size());
    require(expected <= kEnumerationCap, ErrKind::cap,
            "folner_in_extension: |S|*|F_n| exceeds the enumeration cap");

    // Build A = ⊔ s̃·F_n, check coset disjointness exactly, compute the defect.
    bool packed_ok = detail::lamp_packable_group(d);
    if (packed_ok) {
        std::vector<detail::PackedLamp> pa;
        pa.reserve(static_cast<std::size_t>(expected));
        std::vector<detail::PackedLamp> pf, ps, pk;
        for (const Elem& f : cert.Fn) {
            auto p = detail::pack_lamp(f);
            if (!p) { packed_ok = false; break; }
            pf.push_back(*p);
        }
        for (const Elem& s : cert.Stilde) {
            if (!packed_ok) break;
            auto p = detail::pack_lamp(s);
            if (!p) { packed_ok = false; break; }
            ps.push_back(*p);
        }
        for (const Elem& k : cert.K) {
            if (!packed_ok) break;
            auto p = detail::pack_lamp(k);
            if (!p) { packed_ok = false; break; }
            pk.push_back(*p);
        }
        if (packed_ok) {
            for (const auto& s : ps)
                for (const auto& f : pf) {
                    auto m = detail::packed_mul(s, f);
                    require(m.has_value(), ErrKind::cap,
                            "folner_in_extension: packed lamp window exceeded");
                    pa.push_back(*m);
                }
            std::sort(pa.begin(), pa.end());
            auto dup = std::adjacent_find(pa.begin(), pa.end());
            if (dup != pa.end())
                fail(ErrKind::precondition,
                     "folner_in_extension: cosets s~.F_n are not pairwise disjoint; witness " +
                         elem_str(d, detail::unpack_lamp(*dup)));
            cert.a_size = static_cast<long long>(pa.size());
            std::vector<detail::PackedLamp> esc;
            for (const auto& k : pk)
                for (const auto& a : pa) {
                    auto m = detail::packed_mul(k, a);
                    require(m.has_value(), ErrKind::cap,
                            "folner_in_extension: packed lamp window exceeded");
                    if (!std::binary_search(pa.begin(), pa.end(), *m)) esc.push_back(*m);
                }
            std::sort(esc.begin(), esc.end());
            esc.erase(std::unique(esc.begin(), esc.end()), esc.end());
            cert.defect = Rat(static_cast<long long>(esc.size()), cert.a_size);
        }
    }
    if (!packed_ok) {
        std::vector<Elem> A;
        A.reserve(static_cast<std::size_t>(expected));
        for (const Elem& s : cert.Stilde)
            for (const Elem& f : cert.Fn) A.push_back(group_mul(d, s, f));
        std::vector<Elem> sorted = A;
        std::sort(sorted.begin(), sorted.end(), ElemLess{});
        auto dup = std::adjacent_find(sorted.begin(), sorted.end(),
                                      [](const Elem& x, const Elem& y) { return x == y; });
        if (dup != sorted.end())
            fail(ErrKind::precondition,
                 "folner_in_extension: cosets s~.F_n are not pairwise disjoint; witness " +
                     elem_str(d, *dup));
        cert.a_size = static_cast<long long>(A.size());
        cert.defect = verify_folner(d, A, cert.K);
        cert.A = std::move(A);
        cert.a_materialized = true;
    } else if (expected <= 300'000) {
        for (const Elem& s : cert.Stilde)
            for (const Elem& f : cert.Fn) cert.A.push_back(group_mul(d, s, f));
        cert.a_materialized = true;
    }

    if (!(cert.defect < eps))
        fail(ErrKind::condition, "folner_in_extension: defect " + rat_str(cert.defect) +
                                     " is not < eps " + rat_str(eps));
    return cert;
}

// Independent recomputation of a certificate's defect from its trace
// (rebuilds A from S̃ and F_n; shares no intermediate state with the builder).
inline Rat verify_folner_cosets(const GroupDesc& d, const std::vector<Elem>& Stilde,
                                const std::vector<Elem>& Fn, const std::vector<Elem>& K) {
    require(!Stilde.empty() && !Fn.empty(), ErrKind::precondition,
            "verify_folner_cosets: empty trace");
    if (detail::lamp_packable_group(d)) {
        bool ok = true;
        std::vector<detail::PackedLamp> ps, pf, pk, pa;
        for (const Elem& s : Stilde) {
            auto p = detail::pack_lamp(s);
            if (!p) { ok = false; break; }
            ps.push_back(*p);
        }
        for (const Elem& f : Fn) {
            if (!ok) break;
            auto p = detail::pack_lamp(f);
            if (!p) { ok = false; break; }
            pf.push_back(*p);
        }
        std::vector<Elem> Kd = K;
        std::sort(Kd.begin(), Kd.end(), ElemLess{});
        Kd.erase(std::unique(Kd.begin(), Kd.end(),
                             [](const Elem& x, const Elem& y) { return x == y; }),
                 Kd.end());
        for (const Elem& k : Kd) {
            if (!ok) break;
            auto p = detail::pack_lamp(k);
            if (!p) { ok = false; break; }
            pk.push_back(*p);
        }
        if (ok) {
            for (const auto& s : ps)
                for (const auto& f : pf) {
                    auto m = detail::packed_mul(s, f);
                    require(m.has_value(), ErrKind::cap, "verify_folner_cosets: window exceeded");
                    pa.push_back(*m);
                }
            std::sort(pa.begin(), pa.end());
            pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
            std::vector<detail::PackedLamp> esc;
            for (const auto& k : pk)
                for (const auto& a : pa) {
                    auto m = detail::packed_mul(k, a);
                    require(m.has_value(), ErrKind::cap, "verify_folner_cosets: window exceeded");
                    if (!std::binary_search(pa.begin(), pa.end(), *m)) esc.push_back(*m);
                }
            std::sort(esc.begin(), esc.end());
            esc.erase(std::unique(esc.begin(), esc.end()), esc.end());
            return Rat(static_cast<long long>(esc.size()), static_cast<long long>(pa.size()));
        }
    }
    std::vector<Elem> A;
    for (const Elem& s : Stilde)
        for (const Elem& f : Fn) A.push_back(group_mul(d, s, f));
    return verify_folner(d, A, K);
}

}  // namespace castleworks
