#!/usr/bin/env python3
"""Toeplitz word + recurrence oracle: stage filling, completeness failures,
mirror identity, syndetic radii, balanced witnesses.  Brute force throughout.
Writes tests/data/words_expected.json."""

import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from oracle_lib import (frac_str, period_doubling_stages, toeplitz_complete,
                        toeplitz_eval, toeplitz_smallest_uncovered)

WINDOW = 1000
out = {}

# the five word specs used across tests (all complete; checked below)
WORDS = {
    "pd": period_doubling_stages(15),
    "alt": [(2, 0, "0"), (2, 1, "1")],
    "w3": [(2, 1, "1"), (4, 0, "0"), (8, 2, "1"), (8, 6, "0")],
    "w4": [(3, 0, "a"), (9, 1, "b"), (9, 2, "c"), (9, 4, "b"), (9, 5, "c"),
           (9, 7, "b"), (9, 8, "c")],
    "w5": [(2, 0, "1"), (4, 1, "0"), (8, 7, "1"), (16, 3, "0"), (16, 11, "1")],
}
for name, st in WORDS.items():
    assert toeplitz_complete(st), name

out["word_specs"] = {k: [[p, r, s] for p, r, s in v] for k, v in WORDS.items()}
out["pd_window_0_15"] = [toeplitz_eval(WORDS["pd"], n) for n in range(16)]
out["pd_window_m8_8"] = [toeplitz_eval(WORDS["pd"], n) for n in range(-8, 9)]

# incomplete specs -> smallest uncovered |n| (spec reports nearest-to-zero)
incomplete = {
    "pd_truncated": [[2, 0, "0"], [4, 1, "1"], [8, 3, "0"], [16, 7, "1"]],
    "gap_even": [[2, 1, "1"], [4, 0, "0"]],  # misses 2 mod 4
}
out["incomplete"] = {}
for name, st in incomplete.items():
    stt = [tuple(x) for x in st]
    assert not toeplitz_complete(stt)
    out["incomplete"][name] = toeplitz_smallest_uncovered(stt)

# empirical symbol frequencies of pd over [-W, W] at resolution 0
counts = {}
for n in range(-WINDOW, WINDOW + 1):
    sym = toeplitz_eval(WORDS["pd"], n)
    counts[sym] = counts.get(sym, 0) + 1
out["pd_symbol_freq"] = {k: frac_str(Fraction(v, 2 * WINDOW + 1))
                         for k, v in sorted(counts.items())}


def hits(stages, pattern, lo=-WINDOW, hi=WINDOW):
    """R_{w,U} n [lo,hi] by brute force; pattern = {offset: symbol}.
    g is a hit iff eval(w, g^-1 i) = U(i) for all i, i.e. w(i - g) = U(i)."""
    res = []
    for g in range(lo, hi + 1):
        if all(toeplitz_eval(stages, i - g) == sym for i, sym in pattern.items()):
            res.append(g)
    return res


def mirror_eval(stages, n):
    return toeplitz_eval(stages, -n)


def mirror_hits(stages, pattern, lo=-WINDOW, hi=WINDOW):
    res = []
    for g in range(lo, hi + 1):
        if all(mirror_eval(stages, i - g) == sym for i, sym in pattern.items()):
            res.append(g)
    return res


def syndetic_radius(hitlist, window, maxk):
    """Smallest m <= maxk with ball(window - m) covered by ball(m)+hits."""
    hs = set(hitlist)
    for m in range(0, maxk + 1):
        core = range(-(window - m), window - m + 1)
        if all(any(c - k in hs for k in range(-m, m + 1)) for c in core):
            return m
    return None


def balanced(hitlist, window, maxk):
    """Search order: arithmetic progressions pZ for p ascending, then the
    maximal symmetric subset."""
    hs = set(hitlist)
    for p in range(1, window + 1):
        P = set(range(-(window // p) * p, window + 1, p))
        if P <= hs:
            m = syndetic_radius(sorted(P), window, maxk)
            if m is not None:
                return {"kind": "progression", "p": p, "syndetic_m": m}
    sym = sorted(hs & {-x for x in hs})
    if sym:
        m = syndetic_radius(sym, window, maxk)
        if m is not None:
            return {"kind": "symmetric", "size": len(sym), "syndetic_m": m}
    return {"kind": "none"}


# small pinned instance for direct unit tests
out["pd_hits_1_0_16"] = hits(WORDS["pd"], {0: "1"}, 0, 16)

cases = []
for name, st in WORDS.items():
    w0 = toeplitz_eval(st, 0)
    w1 = toeplitz_eval(st, 1)
    wm2 = toeplitz_eval(st, -2)
    patterns = [
        {0: w0},
        {0: w0, 1: w1, -2: wm2},
        {0: w0, 1: w0},  # often sparse/empty; exercises the non-restriction path
    ]
    for pi, pat in enumerate(patterns):
        h = hits(st, pat)
        mirror_pat = {-i: s for i, s in pat.items()}
        mh = mirror_hits(st, pat)
        ident = sorted(-x for x in hits(st, mirror_pat))
        assert mh == ident, (name, pi)
        entry = {
            "word": name,
            "pattern": sorted((i, s) for i, s in pat.items()),
            "hit_count": len(h),
            "hits_head": h[:16],
            "mirror_identity": True,
            "syndetic_m": syndetic_radius(h, WINDOW, 64),
            "balanced": balanced(h, WINDOW, 64),
        }
        cases.append(entry)
out["recurrence_cases"] = cases

path = Path(__file__).resolve().parents[2] / "tests" / "data" / "words_expected.json"
path.write_text(json.dumps(out, indent=1, sort_keys=True))
print("wrote", path)
for c in cases:
    print(c["word"], c["pattern"], "hits", c["hit_count"], "synd",
          c["syndetic_m"], c["balanced"])
