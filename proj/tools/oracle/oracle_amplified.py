#!/usr/bin/env python3
"""Amplified-word oracle over the infinite dihedral group.

Covers: defining formula spot table, t-stabilization, Lemma-4.2 style
inclusion and covering, stabilizer probe, fixed-point frequencies, and the
dihedral fixed-set report (symmetry-pattern approximations of the
reflection fixed sets).  Everything is brute force over explicit windows.
Writes tests/data/amplified_expected.json."""

import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from oracle_lib import (dinf_ball_formula, frac_str, period_doubling_stages,
                        toeplitz_eval)

N = 6000  # word array half-width; covers window 4096 + res 72 + translates
stages = period_doubling_stages(15)
W = np.frombuffer(
    "".join(toeplitz_eval(stages, n) for n in range(-N, N + 1)).encode(),
    dtype=np.uint8).copy()


def wv(x: int) -> int:
    return int(W[x + N])


def amp(el) -> int:
    n, r = el
    return wv(n) if r == 0 else wv(-n)


def pattern(pos, rho):
    """Byte-string rows of the amplified word's pattern at position pos,
    over ball(rho) = {(m,0): |m|<=rho} u {(m,1): |m|<=rho-1}."""
    n, r = pos
    if r == 0:
        row0 = W[n - rho + N: n + rho + 1 + N]
        row1 = W[-n - rho + 1 + N: -n + rho + N][::-1]
    else:
        row0 = W[-n - rho + N: -n + rho + 1 + N]
        row1 = W[n - rho + 1 + N: n + rho + N][::-1]
    return (row0.tobytes(), row1.tobytes())


# cross-check pattern() against direct evaluation on a few positions
def dmul(a, b):
    return (a[0] + (-b[0] if a[1] else b[0]), a[1] ^ b[1])


for pos in [(0, 0), (5, 0), (-3, 1), (7, 1), (-11, 0)]:
    row0, row1 = pattern(pos, 4)
    for m in range(-4, 5):
        assert row0[m + 4] == amp(dmul(pos, (m, 0)))
    for m in range(-3, 4):
        assert row1[m + 3] == amp(dmul(pos, (m, 1)))

out = {}
out["formula_spot"] = [[n, r, chr(amp((n, r)))]
                       for n in range(-8, 9) for r in (0, 1)]
# shift(t, wh) = wh: wh(t^-1 h) = wh(h) for h in ball(1000)
assert all(amp(dmul((0, 1), (m, r))) == amp((m, r))
           for m in range(-1000, 1001) for r in (0, 1))
out["t_stabilizes"] = True

# --- Lemma 4.2 inclusion + covering ----------------------------------------
# Inner patterns with their balanced progressions (from the words oracle).
CASES = [({0: "0"}, 2), ({-2: "0", 0: "0", 1: "1"}, 4)]
WIN = 1000
lemma = []
for U, p in CASES:
    # verify pZ really lies in the inner recurrence set on the window
    P = [n for n in range(-WIN, WIN + 1) if n % p == 0]
    assert all(wv(i - n) == ord(U[i]) for n in P for i in U)
    # combined dihedral pattern Q: row0 = U, row1(j) = U(-j) on -dom(U)
    Q = {(i, 0): ord(sym) for i, sym in U.items()}
    Q.update({(-i, 1): ord(sym) for i, sym in U.items()})
    # hits of Q over the dihedral ball(WIN): g with wh(g^-1 i) = Q(i)
    dih_hits = set()
    for g in dinf_ball_formula(WIN):
        ginv = (-g[0], 0) if g[1] == 0 else g  # reflections are involutions
        if all(amp(dmul(ginv, i)) == v for i, v in Q.items()):
            dih_hits.add(g)
    # t*s^n = (-n, 1); clip to the dihedral window (|(m,1)| = |m| + 1)
    PtP = {(n, 0) for n in P} | {(-n, 1) for n in P if abs(n) < WIN}
    assert PtP <= dih_hits
    # covering: ball(core) <= K*(P u tP) with K = ball_Z(m) u t ball_Z(m) t
    m = (p + 1) // 2
    core = WIN - m
    Kset = {(j, 0) for j in range(-m, m + 1)}
    cov = all(any(dmul(((-k[0], 0) if k[1] == 0 else k), x) in PtP
                  for k in Kset)
              for x in dinf_ball_formula(core))
    assert cov
    lemma.append({"U": sorted((i, s) for i, s in U.items()), "p": p,
                  "covering_m": m, "dih_hit_count": len(dih_hits),
                  "inclusion": True, "covering": True})
out["lemma42"] = lemma

# --- stabilizer probe -------------------------------------------------------
# {g in ball(candRadius): wh(g^-1 h) = wh(h) for all h in ball(depth)}
probe = []
for depth, crad in [(16, 3), (64, 3), (256, 2)]:
    stab = []
    for g in dinf_ball_formula(crad):
        ginv = (-g[0], 0) if g[1] == 0 else g
        if all(amp(dmul(ginv, h)) == amp(h) for h in dinf_ball_formula(depth)):
            stab.append(list(g))
    probe.append({"depth": depth, "candidateRadius": crad, "stabilizer": stab})
out["stabilizer_probe"] = probe

# --- fixed point frequency for g = t ---------------------------------------
# position h counts iff its res-pattern P satisfies P(i) = P(t i) on overlap:
# pairs row0[a] == row1[-a] for |a| <= res-1.
WINF = 4096


def fixed_freq(res):
    cnt = 0
    tot = 0
    for r in (0, 1):
        lim = WINF if r == 0 else WINF - 1
        for n in range(-lim, lim + 1):
            tot += 1
            row0, row1 = pattern((n, r), res)
            if all(row0[a + res] == row1[-a + res - 1]
                   for a in range(-(res - 1), res)):
                cnt += 1
    return Fraction(cnt, tot)


out["fixed_point_freq_t"] = {str(res): frac_str(fixed_freq(res))
                             for res in (8, 16, 32, 64)}

# --- dihedral fixed-set report ----------------------------------------------
RHO, KRANGE = 32, 8
WINX = 4096


def sym_ok(rows, rho, m):
    row0, row1 = rows
    lo = max(-rho, m - (rho - 1))
    hi = min(rho, m + (rho - 1))
    return all(row0[a + rho] == row1[(m - a) + rho - 1]
               for a in range(lo, hi + 1))


positions = dinf_ball_formula(WINX)
# aperiodicity of the sampled language: no global s^p-invariance on window
for p in range(1, 2 * KRANGE + 4):
    assert any(amp((n, 0)) != amp((n + p, 0)) for n in range(-200, 200))

report = {}
pat_cache = {}


def pat(pos, rho):
    key = (pos, rho)
    if key not in pat_cache:
        pat_cache[key] = pattern(pos, rho)
    return pat_cache[key]


ball_sz = len(positions)


def approx(m):
    """X_m approximation: res-RHO patterns satisfying the (s^m t)-symmetry."""
    return {pat(p, RHO) for p in positions if sym_ok(pat(p, RHO), RHO, m)}


X = {m: approx(m) for m in range(-2 * KRANGE, 2 * KRANGE + 3)}
for n in (0, 1, 2):
    Xn = X[n]
    # (a) containment: translate(s^k, X_n) inside X_{2k+n}; positional form:
    # pat(p*s^k) in X_n  =>  pat(p) in X_{2k+n}.  Checked at equal resolution
    # and with the |k|-trimmed resolution on the left element's own pattern.
    cont_eq = True
    cont_trim = True
    for k in range(-KRANGE, KRANGE + 1):
        if k == 0:
            continue
        for p in positions:
            q = dmul(p, (k, 0))
            if abs(q[0]) + q[1] > WINX:
                continue
            if pat(q, RHO) in Xn:
                if pat(p, RHO) not in X[2 * k + n]:
                    cont_eq = False
                if not sym_ok(pat(p, RHO - abs(k)), RHO - abs(k), 2 * k + n):
                    cont_trim = False
        if not (cont_eq or cont_trim):
            break
    # (b) X_n and X_{2k+n} approximations disjoint for every k != 0
    disjoint = all(not (Xn & X[2 * k + n])
                   for k in range(-KRANGE, KRANGE + 1) if k != 0)
    # (c) sum of empirical frequencies of the translates s^k X_n
    tot = Fraction(0)
    for k in range(-KRANGE, KRANGE + 1):
        c = sum(1 for p in positions
                if abs(p[0] + (k if p[1] == 0 else -k)) + p[1] <= WINX
                and pat(dmul(p, (k, 0)), RHO) in Xn)
        tot += Fraction(c, ball_sz)
    report[str(n)] = {"atoms": len(Xn), "containment_equal_res": cont_eq,
                      "containment_trimmed": cont_trim, "disjoint": disjoint,
                      "measure_sum": frac_str(tot), "sum_le_1": tot <= 1}
out["fixedset"] = {"resolution": RHO, "kRange": KRANGE, "window": WINX,
                   "ball_size": ball_sz, "by_n": report}

path = Path(__file__).resolve().parents[2] / "tests" / "data" / "amplified_expected.json"
path.write_text(json.dumps(out, indent=1, sort_keys=True))
print("wrote", path)
print("fixed freq:", out["fixed_point_freq_t"])
for n, r in report.items():
    print("X_%s:" % n, r)
