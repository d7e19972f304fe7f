#!/usr/bin/env python3
"""Castle-side oracle: first-return times for Kakutani-Rokhlin bases on Z,
the reflection-symmetric base visit sets on the dihedral group (box-pattern
matches), product-word spot values, and empirical pattern frequencies.
Writes tests/data/castles_expected.json."""

import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from oracle_lib import frac_str, period_doubling_stages, toeplitz_eval

stages = period_doubling_stages(15)
N = 8000
W = [toeplitz_eval(stages, n) for n in range(-N, N + 1)]


def wv(x):
    return W[x + N]


out = {}

# --- periodic rotations all distinct (single KR tower per period) ----------
periodic = {"2": "01", "3": "011", "5": "01101", "12": "010011000111"}
for p, cyc in periodic.items():
    rots = {cyc[i:] + cyc[:i] for i in range(len(cyc))}
    assert len(rots) == int(p), p
out["periodic_cycles"] = periodic

# --- period-doubling: pattern at n over radius r ----------------------------


def zpat(n, r):
    return "".join(wv(n + m) for m in range(-r, r + 1))


def visits_of_base(base_patterns, r, lo, hi):
    return [n for n in range(lo, hi + 1) if zpat(n, r) in base_patterns]


def return_times(visits):
    return sorted({b - a for a, b in zip(visits, visits[1:])})


WIN = 1000
# atoms at resolution 1 over the window, and which are realized only at evens
atoms1 = {}
for n in range(-WIN, WIN + 1):
    atoms1.setdefault(zpat(n, 1), set()).add(n % 2)
even_atoms = sorted(p for p, par in atoms1.items() if par == {0})
out["pd_res1_atoms"] = sorted(atoms1)
out["pd_even_recognizer_atoms"] = even_atoms
v = visits_of_base(set(even_atoms), 1, -WIN, WIN)
assert v == list(range(-WIN, WIN + 1, 2))
out["pd_even_heights"] = return_times(v)          # expect [2]

# finer: atoms at resolution 3 realized only at n = 1 mod 4
atoms3 = {}
for n in range(-WIN, WIN + 1):
    atoms3.setdefault(zpat(n, 3), set()).add(n % 4)
mod4_atoms = sorted(p for p, par in atoms3.items() if par == {1})
v4 = visits_of_base(set(mod4_atoms), 3, -WIN, WIN)
out["pd_mod4_heights"] = return_times(v4)          # expect [4]
out["pd_mod4_visits_are_1_mod_4"] = v4 == list(range(-WIN + (1 - (-WIN)) % 4,
                                                     WIN + 1, 4))

# single-atom base: the res-3 atom of position 1
base_single = {zpat(1, 3)}
v1 = visits_of_base(base_single, 3, -WIN, WIN)
out["pd_atom_at_1_res3"] = {"pattern": zpat(1, 3),
                            "heights": return_times(v1),
                            "visit_count": len(v1),
                            "visits_head": v1[:10]}

# --- empirical measure: pd at resolution 1 over [-1000, 1000] --------------
cnt = Counter(zpat(n, 1) for n in range(-WIN, WIN + 1))
out["pd_res1_freq"] = {p: frac_str(Fraction(c, 2 * WIN + 1))
                       for p, c in sorted(cnt.items())}

# --- dihedral box-base visit sets -------------------------------------------
# Box pattern of the amplified word at s^n over {(m,0),(m,1): |m| <= R}
# matches the pattern at e iff w(n+m) = w(m) and w(-n+m) = w(m) for |m| <= R.
PROBE = 2200


def box_visits(R, lo, hi):
    def match(n):
        return all(wv(n + m) == wv(m) for m in range(-R, R + 1))
    return [n for n in range(lo, hi + 1) if match(n) and match(-n)]


probe = {}
for R in (8, 12, 16, 24, 32, 40, 48, 64, 96, 128):
    vs = box_visits(R, -(2 * PROBE), 2 * PROBE)
    gaps = [b - a for a, b in zip(vs, vs[1:])]
    probe[str(R)] = {"count": len(vs), "min_gap": min(gaps),
                     "max_gap": max(gaps), "visits_head": vs[:8]}
out["box_visit_probe"] = {"window": 2 * PROBE, "by_radius": probe}

# --- product word spot values ----------------------------------------------
# x0((g, f)) = a_f if w(g) = '1' else '0'; here F = Z/2 = {e, u}.
spots = []
for n in range(-6, 7):
    for r in (0, 1):
        g = (n, r)
        wg = wv(n) if r == 0 else wv(-n)
        for f, name in ((0, "a_e"), (1, "a_u")):
            spots.append([[n, r], f, name if wg == "1" else "0"])
out["product_spots"] = spots

# max run of '0' in w (forces the copy-separating radius for the lift)
run = best = 0
for n in range(-4000, 4001):
    run = run + 1 if wv(n) == "0" else 0
    best = max(best, run)
out["pd_max_zero_run"] = best

path = Path(__file__).resolve().parents[2] / "tests" / "data" / "castles_expected.json"
path.write_text(json.dumps(out, indent=1, sort_keys=True))
print("wrote", path)
print("even heights:", out["pd_even_heights"], "| mod4 heights:",
      out["pd_mod4_heights"], "| atom@1:", out["pd_atom_at_1_res3"]["heights"])
print("max zero run:", best)
for R, st in probe.items():
    print("R =", R, st)
