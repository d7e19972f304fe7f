#!/usr/bin/env python3
"""Group-arithmetic oracle: infinite dihedral via string rewriting,
lamplighter via direct wreath formulas, and the two Folner-set instances.
Writes tests/data/groups_expected.json."""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from oracle_lib import (dinf_ball, dinf_ball_formula, dinf_inv, dinf_mul,
                        dinf_reduce, dinf_to_string, frac_str)

out = {}

# --- infinite dihedral: products/inverses from string rewriting -------------
random.seed(20260822)
cases = []
for _ in range(64):
    a = (random.randint(-9, 9), random.randint(0, 1))
    b = (random.randint(-9, 9), random.randint(0, 1))
    cases.append({"a": a, "b": b, "ab": dinf_mul(a, b), "a_inv": dinf_inv(a)})
out["dinf_cases"] = cases
out["dinf_ball_sizes"] = [len(dinf_ball(r)) for r in range(0, 7)]
out["dinf_ball2"] = [list(e) for e in dinf_ball(2)]
# BFS ball must equal the closed-form ball
for r in range(0, 7):
    assert dinf_ball(r) == dinf_ball_formula(r), r
# relations: t^2 = e, t s t = s^-1
assert dinf_reduce("tt") == ""
assert dinf_reduce("tst") == "S"

# --- lamplighter (Z/2 wr Z): mul/inv spot table + ball sizes ----------------


def lamp_mul(a, b):
    (f, m), (g, n) = a, b
    return (f ^ {x + m for x in g}, m + n)


def lamp_inv(a):
    f, m = a
    return ({x - m for x in f}, -m)


def lkey(a):
    return (tuple(sorted(a[0])), a[1])


gens = [(set(), 1), (set(), -1), ({0}, 0)]
seen = {lkey((set(), 0))}
frontier = [(set(), 0)]
ball_sizes = [1]
for _ in range(5):
    nxt = []
    for el in frontier:
        for g in gens:
            e2 = lamp_mul(el, g)
            if lkey(e2) not in seen:
                seen.add(lkey(e2))
                nxt.append(e2)
    frontier = nxt
    ball_sizes.append(len(seen))
out["lamplighter_ball_sizes"] = ball_sizes

lcases = []
random.seed(7)
for _ in range(32):
    a = ({x for x in random.sample(range(-4, 5), random.randint(0, 3))},
         random.randint(-3, 3))
    b = ({x for x in random.sample(range(-4, 5), random.randint(0, 3))},
         random.randint(-3, 3))
    ab, ai = lamp_mul(a, b), lamp_inv(a)
    lcases.append({"a": [sorted(a[0]), a[1]], "b": [sorted(b[0]), b[1]],
                   "ab": [sorted(ab[0]), ab[1]], "a_inv": [sorted(ai[0]), ai[1]]})
out["lamplighter_cases"] = lcases

# --- Folner instance 1: lamplighter --------------------------------------
# A = union of left cosets (0,i)*F_n, i in [0,17), F_n = lamps inside [-16,0].
# Encode element (lamps, shift) as uint64: bit field for lamps at absolute
# positions offset by +20, low 6 bits for shift+20.
OFF = 20


def enc(maskbits: np.ndarray, shift: int) -> np.ndarray:
    return (maskbits.astype(np.uint64) << np.uint64(6)) | np.uint64(shift + 20)


blocks = []
base = np.arange(2 ** 17, dtype=np.uint64)  # lamp pattern on [-16,0] +16 -> bits 0..16
for i in range(17):
    # coset (0,i)*(f,0) = (f+i, i): lamps f+i live at bits (i-16..i)+OFF = i+4..i+20
    blocks.append(enc(base << np.uint64(i + OFF - 16), i))
A = np.concatenate(blocks)
A.sort()
assert len(A) == 17 * 2 ** 17 and len(np.unique(A)) == len(A)

shift_field = A & np.uint64(63)
masks = A >> np.uint64(6)
# a*(f,m) = ({0} xor f, m); b*(f,m) = (f+1, m+1); b^-1*(f,m) = (f-1, m-1).
img_a = ((masks ^ np.uint64(1 << OFF)) << np.uint64(6)) | shift_field
img_b = ((masks << np.uint64(1)) << np.uint64(6)) | (shift_field + np.uint64(1))
img_binv = ((masks >> np.uint64(1)) << np.uint64(6)) | (shift_field - np.uint64(1))
# lamps live at absolute bits >= OFF-16 = 4, so masks >> 1 never drops a bit
assert int(((masks & np.uint64(0b1111)) != 0).sum()) == 0
K_images = np.concatenate([img_a, img_b, img_binv])
escape = np.setdiff1d(np.unique(K_images), A, assume_unique=False)
defect = Fraction(len(escape), len(A))
out["lamplighter_folner"] = {
    "A_size": int(len(A)),
    "escape": int(len(escape)),
    "defect": frac_str(defect),
    "quotient_S": [0, 17],          # interval [0,17)
    "quotient_escape": 2,           # {-1, 17}
    "quotient_defect": frac_str(Fraction(2, 17)),
}
assert defect == Fraction(2, 17), defect

# --- Folner instance 2: Dinf x Z/2 ----------------------------------------
S = dinf_ball(8)
assert len(S) == 32
A2 = {(el, f) for el in S for f in (0, 1)}
K2 = [((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, 0), 1)]


def gmul(a, b):
    return (dinf_mul(a[0], b[0]), a[1] ^ b[1])


esc2 = {gmul(k, x) for k in K2 for x in A2} - A2
out["dinf_x_z2_folner"] = {
    "A_size": len(A2), "escape": len(esc2),
    "defect": frac_str(Fraction(len(esc2), len(A2))),
    "quotient_escape": len({dinf_mul(k[0], s) for k in K2 for s in S} - set(S)),
    "quotient_defect": frac_str(Fraction(4, 32)),
}
assert Fraction(len(esc2), len(A2)) == Fraction(1, 8)

path = Path(__file__).resolve().parents[2] / "tests" / "data" / "groups_expected.json"
path.write_text(json.dumps(out, indent=1, sort_keys=True))
print("wrote", path, "defects:", out["lamplighter_folner"]["defect"],
      out["dinf_x_z2_folner"]["defect"])
