"""Shared helpers for the oracle scripts.

Every function here is written as directly as possible from first principles
(string rewriting, brute-force scans) so the C++ library can be tested against
an implementation that shares no code or design with it.
"""

from fractions import Fraction


# ---------------------------------------------------------------------------
# Infinite dihedral group via literal string rewriting over {s, S, t}
# (S denotes s^-1).  Used as the independent oracle for group arithmetic.
# ---------------------------------------------------------------------------

def dinf_reduce(word: str) -> str:
    """Reduce a word over {s,S,t} with tt->e, ts->St, tS->st, sS/Ss->e."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        i = 0
        out = []
        while i < len(w):
            if i + 1 < len(w):
                a, b = w[i], w[i + 1]
                if (a, b) in (("t", "t"), ("s", "S"), ("S", "s")):
                    i += 2
                    changed = True
                    continue
                if a == "t" and b == "s":
                    out.append("S")
                    w[i + 1] = "t"
                    i += 1
                    changed = True
                    continue
                if a == "t" and b == "S":
                    out.append("s")
                    w[i + 1] = "t"
                    i += 1
                    changed = True
                    continue
            out.append(w[i])
            i += 1
        w = out
    return "".join(w)


def dinf_to_string(n: int, r: int) -> str:
    return ("s" * n if n >= 0 else "S" * (-n)) + ("t" if r else "")


def dinf_from_string(w: str):
    n = w.count("s") - w.count("S")
    r = 1 if w.endswith("t") else 0
    if w != dinf_to_string(n, r):
        raise ValueError("not canonical: " + w)
    return (n, r)


def dinf_mul(a, b):
    return dinf_from_string(dinf_reduce(dinf_to_string(*a) + dinf_to_string(*b)))


def dinf_inv(a):
    w = dinf_to_string(*a)
    inv = "".join({"s": "S", "S": "s", "t": "t"}[c] for c in reversed(w))
    return dinf_from_string(dinf_reduce(inv))


def dinf_ball(radius: int):
    """BFS ball in the word metric for generators {s, s^-1, t}."""
    frontier = {("", (0, 0))}
    seen = {(0, 0)}
    for _ in range(radius):
        nxt = set()
        for w, el in frontier:
            for g in ("s", "S", "t"):
                red = dinf_reduce(w + g)
                el2 = dinf_from_string(red)
                if el2 not in seen:
                    seen.add(el2)
                    nxt.add((red, el2))
        frontier = nxt
    return sorted(seen)


# ---------------------------------------------------------------------------
# Toeplitz words on Z.  Stages = list of (period, residue, symbol).
# Earliest stage wins; completeness checked on residues mod the last period.
# ---------------------------------------------------------------------------

def toeplitz_eval(stages, n: int):
    for p, r, sym in stages:
        if n % p == r:
            return sym
    return None


def toeplitz_complete(stages):
    pmax = stages[-1][0]
    return all(toeplitz_eval(stages, r) is not None for r in range(pmax))


def toeplitz_smallest_uncovered(stages):
    """Smallest |n| never assigned, scanning n = 0, -1, 1, -2, 2, ..."""
    pmax = stages[-1][0]
    holes = {r for r in range(pmax) if toeplitz_eval(stages, r) is None}
    if not holes:
        return None
    n = 0
    while True:
        for cand in ((n, -n) if n == 0 else (-n, n)):
            if cand % pmax in holes:
                return cand
        n += 1


def period_doubling_stages(K: int):
    """Stages (2^k, 2^(k-1)-1, sym) for k=1..K plus the terminal completion
    stage (2^K, 2^K-1, sym_{K+1}); sym_k = '0' for odd k, '1' for even k."""
    sym = lambda k: "0" if k % 2 == 1 else "1"
    st = [(2 ** k, 2 ** (k - 1) - 1, sym(k)) for k in range(1, K + 1)]
    st.append((2 ** K, 2 ** K - 1, sym(K + 1)))
    return st


def word_array(stages, lo: int, hi: int):
    """Dict n -> symbol on [lo, hi]."""
    return {n: toeplitz_eval(stages, n) for n in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# Amplified word on the infinite dihedral group:
#   wh((n,0)) = w(n),  wh((n,1)) = w(-n).
# ---------------------------------------------------------------------------

def amplified_eval(stages, el):
    n, r = el
    return toeplitz_eval(stages, n if r == 0 else -n)


def dinf_ball_formula(radius: int):
    """ball(r) = {(m,0): |m|<=r} u {(m,1): |m|<=r-1}, canonically sorted."""
    out = [(m, 0) for m in range(-radius, radius + 1)]
    out += [(m, 1) for m in range(-(radius - 1), radius)] if radius >= 1 else []
    return sorted(out)


def frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"
