"""Permutations of ``{0..n-1}`` stored as read-only numpy index arrays.

``p[i]`` is the image of ``i``.  Products are read left to right, so
``mul(p, q)`` applies ``p`` first and then ``q``, matching the right action
on the tree.
"""

from math import lcm

import numpy as np

DTYPE = np.int64


def freeze(a):
    a = np.ascontiguousarray(a, dtype=DTYPE)
    a.flags.writeable = False
    return a


def identity(n):
    return freeze(np.arange(n, dtype=DTYPE))


def from_images(images):
    p = np.asarray(images, dtype=DTYPE)
    if p.ndim != 1 or not np.array_equal(np.sort(p), np.arange(len(p))):
        raise ValueError(f"not a permutation: {list(images)!r}")
    return freeze(p)


def mul(p, q):
    """``p`` then ``q``."""
    return freeze(q[p])


def inv(p):
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=DTYPE)
    return freeze(out)


def power(p, k):
    if k < 0:
        p, k = inv(p), -k
    result = identity(len(p))
    while k:
        if k & 1:
            result = mul(result, p)
        p = mul(p, p)
        k >>= 1
    return result


def conj(x, g):
    """``x^g = g^-1 x g``."""
    return mul(mul(inv(g), x), g)


def commutator(a, b):
    """``[a, b] = a^-1 b^-1 a b``."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def is_identity(p):
    return bool(np.array_equal(p, np.arange(len(p))))


def key(p):
    """Hashable fingerprint."""
    return p.tobytes()


def cycles(p, include_fixed=False):
    """Disjoint cycles, each starting at its smallest point, ordered by it."""
    seen = np.zeros(len(p), dtype=bool)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = int(p[start])
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = int(p[j])
        if len(cyc) > 1 or include_fixed:
            out.append(tuple(cyc))
    return out


def order(p):
    return lcm(*(len(c) for c in cycles(p, include_fixed=True))) if len(p) else 1


def from_cycles(cycle_list, n):
    images = list(range(n))
    seen = set()
    for cyc in cycle_list:
        for x in cyc:
            if not 0 <= x < n:
                raise ValueError(f"point {x} out of range for degree {n}")
            if x in seen:
                raise ValueError(f"cycles are not disjoint at point {x}")
            seen.add(x)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return freeze(np.array(images, dtype=DTYPE))


def format_cycles(p, label=str):
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(label(x) for x in c) + ")" for c in cs)
