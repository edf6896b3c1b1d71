"""Deterministic Schreier-Sims stabilizer chains.

Base points are taken in the order given by ``base_prefix`` followed by the
smallest point moved by each new strong generator, so chains (and anything
derived from them) are reproducible.  Transversals keep their coset
representatives once chosen; together with the per-level record of checked
Schreier generators this lets generators be added incrementally without
redoing earlier work.
"""

from collections import deque

import numpy as np

from . import permutations as P
from .errors import ResourceLimit


class _Level:
    __slots__ = ("point", "gens", "reps", "inv", "orbit", "checked")

    def __init__(self, point, degree):
        self.point = point
        self.gens = []  # indices into StabChain.strong
        ident = P.identity(degree)
        self.reps = {point: ident}
        self.inv = {point: ident}
        self.orbit = [point]
        self.checked = set()

    def copy(self):
        new = object.__new__(_Level)
        new.point = self.point
        new.gens = list(self.gens)
        new.reps = dict(self.reps)
        new.inv = dict(self.inv)
        new.orbit = list(self.orbit)
        new.checked = set(self.checked)
        return new


class StabChain:
    """Stabilizer chain of the group generated by ``gens``.

    ``levels[k]`` stores base point ``b_k``, the strong generators fixing
    ``b_0..b_{k-1}`` and a transversal of the orbit of ``b_k`` under them.
    """

    def __init__(self, degree, gens=(), base_prefix=()):
        self.degree = degree
        self.strong = []
        self.levels = []
        self._identity = P.identity(degree)
        for b in base_prefix:
            self.levels.append(_Level(int(b), degree))
        for g in gens:
            self.add_generator(g)

    # -- queries ---------------------------------------------------------------

    @property
    def base(self):
        return [lvl.point for lvl in self.levels]

    def order(self):
        out = 1
        for lvl in self.levels:
            out *= len(lvl.orbit)
        return out

    def sift(self, g, start=0):
        """Strip ``g`` through the levels; returns ``(residue, depth)``."""
        for k in range(start, len(self.levels)):
            lvl = self.levels[k]
            beta = int(g[lvl.point])
            if beta == lvl.point:
                continue
            u_inv = lvl.inv.get(beta)
            if u_inv is None:
                return g, k
            g = P.mul(g, u_inv)
        return g, len(self.levels)

    def contains(self, g):
        residue, depth = self.sift(g)
        return depth == len(self.levels) and P.is_identity(residue)

    __contains__ = contains

    def generators(self):
        """Strong generators of the whole group."""
        if not self.levels:
            return []
        return [self.strong[i] for i in self.levels[0].gens]

    def stabilizer(self, k):
        """Chain of the pointwise stabilizer of ``b_0..b_{k-1}``."""
        sub = object.__new__(StabChain)
        sub.degree = self.degree
        sub._identity = self._identity
        sub.levels = [lvl.copy() for lvl in self.levels[k:]]
        sub.strong = list(self.strong)
        return sub

    def stabilizer_generators(self, k):
        if k >= len(self.levels):
            return []
        return [self.strong[i] for i in self.levels[k].gens]

    # -- construction ------------------------------------------------------------

    def add_generator(self, g):
        """Add ``g``; returns False when it was already a member."""
        g = P.freeze(g)
        if self.contains(g):
            return False
        depth = 0
        while depth < len(self.levels) and int(g[self.levels[depth].point]) == self.levels[depth].point:
            depth += 1
        if depth == len(self.levels):
            self.levels.append(_Level(self._first_moved(g), self.degree))
        self._insert(g, range(0, depth + 1))
        self._complete(depth)
        return True

    def _first_moved(self, g):
        moved = np.flatnonzero(g != np.arange(self.degree))
        return int(moved[0])

    def _insert(self, g, level_range):
        idx = len(self.strong)
        self.strong.append(g)
        for k in level_range:
            self.levels[k].gens.append(idx)
            self._extend_orbit(self.levels[k])

    def _extend_orbit(self, lvl):
        gens = [self.strong[i] for i in lvl.gens]
        queue = deque(lvl.orbit)
        while queue:
            beta = queue.popleft()
            u = lvl.reps[beta]
            for s in gens:
                img = int(s[beta])
                if img not in lvl.reps:
                    rep = P.mul(u, s)
                    lvl.reps[img] = rep
                    lvl.inv[img] = P.inv(rep)
                    lvl.orbit.append(img)
                    queue.append(img)

    def _complete(self, start):
        i = start
        while i >= 0:
            lvl = self.levels[i]
            descended = False
            for beta in list(lvl.orbit):
                u = lvl.reps[beta]
                for s_id in list(lvl.gens):
                    if (beta, s_id) in lvl.checked:
                        continue
                    lvl.checked.add((beta, s_id))
                    s = self.strong[s_id]
                    img = int(s[beta])
                    h = P.mul(P.mul(u, s), lvl.inv[img])
                    if P.is_identity(h):
                        continue
                    residue, j = self.sift(h, i + 1)
                    if j == len(self.levels):
                        if P.is_identity(residue):
                            continue
                        self.levels.append(_Level(self._first_moved(residue), self.degree))
                    self._insert(residue, range(i + 1, j + 1))
                    i = j
                    descended = True
                    break
                if descended:
                    break
            if not descended:
                i -= 1


def bfs_elements(gens, degree, limit=10**4):
    """All elements of ``<gens>`` by breadth-first closure, or ``None`` when
    there are more than ``limit``."""
    ident = P.identity(degree)
    seen = {P.key(ident)}
    queue = deque([ident])
    gens = [P.freeze(g) for g in gens]
    while queue:
        x = queue.popleft()
        for s in gens:
            y = P.mul(x, s)
            k = P.key(y)
            if k not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(k)
                queue.append(y)
    return seen


def bfs_order(gens, degree, limit=10**4):
    elems = bfs_elements(gens, degree, limit)
    if elems is None:
        raise ResourceLimit(f"group has more than {limit} elements")
    return len(elems)
