"""Level quotients ``G_n = G / St_G(n)`` as permutation groups on the
``d**n`` words of length ``n`` (lexicographic order)."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import permutations as P
from .automaton import DEFAULT_MAX_LEVEL, DEFAULT_MAX_STATES, act, check_vertex, evaluate, generator_machines
from .errors import BadPoint, BadVertex, LevelTooLarge, NotAMember
from .stabchain import StabChain


class PermGroup:
    """A permutation group given by generators, with a lazily built chain."""

    def __init__(self, degree, gens, base_prefix=(), chain=None):
        self.degree = degree
        self.gens = tuple(P.freeze(g) for g in gens)
        self._base_prefix = tuple(base_prefix)
        if chain is not None:
            self.__dict__["chain"] = chain

    @cached_property
    def chain(self):
        return StabChain(self.degree, self.gens, self._base_prefix)

    def order(self):
        return self.chain.order()

    def __contains__(self, g):
        return self.chain.contains(g)

    def is_trivial(self):
        return all(P.is_identity(g) for g in self.gens)

    def identity(self):
        return P.identity(self.degree)


class LevelQuotient(PermGroup):
    def __init__(self, spec, n, gens, names):
        super().__init__(spec.d ** n, gens)
        self.spec = spec
        self.n = n
        self.d = spec.d
        self.names = tuple(names)
        self._rist = {}

    @property
    def root(self):
        return self

    @property
    def named_gens(self):
        return dict(zip(self.names, self.gens))

    def point_index(self, word):
        w = check_vertex(word, self.d)
        if len(w) != self.n:
            raise BadPoint(f"{word!r} is not a level-{self.n} word")
        idx = 0
        for x in w:
            idx = idx * self.d + x
        return idx

    def point_word(self, idx):
        letters = []
        for _ in range(self.n):
            idx, x = divmod(idx, self.d)
            letters.append(x)
        return "".join(map(str, reversed(letters)))

    def subtree_points(self, v):
        """Level-n indices of the leaves below vertex ``v``."""
        w = check_vertex(v, self.d)
        if len(w) > self.n:
            raise BadVertex(f"{v!r} lies below level {self.n}")
        idx = 0
        for x in w:
            idx = idx * self.d + x
        width = self.d ** (self.n - len(w))
        return range(idx * width, (idx + 1) * width)

    def vertex_image(self, g, v):
        """Image of an internal vertex under a level-n permutation."""
        w = check_vertex(v, self.d)
        if not w:
            return ()
        leaf = self.subtree_points(w)[0]
        image = self.point_word(int(g[leaf]))
        return tuple(int(ch) for ch in image[: len(w)])

    def image(self, word):
        """Level-n image of a word over the generators."""
        return act(evaluate(self.spec, word), self.n, max_level=max(self.n, DEFAULT_MAX_LEVEL))

    def __repr__(self):
        return f"<LevelQuotient n={self.n} d={self.d} gens={list(self.names)}>"


class Subgroup(PermGroup):
    def __init__(self, parent, gens, base_prefix=(), chain=None, check=True):
        super().__init__(parent.degree, gens, base_prefix, chain)
        self.parent = parent
        if check:
            for g in self.gens:
                if g not in parent.root:
                    raise NotAMember("subgroup generator outside the quotient")

    @property
    def root(self):
        return self.parent.root

    def __repr__(self):
        return f"<Subgroup of {self.root!r} with {len(self.gens)} generators>"


def level_quotient(spec, n, max_level=DEFAULT_MAX_LEVEL, max_states=DEFAULT_MAX_STATES):
    if n < 0:
        raise ValueError("level must be non-negative")
    if n > max_level:
        raise LevelTooLarge(f"level {n} exceeds the limit {max_level}")
    machines = generator_machines(spec, max_states)
    gens = [act(machines[name], n, max_level=max_level) for name in spec.names]
    return LevelQuotient(spec, n, gens, spec.names)


def order(q):
    return q.order()


def _orbit_size(gens, degree, start=0):
    seen = np.zeros(degree, dtype=bool)
    seen[start] = True
    frontier = np.array([start])
    while frontier.size:
        new = np.unique(np.concatenate([g[frontier] for g in gens])) if gens else frontier[:0]
        new = new[~seen[new]]
        seen[new] = True
        frontier = new
    return int(seen.sum())


def is_level_transitive(spec, n, max_level=DEFAULT_MAX_LEVEL):
    """Single orbit on level ``n`` (which forces a single orbit on every
    level above it)."""
    q = level_quotient(spec, n, max_level)
    return _orbit_size(list(q.gens), q.degree) == q.degree


def product_is_level_transitive(spec, n, order_of_names=None, max_level=DEFAULT_MAX_LEVEL):
    """Whether the product of the generators (spec order unless given) acts
    as a single ``d**n``-cycle."""
    names = list(order_of_names or spec.names)
    g = act(evaluate(spec, tuple((name, 1) for name in names)), n, max_level=max_level)
    cyc = P.cycles(g, include_fixed=True)
    return len(cyc) == 1


def _as_indices(q, points):
    out = []
    for p in points:
        if isinstance(p, (int, np.integer)):
            if not 0 <= int(p) < q.degree:
                raise BadPoint(f"point {p} out of range")
            out.append(int(p))
        else:
            try:
                out.append(q.root.point_index(p))
            except BadVertex as exc:
                raise BadPoint(str(exc)) from None
    return sorted(set(out))


def pointwise_stabilizer(q, points):
    """Subgroup of ``q`` fixing every listed level-n point."""
    idx = _as_indices(q, points)
    if not idx:
        return Subgroup(q, q.gens, chain=q.chain, check=False)
    chain = StabChain(q.degree, q.gens, base_prefix=idx)
    gens = chain.stabilizer_generators(len(idx))
    return Subgroup(q, gens, chain=chain.stabilizer(len(idx)), check=False)


def rigid_stabilizer(q, v):
    """Elements of ``q`` fixing every level-n word outside the subtree at ``v``."""
    root = q.root
    w = check_vertex(v, root.d)
    if len(w) >= root.n:
        raise BadVertex(f"rigid stabilizers need a vertex above level {root.n}")
    cache = root._rist if q is root else None
    if cache is not None and w in cache:
        return cache[w]
    inside = root.subtree_points(w)
    outside = [i for i in range(q.degree) if not inside.start <= i < inside.stop]
    sub = pointwise_stabilizer(q, outside)
    if cache is not None:
        cache[w] = sub
    return sub


def rigid_level_stabilizer(q, k):
    """Product of the rigid stabilizers of all level-k vertices."""
    gens = []
    for v in level_vertices(q.root.d, k):
        gens.extend(rigid_stabilizer(q, v).gens)
    return Subgroup(q, gens, check=False)


def level_vertices(d, k):
    out = [()]
    for _ in range(k):
        out = [w + (x,) for w in out for x in range(d)]
    return out


def normal_closure(q, elems):
    """Smallest subgroup of ``q`` containing ``elems`` and closed under
    conjugation by the generators of ``q``."""
    elems = [P.freeze(e) for e in elems]
    for e in elems:
        if e not in q:
            raise NotAMember("element is not in the group")
    chain = StabChain(q.degree)
    gens = []
    queue = []
    for e in elems:
        if chain.add_generator(e):
            gens.append(e)
            queue.append(e)
    while queue:
        h = queue.pop(0)
        for g in q.gens:
            c = P.conj(h, g)
            if chain.add_generator(c):
                gens.append(c)
                queue.append(c)
    return Subgroup(q, gens, chain=chain, check=False)


def derived_subgroup(q):
    gens = q.gens
    comms = [P.commutator(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    return normal_closure(q, comms)


def abelianization_data(q):
    """``(|q / q'|, orders of the generator images in q / q')``."""
    der = derived_subgroup(q)
    quotient_order = q.order() // der.order()
    gen_orders = []
    for g in q.gens:
        m, x = 1, g
        while x not in der:
            x = P.mul(x, g)
            m += 1
        gen_orders.append(m)
    return quotient_order, gen_orders


def subgroup_from_words(q, words):
    return Subgroup(q, [q.image(w) for w in words], check=False)


# -- Hausdorff dimension estimates ---------------------------------------------

@dataclass(frozen=True)
class HdimEstimate:
    n: int
    order: int
    value: Fraction
    exact: bool
    relative: Fraction = None  # normalized by |G_n| instead of |Aut T_n|

    @property
    def decimal(self):
        return f"{float(self.value):.9f}"


def aut_log_order(d, n):
    """``log_d |Aut T_n| = (d^n - 1) / (d - 1)``."""
    return (d ** n - 1) // (d - 1)


def _log_ratio(num, den, d):
    """``log(num) / log(den)`` as an exact rational when both are powers of
    ``d``; otherwise a rational rounded to 1e-12."""
    a, b = _exact_log(num, d), _exact_log(den, d)
    if a is not None and b is not None:
        return (Fraction(a, b) if b else Fraction(0)), True
    if den == 1:
        return Fraction(0), True
    x = math.log(num) / math.log(den)
    return Fraction(round(x * 10**12), 10**12), False


def _exact_log(value, d):
    k = 0
    while value > 1 and value % d == 0:
        value //= d
        k += 1
    return k if value == 1 else None


def hdim_sequence(spec, n_max, max_level=DEFAULT_MAX_LEVEL, threads=1):
    """``eta_n = log|G_n| / log|Aut T_n|`` for ``n = 1..n_max``."""
    if n_max > max_level:
        raise LevelTooLarge(f"level {n_max} exceeds the limit {max_level}")

    def one(n):
        size = level_quotient(spec, n, max_level).order()
        value, exact = _log_ratio(size, spec.d ** aut_log_order(spec.d, n), spec.d)
        return HdimEstimate(n, size, value, exact, Fraction(1) if size > 1 else Fraction(0))

    levels = range(1, n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, levels))
    return [one(n) for n in levels]


def subgroup_hdim_sequence(spec, words, n_max, max_level=DEFAULT_MAX_LEVEL):
    """Absolute and relative dimension estimates of ``<words>``."""
    out = []
    for n in range(1, n_max + 1):
        q = level_quotient(spec, n, max_level)
        h = subgroup_from_words(q, words).order()
        value, exact = _log_ratio(h, spec.d ** aut_log_order(spec.d, n), spec.d)
        relative, _ = _log_ratio(h, q.order(), spec.d)
        out.append(HdimEstimate(n, h, value, exact, relative))
    return out
