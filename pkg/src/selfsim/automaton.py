"""Finite-state automorphisms of the d-ary rooted tree.

Conventions (fixed package-wide):

* vertices are words over ``{0..d-1}``; the empty word is the root;
* an element acts on the right, ``(xw)^g = x^{pi_g} w^{g|_x}``, so the
  section list of a state is indexed by the *source* letter;
* products read left to right: ``g*h`` applies ``g`` first.  Hence the
  root permutation of ``g*h`` is ``pi_g`` followed by ``pi_h`` and its
  section at ``x`` is ``g|_x * h|_{x^{pi_g}}``.

Level-``n`` actions are permutations of the ``d**n`` words of length ``n``
listed in lexicographic order (first letter most significant).
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import permutations as P
from .errors import (
    ArityMismatch,
    BadVertex,
    LevelTooLarge,
    ResourceLimit,
    UnknownGenerator,
)
from .words import as_word, format_word, letters

DEFAULT_MAX_STATES = 10**6
DEFAULT_MAX_LEVEL = 16


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A Mealy machine with a distinguished initial state.

    ``perms[s]`` is the root permutation of state ``s`` (a tuple of images)
    and ``sections[s][x]`` the state reached after reading letter ``x``.
    Equality and hashing are extensional: two machines are equal iff their
    minimized forms coincide.
    """

    d: int
    perms: tuple
    sections: tuple
    initial: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("arity must be at least 2")
        if len(self.perms) != len(self.sections) or not self.perms:
            raise ValueError("perms and sections must describe the same non-empty state set")
        n = len(self.perms)
        letters_ = tuple(range(self.d))
        for s, (pi, sec) in enumerate(zip(self.perms, self.sections)):
            if tuple(sorted(pi)) != letters_:
                raise ValueError(f"state {s}: {pi!r} is not a permutation of 0..{self.d - 1}")
            if len(sec) != self.d or not all(0 <= t < n for t in sec):
                raise ValueError(f"state {s}: sections {sec!r} do not resolve")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")

    @classmethod
    def identity(cls, d):
        return cls(d, (tuple(range(d)),), ((0,) * d,))

    @classmethod
    def from_recursion(cls, d, table, initial):
        """Build from ``{name: (root_perm, (section names...))}``; ``None`` or
        ``"1"`` denotes the trivial section."""
        names = list(table)
        index = {name: i for i, name in enumerate(names)}
        one = len(names)
        perms, sections = [], []
        for name in names:
            pi, secs = table[name]
            perms.append(tuple(pi))
            sections.append(tuple(one if t in (None, "1") else index[t] for t in secs))
        perms.append(tuple(range(d)))
        sections.append((one,) * d)
        return cls(d, tuple(perms), tuple(sections), index[initial])

    @property
    def num_states(self):
        return len(self.perms)

    def with_initial(self, state):
        return Automorphism(self.d, self.perms, self.sections, state)

    def reachable(self):
        """States reachable from the initial one, in BFS/letter order."""
        order = [self.initial]
        seen = {self.initial}
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.sections[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    @cached_property
    def minimized(self):
        """Canonical minimal machine: Moore partition refinement on the
        reachable part, then BFS renumbering from the initial state."""
        reach = self.reachable()
        cls = {}
        ids = {}
        for s in reach:
            cls[s] = ids.setdefault(self.perms[s], len(ids))
        count = len(ids)
        while True:
            ids = {}
            new = {}
            for s in reach:
                sig = (cls[s], tuple(cls[t] for t in self.sections[s]))
                new[s] = ids.setdefault(sig, len(ids))
            cls = new
            if len(ids) == count:
                break
            count = len(ids)
        rep = {}
        for s in reach:
            rep.setdefault(cls[s], s)
        start = cls[self.initial]
        number = {start: 0}
        queue = deque([start])
        perms, sections = [], []
        while queue:
            c = queue.popleft()
            s = rep[c]
            perms.append(self.perms[s])
            row = []
            for t in self.sections[s]:
                ct = cls[t]
                if ct not in number:
                    number[ct] = len(number)
                    queue.append(ct)
                row.append(number[ct])
            sections.append(tuple(row))
        m = Automorphism(self.d, tuple(perms), tuple(sections), 0)
        m.__dict__["minimized"] = m
        return m

    @cached_property
    def canonical_key(self):
        m = self.minimized
        return (m.d, m.perms, m.sections)

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self):
        return hash(self.canonical_key)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        m = self.minimized
        return f"<Automorphism d={self.d} states={m.num_states} root={m.perms[0]}>"

    def vertex_image(self, v):
        v = check_vertex(v, self.d)
        s = self.initial
        out = []
        for x in v:
            out.append(self.perms[s][x])
            s = self.sections[s][x]
        return tuple(out)


@dataclass(frozen=True)
class Finite:
    order: int


@dataclass(frozen=True)
class AtLeast:
    bound: int


def check_vertex(v, d):
    """Normalize a vertex given as a string of digits or a letter sequence."""
    if isinstance(v, str):
        if not all(ch.isdigit() for ch in v):
            raise BadVertex(f"vertex {v!r} must be a string of letters")
        word = tuple(int(ch) for ch in v)
    else:
        try:
            word = tuple(int(x) for x in v)
        except (TypeError, ValueError):
            raise BadVertex(f"bad vertex {v!r}") from None
    if any(not 0 <= x < d for x in word):
        raise BadVertex(f"vertex {v!r} has a letter outside 0..{d - 1}")
    return word


def compose(g, h, max_states=DEFAULT_MAX_STATES):
    """Product ``g*h`` (``g`` first) as a product machine on state pairs."""
    if g.d != h.d:
        raise ArityMismatch(f"arity {g.d} vs {h.d}")
    start = (g.initial, h.initial)
    index = {start: 0}
    queue = deque([start])
    perms, sections = [], []
    while queue:
        i, j = queue.popleft()
        pg, ph = g.perms[i], h.perms[j]
        perms.append(tuple(ph[pg[x]] for x in range(g.d)))
        row = []
        for x in range(g.d):
            pair = (g.sections[i][x], h.sections[j][pg[x]])
            if pair not in index:
                if len(index) >= max_states:
                    raise ResourceLimit(f"product machine exceeds {max_states} states")
                index[pair] = len(index)
                queue.append(pair)
            row.append(index[pair])
        sections.append(tuple(row))
    return Automorphism(g.d, tuple(perms), tuple(sections), 0)


def inverse(g):
    perms, sections = [], []
    for pi, sec in zip(g.perms, g.sections):
        pinv = [0] * g.d
        for x, y in enumerate(pi):
            pinv[y] = x
        perms.append(tuple(pinv))
        sections.append(tuple(sec[pinv[x]] for x in range(g.d)))
    return Automorphism(g.d, tuple(perms), tuple(sections), g.initial)


def section(g, v):
    """``g|_v`` obtained by reading the letters of ``v`` one at a time."""
    s = g.initial
    for x in check_vertex(v, g.d):
        s = g.sections[s][x]
    return g.with_initial(s)


def act(g, n, max_level=DEFAULT_MAX_LEVEL):
    """Permutation induced on level ``n`` (lexicographic point order)."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if n > max_level:
        raise LevelTooLarge(f"level {n} exceeds the limit {max_level}")
    m = g.minimized
    d = m.d
    prev = np.zeros((m.num_states, 1), dtype=P.DTYPE)
    pis = np.array(m.perms, dtype=P.DTYPE)
    secs = np.array(m.sections, dtype=P.DTYPE)
    for k in range(1, n + 1):
        block = d ** (k - 1)
        cur = np.empty((m.num_states, d * block), dtype=P.DTYPE)
        for x in range(d):
            cur[:, x * block:(x + 1) * block] = pis[:, x:x + 1] * block + prev[secs[:, x]]
        prev = cur
    return P.freeze(prev[0])


def is_identity(g):
    m = g.minimized
    return m.num_states == 1 and m.perms[0] == tuple(range(m.d))


def power(g, k, max_states=DEFAULT_MAX_STATES):
    if k < 0:
        g, k = inverse(g), -k
    result = Automorphism.identity(g.d)
    base = g.minimized
    while k:
        if k & 1:
            result = compose(result, base, max_states).minimized
        k >>= 1
        if k:
            base = compose(base, base, max_states).minimized
    return result


def order_bounded(g, max_level, max_order, max_states=DEFAULT_MAX_STATES):
    """``Finite(m)`` for the least ``m <= max_order`` with ``g^m = 1``,
    otherwise ``AtLeast(k)`` with ``k`` the exact order of the level
    ``max_level`` image."""
    if max_level < 1 or max_order < 1:
        raise ValueError("max_level and max_order must be positive")
    base = g.minimized
    acc = base
    for m in range(1, max_order + 1):
        if is_identity(acc):
            return Finite(m)
        acc = compose(acc, base, max_states).minimized
    return AtLeast(P.order(act(g, max_level, max_level=max(max_level, DEFAULT_MAX_LEVEL))))


# -- machines of group specs ----------------------------------------------------

@lru_cache(maxsize=64)
def generator_machines(spec, max_states=DEFAULT_MAX_STATES):
    """One shared machine for all generators of ``spec``.

    States are freely reduced words over the generators and their inverses;
    for automaton specs these are single letters, arbitrary section words are
    explored until closure (bounded by ``max_states``).  Returns a mapping
    name -> minimized :class:`Automorphism`.
    """
    d = spec.d
    gens = {g.name: g for g in spec.generators}
    perm = {name: tuple(g.perm) for name, g in gens.items()}
    perm_inv = {}
    for name, pi in perm.items():
        pinv = [0] * d
        for x, y in enumerate(pi):
            pinv[y] = x
        perm_inv[name] = tuple(pinv)
    sec_letters = {
        name: [tuple(letters(w)) for w in g.sections] for name, g in gens.items()
    }

    def free_reduce(seq):
        out = []
        for name, e in seq:
            if out and out[-1][0] == name and out[-1][1] == -e:
                out.pop()
            else:
                out.append((name, e))
        return tuple(out)

    def state_data(word):
        pi = list(range(d))
        for name, e in word:
            step = perm[name] if e > 0 else perm_inv[name]
            pi = [step[y] for y in pi]
        secs = []
        for x in range(d):
            out = []
            y = x
            for name, e in word:
                if e > 0:
                    out.extend(sec_letters[name][y])
                    y = perm[name][y]
                else:
                    y = perm_inv[name][y]
                    out.extend((n, -s) for n, s in reversed(sec_letters[name][y]))
            secs.append(free_reduce(out))
        return tuple(pi), secs

    index = {}
    queue = deque()
    for name in gens:
        w = ((name, 1),)
        index[w] = len(index)
        queue.append(w)
    perms, sections = {}, {}
    while queue:
        w = queue.popleft()
        pi, secs = state_data(w)
        row = []
        for t in secs:
            if t not in index:
                if len(index) >= max_states:
                    raise ResourceLimit(
                        f"generator automaton exceeds {max_states} states"
                    )
                index[t] = len(index)
                queue.append(t)
            row.append(index[t])
        perms[index[w]] = pi
        sections[index[w]] = tuple(row)
    n = len(index)
    perms_t = tuple(perms[i] for i in range(n))
    sections_t = tuple(sections[i] for i in range(n))
    return {
        name: Automorphism(d, perms_t, sections_t, index[((name, 1),)]).minimized
        for name in gens
    }


def evaluate(spec, word, max_states=DEFAULT_MAX_STATES):
    """Machine of a word over the generators of ``spec`` (left to right)."""
    word = as_word(word)
    machines = generator_machines(spec, max_states)
    result = Automorphism.identity(spec.d)
    for name, exp in word:
        if name not in machines:
            raise UnknownGenerator(f"unknown generator {name!r} in {format_word(word)!r}")
        result = compose(result, power(machines[name], exp, max_states), max_states).minimized
    return result


__all__ = [
    "Automorphism",
    "AtLeast",
    "Finite",
    "act",
    "check_vertex",
    "compose",
    "evaluate",
    "generator_machines",
    "inverse",
    "is_identity",
    "order_bounded",
    "power",
    "section",
]
