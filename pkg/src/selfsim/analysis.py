"""Verdicts and finite-depth witnesses built on the level-quotient engine.

* :func:`predict_lr` classifies quadratic portraits by orbifold type;
* :func:`branch_evidence` tabulates rigid stabilizers in a level quotient;
* :func:`lemma_rist_closure_check` and :func:`torsion_retract_witness` run
  the normal-subgroup and retract constructions inside a quotient and assert
  the facts they rely on;
* :func:`section_surjectivity_witness` searches for words fixing a vertex
  with a prescribed section.
"""

import hashlib
import random
from collections import deque
from dataclasses import asdict, dataclass, field

from . import __version__
from . import permutations as P
from .automaton import (
    DEFAULT_MAX_STATES,
    check_vertex,
    compose,
    generator_machines,
    inverse,
    section,
)
from .errors import NoSuchOrbit, NotAMember, OrderMismatch, UnknownGenerator
from .portrait import Periodic, Preperiodic, critical_orbit_type, orbifold
from .quotient import (
    Subgroup,
    derived_subgroup,
    level_quotient,
    level_vertices,
    normal_closure,
    pointwise_stabilizer,
    rigid_level_stabilizer,
    rigid_stabilizer,
)
from .words import format_word, reduce_word

HAS_LR = "HasLR"
NOT_LR = "NotLR"


@dataclass(frozen=True)
class Assertion:
    name: str
    passed: bool
    details: str = ""

    def to_dict(self):
        return {"name": self.name, "pass": self.passed, "details": self.details}


# -- LR classifier -------------------------------------------------------------

@dataclass(frozen=True)
class LrVerdict:
    prediction: str
    basis: str
    orbit_type: object
    notes: str


def predict_lr(p):
    """Local retractions for IMG of a quadratic PCF polynomial occur exactly
    for a euclidean orbifold; no group computation is involved."""
    orbit_type = critical_orbit_type(p)
    sig = orbifold(p)
    euclidean = sig.cls == "euclidean"
    if orbit_type == Periodic(1):
        notes = "critical point fixed: the power map z^2; IMG is infinite cyclic"
    elif orbit_type == Preperiodic(2, 1):
        notes = "Chebyshev combinatorics 2z^2-1; IMG is infinite dihedral"
    elif isinstance(orbit_type, Periodic):
        notes = ("periodic, not the power map: IMG is torsion-free and weakly regular "
                 "branch over a finitely generated commutator subgroup of infinite index")
    else:
        notes = "preperiodic, not Chebyshev: IMG is regular branch"
    return LrVerdict(HAS_LR if euclidean else NOT_LR, sig.cls, orbit_type, notes)


# -- branch evidence -------------------------------------------------------------

@dataclass
class LevelEvidence:
    k: int
    rist_orders: dict
    rist_derived_nontrivial: dict
    rist_product_order: int
    index: int


@dataclass
class BranchEvidence:
    n: int
    quotient_order: int
    levels: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def _vertex_label(v):
    return "".join(map(str, v))


def branch_evidence(spec, k_max, n):
    """Rigid stabilizer orders at levels ``1..k_max`` inside ``G_n``."""
    if not 1 <= k_max < n:
        raise ValueError("need 1 <= k_max < n")
    q = level_quotient(spec, n)
    size = q.order()
    out = BranchEvidence(n, size)
    for k in range(1, k_max + 1):
        orders, derived = {}, {}
        for v in level_vertices(spec.d, k):
            r = rigid_stabilizer(q, v)
            orders[_vertex_label(v)] = r.order()
            derived[_vertex_label(v)] = derived_subgroup(r).order() > 1
        prod = rigid_level_stabilizer(q, k).order()
        out.levels.append(LevelEvidence(k, orders, derived, prod, size // prod))
    return out


# -- Lemma harnesses ---------------------------------------------------------------

@dataclass
class CheckResult:
    passed: bool
    witness: dict = None
    vertices_checked: int = 0
    translates_checked: int = 0

    def to_dict(self):
        return asdict(self)


def _level_action(q, g, k):
    """Permutation of the level-k vertices induced by a level-n permutation."""
    width = q.d ** (q.n - k)
    return [int(g[i * width]) // width for i in range(q.d ** k)]


def _vertex_orbit(q, v):
    k = len(v)
    start = 0
    for x in v:
        start = start * q.d + x
    actions = [_level_action(q, g, k) for g in q.gens]
    seen = {start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for a in actions:
            j = a[i]
            if j not in seen:
                seen.add(j)
                queue.append(j)
    words = []
    for i in sorted(seen):
        w = []
        for _ in range(k):
            i, x = divmod(i, q.d)
            w.append(x)
        words.append(tuple(reversed(w)))
    return words


def _rist_derived(q, v):
    cache = q.__dict__.setdefault("_rist_derived", {})
    if v not in cache:
        cache[v] = derived_subgroup(rigid_stabilizer(q, v))
    return cache[v]


def lemma_rist_closure_check(q, x):
    """For the normal closure ``N`` of ``x`` and every vertex ``v`` moved by
    ``N``: the derived subgroups of the rigid stabilizers of all translates
    of ``v`` lie in ``N``.  A failure is an implementation bug."""
    x = P.freeze(x)
    if P.is_identity(x):
        raise ValueError("the element must be non-trivial")
    if x not in q:
        raise NotAMember("element is not in the quotient")
    N = normal_closure(q, [x])
    vertices = 0
    translates = 0
    done = set()
    for k in range(1, q.n):
        for v in level_vertices(q.d, k):
            if not any(q.vertex_image(g, v) != v for g in N.gens):
                continue
            vertices += 1
            for u in _vertex_orbit(q, v):
                if u in done:
                    continue
                done.add(u)
                translates += 1
                for h in _rist_derived(q, u).gens:
                    if h not in N:
                        return CheckResult(False, {
                            "vertex": _vertex_label(v),
                            "translate": _vertex_label(u),
                            "element": P.format_cycles(h, q.point_word),
                        }, vertices, translates)
    return CheckResult(True, None, vertices, translates)


@dataclass
class WitnessReport:
    vertex: str
    orbit: list
    p: int
    rist_order: int
    R_order: int
    H_order: int
    A_order: int
    degenerate: bool
    assertions: list

    @property
    def passed(self):
        return all(a.passed for a in self.assertions)

    def to_dict(self):
        d = asdict(self)
        d["assertions"] = [a.to_dict() for a in self.assertions]
        return d


def _is_prime(p):
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


def _g_orbit(q, g, v):
    orbit = [v]
    w = q.vertex_image(g, v)
    while w != v:
        orbit.append(w)
        w = q.vertex_image(g, w)
    return orbit


def _intersection_order(q, a, b):
    """``|A cap B|`` for elementwise commuting ``A, B`` via ``|AB| = |A||B|/|A cap B|``."""
    joint = Subgroup(q, list(a.gens) + list(b.gens), check=False).order()
    return a.order() * b.order() // joint


def _commute(a, b):
    return all(
        P.key(P.mul(x, y)) == P.key(P.mul(y, x)) for x in a.gens for y in b.gens
    )


def torsion_retract_witness(q, g, p):
    """Build ``R``, ``H`` and ``A = <H, g>`` for an element ``g`` of prime
    order ``p`` and check the facts the retract argument contrasts."""
    g = P.freeze(g)
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if g not in q:
        raise NotAMember("element is not in the quotient")
    if P.order(g) != p:
        raise OrderMismatch(f"element has order {P.order(g)}, expected exactly {p}")

    candidates = []
    for k in range(1, q.n + 1):
        for v in level_vertices(q.d, k):
            if len(_g_orbit(q, g, v)) == p:
                candidates.append(v)
    if not candidates:
        raise NoSuchOrbit(f"no vertex has a g-orbit of length {p} within level {q.n}")
    chosen = None
    for v in candidates:
        if len(v) < q.n and rigid_stabilizer(q, v).order() > 1:
            chosen = v
            break
    degenerate = chosen is None
    v = chosen if chosen is not None else candidates[0]
    orbit = _g_orbit(q, g, v)

    if len(v) < q.n:
        rists = [rigid_stabilizer(q, u) for u in orbit]
    else:
        rists = [Subgroup(q, [], check=False) for _ in orbit]
    rist_v = rists[0]
    R = Subgroup(q, [h for r in rists for h in r.gens], check=False)

    powers = [P.power(g, i) for i in range(p)]

    def diag(x):
        out = P.identity(q.degree)
        for gi in powers:
            out = P.mul(out, P.conj(x, gi))
        return out

    H = Subgroup(q, [diag(x) for x in rist_v.gens], check=False)
    A = Subgroup(q, list(H.gens) + [g], check=False)
    assertions = [Assertion("orbit_length", len(orbit) == p, f"|O| = {len(orbit)}")]

    comm_ok, meet_ok = True, True
    for i in range(len(rists)):
        for j in range(i + 1, len(rists)):
            comm_ok &= _commute(rists[i], rists[j])
            meet_ok &= _intersection_order(q, rists[i], rists[j]) == 1
    assertions.append(Assertion("orbit_rists_commute", comm_ok, "rist(u), rist(w) commute for u != w in O"))
    assertions.append(Assertion("orbit_rists_meet_trivially", meet_ok, "rist(u) cap rist(w) = 1 for u != w in O"))

    h_order, rist_order = H.order(), rist_v.order()
    assertions.append(Assertion(
        "diagonal_preserves_order", h_order == rist_order, f"|H| = {h_order}, |rist(v)| = {rist_order}"))
    assertions.append(Assertion("H_in_R", all(h in R for h in H.gens), ""))
    outside = [i for i in range(q.degree) if i not in q.subtree_points(v)]
    meet = pointwise_stabilizer(H, outside).order()
    assertions.append(Assertion("H_meets_rist_v_trivially", meet == 1, f"|H cap rist(v)| = {meet}"))
    a_order = A.order()
    assertions.append(Assertion("A_order_is_p_times_H", a_order == p * h_order, f"|A| = {a_order}, p|H| = {p * h_order}"))
    normal = all(P.conj(h, s) in H for h in H.gens for s in A.gens)
    assertions.append(Assertion("H_normal_in_A", normal, ""))
    meet_g = all(gi not in H for gi in powers[1:])
    assertions.append(Assertion("H_meets_g_trivially", meet_g, ""))

    return WitnessReport(
        vertex=_vertex_label(v),
        orbit=[_vertex_label(u) for u in orbit],
        p=p,
        rist_order=rist_order,
        R_order=R.order(),
        H_order=h_order,
        A_order=a_order,
        degenerate=degenerate or h_order == 1,
        assertions=assertions,
    )


# -- section search ----------------------------------------------------------------

def section_surjectivity_witness(spec, target, v, word_bound, max_states=DEFAULT_MAX_STATES):
    """Shortest word (BFS, generator order, ``g`` before ``g^-1``) fixing ``v``
    whose section at ``v`` equals ``target``.  ``None`` means nothing was found
    within the bound, not that no such word exists."""
    v = check_vertex(v, spec.d)
    machines = generator_machines(spec, max_states)
    if target not in machines:
        raise UnknownGenerator(f"unknown generator {target!r}")
    goal = machines[target]
    alphabet = []
    for name in spec.names:
        alphabet.append(((name, 1), machines[name]))
        alphabet.append(((name, -1), inverse(machines[name]).minimized))
    frontier = [((), None)]
    for _ in range(word_bound):
        nxt = []
        for word, machine in frontier:
            for letter, m in alphabet:
                if word and word[-1] == (letter[0], -letter[1]):
                    continue
                w = word + (letter,)
                wm = m if machine is None else compose(machine, m, max_states).minimized
                if wm.vertex_image(v) == v and section(wm, v) == goal:
                    return format_word(reduce_word(w))
                nxt.append((w, wm))
        frontier = nxt
    return None


# -- sampling and reports --------------------------------------------------------

def random_element(q, rng, max_length=12):
    """Product of a random word in the generators and their inverses."""
    x = P.identity(q.degree)
    for _ in range(rng.randint(1, max_length)):
        s = rng.choice(q.gens)
        x = P.mul(x, s if rng.random() < 0.5 else P.inv(s))
    return x


def random_nontrivial_elements(q, count, seed=0, max_length=12):
    rng = random.Random(seed)
    out = []
    if all(P.is_identity(g) for g in q.gens):
        return out
    while len(out) < count:
        x = random_element(q, rng, max_length)
        if not P.is_identity(x):
            out.append(x)
    return out


def make_report(tool, input_bytes, key, payload, assertions=()):
    """Report document: ``tool``, ``version``, ``input_sha256``, one payload
    entry under ``key`` and a list of named assertions."""
    return {
        "tool": tool,
        "version": __version__,
        "input_sha256": hashlib.sha256(input_bytes).hexdigest(),
        key: payload,
        "assertions": [a.to_dict() if isinstance(a, Assertion) else a for a in assertions],
    }
