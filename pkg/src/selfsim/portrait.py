"""Post-critical portraits of PCF polynomials, Thurston orbifolds,
critically exceptional sets and IMG recursions for quadratic portraits.

A portrait is the finite dynamical system ``f`` restricted to the critical
points, the post-critical points and infinity, together with local degrees.
Infinity is the fixed point ``"inf"`` of local degree ``d``.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import inf as INF
from math import lcm

from .errors import (
    BadLocalDegree,
    KneadingValidationFailed,
    MissingInfinity,
    NotQuadratic,
    PlacementInvalid,
    PortraitError,
    RamificationBudgetViolated,
    UnreachableCycle,
)
from .groupspec import Generator, GroupSpec, validate

PORTRAIT_KEYS = {"degree", "points", "infinity", "map", "local_degree"}


@dataclass(frozen=True)
class PostCriticalPortrait:
    degree: int
    points: tuple
    map: dict
    local_degree: dict
    infinity: str = "inf"

    @property
    def finite_points(self):
        return tuple(p for p in self.points if p != self.infinity)

    @property
    def critical_points(self):
        """All critical points, infinity included."""
        return tuple(p for p in self.points if self.local_degree[p] >= 2)

    @property
    def finite_critical_points(self):
        return tuple(p for p in self.finite_points if self.local_degree[p] >= 2)

    def orbit(self, p):
        """Forward orbit ``p, f(p), ...`` up to (excluding) the first repeat."""
        seen = []
        while p not in seen:
            seen.append(p)
            p = self.map[p]
        return seen, seen.index(p)

    def is_periodic(self, p):
        orbit, start = self.orbit(p)
        return start == 0

    def preimages(self, q):
        return tuple(p for p in self.points if self.map[p] == q)

    def to_json(self):
        return {
            "degree": self.degree,
            "points": list(self.points),
            "infinity": self.infinity,
            "map": {p: self.map[p] for p in self.points},
            "local_degree": {p: self.local_degree[p] for p in self.points},
        }

    def __hash__(self):
        return hash((self.degree, self.points, tuple(sorted(self.map.items())),
                     tuple(sorted(self.local_degree.items())), self.infinity))


def validate_portrait(raw):
    """Check a portrait JSON object and build a :class:`PostCriticalPortrait`."""
    if isinstance(raw, (str, bytes)):
        raw = json.loads(raw)
    if not isinstance(raw, dict):
        raise PortraitError("portrait must be a JSON object")
    unknown = set(raw) - PORTRAIT_KEYS
    if unknown:
        raise PortraitError(f"unknown keys: {sorted(unknown)}")
    missing = {"degree", "points", "map", "local_degree"} - set(raw)
    if missing:
        raise PortraitError(f"missing keys: {sorted(missing)}")
    d = raw["degree"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise PortraitError("degree must be an integer >= 2")
    points = raw["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise PortraitError("points must be a list of string ids")
    if len(set(points)) != len(points):
        raise PortraitError("duplicate point ids")
    infinity = raw.get("infinity", "inf")
    if infinity not in points:
        raise MissingInfinity(f"the point at infinity {infinity!r} is not listed")
    fmap = raw["map"]
    ldeg = raw["local_degree"]
    if not isinstance(fmap, dict) or not isinstance(ldeg, dict):
        raise PortraitError("map and local_degree must be objects")
    for key in set(fmap) - set(points):
        raise PortraitError(f"map mentions unknown point {key!r}")
    for key in set(ldeg) - set(points):
        raise PortraitError(f"local_degree mentions unknown point {key!r}")
    for p in points:
        if p not in fmap:
            raise UnreachableCycle(f"the orbit of {p!r} leaves the portrait (no image given)")
        if fmap[p] not in points:
            raise UnreachableCycle(f"{p!r} maps to {fmap[p]!r}, which is not in the portrait")
        k = ldeg.get(p, 1)
        if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= d:
            raise BadLocalDegree(f"local degree of {p!r} must be an integer in 1..{d}")
    if fmap[infinity] != infinity:
        raise MissingInfinity("infinity must be a fixed point of a polynomial")
    if ldeg.get(infinity, 1) != d:
        raise BadLocalDegree(f"infinity must have local degree {d}")
    budget = sum(ldeg.get(p, 1) - 1 for p in points if p != infinity)
    if budget != d - 1:
        raise RamificationBudgetViolated(
            f"finite critical multiplicity is {budget}, a degree-{d} polynomial has exactly {d - 1}"
        )
    for q in points:
        mult = sum(ldeg.get(p, 1) for p in points if fmap[p] == q)
        if mult > d:
            raise RamificationBudgetViolated(f"{q!r} has more than {d} preimages counted with multiplicity")
    return PostCriticalPortrait(
        degree=d,
        points=tuple(points),
        map={p: fmap[p] for p in points},
        local_degree={p: ldeg.get(p, 1) for p in points},
        infinity=infinity,
    )


def load_portrait(path):
    with open(path, "rb") as fh:
        return validate_portrait(json.loads(fh.read()))


def post_critical_set(p):
    """Union of the strict forward orbits of critical points, infinity included."""
    out = set()
    for c in p.critical_points:
        x = p.map[c]
        while x not in out:
            out.add(x)
            x = p.map[x]
    return frozenset(out)


# -- orbifold --------------------------------------------------------------------

@dataclass(frozen=True)
class OrbifoldSignature:
    nu: dict  # point -> int >= 2 or math.inf
    chi: Fraction
    cls: str  # "euclidean" | "hyperbolic" | "spherical"


def _critical_cycles(p):
    on = set()
    for c in p.critical_points:
        orbit, start = p.orbit(c)
        if start == 0:
            on.update(orbit)
    return on


def orbifold(p):
    """Weights ``nu`` on the post-critical set and the Euler characteristic.

    Points on a cycle through a critical point get weight infinity; any other
    post-critical point gets the lcm of the local degrees of ``f^n`` along
    critical orbits hitting it.
    """
    pf = post_critical_set(p)
    cyc = _critical_cycles(p)
    bound = len(p.points)
    nu = {}
    for q in pf:
        if q in cyc:
            nu[q] = INF
            continue
        weight = 1
        for c in p.critical_points:
            x, deg = c, 1
            for _ in range(bound + 1):
                deg *= p.local_degree[x]
                x = p.map[x]
                if x == q:
                    weight = lcm(weight, deg)
        nu[q] = weight
    chi = Fraction(2) - sum(
        (Fraction(1) if w == INF else 1 - Fraction(1, w)) for w in nu.values()
    )
    cls = "euclidean" if chi == 0 else "hyperbolic" if chi < 0 else "spherical"
    return OrbifoldSignature(nu=dict(sorted(nu.items())), chi=chi, cls=cls)


# -- critically exceptional sets ---------------------------------------------------

@dataclass(frozen=True)
class ExceptionalResult:
    maximal: frozenset
    all_exceptional: tuple
    infinity: str = "inf"

    @property
    def finite_part(self):
        return frozenset(x for x in self.maximal if x != self.infinity)


def is_critically_exceptional(p, upsilon, pf=None):
    """Check the set equation for one candidate subset.

    Preimages not recorded in the portrait are anonymous points outside the
    critical and post-critical sets, so a member ``q`` whose recorded
    preimages do not account for all ``d`` of them breaks the equation.
    """
    pf = post_critical_set(p) if pf is None else pf
    upsilon = frozenset(upsilon)
    cp = set(p.critical_points) | pf
    for q in upsilon:
        if sum(p.local_degree[x] for x in p.preimages(q)) != p.degree:
            return False
    pre = {x for x in p.points if p.map[x] in upsilon}
    return frozenset(pre - (cp - upsilon)) == upsilon


def maximal_exceptional_set(p):
    """Exhaustive search over subsets of the post-critical set."""
    pf = post_critical_set(p)
    ground = sorted(pf)
    found = []
    for r in range(len(ground) + 1):
        for subset in combinations(ground, r):
            if is_critically_exceptional(p, subset, pf):
                found.append(frozenset(subset))
    maximal = frozenset().union(*found)
    return ExceptionalResult(maximal=maximal, all_exceptional=tuple(found), infinity=p.infinity)


# -- quadratic specifics ---------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    period: int

    def __str__(self):
        return f"periodic({self.period})"


@dataclass(frozen=True)
class Preperiodic:
    preperiod: int
    period: int

    def __str__(self):
        return f"preperiodic({self.preperiod},{self.period})"


def _quadratic_critical_point(p):
    if p.degree != 2:
        raise NotQuadratic(f"degree {p.degree} portrait; a quadratic one is required")
    (c,) = p.finite_critical_points
    return c


def critical_orbit_type(p):
    c = _quadratic_critical_point(p)
    orbit, start = p.orbit(c)
    period = len(orbit) - start
    return Periodic(period) if start == 0 else Preperiodic(start, period)


def generator_names(k):
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    return [alphabet[i] if i < 26 else f"g{i}" for i in range(k)]


def img_generator_order(p):
    """Finite post-critical points along the critical orbit, starting at the
    critical value; these index the generators ``a, b, c, ...``."""
    c = _quadratic_critical_point(p)
    pf = post_critical_set(p)
    out = []
    x = p.map[c]
    while x not in out and x in pf:
        out.append(x)
        x = p.map[x]
    return out


def build_img(p, placement=None, names=None, check_depth=8):
    """Kneading-automaton recursion of IMG for a quadratic portrait.

    ``placement`` optionally maps a post-critical point ``q`` to
    ``{preimage id: letter}`` for the sections of ``g_q``; by default the
    critical value puts ``g_c`` at letter 0 and every other point puts its
    post-critical preimages at letters 0, 1 in id order.  The result is
    validated; a failure raises :class:`KneadingValidationFailed`.
    """
    from .quotient import product_is_level_transitive

    c = _quadratic_critical_point(p)
    pf = post_critical_set(p)
    order = img_generator_order(p)
    names = list(names) if names is not None else generator_names(len(order))
    if len(names) != len(order) or len(set(names)) != len(names):
        raise ValueError(f"need {len(order)} distinct generator names")
    name_of = dict(zip(order, names))
    placement = dict(placement or {})
    for q in placement:
        if q not in name_of:
            raise PlacementInvalid(f"placement given for {q!r}, which has no generator")

    critical_value = p.map[c]
    gens = []
    for q in order:
        if q == critical_value:
            perm = (1, 0)
            pre = [c] if c in pf else []
        else:
            perm = (0, 1)
            pre = sorted(r for r in p.preimages(q) if r in pf)
        slots = placement.get(q)
        if slots is None:
            slots = {r: i for i, r in enumerate(pre)}
        if set(slots) != set(pre):
            raise PlacementInvalid(f"placement for {q!r} must cover exactly {pre}")
        if len(set(slots.values())) != len(slots) or not all(v in (0, 1) for v in slots.values()):
            raise PlacementInvalid(f"placement for {q!r} must use distinct letters 0/1")
        sections = [(), ()]
        for r, letter in slots.items():
            sections[letter] = ((name_of[r], 1),)
        gens.append(Generator(name_of[q], perm, tuple(sections)))
    spec = GroupSpec(2, tuple(gens))
    report = validate(spec)
    if not report.is_kneading:
        raise KneadingValidationFailed("emitted recursion is not a kneading automaton", report)
    if check_depth and not product_is_level_transitive(spec, check_depth):
        raise KneadingValidationFailed(
            f"product of generators is not level-transitive at depth {check_depth}", report
        )
    return spec


# -- corpus ------------------------------------------------------------------------

def quadratic_portrait(preperiod, period):
    """Combinatorial quadratic portrait whose critical orbit has the given
    tail length and cycle length (ids ``c0`` = critical point, ``c1``...)."""
    if period < 1 or preperiod < 0 or preperiod == 1:
        raise ValueError("need period >= 1 and preperiod 0 or >= 2")
    n = preperiod + period
    ids = [f"c{i}" for i in range(n)]
    fmap = {ids[i]: ids[i + 1] for i in range(n - 1)}
    fmap[ids[-1]] = ids[preperiod]
    fmap["inf"] = "inf"
    ldeg = {x: 1 for x in ids}
    ldeg[ids[0]] = 2
    ldeg["inf"] = 2
    return validate_portrait({
        "degree": 2,
        "points": ids + ["inf"],
        "infinity": "inf",
        "map": fmap,
        "local_degree": ldeg,
    })


def quadratic_corpus(max_finite_postcritical=6):
    """All critical-orbit shapes with at most the given number of finite
    post-critical points."""
    out = []
    for k in range(1, max_finite_postcritical + 1):
        out.append(quadratic_portrait(0, k))
    for m in range(2, max_finite_postcritical + 2):
        for k in range(1, max_finite_postcritical + 2 - m):
            out.append(quadratic_portrait(m, k))
    return out
