import json
from fractions import Fraction

import pytest

from oracles import chi_oracle, exceptional_oracle
from selfsim.automaton import generator_machines
from selfsim.errors import (
    BadLocalDegree,
    MissingInfinity,
    NotQuadratic,
    PortraitError,
    RamificationBudgetViolated,
    UnreachableCycle,
)
from selfsim.groupspec import parse_spec
from selfsim.portrait import (
    Periodic,
    Preperiodic,
    build_img,
    critical_orbit_type,
    maximal_exceptional_set,
    orbifold,
    post_critical_set,
    quadratic_corpus,
    quadratic_portrait,
    validate_portrait,
)


def raw(points, mapping, degrees, d=2):
    return {
        "degree": d,
        "points": list(points),
        "infinity": "inf",
        "map": dict(mapping, inf="inf"),
        "local_degree": dict(degrees, inf=d),
    }


Z2 = raw(["0", "inf"], {"0": "0"}, {"0": 2})
CUBIC_PAIR = raw(["p", "q", "inf"], {"p": "q", "q": "p"}, {"p": 2, "q": 2}, d=3)
CUBIC_POWER = raw(["0", "inf"], {"0": "0"}, {"0": 3}, d=3)
CUBIC_TAIL = raw(["c", "v", "w", "inf"], {"c": "v", "v": "w", "w": "w"}, {"c": 3, "v": 1, "w": 1}, d=3)


def test_validate_examples():
    p = validate_portrait(Z2)
    assert p.degree == 2 and set(p.critical_points) == {"0", "inf"}
    assert validate_portrait(json.dumps(Z2)) == p
    with pytest.raises(RamificationBudgetViolated):
        validate_portrait(raw(["0", "1", "inf"], {"0": "1", "1": "1"}, {"0": 2, "1": 2}))
    no_inf = {"degree": 2, "points": ["0"], "infinity": "inf", "map": {"0": "0"}, "local_degree": {"0": 2}}
    with pytest.raises(MissingInfinity):
        validate_portrait(no_inf)
    with pytest.raises(UnreachableCycle):
        validate_portrait(raw(["0", "inf"], {"0": "5"}, {"0": 2}))
    with pytest.raises(BadLocalDegree):
        validate_portrait(raw(["0", "inf"], {"0": "0"}, {"0": 3}))
    with pytest.raises(PortraitError):
        validate_portrait(dict(Z2, extra=1))
    with pytest.raises(RamificationBudgetViolated):
        # three preimages of 0 in degree 2
        validate_portrait(raw(["0", "x", "y", "inf"], {"0": "0", "x": "0", "y": "0"}, {"0": 2, "x": 1, "y": 1}))


def test_post_critical_set(portraits):
    assert post_critical_set(portraits["basilica"]) == {"0", "-1", "inf"}
    assert post_critical_set(portraits["power"]) == {"0", "inf"}
    assert post_critical_set(portraits["chebyshev"]) == {"-1", "1", "inf"}


def test_orbifold_values(portraits):
    expected = {"power": 0, "chebyshev": 0, "basilica": -1, "z2_plus_i": Fraction(-1, 2)}
    for name, chi in expected.items():
        sig = orbifold(portraits[name])
        assert sig.chi == chi and isinstance(sig.chi, Fraction)
    # only critical points contribute local degree, so every finite weight is 2
    assert orbifold(portraits["z2_plus_i"]).nu == {"-i": 2, "i": 2, "i-1": 2, "inf": float("inf")}
    assert orbifold(portraits["chebyshev"]).cls == "euclidean"
    assert orbifold(portraits["basilica"]).cls == "hyperbolic"


@pytest.mark.parametrize("r", [CUBIC_PAIR, CUBIC_POWER, CUBIC_TAIL])
def test_orbifold_cubic_against_oracle(r):
    assert orbifold(validate_portrait(r)).chi == chi_oracle(r)


def test_orbifold_corpus_against_oracle():
    for p in quadratic_corpus(6):
        assert orbifold(p).chi == chi_oracle(p.to_json())


def test_exceptional_examples(portraits):
    assert maximal_exceptional_set(portraits["power"]).maximal == {"0", "inf"}
    bas = maximal_exceptional_set(portraits["basilica"])
    assert bas.finite_part == frozenset()
    assert bas.maximal == {"inf"}
    cheb = maximal_exceptional_set(portraits["chebyshev"])
    assert cheb.finite_part <= {"-1", "1"} and len(cheb.finite_part) <= 2
    assert cheb.finite_part == {"-1", "1"}


@pytest.mark.parametrize("r", [Z2, CUBIC_PAIR, CUBIC_POWER, CUBIC_TAIL])
def test_exceptional_against_oracle(r):
    res = maximal_exceptional_set(validate_portrait(r))
    expected = exceptional_oracle(r)
    assert set(res.all_exceptional) == set(expected)
    assert res.maximal == frozenset().union(*expected)


def test_exceptional_corpus_against_oracle():
    for p in quadratic_corpus(6):
        res = maximal_exceptional_set(p)
        assert set(res.all_exceptional) == set(exceptional_oracle(p.to_json()))


def test_exceptional_union_is_exceptional():
    for p in quadratic_corpus(6):
        res = maximal_exceptional_set(p)
        assert all(s <= res.maximal for s in res.all_exceptional)
        assert res.maximal in set(res.all_exceptional)


def test_orbit_types(portraits):
    assert critical_orbit_type(portraits["power"]) == Periodic(1)
    assert critical_orbit_type(portraits["basilica"]) == Periodic(2)
    assert critical_orbit_type(portraits["chebyshev"]) == Preperiodic(2, 1)
    assert str(Preperiodic(2, 1)) == "preperiodic(2,1)" and str(Periodic(3)) == "periodic(3)"
    with pytest.raises(NotQuadratic):
        critical_orbit_type(validate_portrait(CUBIC_PAIR))


def test_corpus_shape():
    corpus = list(quadratic_corpus(6))
    assert len(corpus) == len(set(corpus))
    types = [critical_orbit_type(p) for p in corpus]
    assert sum(isinstance(t, Periodic) for t in types) == 6
    for p, t in zip(corpus, types):
        assert len(post_critical_set(p) - {"inf"}) <= 6
        assert p == quadratic_portrait(getattr(t, "preperiod", 0), t.period)


def _equal_specs(s, t):
    if s.d != t.d or s.names != t.names:
        return False
    gs, gt = generator_machines(s), generator_machines(t)
    return all(gs[n] == gt[n] for n in s.names)


def test_build_img_golden(portraits):
    assert _equal_specs(build_img(portraits["power"]), parse_spec("alphabet 2\ngen a = (0 1) (a, 1)"))
    assert _equal_specs(
        build_img(portraits["basilica"]), parse_spec("alphabet 2\ngen a = (0 1) (b, 1)\ngen b = e (a, 1)")
    )
    assert _equal_specs(build_img(portraits["chebyshev"]), parse_spec("alphabet 2\ngen a = (0 1)\ngen b = e (a, b)"))


def test_build_img_whole_corpus():
    for p in quadratic_corpus(6):
        s = build_img(p)
        assert len(s.names) == len(post_critical_set(p)) - 1
