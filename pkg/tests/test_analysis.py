import random

import pytest

from oracles import enumerate_group, normal_closure_elements
from selfsim import permutations as P
from selfsim.analysis import (
    HAS_LR,
    NOT_LR,
    branch_evidence,
    lemma_rist_closure_check,
    make_report,
    predict_lr,
    random_nontrivial_elements,
    section_surjectivity_witness,
    torsion_retract_witness,
)
from selfsim.automaton import evaluate, generator_machines, inverse, is_identity, section
from selfsim.errors import BadVertex, NotAMember, NotQuadratic, OrderMismatch, UnknownGenerator
from selfsim.portrait import Periodic, Preperiodic, orbifold, quadratic_corpus, validate_portrait
from selfsim.quotient import level_quotient


def test_predict_lr_examples(portraits):
    v = predict_lr(portraits["power"])
    assert (v.prediction, v.basis, v.orbit_type) == (HAS_LR, "euclidean", Periodic(1))
    assert "power" in v.notes
    v = predict_lr(portraits["chebyshev"])
    assert (v.prediction, v.basis, v.orbit_type) == (HAS_LR, "euclidean", Preperiodic(2, 1))
    assert "Chebyshev" in v.notes
    v = predict_lr(portraits["basilica"])
    assert (v.prediction, v.basis, v.orbit_type) == (NOT_LR, "hyperbolic", Periodic(2))
    cubic = {"degree": 3, "points": ["0", "inf"], "infinity": "inf", "map": {"0": "0", "inf": "inf"},
             "local_degree": {"0": 3, "inf": 3}}
    with pytest.raises(NotQuadratic):
        predict_lr(validate_portrait(cubic))


def test_predict_lr_matches_chi():
    for p in quadratic_corpus(6):
        assert (predict_lr(p).prediction == HAS_LR) == (orbifold(p).chi == 0)


def test_branch_evidence(specs):
    g = branch_evidence(specs["grigorchuk"], 1, 5)
    lvl = g.levels[0]
    assert all(o > 1 for o in lvl.rist_orders.values())
    assert all(g.quotient_order % o == 0 for o in lvl.rist_orders.values())
    assert lvl.index * lvl.rist_product_order == g.quotient_order
    a = branch_evidence(specs["adding"], 2, 5)
    assert all(o == 1 for lv in a.levels for o in lv.rist_orders.values())
    assert not any(f for lv in a.levels for f in lv.rist_derived_nontrivial.values())
    # Basilica: the index of Rist(1) doubles every second level
    indices = [branch_evidence(specs["basilica"], 1, n).levels[0].index for n in range(2, 8)]
    assert indices == [2, 4, 4, 8, 8, 16]
    assert all(o > 1 for o in branch_evidence(specs["basilica"], 1, 6).levels[0].rist_orders.values())
    # the Grigorchuk index stabilizes: finite index of the rigid level stabilizer
    gri = [branch_evidence(specs["grigorchuk"], 1, n).levels[0].index for n in range(4, 8)]
    assert len(set(gri)) == 1
    with pytest.raises(ValueError):
        branch_evidence(specs["adding"], 3, 3)


def test_lemma_rist_closure_examples(specs):
    q = level_quotient(specs["grigorchuk"], 5)
    assert lemma_rist_closure_check(q, q.named_gens["b"]).passed
    b = level_quotient(specs["basilica"], 5)
    res = lemma_rist_closure_check(b, b.image("[a,b]"))
    assert res.passed and res.vertices_checked > 0
    with pytest.raises(ValueError):
        lemma_rist_closure_check(q, q.identity())
    with pytest.raises(NotAMember):
        lemma_rist_closure_check(level_quotient(specs["adding"], 2), P.from_cycles([(0, 1)], 4))


def test_lemma_rist_closure_against_enumeration(specs):
    # normal closure and derived rigid stabilizers recomputed element by element
    from oracles import commutator_subgroup, rist_elements

    q = level_quotient(specs["grigorchuk"], 3)
    elems = enumerate_group(q.gens, q.degree)
    for x in q.gens:
        closure = normal_closure_elements(q.gens, [x], q.degree)
        for v in [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]:
            width = 2 ** (3 - len(v))
            start = (v[0] * 2 + v[1]) * width if len(v) == 2 else v[0] * width
            if any(g[start] // width != start // width for g in closure):
                assert commutator_subgroup(rist_elements(elems, 2, 3, v), q.degree) <= closure
        assert lemma_rist_closure_check(q, x).passed


def test_torsion_witness(specs):
    q = level_quotient(specs["grigorchuk"], 6)
    w = torsion_retract_witness(q, q.named_gens["a"], 2)
    assert w.passed and not w.degenerate
    names = {a.name: a.passed for a in w.assertions}
    assert names["H_meets_rist_v_trivially"] and names["A_order_is_p_times_H"]
    assert w.A_order == 2 * w.H_order
    with pytest.raises(OrderMismatch):
        torsion_retract_witness(q, q.image("a*d"), 2)
    with pytest.raises(ValueError):
        torsion_retract_witness(q, q.named_gens["a"], 4)


def test_torsion_witness_degenerate(specs):
    # at level 1 the only vertices with a 2-orbit are leaves: trivial H, flagged
    q = level_quotient(specs["grigorchuk"], 1)
    w = torsion_retract_witness(q, q.named_gens["a"], 2)
    assert w.degenerate and w.H_order == 1


@pytest.mark.parametrize("name", ["basilica", "chebyshev", "grigorchuk", "rabbit"])
def test_torsion_witness_invariants(specs, name):
    for n in range(2, 6):
        q = level_quotient(specs[name], n)
        for x in random_nontrivial_elements(q, 20, seed=n):
            k = P.order(x)
            if k != 2:
                continue
            w = torsion_retract_witness(q, x, 2)
            if w.H_order > 1:
                assert w.passed, [a for a in w.assertions if not a.passed]


def test_section_surjectivity_examples(specs):
    word = section_surjectivity_witness(specs["basilica"], "b", "0", 3)
    assert word == "a^2"
    g = evaluate(specs["basilica"], word)
    b = generator_machines(specs["basilica"])["b"]
    assert g.vertex_image("0") == (0,)
    assert is_identity(section(g, "0") * inverse(b))
    assert section_surjectivity_witness(specs["adding"], "a", "0", 2) == "a^2"
    assert section_surjectivity_witness(specs["adding"], "a", "0", 0) is None
    with pytest.raises(BadVertex):
        section_surjectivity_witness(specs["adding"], "a", "2", 2)
    with pytest.raises(UnknownGenerator):
        section_surjectivity_witness(specs["adding"], "t", "0", 2)


def test_section_witnesses_certified(specs):
    for name in ["basilica", "grigorchuk", "rabbit"]:
        spec = specs[name]
        for target in spec.names:
            for v in ["0", "1", "01"]:
                word = section_surjectivity_witness(spec, target, v, 4)
                if word is None:
                    continue
                g = evaluate(spec, word)
                assert g.vertex_image(v) == tuple(int(c) for c in v)
                assert is_identity(section(g, v) * inverse(generator_machines(spec)[target]))


def test_random_elements_deterministic(specs):
    q = level_quotient(specs["basilica"], 4)
    a = random_nontrivial_elements(q, 10, seed=5)
    b = random_nontrivial_elements(q, 10, seed=5)
    assert all((x == y).all() for x, y in zip(a, b))
    assert all(x in q for x in a)
    assert random_nontrivial_elements(level_quotient(specs["adding"], 0), 3) == []


def test_report_schema():
    r = make_report("t", b"abc", "verdict", {"x": 1})
    assert list(r) == ["tool", "version", "input_sha256", "verdict", "assertions"]
    assert r["input_sha256"] == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_rng_independent_of_global_state(specs):
    q = level_quotient(specs["basilica"], 3)
    random.seed(1)
    a = random_nontrivial_elements(q, 3, seed=0)
    random.seed(2)
    b = random_nontrivial_elements(q, 3, seed=0)
    assert all((x == y).all() for x, y in zip(a, b))
