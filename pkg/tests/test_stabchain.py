import pytest
from hypothesis import given, strategies as st

from oracles import enumerate_group
from selfsim import permutations as P
from selfsim.errors import ResourceLimit
from selfsim.stabchain import StabChain, bfs_elements, bfs_order


@st.composite
def perm_groups(draw, max_degree=7):
    n = draw(st.integers(1, max_degree))
    k = draw(st.integers(0, 4))
    gens = [P.from_images(draw(st.permutations(range(n)))) for _ in range(k)]
    return n, gens


@given(perm_groups())
def test_order_and_membership_match_enumeration(group):
    n, gens = group
    chain = StabChain(n, gens)
    elems = enumerate_group(gens, n)
    assert chain.order() == len(elems)
    for x in list(elems)[:50]:
        assert P.from_images(x) in chain


@given(perm_groups(), st.permutations(range(7)))
def test_non_members_rejected(group, candidate):
    n, gens = group
    if n != 7:
        return
    chain = StabChain(n, gens)
    x = P.from_images(candidate)
    assert (x in chain) == (tuple(candidate) in enumerate_group(gens, n))


@given(perm_groups(max_degree=6), st.lists(st.integers(0, 5), max_size=3, unique=True))
def test_base_prefix_stabilizers(group, prefix):
    n, gens = group
    prefix = [b for b in prefix if b < n]
    chain = StabChain(n, gens, base_prefix=prefix)
    elems = enumerate_group(gens, n)
    assert chain.base[: len(prefix)] == prefix
    fixed = [g for g in elems if all(g[b] == b for b in prefix)]
    assert chain.stabilizer(len(prefix)).order() == len(fixed)
    sub = StabChain(n, chain.stabilizer_generators(len(prefix)))
    assert sub.order() == len(fixed)


@given(perm_groups(), perm_groups())
def test_incremental_insertion(g1, g2):
    n, gens = g1
    extra = [g for g in g2[1] if len(g) == n]
    chain = StabChain(n, gens)
    for g in extra:
        chain.add_generator(g)
    assert chain.order() == StabChain(n, gens + extra).order() == len(enumerate_group(gens + extra, n))


def test_deterministic_base():
    gens = [P.from_cycles([(0, 1, 2, 3, 4)], 5), P.from_cycles([(0, 1)], 5)]
    a, b = StabChain(5, gens), StabChain(5, gens)
    assert a.base == b.base and a.order() == 120


def test_bfs_helpers():
    gens = [P.from_cycles([(0, 1, 2, 3, 4, 5, 6, 7)], 8), P.from_cycles([(0, 1)], 8)]
    assert bfs_elements(gens, 8, limit=100) is None
    with pytest.raises(ResourceLimit):
        bfs_order(gens, 8, limit=100)
    assert bfs_order(gens[:1], 8) == 8
    assert bfs_order([], 3) == 1


def test_large_symmetric_group():
    n = 30
    gens = [P.from_cycles([tuple(range(n))], n), P.from_cycles([(0, 1)], n)]
    import math

    assert StabChain(n, gens).order() == math.factorial(n)
