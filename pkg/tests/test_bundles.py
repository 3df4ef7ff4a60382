import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wtap.bundles import Bundle, bundle_constraint, bundle_opt, is_gamma_bundle, path_segments
from wtap.errors import PreconditionError
from wtap.exact import brute_force_wtap
from wtap.instance import WtapInstance, contract

from conftest import naive_opt, random_instance


def spider():
    # center 0 with legs 0-1-2, 0-3-4, 0-5-6
    edges = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]
    links = [(2, 4, 1), (4, 6, 1), (2, 6, 1), (0, 2, 3)]
    return WtapInstance(range(7), edges, links)


def test_path_segments():
    inst = spider()
    assert path_segments(inst, [0, 1]) == [(0, 2)]
    assert path_segments(inst, [0, 1, 2, 3]) == [(2, 4)]
    assert path_segments(inst, range(6)) == [(0, 2), (0, 4), (0, 6)]
    assert path_segments(inst, [1, 3]) == [(1, 2), (3, 4)]


def test_bundle_sizes():
    inst = spider()
    assert Bundle.from_edges(inst, range(6)).size == 3
    B = Bundle.from_paths(inst, [(2, 4)])
    assert B.edge_set == frozenset({0, 1, 2, 3})
    assert is_gamma_bundle(inst, range(6), 2) is None
    assert is_gamma_bundle(inst, range(6), 3).size == 3


def test_is_gamma_bundle_errors():
    inst = spider()
    other = spider()
    with pytest.raises(PreconditionError):
        is_gamma_bundle(inst, [0], 3, descendant=other)
    small, _ = contract(inst, [0])
    with pytest.raises(PreconditionError):
        is_gamma_bundle(inst, [0, 1], 3, descendant=small)
    assert is_gamma_bundle(inst, [1], 3, descendant=small).edge_set == frozenset({1})


def test_bundle_opt_spider():
    inst = spider()
    assert bundle_opt(inst, Bundle.from_edges(inst, range(6))).cost == 2
    assert bundle_opt(inst, Bundle.from_paths(inst, [(0, 2)])).cost == 1
    with pytest.raises(PreconditionError):
        bundle_opt(inst, Bundle((), frozenset({42}), inst.lineage))


@given(st.integers(0, 2000))
def test_bundle_opt_matches_naive(seed):
    rng = random.Random(seed)
    inst = random_instance(seed, n_max=8)
    if len(inst.links) > 12:
        return
    eids = rng.sample([e.id for e in inst.edges], rng.randint(1, len(inst.edges)))
    B = Bundle.from_edges(inst, eids)
    rest = [e.id for e in inst.edges if e.id not in B.edge_set]
    small, _ = contract(inst, rest)
    assert bundle_opt(inst, B).cost == naive_opt(small)


@given(st.integers(0, 2000))
def test_bundle_row_is_valid(seed):
    # any integral cover satisfies every bundle row
    rng = random.Random(seed)
    inst = random_instance(seed, n_max=9)
    eids = rng.sample([e.id for e in inst.edges], rng.randint(1, len(inst.edges)))
    row = bundle_constraint(inst, Bundle.from_edges(inst, eids))
    sol = brute_force_wtap(inst)
    x = {l.id: Fraction(1) for l in sol.links}
    assert row.lhs(x) >= row.rhs
    assert row.to_row().tag == "bundle"
    assert "bundle" in str(row)
