from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wtap.errors import PreconditionError, StateError
from wtap.exact import brute_force_wtap
from wtap.instance import (
    LinkClass,
    WtapInstance,
    as_fraction,
    classify_link,
    contract,
    cover_set,
    frac_str,
    is_feasible,
    lca,
    normalize_costs,
    shadow_complete,
    split_solution,
    tree_path,
)

from conftest import naive_opt, random_instance


def path4():
    # 0 - 1 - 2 - 3
    return WtapInstance(range(4), [(0, 1), (1, 2), (2, 3)], [(0, 2, 1), (1, 3, 2), (0, 3, 5)])


def test_tree_path_and_cover_set():
    inst = path4()
    assert {e.id for e in tree_path(inst, 0)} == {0, 1}
    assert {e.id for e in tree_path(inst, 2)} == {0, 1, 2}
    assert {l.id for l in cover_set(inst, [2])} == {1, 2}
    assert inst.cover_map()[0] == frozenset({0, 2})


def test_is_feasible():
    inst = path4()
    assert is_feasible(inst, [0, 1])
    assert not is_feasible(inst, [0])
    assert is_feasible(inst, [inst.link(2)])
    with pytest.raises(PreconditionError):
        is_feasible(inst, [99])


def test_classify_links(star):
    assert all(classify_link(star, l) is LinkClass.CROSS for l in star.links)
    inst = WtapInstance(range(5), [(0, 1), (1, 2), (1, 3), (0, 4)], [(2, 3, 1), (0, 2, 1), (3, 4, 1)], root=0)
    assert classify_link(inst, 0) is LinkClass.IN_NOT_UP
    assert classify_link(inst, 1) is LinkClass.UP
    assert classify_link(inst, 2) is LinkClass.CROSS
    assert lca(inst, 2, 3) == 1
    x_in, x_cr = split_solution(inst, {0: Fraction(1), 2: Fraction(1, 2)})
    assert x_in == {0: 1} and x_cr == {2: Fraction(1, 2)}


def test_classify_needs_root():
    with pytest.raises(StateError):
        classify_link(path4(), 0)


def test_bad_instances():
    with pytest.raises(PreconditionError):
        WtapInstance(range(3), [(0, 1)], [])  # too few edges
    with pytest.raises(PreconditionError):
        WtapInstance(range(4), [(0, 1), (1, 0), (2, 3)], [])  # not connected
    with pytest.raises(PreconditionError):
        WtapInstance(range(2), [(0, 1)], [(0, 1, 0)])
    with pytest.raises(PreconditionError):
        WtapInstance(range(2), [(0, 1)], [(0, 5, 1)])
    with pytest.raises(PreconditionError):
        WtapInstance(range(2), [(0, 1)], [(0, 1, 1.5)])
    with pytest.raises(PreconditionError):
        WtapInstance(range(2), [(0, 1)], [], root=7)


def test_as_fraction_and_frac_str():
    assert as_fraction("5/2") == Fraction(5, 2)
    assert as_fraction(3) == 3
    assert frac_str(Fraction(6, 4)) == "3/2"
    assert frac_str(Fraction(4, 2)) == "2"
    for bad in ("x", 0.5, True, None):
        with pytest.raises(PreconditionError):
            as_fraction(bad)


def test_contract_keeps_ids_and_loops():
    inst = path4()
    small, mapping = contract(inst, [0, 1])
    assert mapping[0] == mapping[1] == mapping[2] == 0
    assert [e.id for e in small.edges] == [2]
    assert small.link(0).is_loop
    assert not small.link(1).is_loop
    assert small.contraction_map[2] == 0
    assert small.lineage == inst.lineage
    with pytest.raises(PreconditionError):
        contract(inst, [17])


def test_normalize_costs():
    inst = WtapInstance(range(3), [(0, 1), (1, 2)], [(0, 1, "2/3"), (1, 2, 2)])
    norm, scale = normalize_costs(inst)
    assert scale == Fraction(3, 2)
    assert sorted(l.cost for l in norm.links) == [1, 3]
    assert norm.cost_bound == 3


def test_shadow_complete_star(star):
    G = shadow_complete(star)
    ends = {l.ends for l in G.links}
    # every pair on a leaf-leaf path appears
    assert {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)} <= ends
    assert all(l.cost == 1 for l in G.links)
    for l in G.links:
        assert l.origin in {0, 1, 2}


@given(st.integers(0, 300))
def test_shadow_completion_keeps_optimum(seed):
    inst = random_instance(seed, n_max=8)
    G = shadow_complete(inst)
    assert brute_force_wtap(G).cost == brute_force_wtap(inst).cost
    # shadows never cost more than a link whose path contains theirs
    for l in G.links:
        for orig in inst.links:
            if G.path(l.u, l.v)[1] <= inst.path(orig.u, orig.v)[1]:
                assert l.cost <= orig.cost


@given(st.integers(0, 300))
def test_brute_force_matches_naive(seed):
    inst = random_instance(seed, n_max=7)
    if len(inst.links) > 12:
        return
    assert brute_force_wtap(inst).cost == naive_opt(inst)


def test_side_boundary_mass():
    inst = path4()
    assert inst.side(1, 1) == frozenset({0, 1})
    assert inst.boundary({0, 1}) == frozenset({1})
    assert inst.link_mass({0: Fraction(1), 2: Fraction(1)}, {0, 1, 2}) == 1
    with pytest.raises(PreconditionError):
        inst.side(1, 3)


def test_digest_stable():
    assert path4().digest() == path4().digest()
    assert path4().digest() != path4().with_root(0).restrict_links([0]).digest()
