from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wtap.algorithm import wtap_approx
from wtap.decomposition import DecompPair
from wtap.errors import StateError
from wtap.instance import WtapInstance, is_feasible, shadow_complete
from wtap.params import AlgorithmParams
from wtap.rounding import (
    BUNDLE,
    COMBINED,
    CROSS_HEAVY,
    RoundingContext,
    audit,
    round_bundle,
    round_cross_heavy,
    round_pair,
)

from conftest import heavy_gadget, random_instance

F = Fraction


def whole_pair(inst, x, center):
    return DecompPair(inst, x, center)


def test_cross_heavy_on_star(star):
    G = shadow_complete(star)
    x = {0: F(1), 1: F(1)}  # odd-cut LP optimum uses two cross-links
    out = round_cross_heavy(whole_pair(G, x, 0), 0)
    assert out.cost == 2 and out.cost_in == 0 and out.cost_cross == 2
    assert out.bound_certificate == 2
    assert is_feasible(G, out.chosen)


def test_bundle_on_star(star):
    G = shadow_complete(star)
    x = {0: F(1), 1: F(1)}
    ctx = RoundingContext(G, x, frozenset(), AlgorithmParams.default())
    out = round_bundle(whole_pair(G, x, 0), 0, ctx)
    assert out.method == BUNDLE
    assert out.cost == 3 <= out.bound_certificate == 4
    assert is_feasible(G, out.chosen)
    assert [d["paths"] for d in out.details] == [1, 1, 1]


def test_up_only_pair_needs_no_doubling():
    inst = shadow_complete(WtapInstance(range(3), [(0, 1), (1, 2)], [(0, 2, 1)], root=0))
    lid = next(l.id for l in inst.links if l.ends == (0, 2))
    out = round_cross_heavy(whole_pair(inst, {lid: F(1)}, 0), 0)
    # up-links count as in-links, so the certificate doubles them, but y = x
    assert out.cost == 1 and out.details[0]["cy"] == "1"
    assert out.bound_certificate == 2


def test_cross_dominated_pair_prefers_cross_heavy(star):
    with audit() as seen:
        wtap_approx(star)
    combined = [o for o in seen if o.invocation == COMBINED]
    assert [o.method for o in combined] == [CROSS_HEAVY]


def test_in_dominated_pair_prefers_bundle():
    # root 0 above w = 1, leaves 2, 3 joined by a cheap in-link
    inst = WtapInstance(range(4), [(0, 1), (1, 2), (1, 3)], [(2, 3, 1), (0, 1, 1)])
    with audit() as seen:
        res = wtap_approx(inst, oracle=True)
    by = {o.invocation: o for o in seen}
    assert by[CROSS_HEAVY].cost == 3 and by[BUNDLE].cost == 2
    assert by[COMBINED].method == BUNDLE
    assert res.cost == 2


def test_contracted_node_adds_one():
    P = AlgorithmParams.default(1, 1)
    with audit() as seen:
        wtap_approx(heavy_gadget(9), P)
    bundles = [o for o in seen if o.invocation == BUNDLE and o.contracted_count]
    assert bundles
    for o in bundles:
        assert o.bound_certificate == o.cost_in + 2 * o.cost_cross + o.contracted_count
        assert o.cost <= o.bound_certificate


def test_missing_shadow_is_state_error():
    inst = WtapInstance(range(4), [(0, 1), (1, 2), (1, 3)], [(2, 3, 1), (0, 1, 1)])
    with pytest.raises(StateError):
        round_cross_heavy(whole_pair(inst, {0: F(1), 1: F(1)}, 0), 0)


def test_audit_nesting(star):
    with audit() as outer:
        with audit() as inner:
            wtap_approx(star)
        wtap_approx(star)
    assert len(outer) == 2 * len(inner) == 6


@given(st.integers(0, 300))
def test_every_rounding_certified(seed):
    inst = random_instance(seed, n_max=14)
    with audit() as seen:
        wtap_approx(inst)
    for o in seen:
        assert o.certified
        if o.invocation == CROSS_HEAVY:
            assert o.bound_certificate == 2 * o.cost_in + o.cost_cross
        elif o.invocation == BUNDLE:
            assert o.bound_certificate == o.cost_in + 2 * o.cost_cross + o.contracted_count
        else:
            assert o.bound_certificate == F(3, 2) * (o.cost_in + o.cost_cross) + F(o.contracted_count, 2)
