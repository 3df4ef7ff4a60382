import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from wtap.errors import PreconditionError, ResourceLimitError
from wtap.exact import brute_force_wtap
from wtap.flow import gomory_hu, max_flow, tree_components
from wtap.instance import WtapInstance
from wtap.oddcut import (
    OddVertexSet,
    brute_force_min_odd_cut,
    brute_force_separate,
    build_slack_graph,
    covering_constraint,
    dump_gomory_hu,
    make_constraint,
    min_odd_cut,
    separate_odd_cut,
    solve_cut_lp,
    solve_odd_cut_lp,
)

from conftest import covering_x, random_instance

F = Fraction


def test_star_values(star):
    assert solve_cut_lp(star).objective == F(3, 2)
    out, added = solve_odd_cut_lp(star)
    assert out.objective == 2 == brute_force_wtap(star).cost
    assert len(added) == 1
    half = {0: F(1, 2), 1: F(1, 2), 2: F(1, 2)}
    S, value = min_odd_cut(build_slack_graph(star, half))
    assert value == 0 and S.members == frozenset({0})
    con = separate_odd_cut(star, half)
    assert con.rhs == 2 and con.violation(half) == F(1, 2)
    assert dict(con.multiplicities) == {0: 1, 1: 1, 2: 1}


def test_multiplicity_is_ceiling_of_half():
    # spider: center 0, legs 1,2,3; link 1-2 crosses the boundary of {0} twice
    inst = WtapInstance(range(4), [(0, 1), (0, 2), (0, 3)], [(1, 2, 1), (0, 3, 1)])
    con = make_constraint(inst, {0})
    assert con.rhs == 2
    assert con.multiplicities == {0: 1, 1: 1}
    # S = {0,1}: boundary {0-2, 0-3} is even
    with pytest.raises(PreconditionError):
        make_constraint(inst, {0, 1})


def test_covering_row_reported_first():
    inst = WtapInstance(range(3), [(0, 1), (1, 2)], [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    con = separate_odd_cut(inst, {0: F(1, 3)})
    assert len(con.source_set.boundary) == 1
    assert con.to_row().tag == "covering"
    assert covering_constraint(inst, 0).source_set.boundary == frozenset({0})


def test_slack_graph_rejects_undercover():
    inst = WtapInstance(range(2), [(0, 1)], [(0, 1, 1)])
    with pytest.raises(PreconditionError):
        build_slack_graph(inst, {0: F(1, 2)})


def test_brute_force_node_limit():
    inst = WtapInstance(range(21), [(i, i + 1) for i in range(20)], [(0, 20, 1)])
    with pytest.raises(ResourceLimitError):
        brute_force_separate(inst, {0: F(1)})


def _nx_graph(nodes, cap):
    G = nx.Graph()
    G.add_nodes_from(nodes)
    for (a, b), c in cap.items():
        if a != b:
            w = G[a][b]["capacity"] + c if G.has_edge(a, b) else c
            G.add_edge(a, b, capacity=w)
    return G


@given(st.integers(0, 5000))
def test_max_flow_matches_networkx(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    cap = {}
    for _ in range(rng.randint(1, 14)):
        a, b = rng.sample(range(n), 2)
        cap[(min(a, b), max(a, b))] = F(rng.randint(0, 6), rng.randint(1, 3))
    G = _nx_graph(range(n), cap)
    value, side = max_flow(range(n), cap, 0, n - 1)
    ref = nx.maximum_flow_value(G, 0, n - 1)
    assert value == ref
    assert 0 in side and n - 1 not in side
    assert sum(c for (a, b), c in cap.items() if (a in side) != (b in side)) == value


@given(st.integers(0, 5000))
def test_gomory_hu_pairwise_cuts(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    cap = {}
    for _ in range(rng.randint(1, 12)):
        a, b = rng.sample(range(n), 2)
        cap[(min(a, b), max(a, b))] = F(rng.randint(0, 5), 2)
    tree = gomory_hu(range(n), cap)
    comps = tree_components(range(n), tree)
    G = _nx_graph(range(n), cap)
    for s in range(n):
        for t in range(s + 1, n):
            ref = nx.maximum_flow_value(G, s, t) if G.number_of_edges() else 0
            best = min(w for v, (p, w) in tree.items() if (s in comps[v]) != (t in comps[v]))
            assert best == ref


@given(st.integers(0, 5000))
def test_separation_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    inst = random_instance(seed, n_max=10)
    x = covering_x(inst, rng) if seed % 2 else solve_cut_lp(inst).solution
    fast = separate_odd_cut(inst, x)
    slow = brute_force_separate(inst, x)
    assert (fast is None) == (slow is None)
    H = build_slack_graph(inst, x)
    S, value = min_odd_cut(H)
    T, bvalue = brute_force_min_odd_cut(inst, x)
    assert value == bvalue
    # min_odd_cut value equals 2*violation + 1 of the cut it names
    con = make_constraint(inst, S)
    assert value == 2 * (con.lhs(x) - con.rhs) + 1
    if fast is not None:
        assert fast.violation(x) == slow.violation(x)


@given(st.integers(0, 3000))
def test_lp_chain(seed):
    inst = random_instance(seed, n_max=9)
    cut = solve_cut_lp(inst).objective
    odd, _ = solve_odd_cut_lp(inst)
    opt = brute_force_wtap(inst).cost
    assert cut <= odd.objective <= opt


def test_odd_vertex_set_of():
    inst = WtapInstance(range(4), [(0, 1), (0, 2), (0, 3)], [])
    S = OddVertexSet.of(inst, {0})
    assert S.is_odd and len(S.boundary) == 3


def test_dump_gomory_hu(star):
    H = build_slack_graph(star, {0: F(1), 1: F(1)})
    lines = dump_gomory_hu(H).splitlines()
    assert len(lines) == 3
