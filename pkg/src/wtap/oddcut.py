"""Odd-cut constraints and their separation.

For a node set S whose tree boundary has odd size, the constraint is

    sum_l ceil(|P_l & boundary(S)| / 2) * x_l  >=  (|boundary(S)| + 1) / 2 .

Writing y_e = x(cov(e)) - 1 turns it into "the slack graph has weight at
least 1 across S", and S is odd with respect to the odd-degree tree nodes
exactly when its boundary is odd.  So a minimum T-odd cut (Padberg-Rao, read
off a Gomory-Hu tree) finds the most violated constraint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernels
from .errors import PreconditionError, ResourceLimitError
from .flow import cut_value, gomory_hu, tree_components, dump_tree
from .instance import WtapInstance
from .lp import LinearConstraint, LpModel, solve_lp, solve_with_separation

ZERO = Fraction(0)
BRUTE_FORCE_MAX_NODES = 20


@dataclass(frozen=True)
class OddVertexSet:
    members: frozenset
    boundary: frozenset  # tree edge ids

    @classmethod
    def of(cls, instance: WtapInstance, members: Iterable[int]) -> "OddVertexSet":
        members = frozenset(members)
        return cls(members, instance.boundary(members))

    @property
    def is_odd(self) -> bool:
        return len(self.boundary) % 2 == 1


@dataclass(frozen=True)
class OddCutConstraint:
    multiplicities: Mapping[int, int]
    rhs: Fraction
    source_set: OddVertexSet

    def lhs(self, x: Mapping[int, Fraction]) -> Fraction:
        return sum((m * x.get(lid, ZERO) for lid, m in self.multiplicities.items()), ZERO)

    def violation(self, x: Mapping[int, Fraction]) -> Fraction:
        return self.rhs - self.lhs(x)

    def to_row(self) -> LinearConstraint:
        tag = "covering" if len(self.source_set.boundary) == 1 else "odd-cut"
        label = "S=" + ",".join(map(str, sorted(self.source_set.members)))
        return LinearConstraint({lid: Fraction(m) for lid, m in self.multiplicities.items()}, self.rhs, tag, label)


def _canonical(instance: WtapInstance, members) -> frozenset:
    """Of S and its complement, the one avoiding the largest node id."""
    members = frozenset(members)
    if instance.nodes[-1] in members:
        return frozenset(instance.nodes) - members
    return members


def make_constraint(instance: WtapInstance, S) -> OddCutConstraint:
    if not isinstance(S, OddVertexSet):
        S = OddVertexSet.of(instance, S)
    if not S.is_odd:
        raise PreconditionError(f"boundary of S has even size {len(S.boundary)}")
    mult = {}
    for link in instance.links:
        if link.is_loop:
            continue
        hits = len(instance.path_edges(link.id) & S.boundary)
        if hits:
            mult[link.id] = (hits + 1) // 2
    return OddCutConstraint(mult, Fraction(len(S.boundary) + 1, 2), S)


def covering_constraint(instance: WtapInstance, eid: int) -> OddCutConstraint:
    e = instance.edge(eid)
    side = _canonical(instance, instance.side(eid, e.u))
    return make_constraint(instance, side)


@dataclass
class SlackGraph:
    instance: WtapInstance
    edge_slack: dict  # tree edge id -> y_e
    link_weight: dict  # link id -> x_l
    capacity: dict  # (a, b) with a < b -> total weight
    terminals: frozenset

    def weight_across(self, members) -> Fraction:
        return cut_value(self.capacity, members)


def build_slack_graph(instance: WtapInstance, x: Mapping[int, Fraction]) -> SlackGraph:
    slack = {}
    cap: dict[tuple[int, int], Fraction] = {}
    for e in instance.edges:
        y = instance.coverage(x, e.id) - 1
        if y < 0:
            raise PreconditionError(f"edge {e.id} is under-covered (x(cov(e)) = {y + 1})")
        slack[e.id] = y
        key = (e.u, e.v) if e.u < e.v else (e.v, e.u)
        cap[key] = cap.get(key, ZERO) + y
    weights = {}
    for lid, val in x.items():
        link = instance.link_by_id.get(lid)
        if link is None or link.is_loop or not val:
            continue
        weights[lid] = val
        key = link.ends
        cap[key] = cap.get(key, ZERO) + val
    terminals = frozenset(v for v in instance.nodes if instance.degree(v) % 2 == 1)
    return SlackGraph(instance, slack, weights, cap, terminals)


def gomory_hu_tree(H: SlackGraph):
    return gomory_hu(H.instance.nodes, H.capacity)


def dump_gomory_hu(H: SlackGraph) -> str:
    """Edge list ``child parent weight`` of the Gomory-Hu tree (debug aid)."""
    return dump_tree(gomory_hu_tree(H))


def min_odd_cut(H: SlackGraph) -> tuple[OddVertexSet, Fraction]:
    """Minimum-weight cut of the slack graph among sets with an odd number of terminals."""
    if not H.terminals:
        raise PreconditionError("terminal set is empty")
    inst = H.instance
    tree = gomory_hu_tree(H)
    best = None
    for v, side in tree_components(inst.nodes, tree).items():
        if len(side & H.terminals) % 2 == 0:
            continue
        members = _canonical(inst, side)
        value = H.weight_across(members)
        key = (value, len(inst.boundary(members)), tuple(sorted(members)))
        if best is None or key < best:
            best = key
    value, _, members = best
    return OddVertexSet.of(inst, members), value


def separate_odd_cut(instance: WtapInstance, x: Mapping[int, Fraction]) -> OddCutConstraint | None:
    """A violated odd-cut constraint, or None when x satisfies all of them.

    Under-covered edges are reported first as covering constraints; the slack
    graph is only built once every edge is covered.
    """
    worst = None
    for e in instance.edges:
        cov = instance.coverage(x, e.id)
        if cov < 1 and (worst is None or cov < worst[0]):
            worst = (cov, e.id)
    if worst is not None:
        return covering_constraint(instance, worst[1])
    if len(instance.nodes) < 2:
        return None
    S, value = min_odd_cut(build_slack_graph(instance, x))
    if value >= 1:
        return None
    con = make_constraint(instance, S)
    assert con.lhs(x) - con.rhs == (value - 1) / 2
    return con


def odd_cut_oracle(instance: WtapInstance):
    """Separation callback producing LP rows for :func:`wtap.lp.solve_with_separation`."""

    def oracle(x):
        con = separate_odd_cut(instance, x)
        return None if con is None else con.to_row()

    return oracle


def cut_lp_model(instance: WtapInstance, link_ids=None) -> LpModel:
    """Cut LP: one covering row per tree edge; self-loops get no variable."""
    keep = None if link_ids is None else set(link_ids)
    links = [l for l in instance.real_links() if keep is None or l.id in keep]
    ids = {l.id for l in links}
    rows = []
    for e in instance.edges:
        cov = sorted(instance.cover_map()[e.id] & ids)
        rows.append(LinearConstraint({lid: Fraction(1) for lid in cov}, Fraction(1), "covering", f"e{e.id}"))
    return LpModel([l.id for l in links], {l.id: l.cost for l in links}, rows)


def solve_cut_lp(instance: WtapInstance, link_ids=None):
    return solve_lp(cut_lp_model(instance, link_ids))


def solve_odd_cut_lp(instance: WtapInstance, link_ids=None, extra_rows=(), extra_oracles=()):
    """Odd-cut LP by lazy separation; returns ``(outcome, rows added)``.

    With ``link_ids`` the LP only has variables for those links; the oracle
    is run on the correspondingly restricted instance.
    """
    scope = instance if link_ids is None else instance.restrict_links(link_ids)
    model = cut_lp_model(scope).with_rows(extra_rows)
    return solve_with_separation(model, [odd_cut_oracle(scope), *extra_oracles])


def _scan(instance: WtapInstance, x: Mapping[int, Fraction], impl=None):
    n = len(instance.nodes)
    if n > BRUTE_FORCE_MAX_NODES:
        raise ResourceLimitError(f"exhaustive odd-set scan limited to {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    index = {v: i for i, v in enumerate(instance.nodes)}
    ebit = {e.id: k for k, e in enumerate(instance.edges)}
    edge_ends = [(index[e.u], index[e.v]) for e in instance.edges]
    lids, masks, vals = [], [], []
    for lid, val in x.items():
        link = instance.link_by_id.get(lid)
        if link is None or link.is_loop or not val:
            continue
        mask = 0
        for eid in instance.path_edges(lid):
            mask |= 1 << ebit[eid]
        lids.append(lid)
        masks.append(mask)
        vals.append(Fraction(val))
    denom = 1
    for v in vals:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    weights = [int(v * denom) for v in vals]
    res = kernels.odd_cut_scan(n, edge_ends, masks, weights, denom, impl=impl)
    if res is None:
        return None
    score, _, mask = res
    members = frozenset(v for v, i in index.items() if mask >> i & 1)
    return members, Fraction(score, 2 * denom)


def brute_force_min_odd_cut(instance: WtapInstance, x: Mapping[int, Fraction], impl=None):
    """Exhaustive counterpart of :func:`min_odd_cut`: ``(set, 2*violation + 1)``."""
    res = _scan(instance, x, impl)
    if res is None:
        raise PreconditionError("no node set has an odd boundary")
    members, violation = res
    return OddVertexSet.of(instance, members), 2 * violation + 1


def brute_force_separate(instance: WtapInstance, x: Mapping[int, Fraction], impl=None) -> OddCutConstraint | None:
    """Most violated odd-cut constraint by scanning every node subset."""
    res = _scan(instance, x, impl)
    if res is None:
        return None
    members, violation = res
    if violation >= 0:
        return None
    return make_constraint(instance, members)
