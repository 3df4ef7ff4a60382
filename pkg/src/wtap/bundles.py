"""Bundles (unions of few tree paths) and their exact lower-bound rows.

A bundle row says that the links meeting B must pay at least OPT(B), the
cheapest way of covering B alone.  OPT(B) is computed by contracting every
tree edge outside B, which leaves a tree with at most 2*|paths| leaves.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError
from .exact import solve_few_leaf
from .instance import TreeEdge, WtapInstance, contract, frac_str
from .lp import LinearConstraint


@dataclass(frozen=True)
class Bundle:
    paths: tuple  # node pairs of the original tree
    edge_set: frozenset  # tree edge ids
    lineage: int

    @classmethod
    def from_paths(cls, original: WtapInstance, pairs) -> "Bundle":
        pairs = tuple((a, b) if a <= b else (b, a) for a, b in pairs)
        eids = frozenset().union(*(original.path(a, b)[1] for a, b in pairs)) if pairs else frozenset()
        return cls(pairs, eids, original.lineage)

    @classmethod
    def from_edges(cls, original: WtapInstance, edges) -> "Bundle":
        eids = _edge_ids(original, edges)
        return cls(tuple(path_segments(original, eids)), eids, original.lineage)

    @property
    def size(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class BundleConstraint:
    coefficients: dict
    rhs: Fraction
    bundle: Bundle

    def lhs(self, x) -> Fraction:
        return sum((c * x.get(lid, 0) for lid, c in self.coefficients.items()), Fraction(0))

    def violation(self, x) -> Fraction:
        return self.rhs - self.lhs(x)

    def to_row(self) -> LinearConstraint:
        label = "B=" + ",".join(map(str, sorted(self.bundle.edge_set)))
        return LinearConstraint(dict(self.coefficients), self.rhs, "bundle", label)

    def __str__(self) -> str:
        return f"bundle {sorted(self.bundle.edge_set)} rhs {frac_str(self.rhs)}"


def _edge_ids(instance: WtapInstance, edges) -> frozenset:
    out = set()
    for e in edges:
        eid = e.id if isinstance(e, TreeEdge) else int(e)
        if eid not in instance.edge_by_id:
            raise PreconditionError(f"edge {eid} is not an edge of the original tree")
        out.add(eid)
    return frozenset(out)


def path_segments(instance: WtapInstance, eids: Iterable[int]) -> list[tuple[int, int]]:
    """Split the forest formed by ``eids`` into maximal paths.

    Paths end at forest leaves and at nodes of forest degree three or more.
    Returns the endpoint pairs, sorted.
    """
    eids = set(eids)
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for eid in eids:
        e = instance.edge(eid)
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))
    used: set[int] = set()
    segments = []
    for start in sorted(adj):
        if len(adj[start]) == 2:
            continue
        for eid, nxt in sorted(adj[start]):
            if eid in used:
                continue
            used.add(eid)
            cur = nxt
            while len(adj[cur]) == 2:
                (e1, a), (e2, b) = adj[cur]
                eid2, step = (e2, b) if e1 in used else (e1, a)
                used.add(eid2)
                cur = step
            segments.append((min(start, cur), max(start, cur)))
    return sorted(segments)


def bundle_opt(instance: WtapInstance, B: Bundle):
    """Exact OPT(B): contract the edges outside B and solve what remains.

    Returns the :class:`~wtap.exact.ExactSolution` of the contracted
    instance; its link ids are ids of ``instance``.
    """
    missing = B.edge_set - set(instance.edge_by_id)
    if missing:
        raise PreconditionError(f"bundle edges {sorted(missing)} are not in the instance")
    rest = [e.id for e in instance.edges if e.id not in B.edge_set]
    small, _ = contract(instance, rest)
    return solve_few_leaf(small, max(2 * len(B.paths), 2))


def bundle_constraint(instance: WtapInstance, B: Bundle) -> BundleConstraint:
    opt = bundle_opt(instance, B).cost
    cmap = instance.cover_map()
    cov = set()
    for eid in B.edge_set:
        cov |= cmap[eid]
    coeffs = {lid: instance.link(lid).cost for lid in sorted(cov)}
    return BundleConstraint(coeffs, opt, B)


def is_gamma_bundle(original: WtapInstance, contracted_edges, gamma: int, descendant: WtapInstance | None = None):
    """The bundle formed by lifting ``contracted_edges`` to ``original``, if it has <= gamma paths.

    Edge ids survive contraction, so the lift keeps the ids; edges that were
    contracted in between are absent and break the lifted paths.
    """
    if descendant is not None and descendant.lineage != original.lineage:
        raise PreconditionError("instances are not related by contraction")
    eids = _edge_ids(original, contracted_edges)
    if descendant is not None:
        foreign = eids - set(descendant.edge_by_id)
        if foreign:
            raise PreconditionError(f"edges {sorted(foreign)} are not in the descendant instance")
    segments = path_segments(original, eids)
    if len(segments) > gamma:
        return None
    return Bundle(tuple(segments), eids, original.lineage)
