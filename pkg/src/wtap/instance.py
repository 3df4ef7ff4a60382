"""Tree augmentation instances: trees, links, coverage, shadows and contraction.

Node ids are plain integers.  Tree edges and links carry integer ids that stay
stable under contraction and restriction, so a solution vector (a ``dict``
from link id to :class:`~fractions.Fraction`) computed on one instance can be
read on any instance derived from it.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import PreconditionError, StateError

Solution = dict  # link id -> Fraction; zero entries may be omitted

_lineage_counter = itertools.count(1)


def as_fraction(value) -> Fraction:
    """Parse ``3``, ``"3"``, ``"5/2"`` or a Fraction into an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise PreconditionError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise PreconditionError("floating point costs are not accepted; use 'p/q' strings")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"not a rational: {value!r}") from exc


def frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class TreeEdge:
    id: int
    u: int
    v: int

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


@dataclass(frozen=True)
class Link:
    id: int
    u: int
    v: int
    cost: Fraction
    origin: int | None = None  # id of the original link this one shadows

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    @property
    def ends(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


class LinkClass(Enum):
    UP = "up"
    CROSS = "cross"
    IN_NOT_UP = "in-not-up"


class _Rooted:
    """Parent pointers, depths and a BFS order for one choice of root."""

    def __init__(self, inst: "WtapInstance", root: int):
        self.root = root
        self.parent: dict[int, int | None] = {root: None}
        self.parent_edge: dict[int, int | None] = {root: None}
        self.depth = {root: 0}
        self.order = [root]
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for eid, b in inst.adjacency[a]:
                if b not in self.depth:
                    self.parent[b] = a
                    self.parent_edge[b] = eid
                    self.depth[b] = self.depth[a] + 1
                    self.order.append(b)
                    queue.append(b)

    def lca(self, u: int, v: int) -> int:
        du, dv = self.depth[u], self.depth[v]
        while du > dv:
            u = self.parent[u]
            du -= 1
        while dv > du:
            v = self.parent[v]
            dv -= 1
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def path(self, u: int, v: int) -> tuple[list[int], list[int]]:
        """Nodes and edge ids of the u-v path, listed from u to v."""
        left, right = [u], [v]
        left_e, right_e = [], []
        a, b = u, v
        while self.depth[a] > self.depth[b]:
            left_e.append(self.parent_edge[a])
            a = self.parent[a]
            left.append(a)
        while self.depth[b] > self.depth[a]:
            right_e.append(self.parent_edge[b])
            b = self.parent[b]
            right.append(b)
        while a != b:
            left_e.append(self.parent_edge[a])
            right_e.append(self.parent_edge[b])
            a, b = self.parent[a], self.parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1], left_e + right_e[::-1]


class WtapInstance:
    """An undirected tree plus weighted links.

    Instances are never mutated after construction; every transformation
    returns a new object that shares the ``lineage`` token of its source.
    """

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Iterable[TreeEdge | tuple[int, int]],
        links: Iterable[Link | tuple],
        root: int | None = None,
        cost_bound: Fraction | None = None,
        contraction_map: Mapping[int, int] | None = None,
        lineage: int | None = None,
    ):
        self.nodes = tuple(sorted(set(nodes)))
        node_set = set(self.nodes)
        if not self.nodes:
            raise PreconditionError("instance needs at least one node")
        self.edges = tuple(
            e if isinstance(e, TreeEdge) else TreeEdge(i, e[0], e[1])
            for i, e in enumerate(edges)
        )
        built = []
        for i, item in enumerate(links):
            if isinstance(item, Link):
                built.append(item)
            else:
                u, v, c = item[0], item[1], item[2]
                built.append(Link(i, u, v, as_fraction(c)))
        self.links = tuple(built)
        self.root = root
        self.contraction_map = dict(contraction_map) if contraction_map is not None else {
            v: v for v in self.nodes
        }
        self.lineage = lineage if lineage is not None else next(_lineage_counter)

        if len(self.edges) != len(self.nodes) - 1:
            raise PreconditionError(
                f"a tree on {len(self.nodes)} nodes needs {len(self.nodes) - 1} edges, got {len(self.edges)}"
            )
        self.adjacency: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        self.edge_by_id: dict[int, TreeEdge] = {}
        for e in self.edges:
            if e.u == e.v:
                raise PreconditionError(f"tree edge {e.id} is a self-loop")
            if e.u not in node_set or e.v not in node_set:
                raise PreconditionError(f"tree edge {e.id} has an endpoint outside the node set")
            if e.id in self.edge_by_id:
                raise PreconditionError(f"duplicate edge id {e.id}")
            self.edge_by_id[e.id] = e
            self.adjacency[e.u].append((e.id, e.v))
            self.adjacency[e.v].append((e.id, e.u))
        self.link_by_id: dict[int, Link] = {}
        for link in self.links:
            if link.u not in node_set or link.v not in node_set:
                raise PreconditionError(f"link {link.id} has an endpoint outside the node set")
            if link.cost <= 0:
                raise PreconditionError(f"link {link.id} has non-positive cost {link.cost}")
            if link.id in self.link_by_id:
                raise PreconditionError(f"duplicate link id {link.id}")
            self.link_by_id[link.id] = link
        if root is not None and root not in node_set:
            raise PreconditionError(f"root {root} is not a node")

        self._rooted: dict[int, _Rooted] = {}
        base = self.rooted(self.root if self.root is not None else self.nodes[0])
        if len(base.order) != len(self.nodes):
            raise PreconditionError("tree edges do not connect all nodes")
        self._paths: dict[tuple[int, int], tuple[list[int], frozenset[int]]] = {}
        self._cover: dict[int, frozenset[int]] | None = None

        costs = [l.cost for l in self.links if not l.is_loop]
        if cost_bound is None:
            cost_bound = max(costs, default=Fraction(1))
            if costs:
                cost_bound = max(cost_bound / min(costs), Fraction(1))
        self.cost_bound = as_fraction(cost_bound)

    # -- basic structure ---------------------------------------------------

    def rooted(self, root: int) -> _Rooted:
        r = self._rooted.get(root)
        if r is None:
            r = self._rooted[root] = _Rooted(self, root)
        return r

    def _base(self) -> _Rooted:
        return self.rooted(self.root if self.root is not None else self.nodes[0])

    def edge(self, eid: int) -> TreeEdge:
        return self.edge_by_id[eid]

    def link(self, lid: int) -> Link:
        return self.link_by_id[lid]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def leaves(self) -> list[int]:
        if len(self.nodes) == 1:
            return []
        return [v for v in self.nodes if len(self.adjacency[v]) == 1]

    def real_links(self) -> list[Link]:
        return [l for l in self.links if not l.is_loop]

    # -- paths and coverage ---------------------------------------------------

    def path(self, u: int, v: int) -> tuple[list[int], frozenset[int]]:
        key = (u, v) if u <= v else (v, u)
        hit = self._paths.get(key)
        if hit is None:
            nodes, eids = self._base().path(key[0], key[1])
            hit = self._paths[key] = (nodes, frozenset(eids))
        return hit

    def path_edges(self, lid: int) -> frozenset[int]:
        link = self.link_by_id[lid]
        return self.path(link.u, link.v)[1]

    def path_node_list(self, u: int, v: int) -> list[int]:
        nodes, _ = self.path(u, v)
        return nodes if (u <= v) else nodes[::-1]

    def cover_map(self) -> dict[int, frozenset[int]]:
        """Edge id -> ids of links covering it."""
        if self._cover is None:
            acc: dict[int, set[int]] = {e.id: set() for e in self.edges}
            for link in self.links:
                if link.is_loop:
                    continue
                for eid in self.path_edges(link.id):
                    acc[eid].add(link.id)
            self._cover = {eid: frozenset(s) for eid, s in acc.items()}
        return self._cover

    def coverage(self, x: Mapping[int, Fraction], eid: int) -> Fraction:
        return sum((x.get(lid, 0) for lid in self.cover_map()[eid]), Fraction(0))

    def side(self, eid: int, endpoint: int) -> frozenset[int]:
        """Nodes of the component of ``G - e`` that contains ``endpoint``."""
        e = self.edge_by_id[eid]
        if endpoint not in (e.u, e.v):
            raise PreconditionError(f"node {endpoint} is not an endpoint of edge {eid}")
        seen = {endpoint}
        stack = [endpoint]
        while stack:
            a = stack.pop()
            for fid, b in self.adjacency[a]:
                if fid != eid and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return frozenset(seen)

    def boundary(self, members: Iterable[int]) -> frozenset[int]:
        """Tree edges with exactly one endpoint in ``members``."""
        s = set(members)
        return frozenset(e.id for e in self.edges if (e.u in s) != (e.v in s))

    def link_mass(self, x: Mapping[int, Fraction], nodes: Iterable[int]) -> Fraction:
        """Sum of c_l x_l over non-loop links with both endpoints in ``nodes``."""
        s = set(nodes)
        total = Fraction(0)
        for lid, val in x.items():
            if not val:
                continue
            link = self.link_by_id.get(lid)
            if link is None or link.is_loop:
                continue
            if link.u in s and link.v in s:
                total += link.cost * val
        return total

    def cost_of(self, x: Mapping[int, Fraction]) -> Fraction:
        return sum((self.link_by_id[lid].cost * val for lid, val in x.items() if val), Fraction(0))

    # -- derived instances ---------------------------------------------------

    def _derive(self, **kw) -> "WtapInstance":
        args = dict(
            nodes=self.nodes,
            edges=self.edges,
            links=self.links,
            root=self.root,
            cost_bound=self.cost_bound,
            contraction_map=self.contraction_map,
            lineage=self.lineage,
        )
        args.update(kw)
        return WtapInstance(**args)

    def with_root(self, root: int | None) -> "WtapInstance":
        return self._derive(root=root)

    def restrict_links(self, link_ids: Iterable[int]) -> "WtapInstance":
        keep = set(link_ids)
        return self._derive(links=[l for l in self.links if l.id in keep])

    def induced(self, nodes: Iterable[int], root: int | None = None) -> "WtapInstance":
        """Subtree on ``nodes`` with the non-loop links lying inside it."""
        s = set(nodes)
        edges = [e for e in self.edges if e.u in s and e.v in s]
        links = [l for l in self.links if l.u in s and l.v in s and not l.is_loop]
        cmap = {k: v for k, v in self.contraction_map.items() if v in s}
        if root is None and self.root in s:
            root = self.root
        return self._derive(nodes=s, edges=edges, links=links, root=root, contraction_map=cmap)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.nodes).encode())
        for e in self.edges:
            h.update(f"e{e.u},{e.v};".encode())
        for l in self.links:
            h.update(f"l{l.u},{l.v},{l.cost};".encode())
        return h.hexdigest()[:16]

    def __repr__(self) -> str:
        return f"WtapInstance(n={len(self.nodes)}, links={len(self.links)}, root={self.root})"


def _edge_id(edge) -> int:
    return edge.id if isinstance(edge, TreeEdge) else int(edge)


def _link_id(link) -> int:
    return link.id if isinstance(link, Link) else int(link)


def tree_path(instance: WtapInstance, link: Link | int) -> frozenset[TreeEdge]:
    """Tree edges covered by ``link`` (empty for a self-loop)."""
    if isinstance(link, Link):
        if link.u not in instance.adjacency or link.v not in instance.adjacency:
            raise PreconditionError(f"link {link.id} has an endpoint outside the instance")
        eids = instance.path(link.u, link.v)[1]
    else:
        eids = instance.path_edges(link)
    return frozenset(instance.edge_by_id[i] for i in eids)


def cover_set(instance: WtapInstance, edges: Iterable[TreeEdge | int]) -> frozenset[Link]:
    """All links whose tree path meets ``edges``."""
    cmap = instance.cover_map()
    out: set[int] = set()
    for e in edges:
        eid = _edge_id(e)
        if eid not in cmap:
            raise PreconditionError(f"edge {eid} is not a tree edge of this instance")
        out |= cmap[eid]
    return frozenset(instance.link_by_id[i] for i in out)


def is_feasible(instance: WtapInstance, chosen: Iterable[Link | int]) -> bool:
    covered: set[int] = set()
    for link in chosen:
        lid = _link_id(link)
        if lid not in instance.link_by_id:
            raise PreconditionError(f"link {lid} is not part of the instance")
        covered |= instance.path_edges(lid)
    return len(covered) == len(instance.edges)


def lca(instance: WtapInstance, u: int, v: int) -> int:
    if instance.root is None:
        raise StateError("instance has no root")
    return instance.rooted(instance.root).lca(u, v)


def classify_link(instance: WtapInstance, link: Link | int) -> LinkClass:
    if instance.root is None:
        raise StateError("link classification needs a rooted instance")
    if not isinstance(link, Link):
        link = instance.link_by_id[link]
    w = instance.rooted(instance.root).lca(link.u, link.v)
    if w in (link.u, link.v):
        return LinkClass.UP
    if w == instance.root:
        return LinkClass.CROSS
    return LinkClass.IN_NOT_UP


def split_solution(instance: WtapInstance, x: Mapping[int, Fraction]) -> tuple[dict, dict]:
    """Split ``x`` into its in-link part and its cross-link part."""
    x_in: dict[int, Fraction] = {}
    x_cr: dict[int, Fraction] = {}
    for lid, val in x.items():
        if classify_link(instance, lid) is LinkClass.CROSS:
            x_cr[lid] = val
        else:
            x_in[lid] = val
    return x_in, x_cr


def shadow_complete(instance: WtapInstance) -> WtapInstance:
    """Add every missing shadow and keep only the cheapest link per node pair.

    A pair p,q lying on the path of some link gets cost equal to the cheapest
    link whose path contains the p-q path.  ``origin`` of every resulting link
    names an input link of that cost whose path contains it.
    """
    best: dict[tuple[int, int], tuple[Fraction, int]] = {}
    for link in instance.links:
        if link.is_loop:
            continue
        nodes = instance.path_node_list(link.u, link.v)
        origin = link.origin if link.origin is not None else link.id
        cand = (link.cost, origin)
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                a, b = nodes[i], nodes[j]
                key = (a, b) if a < b else (b, a)
                cur = best.get(key)
                if cur is None or cand < cur:
                    best[key] = cand
    existing: dict[tuple[int, int], Link] = {}
    loops = []
    for link in instance.links:
        if link.is_loop:
            loops.append(link)
            continue
        cur = existing.get(link.ends)
        if cur is None or (link.cost, link.id) < (cur.cost, cur.id):
            existing[link.ends] = link
    next_id = max((l.id for l in instance.links), default=-1) + 1
    out = []
    for key in sorted(best):
        cost, origin = best[key]
        link = existing.get(key)
        if link is not None:
            own_origin = link.origin if link.origin is not None else link.id
            if link.cost <= cost:
                out.append(replace(link, origin=own_origin))
            else:
                out.append(replace(link, cost=cost, origin=origin))
        else:
            out.append(Link(next_id, key[0], key[1], cost, origin))
            next_id += 1
    out.extend(loops)
    out.sort(key=lambda l: l.id)
    return instance._derive(links=out)


def contract(instance: WtapInstance, edges: Iterable[TreeEdge | int]) -> tuple[WtapInstance, dict[int, int]]:
    """Contract tree edges; each component is represented by its smallest node.

    Links keep their ids.  Links inside a contracted component become
    self-loops rather than disappearing.
    """
    eids = {_edge_id(e) for e in edges}
    for eid in eids:
        if eid not in instance.edge_by_id:
            raise PreconditionError(f"edge {eid} is not a tree edge of this instance")
    parent = {v: v for v in instance.nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for eid in eids:
        e = instance.edge_by_id[eid]
        ra, rb = find(e.u), find(e.v)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    mapping = {v: find(v) for v in instance.nodes}
    new_edges = [TreeEdge(e.id, mapping[e.u], mapping[e.v]) for e in instance.edges if e.id not in eids]
    new_links = [replace(l, u=mapping[l.u], v=mapping[l.v]) for l in instance.links]
    cmap = {orig: mapping[cur] for orig, cur in instance.contraction_map.items()}
    root = mapping[instance.root] if instance.root is not None else None
    out = instance._derive(
        nodes=set(mapping.values()),
        edges=new_edges,
        links=new_links,
        root=root,
        contraction_map=cmap,
    )
    return out, mapping


def normalize_costs(instance: WtapInstance) -> tuple[WtapInstance, Fraction]:
    """Scale costs so the cheapest link costs 1; returns the scale factor used."""
    costs = [l.cost for l in instance.links]
    if not costs:
        return instance, Fraction(1)
    lo = min(costs)
    if lo <= 0:
        raise PreconditionError("link costs must be positive; pre-select zero-cost links")
    scale = 1 / lo
    links = [replace(l, cost=l.cost * scale) for l in instance.links]
    return instance._derive(links=links, cost_bound=max(costs) * scale), scale
