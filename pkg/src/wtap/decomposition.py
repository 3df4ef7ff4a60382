"""Heavy-edge covering, thin-edge splitting and simple-pair centers.

Given a fractional solution x of a shadow-complete instance G:

1. edges covered at least ``heavy_threshold`` times are covered cheaply by
   L^h and the paths of L^h are contracted, giving G-bar;
2. G-bar is split along alpha-thin edges until none remain, moving the mass
   of links that cross a split edge onto shadows ending at the split point;
3. the split edges E^s are covered by an inclusion-minimal L^s.

Every pair (G^i, x^i) then has a center whose removal leaves parts of small
link-cost mass.  :func:`verify_decomposition` re-checks all of this exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import CertificateViolation, PreconditionError, StateError
from .exact import solve_up_cross_exact
from .instance import WtapInstance, contract, frac_str
from .oddcut import brute_force_separate, separate_odd_cut, BRUTE_FORCE_MAX_NODES
from .params import AlgorithmParams

ZERO = Fraction(0)


@dataclass
class DecompPair:
    subtree: WtapInstance
    local_x: dict
    beta_center: int | None = None

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.subtree.nodes)

    def cost(self) -> Fraction:
        return self.subtree.cost_of(self.local_x)


@dataclass
class DecompositionResult:
    instance: WtapInstance  # G
    contracted: WtapInstance  # G-bar
    mapping: dict  # G node -> G-bar node
    pairs: list
    heavy_edges: frozenset
    heavy_cover: frozenset  # link ids
    split_edges: list
    split_cover: frozenset  # link ids
    contracted_nodes: frozenset  # V^h
    cost_x: Fraction = ZERO
    cost_pairs: Fraction = ZERO
    cost_heavy: Fraction = ZERO
    cost_split: Fraction = ZERO

    def to_json(self) -> dict:
        return {
            "pairs": [
                {
                    "nodes": list(p.subtree.nodes),
                    "edges": [[e.u, e.v] for e in p.subtree.edges],
                    "local_x": {str(k): frac_str(v) for k, v in sorted(p.local_x.items())},
                    "beta_center": p.beta_center,
                }
                for p in self.pairs
            ],
            "heavy_edges": sorted(self.heavy_edges),
            "heavy_cover": sorted(self.heavy_cover),
            "split_edges": list(self.split_edges),
            "split_cover": sorted(self.split_cover),
            "contracted_nodes": sorted(self.contracted_nodes),
            "ledger": {
                "cost_x": frac_str(self.cost_x),
                "cost_pairs": frac_str(self.cost_pairs),
                "cost_heavy": frac_str(self.cost_heavy),
                "cost_split": frac_str(self.cost_split),
            },
        }


def cheapest_by_ends(instance: WtapInstance) -> dict:
    """Endpoint pair -> cheapest non-loop link with those endpoints (ties by id)."""
    best = {}
    for l in instance.real_links():
        cur = best.get(l.ends)
        if cur is None or (l.cost, l.id) < (cur.cost, cur.id):
            best[l.ends] = l
    return best


def _shadow(table, a, b):
    key = (a, b) if a <= b else (b, a)
    link = table.get(key)
    if link is None:
        raise StateError(f"no link between {a} and {b}; instance is not shadow-complete")
    return link


def _add(x, lid, val):
    if val:
        x[lid] = x.get(lid, ZERO) + val


# -- heavy edges ---------------------------------------------------------------


def heavy_edges(instance: WtapInstance, x: Mapping, params: AlgorithmParams) -> frozenset:
    return frozenset(e.id for e in instance.edges if instance.coverage(x, e.id) >= params.heavy_threshold)


def cover_heavy(instance: WtapInstance, x: Mapping, Eh, params: AlgorithmParams):
    """Integer cover of the heavy edges with cost at most epsilon * c.x.

    The other edges are contracted; (eps/2)x then covers every remaining edge
    and each of its links is split at its lca into two up-links.  Up-link
    covering LPs are integral, so the exact solve costs at most c.y.
    """
    Eh = frozenset(Eh)
    if not Eh:
        return frozenset(), ZERO
    rest = [e.id for e in instance.edges if e.id not in Eh]
    small, mapping = contract(instance, rest)
    root = mapping[instance.root if instance.root is not None else instance.nodes[0]]
    small = small.with_root(root)
    tree = small.rooted(root)
    table = cheapest_by_ends(small)
    y = {}
    for lid, val in x.items():
        link = small.link(lid)
        if link.is_loop or not val:
            continue
        val = params.epsilon / 2 * val
        w = tree.lca(link.u, link.v)
        if w in (link.u, link.v):
            _add(y, _shadow(table, link.u, link.v).id, val)
        else:
            _add(y, _shadow(table, link.u, w).id, val)
            _add(y, _shadow(table, w, link.v).id, val)
    sol = solve_up_cross_exact(small, restrict_to=y.keys())
    bound = small.cost_of(y)
    if sol.cost > bound:
        raise CertificateViolation("heavy cover exceeds its LP bound", sol.cost, bound)
    return frozenset(l.id for l in sol.links), sol.cost


# -- thin edges and splitting --------------------------------------------------------


def _side_masses(H: WtapInstance, x: Mapping, eid: int):
    e = H.edge(eid)
    U = H.side(eid, e.u)
    V = frozenset(H.nodes) - U
    return U, V, H.link_mass(x, U), H.link_mass(x, V)


def find_alpha_thin_edge(pair: DecompPair, alpha):
    """First edge (by id) with link-cost mass at least ``alpha`` strictly on each side."""
    H = pair.subtree
    for e in sorted(H.edges, key=lambda e: e.id):
        _, _, mu, mv = _side_masses(H, pair.local_x, e.id)
        if mu >= alpha and mv >= alpha:
            return e
    return None


def split_along_edge(pair: DecompPair, e) -> tuple[DecompPair, DecompPair]:
    """Split a pair along tree edge ``e`` = {u, v}; returns the u-side pair first.

    A link pq crossing e (p on the u-side) is zeroed; its cost-weighted mass
    c_pq x_pq moves onto the cheapest link pu (nothing moves when p = u, the
    corresponding path being empty).  Same on the v-side.
    """
    H = pair.subtree
    eid = e if isinstance(e, int) else e.id
    if eid not in H.edge_by_id:
        raise PreconditionError(f"edge {eid} is not in the pair's subtree")
    edge = H.edge(eid)
    u, v = edge.u, edge.v
    U = H.side(eid, u)
    table = cheapest_by_ends(H)
    xu, xv = {}, {}
    for lid, val in sorted(pair.local_x.items()):
        if not val:
            continue
        link = H.link(lid)
        if link.is_loop:
            continue
        a_in, b_in = link.u in U, link.v in U
        if a_in and b_in:
            _add(xu, lid, val)
        elif not a_in and not b_in:
            _add(xv, lid, val)
        else:
            p, q = (link.u, link.v) if a_in else (link.v, link.u)
            if p != u:
                s = _shadow(table, p, u)
                _add(xu, s.id, link.cost / s.cost * val)
            if q != v:
                s = _shadow(table, q, v)
                _add(xv, s.id, link.cost / s.cost * val)
    V = frozenset(H.nodes) - U
    return DecompPair(H.induced(U), xu), DecompPair(H.induced(V), xv)


# -- centers ---------------------------------------------------------------------


def find_beta_center(pair: DecompPair, threshold) -> int:
    """Node whose removal leaves components of link-cost mass below ``threshold``."""
    H = pair.subtree
    x = pair.local_x
    if not H.edges:
        return H.nodes[0]
    masses = {}
    for e in sorted(H.edges, key=lambda e: e.id):
        U, V, mu, mv = _side_masses(H, x, e.id)
        if mu >= threshold and mv >= threshold:
            raise PreconditionError(f"edge {e.id} is {frac_str(Fraction(threshold))}-thin")
        if mu < threshold and mv < threshold:
            return min(e.u, e.v)
        masses[e.id] = (mu, mv)
    outdeg = {v: 0 for v in H.nodes}
    for e in H.edges:
        mu, _ = masses[e.id]
        # point towards the side carrying at least the threshold
        outdeg[e.u if mu < threshold else e.v] += 1
    return min(v for v in H.nodes if outdeg[v] == 0)


def components_without(H: WtapInstance, center: int) -> list[frozenset]:
    """Node sets of the trees left after deleting ``center``, ordered by smallest node."""
    seen = {center}
    comps = []
    for start in sorted(b for _, b in H.adjacency[center]):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            for _, b in H.adjacency[a]:
                if b not in seen:
                    seen.add(b)
                    comp.add(b)
                    stack.append(b)
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


def _tree_leaves(H: WtapInstance, nodes) -> int:
    nodes = set(nodes)
    if len(nodes) == 1:
        return 1
    return sum(1 for v in nodes if sum(1 for _, b in H.adjacency[v] if b in nodes) == 1)


# -- the decomposition ------------------------------------------------------------


def minimal_cover(instance: WtapInstance, eids) -> frozenset:
    """Cheapest covering link per edge, then pruned to an inclusion-minimal set."""
    eids = frozenset(eids)
    cmap = instance.cover_map()
    chosen = set()
    for eid in sorted(eids):
        cands = [instance.link(lid) for lid in cmap[eid]]
        if not cands:
            raise StateError(f"edge {eid} has no covering link")
        chosen.add(min(cands, key=lambda l: (l.cost, l.id)).id)
    for lid in sorted(chosen, key=lambda i: (instance.link(i).cost, i), reverse=True):
        others = chosen - {lid}
        covered = set()
        for o in others:
            covered |= instance.path_edges(o) & eids
        if covered == eids:
            chosen = others
    return frozenset(chosen)


def decompose(instance: WtapInstance, x: Mapping, params: AlgorithmParams) -> DecompositionResult:
    """Heavy cover, contraction and depth-first thin-edge splitting."""
    x = {lid: Fraction(v) for lid, v in x.items() if v}
    Eh = heavy_edges(instance, x, params)
    Lh, cost_h = cover_heavy(instance, x, Eh, params)
    contract_edges = set()
    for lid in Lh:
        contract_edges |= instance.path_edges(lid)
    Gbar, mapping = contract(instance, contract_edges)
    sizes = {}
    for v in instance.nodes:
        sizes[mapping[v]] = sizes.get(mapping[v], 0) + 1
    Vh = frozenset(v for v, s in sizes.items() if s >= 2)
    x0 = {lid: v for lid, v in x.items() if not Gbar.link(lid).is_loop}

    pairs = []
    split_edges = []
    stack = [DecompPair(Gbar, x0)]
    while stack:
        pair = stack.pop()
        e = find_alpha_thin_edge(pair, params.alpha_thin)
        if e is None:
            pairs.append(pair)
            continue
        split_edges.append(e.id)
        a, b = split_along_edge(pair, e)
        first, second = (a, b) if min(a.subtree.nodes) < min(b.subtree.nodes) else (b, a)
        stack.append(second)
        stack.append(first)
    for pair in pairs:
        pair.beta_center = find_beta_center(pair, params.alpha_thin)
    Ls = minimal_cover(instance, split_edges) if split_edges else frozenset()
    return DecompositionResult(
        instance=instance,
        contracted=Gbar,
        mapping=mapping,
        pairs=pairs,
        heavy_edges=Eh,
        heavy_cover=Lh,
        split_edges=split_edges,
        split_cover=Ls,
        contracted_nodes=Vh,
        cost_x=instance.cost_of(x),
        cost_pairs=sum((p.cost() for p in pairs), ZERO),
        cost_heavy=cost_h,
        cost_split=sum((instance.link(l).cost for l in Ls), ZERO),
    )


# -- verification -------------------------------------------------------------------


@dataclass
class PropertyCheck:
    name: str
    ok: bool
    detail: str = ""
    witness: object = None


@dataclass
class DecompositionReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def get(self, name: str) -> PropertyCheck:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {c.name: {"ok": c.ok, "detail": c.detail} for c in self.checks}


def _covers(instance: WtapInstance, lids, eids) -> bool:
    covered = set()
    for lid in lids:
        covered |= instance.path_edges(lid)
    return set(eids) <= covered


def verify_decomposition(result: DecompositionResult, x: Mapping, params: AlgorithmParams, bundle_rows=()):
    """Exact re-check of the five decomposition properties.

    ``bundle_rows`` are bundle rows (any object with ``coefficients``, ``rhs``
    and an edge set via ``bundle.edge_set`` or ``edges``) that each pair must
    satisfy when the bundle lies inside the pair's subtree.
    """
    report = DecompositionReport()
    eps = params.epsilon
    G = result.instance

    # (1) local feasibility
    bad = None
    for i, pair in enumerate(result.pairs):
        H = pair.subtree
        if not H.edges:
            continue
        if len(H.nodes) <= BRUTE_FORCE_MAX_NODES:
            con = brute_force_separate(H, pair.local_x) if all(
                H.coverage(pair.local_x, e.id) >= 1 for e in H.edges) else separate_odd_cut(H, pair.local_x)
        else:
            con = separate_odd_cut(H, pair.local_x)
        if con is not None:
            bad = (i, sorted(con.source_set.members))
            break
        for row in bundle_rows:
            edges = getattr(getattr(row, "bundle", None), "edge_set", None) or getattr(row, "edges", ())
            if edges and set(edges) <= set(H.edge_by_id):
                lhs = sum((c * pair.local_x.get(l, 0) for l, c in row.coefficients.items()), ZERO)
                if lhs < row.rhs:
                    bad = (i, f"bundle {sorted(edges)}")
                    break
        if bad:
            break
    report.checks.append(PropertyCheck(
        "feasibility", bad is None,
        "every pair satisfies its odd-cut and bundle rows" if bad is None else f"pair {bad[0]} violates S={bad[1]}",
        bad))

    # (2) disjointness
    bad = None
    seen = {}
    for i, pair in enumerate(result.pairs):
        for v in pair.subtree.nodes:
            if v in seen:
                bad = ("node", v, seen[v], i)
                break
            seen[v] = i
        for lid, val in pair.local_x.items():
            link = pair.subtree.link_by_id.get(lid)
            if val and (link is None or link.is_loop):
                bad = ("support", lid, i)
        if bad:
            break
    report.checks.append(PropertyCheck("disjointness", bad is None, "" if bad is None else str(bad), bad))

    # (3) simplicity
    bad = None
    for i, pair in enumerate(result.pairs):
        H = pair.subtree
        center = pair.beta_center
        if center is None:
            bad = (i, "no center")
            break
        for comp in components_without(H, center):
            mass = H.link_mass(pair.local_x, comp)
            leaves = _tree_leaves(H, comp)
            if mass >= params.alpha_thin or leaves > params.beta:
                bad = (i, sorted(comp), frac_str(mass), leaves)
                break
        if bad:
            break
    report.checks.append(PropertyCheck(
        "simplicity", bad is None,
        f"every part has mass < {frac_str(params.alpha_thin)} and <= {frac_str(params.beta)} leaves"
        if bad is None else f"pair {bad[0]} part {bad[1]} mass {bad[2]} leaves {bad[3]}", bad))

    # (4) cost increase
    cx = G.cost_of(x)
    total = sum((p.cost() for p in result.pairs), ZERO)
    tight = (1 + eps / (2 - eps)) * cx
    report.checks.append(PropertyCheck(
        "cost_increase", total <= tight,
        f"sum c.x^i = {frac_str(total)}, (1+eps/(2-eps)) c.x = {frac_str(tight)}, (1+eps) c.x = {frac_str((1 + eps) * cx)}"))

    # (5) remaining edges
    ch = sum((G.link(l).cost for l in result.heavy_cover), ZERO)
    cs = sum((G.link(l).cost for l in result.split_cover), ZERO)
    ok_h = ch <= eps * cx and _covers(G, result.heavy_cover, result.heavy_edges)
    ok_s = cs <= eps**2 / 4 * total and _covers(G, result.split_cover, result.split_edges)
    report.checks.append(PropertyCheck(
        "remaining_edges", ok_h and ok_s,
        f"c(L^h) = {frac_str(ch)} vs eps c.x = {frac_str(eps * cx)}; "
        f"c(L^s) = {frac_str(cs)} vs eps^2/4 sum = {frac_str(eps**2 / 4 * total)} (O(eps) form: eps sum = {frac_str(eps * total)})"))
    return report
