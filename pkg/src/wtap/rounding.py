"""Rounding one decomposed pair, and choosing the cheaper of two roundings.

``round_cross_heavy`` doubles in-links (each becomes two up-links at its lca)
and keeps cross-links, then solves the resulting up/cross instance exactly.
``round_bundle`` doubles cross-links instead (each becomes two up-links at
the center), which cuts the pair into independent subtrees around the
center; each subtree is solved exactly and paid for by its bundle row.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import Bundle, BundleConstraint, bundle_opt, is_gamma_bundle
from .decomposition import DecompPair, cheapest_by_ends, components_without, _shadow, _add
from .errors import CertificateViolation, StateError, WtapError
from .exact import solve_up_cross_exact
from .instance import LinkClass, WtapInstance, classify_link, frac_str
from .params import AlgorithmParams

ZERO = Fraction(0)
CROSS_HEAVY = "cross-heavy"
BUNDLE = "bundle"
COMBINED = "combined"

_audit_sinks: list = []


@contextlib.contextmanager
def audit():
    """Collect every :class:`RoundingOutcome` produced inside the block."""
    sink: list = []
    _audit_sinks.append(sink)
    try:
        yield sink
    finally:
        # by identity: two empty sinks compare equal
        del _audit_sinks[next(i for i, s in enumerate(_audit_sinks) if s is sink)]


def _emit(outcome):
    for sink in _audit_sinks:
        sink.append(outcome)
    return outcome


class BundleRowViolated(WtapError):
    """The LP solution violates a bundle row the rounding needs; add it and re-solve."""

    def __init__(self, constraint: BundleConstraint):
        super().__init__(f"bundle row violated: {constraint}")
        self.constraint = constraint


@dataclass
class RoundingOutcome:
    chosen: frozenset  # link ids
    cost: Fraction
    method: str
    bound_certificate: Fraction
    cost_in: Fraction = ZERO
    cost_cross: Fraction = ZERO
    contracted_count: int = 0
    details: list = field(default_factory=list)
    invocation: str = ""  # which procedure produced this outcome

    @property
    def certified(self) -> bool:
        return self.cost <= self.bound_certificate

    def to_json(self, scale=1) -> dict:
        """Cost and certificate, divided by ``scale`` to undo cost normalization."""
        return {
            "method": self.method,
            "cost": frac_str(self.cost / scale),
            "certificate": frac_str(self.bound_certificate / scale),
        }


@dataclass
class RoundingContext:
    instance: WtapInstance  # the shadow-complete instance the LP lives on
    x: dict  # the LP solution on that instance
    contracted_nodes: frozenset  # V^h
    params: AlgorithmParams


def _split_costs(H: WtapInstance, x):
    cin = ccr = ZERO
    for lid, val in x.items():
        link = H.link(lid)
        if classify_link(H, link) is LinkClass.CROSS:
            ccr += link.cost * val
        else:
            cin += link.cost * val
    return cin, ccr


def round_cross_heavy(pair: DecompPair, root: int) -> RoundingOutcome:
    H = pair.subtree.with_root(root)
    x = {lid: v for lid, v in pair.local_x.items() if v}
    cin, ccr = _split_costs(H, x)
    bound = 2 * cin + ccr
    if not H.edges:
        return _emit(RoundingOutcome(frozenset(), ZERO, CROSS_HEAVY, bound, cin, ccr, invocation=CROSS_HEAVY))
    tree = H.rooted(root)
    table = cheapest_by_ends(H)
    y = {}
    for lid, val in sorted(x.items()):
        link = H.link(lid)
        if classify_link(H, link) is LinkClass.IN_NOT_UP:
            w = tree.lca(link.u, link.v)
            _add(y, _shadow(table, link.u, w).id, val)
            _add(y, _shadow(table, w, link.v).id, val)
        else:
            _add(y, lid, val)
    sol = solve_up_cross_exact(H, restrict_to=y.keys())
    out = RoundingOutcome(frozenset(l.id for l in sol.links), sol.cost, CROSS_HEAVY, bound, cin, ccr,
                          details=[{"cy": frac_str(H.cost_of(y)), "lp": frac_str(sol.lp_value)}],
                          invocation=CROSS_HEAVY)
    if not out.certified:
        raise CertificateViolation("cross-heavy rounding above 2c.x_in + c.x_cr", sol.cost, bound)
    return _emit(out)


def round_bundle(pair: DecompPair, center: int, ctx: RoundingContext) -> RoundingOutcome:
    H = pair.subtree.with_root(center)
    G = ctx.instance
    x = {lid: v for lid, v in pair.local_x.items() if v}
    cin, ccr = _split_costs(H, x)
    vh = ctx.contracted_nodes & frozenset(H.nodes)
    bound = cin + 2 * ccr + len(vh)
    if not H.edges:
        return _emit(RoundingOutcome(frozenset(), ZERO, BUNDLE, bound, cin, ccr, len(vh), invocation=BUNDLE))
    table = cheapest_by_ends(H)
    y = {}
    for lid, val in sorted(x.items()):
        link = H.link(lid)
        if classify_link(H, link) is LinkClass.CROSS:
            for end in (link.u, link.v):
                s = _shadow(table, center, end)
                _add(y, s.id, link.cost / s.cost * val)
        else:
            _add(y, lid, val)
    gmap = G.cover_map()
    chosen = set()
    total = ZERO
    details = []
    for comp in components_without(H, center):
        nodes = comp | {center}
        eids = frozenset(e.id for e in H.edges if e.u in nodes and e.v in nodes)
        inside = len(ctx.contracted_nodes & comp)
        cz = H.link_mass(y, nodes)
        shortcut = inside >= ctx.params.shortcut_threshold
        if shortcut:
            bundle = Bundle.from_edges(G, eids)
        else:
            bundle = is_gamma_bundle(G, eids, ctx.params.gamma, descendant=H)
            if bundle is None:
                raise StateError(
                    f"subtree around {center} with edges {sorted(eids)} needs more than "
                    f"{ctx.params.gamma} paths ({Bundle.from_edges(G, eids).size}); "
                    f"{inside} contracted nodes inside")
        sol = bundle_opt(G, bundle)
        if not shortcut:
            cov = set()
            for eid in eids:
                cov |= gmap[eid]
            coeffs = {lid: G.link(lid).cost for lid in sorted(cov)}
            row = BundleConstraint(coeffs, sol.cost, bundle)
            if row.lhs(x) < row.rhs:
                if row.lhs(ctx.x) < row.rhs:
                    raise BundleRowViolated(row)
                raise StateError(f"pair violates {row} although the LP solution satisfies it")
        total += sol.cost
        chosen |= {l.id for l in sol.links}
        details.append({
            "edges": sorted(eids), "opt": frac_str(sol.cost), "cz": frac_str(cz),
            "contracted_inside": inside, "shortcut": shortcut, "paths": bundle.size,
        })
    out = RoundingOutcome(frozenset(chosen), total, BUNDLE, bound, cin, ccr, len(vh), details, invocation=BUNDLE)
    if not out.certified:
        raise CertificateViolation("bundle rounding above c.x_in + 2c.x_cr + |V^h & V[H]|", total, bound)
    return _emit(out)


def round_pair(pair: DecompPair, center: int, ctx: RoundingContext) -> RoundingOutcome:
    """Cheaper of the two roundings, certified against their average bound."""
    a = round_cross_heavy(pair, center)
    b = round_bundle(pair, center, ctx)
    best = a if a.cost <= b.cost else b
    vh = len(ctx.contracted_nodes & frozenset(pair.subtree.nodes))
    bound = Fraction(3, 2) * (a.cost_in + a.cost_cross) + Fraction(vh, 2)
    out = RoundingOutcome(best.chosen, best.cost, best.method, bound, a.cost_in, a.cost_cross, vh,
                          [a.to_json(), b.to_json()], invocation=COMBINED)
    if not out.certified:
        raise CertificateViolation("pair rounding above (3/2)(c.x_in + c.x_cr) + |V^h & V[H]|/2", best.cost, bound)
    return _emit(out)
