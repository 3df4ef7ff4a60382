"""Exact optima: subset-cover search, few-leaf instances, up/cross instances.

Up/cross-only instances are solved through their odd-cut LP, which has
integral optimal vertices there; :func:`verify_binet_certificate` checks the
matrix identity behind that fact on a concrete instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import CertificateViolation, InfeasibleError, PreconditionError, StateError
from .instance import Link, LinkClass, WtapInstance, classify_link
from .lp import is_integral, solve_ilp
from .oddcut import cut_lp_model, odd_cut_oracle, solve_odd_cut_lp

EXHAUSTIVE_MAX_LINKS = 60
FEW_LEAF_EXHAUSTIVE_MAX_LINKS = 30


@dataclass(frozen=True)
class ExactSolution:
    links: frozenset
    cost: Fraction
    lp_value: Fraction | None = None
    cuts: tuple = ()

    def __iter__(self):  # unpacks as (links, cost)
        return iter((self.links, self.cost))


def _check_coverable(instance: WtapInstance):
    for eid, cov in instance.cover_map().items():
        if not cov:
            raise InfeasibleError(f"tree edge {eid} is not covered by any link")


def _edge_masks(instance: WtapInstance, links):
    bit = {e.id: k for k, e in enumerate(instance.edges)}
    masks = []
    for l in links:
        m = 0
        for eid in instance.path_edges(l.id):
            m |= 1 << bit[eid]
        masks.append(m)
    return masks, (1 << len(instance.edges)) - 1


def _undominated(links, masks):
    """Drop a link when another one covers a superset at no greater cost."""
    keep = []
    for i, (a, ma) in enumerate(zip(links, masks)):
        dominated = False
        for j, (b, mb) in enumerate(zip(links, masks)):
            if i == j or ma & ~mb:
                continue
            if b.cost < a.cost or (b.cost == a.cost and (mb != ma or b.id < a.id)):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return [links[i] for i in keep], [masks[i] for i in keep]


def _reduced_links(instance: WtapInstance):
    """Links that can appear in some optimum, with their edge masks."""
    links = sorted(instance.real_links(), key=lambda l: l.id)
    masks, _ = _edge_masks(instance, links)
    return _undominated(links, masks)


def _cover_search(instance: WtapInstance, links, masks, impl=None) -> ExactSolution:
    _, full = _edge_masks(instance, [])
    denom = 1
    for l in links:
        denom = denom * l.cost.denominator // math.gcd(denom, l.cost.denominator)
    costs = [int(l.cost * denom) for l in links]
    res = kernels.min_cover(masks, costs, full, impl=impl)
    if res is None:
        raise InfeasibleError("no cover exists")
    total, idx = res
    chosen = frozenset(links[i] for i in idx)
    return ExactSolution(chosen, Fraction(total, denom))


def _ilp(instance: WtapInstance) -> ExactSolution:
    model = cut_lp_model(instance)
    res = solve_ilp(model, [odd_cut_oracle(instance)])
    chosen = frozenset(instance.link(lid) for lid, v in res.solution.items() if v)
    return ExactSolution(chosen, res.objective, cuts=tuple(res.cuts))


def _solve(instance: WtapInstance, limit: int, impl=None) -> ExactSolution:
    if not instance.edges:
        return ExactSolution(frozenset(), Fraction(0))
    _check_coverable(instance)
    links, masks = _reduced_links(instance)
    if len(links) <= limit:
        return _cover_search(instance, links, masks, impl)
    return _ilp(instance.restrict_links(l.id for l in links))


def brute_force_wtap(instance: WtapInstance, impl=None) -> ExactSolution:
    """Minimum-cost cover.  Exhaustive search up to a link budget, ILP beyond."""
    return _solve(instance, EXHAUSTIVE_MAX_LINKS, impl)


def solve_few_leaf(instance: WtapInstance, k: int) -> ExactSolution:
    """Exact optimum of an instance whose tree has at most ``k`` leaves."""
    leaves = len(instance.leaves())
    if leaves > k:
        raise PreconditionError(f"tree has {leaves} leaves, more than {k}")
    return _solve(instance, FEW_LEAF_EXHAUSTIVE_MAX_LINKS)


def _require_up_cross(instance: WtapInstance, links):
    if instance.root is None:
        raise StateError("up/cross solver needs a rooted instance")
    for l in links:
        if classify_link(instance, l) is LinkClass.IN_NOT_UP:
            raise PreconditionError(f"link {l.id} ({l.u},{l.v}) is neither up nor cross for root {instance.root}")


def solve_up_cross_exact(instance: WtapInstance, restrict_to=None) -> ExactSolution:
    """Integer optimum of an up/cross-only instance, read off its odd-cut LP.

    If the separation loop stops at a fractional vertex, branch and bound is
    seeded with every cut found so far; its optimum must equal the LP value.
    """
    if restrict_to is not None:
        ids = {l.id if isinstance(l, Link) else int(l) for l in restrict_to}
        instance = instance.restrict_links(ids)
    links = instance.real_links()
    _require_up_cross(instance, links)
    if not instance.edges:
        return ExactSolution(frozenset(), Fraction(0), Fraction(0))
    _check_coverable(instance)
    out, cuts = solve_odd_cut_lp(instance)
    x = out.solution
    if is_integral(x):
        chosen = frozenset(instance.link(lid) for lid, v in x.items() if v)
        cost = sum((l.cost for l in chosen), Fraction(0))
        if cost != out.objective:
            raise CertificateViolation("integral vertex with multiplicities above one", cost, out.objective)
        return ExactSolution(chosen, cost, out.objective, tuple(cuts))
    res = solve_ilp(cut_lp_model(instance), [odd_cut_oracle(instance)], seed_cuts=cuts)
    if res.objective != out.objective:
        raise CertificateViolation("odd-cut LP not integral on an up/cross instance", res.objective, out.objective)
    chosen = frozenset(instance.link(lid) for lid, v in res.solution.items() if v)
    return ExactSolution(chosen, res.objective, out.objective, tuple(res.cuts))


# -- binet certificate --------------------------------------------------------


@dataclass
class BinetCertificate:
    rows: list  # non-root nodes
    edge_cols: list  # tree edge ids
    link_cols: list  # link ids
    R: list
    S: list
    A: list

    def product_RA(self):
        n, m, k = len(self.rows), len(self.edge_cols), len(self.link_cols)
        return [[sum(self.R[i][e] * self.A[e][j] for e in range(m)) for j in range(k)] for i in range(n)]


def binet_certificate(instance: WtapInstance, cross_sign: int = -1) -> BinetCertificate:
    """Matrices R, S, A for a rooted up/cross-only instance.

    R is the incidence matrix of the tree oriented away from the root (tail
    +1, head -1) with the root row removed.  An up-link column of S is +1 at
    its upper endpoint and -1 at its lower one; a cross-link column carries
    ``cross_sign`` at both endpoints.  With tails at +1 the path sums give -1
    at both ends of a cross-link, so ``cross_sign=-1`` is the choice for which
    R.A = S holds.
    """
    links = instance.real_links()
    _require_up_cross(instance, links)
    r = instance.root
    tree = instance.rooted(r)
    rows = [v for v in instance.nodes if v != r]
    ri = {v: i for i, v in enumerate(rows)}
    edge_cols = [e.id for e in instance.edges]
    ei = {eid: j for j, eid in enumerate(edge_cols)}
    link_cols = [l.id for l in links]
    R = [[0] * len(edge_cols) for _ in rows]
    for e in instance.edges:
        tail, head = (e.u, e.v) if tree.parent.get(e.v) == e.u else (e.v, e.u)
        if tail in ri:
            R[ri[tail]][ei[e.id]] = 1
        R[ri[head]][ei[e.id]] = -1
    A = [[0] * len(link_cols) for _ in edge_cols]
    S = [[0] * len(link_cols) for _ in rows]
    for j, l in enumerate(links):
        for eid in instance.path_edges(l.id):
            A[ei[eid]][j] = 1
        if classify_link(instance, l) is LinkClass.CROSS:
            S[ri[l.u]][j] = cross_sign
            S[ri[l.v]][j] = cross_sign
        else:
            top, bottom = (l.u, l.v) if tree.depth[l.u] < tree.depth[l.v] else (l.v, l.u)
            if top in ri:
                S[ri[top]][j] = 1
            S[ri[bottom]][j] = -1
    return BinetCertificate(rows, edge_cols, link_cols, R, S, A)


def _rank(matrix) -> int:
    m = [[Fraction(v) for v in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def verify_binet_certificate(instance: WtapInstance, cross_sign: int = -1) -> bool:
    """R.A = S, R invertible, and every column of (S R) has absolute sum <= 2."""
    cert = binet_certificate(instance, cross_sign)
    if cert.product_RA() != cert.S:
        return False
    n = len(cert.rows)
    if n and _rank(cert.R) != n:
        return False
    for block in (cert.S, cert.R):
        if block and any(sum(abs(block[i][j]) for i in range(n)) > 2 for j in range(len(block[0]))):
            return False
    return True
