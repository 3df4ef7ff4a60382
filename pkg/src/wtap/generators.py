"""Seeded random instance families."""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .instance import LinkClass, WtapInstance, as_fraction, classify_link

FAMILIES = ("random-tree", "star", "path", "caterpillar", "up-cross-only", "leaf-to-leaf", "cycle-on-leaves")
COST_MODELS = ("unit", "uniform-integer", "rational")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str = "random-tree"
    n: int = 10
    link_density: Fraction = Fraction(1)
    cost_model: str = "uniform-integer"
    max_cost: int = 3
    seed: int = 0


def prufer_tree(seq, n):
    """Edges of the labelled tree on 0..n-1 with Prufer sequence ``seq``."""
    if n == 2:
        return [(0, 1)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return edges


def random_tree(n, rng):
    return prufer_tree([rng.randrange(n) for _ in range(n - 2)], n)


def _shape(family, n, rng):
    if family in ("random-tree", "up-cross-only", "leaf-to-leaf", "cycle-on-leaves"):
        return random_tree(n, rng)
    if family == "star":
        return [(0, v) for v in range(1, n)]
    if family == "path":
        return [(v - 1, v) for v in range(1, n)]
    if family == "caterpillar":
        spine = (n + 1) // 2
        edges = [(v - 1, v) for v in range(1, spine)]
        edges += [(rng.randrange(spine), v) for v in range(spine, n)]
        return edges
    raise PreconditionError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _cost(model, M, rng):
    if model == "unit":
        return Fraction(1)
    if model == "uniform-integer":
        return Fraction(rng.randint(1, M))
    if model == "rational":
        q = rng.randint(1, 4)
        return Fraction(rng.randint(q, M * q), q)
    raise PreconditionError(f"unknown cost model {model!r}; choose from {', '.join(COST_MODELS)}")


def generate(spec: GeneratorSpec) -> WtapInstance:
    """Feasible instance drawn from ``spec``; identical specs give identical instances."""
    n = spec.n
    if n < 2:
        raise PreconditionError("instances need at least two nodes")
    if spec.max_cost < 1:
        raise PreconditionError("max cost must be at least 1")
    density = as_fraction(spec.link_density)
    if density < 0:
        raise PreconditionError("link density must be nonnegative")
    rng = random.Random(spec.seed)
    edges = _shape(spec.family, n, rng)
    root = 0 if spec.family == "up-cross-only" else None
    tree = WtapInstance(range(n), edges, [], root=0)
    rooted = tree.rooted(0)
    leaves = tree.leaves()

    def allowed(a, b):
        if spec.family == "up-cross-only":
            w = rooted.lca(a, b)
            return w in (a, b) or (w == 0 and 0 not in (a, b))
        if spec.family == "leaf-to-leaf":
            return a in leaves and b in leaves
        return True

    pairs = set()
    if spec.family == "cycle-on-leaves":
        order = sorted(leaves)
        rng.shuffle(order)
        for i in range(len(order)):
            a, b = order[i], order[(i + 1) % len(order)]
            if a != b:
                pairs.add((min(a, b), max(a, b)))
    else:
        want = math.ceil(density * n)
        candidates = [(a, b) for a in range(n) for b in range(a + 1, n) if allowed(a, b)]
        rng.shuffle(candidates)
        pairs.update(candidates[:want])

    # force feasibility
    covered = set()
    for a, b in pairs:
        covered |= tree.path(a, b)[1]
    for e in sorted(tree.edges, key=lambda e: e.id):
        if e.id in covered:
            continue
        child = e.u if rooted.parent.get(e.u) == e.v else e.v
        parent = e.other(child)
        if spec.family == "up-cross-only":
            below = [v for v in tree.side(e.id, child)]
            a, b = parent, rng.choice(sorted(below))
        elif spec.family in ("leaf-to-leaf", "cycle-on-leaves"):
            side = tree.side(e.id, child)
            a = rng.choice(sorted(v for v in leaves if v in side))
            b = rng.choice(sorted(v for v in leaves if v not in side))
        else:
            side = tree.side(e.id, child)
            a = rng.choice(sorted(side))
            b = rng.choice(sorted(set(range(n)) - side))
        pairs.add((min(a, b), max(a, b)))
        covered |= tree.path(a, b)[1]

    links = [(a, b, _cost(spec.cost_model, spec.max_cost, rng)) for a, b in sorted(pairs)]
    inst = WtapInstance(range(n), edges, links, root=root)
    if spec.family == "up-cross-only":
        assert all(classify_link(inst, l) is not LinkClass.IN_NOT_UP for l in inst.links)
    return inst


def three_star() -> WtapInstance:
    """Three leaves around a root, one unit link per pair of leaves."""
    return WtapInstance([0, 1, 2, 3], [(0, 1), (0, 2), (0, 3)], [(1, 2, 1), (2, 3, 1), (1, 3, 1)], root=0)
