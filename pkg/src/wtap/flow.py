"""Exact-rational max flow (shortest augmenting paths) and Gomory-Hu cut trees."""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Mapping

from .instance import frac_str

ZERO = Fraction(0)


def _residual(nodes, capacity: Mapping[tuple[int, int], Fraction]):
    res = {v: {} for v in nodes}
    for (a, b), c in capacity.items():
        if a == b:
            continue
        res[a][b] = res[a].get(b, ZERO) + c
        res[b][a] = res[b].get(a, ZERO) + c
    return res


def max_flow(nodes, capacity: Mapping[tuple[int, int], Fraction], s: int, t: int) -> tuple[Fraction, frozenset[int]]:
    """Undirected max flow value and the source side of a minimum cut.

    ``capacity`` maps unordered node pairs to nonnegative capacities; parallel
    pairs are summed.  Edmonds-Karp keeps the augmentation count polynomial
    regardless of the capacity values.
    """
    res = _residual(nodes, capacity)
    total = ZERO
    while True:
        pred = {s: None}
        queue = deque([s])
        while queue and t not in pred:
            a = queue.popleft()
            for b in sorted(res[a]):
                if b not in pred and res[a][b] > 0:
                    pred[b] = a
                    queue.append(b)
        if t not in pred:
            break
        bottleneck = None
        b = t
        while pred[b] is not None:
            a = pred[b]
            c = res[a][b]
            bottleneck = c if bottleneck is None or c < bottleneck else bottleneck
            b = a
        b = t
        while pred[b] is not None:
            a = pred[b]
            res[a][b] -= bottleneck
            res[b][a] = res[b].get(a, ZERO) + bottleneck
            b = a
        total += bottleneck
    return total, frozenset(pred)


def gomory_hu(nodes, capacity: Mapping[tuple[int, int], Fraction]) -> dict[int, tuple[int, Fraction]]:
    """Gusfield's cut-tree algorithm.

    Returns ``{v: (parent, weight)}`` for every node but the first; removing
    the tree edge (v, parent) splits the nodes into a minimum v-parent cut of
    the given weight.
    """
    order = sorted(nodes)
    root = order[0]
    pred = {v: root for v in order}
    weight = {v: ZERO for v in order}
    for s in order[1:]:
        t = pred[s]
        value, side = max_flow(order, capacity, s, t)
        weight[s] = value
        for v in order:
            if v != s and v in side and pred[v] == t:
                pred[v] = s
        if t != root and pred[t] in side:
            pred[s] = pred[t]
            pred[t] = s
            weight[s] = weight[t]
            weight[t] = value
    return {v: (pred[v], weight[v]) for v in order[1:]}


def tree_components(nodes, tree: Mapping[int, tuple[int, Fraction]]):
    """For each tree edge (v, parent): the node set on v's side."""
    children: dict[int, list[int]] = {v: [] for v in nodes}
    for v, (p, _) in tree.items():
        children[p].append(v)
    out = {}
    for v in tree:
        seen = {v}
        stack = [v]
        while stack:
            a = stack.pop()
            for c in children[a]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        out[v] = frozenset(seen)
    return out


def cut_value(capacity: Mapping[tuple[int, int], Fraction], side) -> Fraction:
    side = set(side)
    return sum((c for (a, b), c in capacity.items() if (a in side) != (b in side)), ZERO)


def dump_tree(tree: Mapping[int, tuple[int, Fraction]]) -> str:
    return "\n".join(f"{v} {p} {frac_str(w)}" for v, (p, w) in sorted(tree.items()))
