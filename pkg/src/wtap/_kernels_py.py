"""Reference implementations of the enumeration kernels (no compiled code).

Both kernels work on small integer encodings prepared by :mod:`wtap.kernels`:
edge sets are bitmasks, costs and LP values are integers scaled by a common
denominator.  The compiled module ``_kernels_c`` implements the same functions
with identical results, including tie-breaking.
"""
from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def min_cover(masks, costs, full):
    """Cheapest subset of ``masks`` whose union contains ``full``.

    Returns ``(cost, sorted indices)`` or ``None`` when no cover exists.
    Branches on the uncovered edge with the fewest candidate links and tries
    candidates by ``(cost, index)``; only strict improvements replace the
    incumbent, so the first optimum in that order wins.
    """
    m = len(masks)
    nbits = full.bit_length()
    bits = [b for b in range(nbits) if full >> b & 1]
    order = sorted(range(m), key=lambda i: (costs[i], i))
    cands = {b: [i for i in order if masks[i] >> b & 1] for b in bits}
    if any(not cands[b] for b in bits):
        return None
    cheapest = {b: costs[cands[b][0]] for b in bits}
    best = [None, None]
    chosen: list[int] = []

    def dfs(covered, cost):
        if covered & full == full:
            if best[0] is None or cost < best[0]:
                best[0] = cost
                best[1] = sorted(chosen)
            return
        pick = -1
        pick_n = 0
        bound = cost
        for b in bits:
            if not covered >> b & 1:
                n = len(cands[b])
                if pick < 0 or n < pick_n:
                    pick, pick_n = b, n
                if cost + cheapest[b] > bound:
                    bound = cost + cheapest[b]
        if best[0] is not None and bound >= best[0]:
            return
        for i in cands[pick]:
            c = cost + costs[i]
            if best[0] is not None and c >= best[0]:
                break
            chosen.append(i)
            dfs(covered | masks[i], c)
            chosen.pop()

    dfs(0, 0)
    if best[0] is None:
        return None
    return best[0], best[1]


def _lex_less(a, b):
    """Sorted-tuple lexicographic order of two node bitmasks."""
    if a == b:
        return False
    d = a ^ b
    low = d & -d
    above = ~((low << 1) - 1)
    if a & low:
        return (b & above) != 0
    return (a & above) == 0


def odd_cut_scan(n, edge_ends, link_masks, weights, denom):
    """Minimum of ``2*x(pi(S)) - denom*(|boundary(S)|+1)`` over odd-boundary S.

    ``weights`` are link values scaled by ``denom``.  S ranges over subsets of
    nodes ``0..n-2`` (S and its complement give the same row).  Returns
    ``(score, |boundary|, node mask)`` of the winner or ``None`` when no
    subset has odd boundary.  Ties prefer the smaller boundary, then the
    lexicographically smaller node set.
    """
    if n < 2:
        return None
    ne = len(edge_ends)
    count = 1 << (n - 1)
    subsets = np.arange(count, dtype=np.int64)
    member = ((subsets[:, None] >> np.arange(n - 1, dtype=np.int64)) & 1).astype(bool)
    member = np.concatenate([member, np.zeros((count, 1), dtype=bool)], axis=1)
    boundary = np.empty((count, ne), dtype=np.int64)
    for k, (a, b) in enumerate(edge_ends):
        boundary[:, k] = member[:, a] ^ member[:, b]
    path = np.zeros((ne, len(link_masks)), dtype=np.int64)
    for j, mask in enumerate(link_masks):
        for k in range(ne):
            if mask >> k & 1:
                path[k, j] = 1
    hits = boundary @ path
    mult = (hits + 1) // 2
    size = boundary.sum(axis=1)
    big = max([abs(w) for w in weights] + [denom, 1]) * (ne + 1) * (len(weights) + 1)
    if big < 2**60:
        w = np.array(weights, dtype=np.int64)
        score = 2 * (mult @ w) - denom * (size + 1)
    else:
        w = np.array(weights, dtype=object)
        score = 2 * (mult.astype(object) @ w) - denom * (size.astype(object) + 1)
    odd = size % 2 == 1
    if not odd.any():
        return None
    best_score = min(score[odd])
    tied = odd & (score == best_score)
    best_size = int(size[tied].min())
    mask = None
    for s in np.nonzero(tied & (size == best_size))[0]:
        if mask is None or _lex_less(int(s), mask):
            mask = int(s)
    return int(best_score), best_size, mask
