# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; same contract as ``_kernels_py``.

Requires at most 64 tree edges, at most 63 nodes and scaled integers that fit
in 62 bits; :mod:`wtap.kernels` checks this before dispatching here.
"""
from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64
ctypedef long long i64

IMPLEMENTATION = "cython"


cdef extern from *:
    int popcount "__builtin_popcountll"(u64) nogil


cdef struct CoverState:
    int m
    int nbits
    u64 full
    u64 *masks
    i64 *costs
    int *bits
    int *cand_start
    int *cand_len
    int *cands
    i64 *cheapest
    int *chosen
    int depth
    int *best_chosen
    int best_len
    i64 best
    int have_best


cdef void _dfs(CoverState *st, u64 covered, i64 cost) noexcept nogil:
    cdef int k, b, pick, pick_n, n, idx, i
    cdef i64 bound, c
    if (covered & st.full) == st.full:
        if (not st.have_best) or cost < st.best:
            st.best = cost
            st.have_best = 1
            st.best_len = st.depth
            for k in range(st.depth):
                st.best_chosen[k] = st.chosen[k]
        return
    pick = -1
    pick_n = 0
    bound = cost
    for k in range(st.nbits):
        b = st.bits[k]
        if not ((covered >> b) & 1):
            n = st.cand_len[k]
            if pick < 0 or n < pick_n:
                pick = k
                pick_n = n
            if cost + st.cheapest[k] > bound:
                bound = cost + st.cheapest[k]
    if st.have_best and bound >= st.best:
        return
    for idx in range(st.cand_len[pick]):
        i = st.cands[st.cand_start[pick] + idx]
        c = cost + st.costs[i]
        if st.have_best and c >= st.best:
            break
        st.chosen[st.depth] = i
        st.depth += 1
        _dfs(st, covered | st.masks[i], c)
        st.depth -= 1


def min_cover(masks, costs, full):
    cdef int m = len(masks)
    cdef u64 ufull = full
    order = sorted(range(m), key=lambda i: (costs[i], i))
    bits = [b for b in range(64) if (full >> b) & 1]
    cand_lists = [[i for i in order if (masks[i] >> b) & 1] for b in bits]
    for lst in cand_lists:
        if not lst:
            return None
    cdef CoverState st
    cdef int nb = len(bits)
    cdef int total = sum(len(l) for l in cand_lists)
    cdef int k, pos
    st.m = m
    st.nbits = nb
    st.full = ufull
    st.masks = <u64 *> malloc(max(m, 1) * sizeof(u64))
    st.costs = <i64 *> malloc(max(m, 1) * sizeof(i64))
    st.bits = <int *> malloc(max(nb, 1) * sizeof(int))
    st.cand_start = <int *> malloc(max(nb, 1) * sizeof(int))
    st.cand_len = <int *> malloc(max(nb, 1) * sizeof(int))
    st.cands = <int *> malloc(max(total, 1) * sizeof(int))
    st.cheapest = <i64 *> malloc(max(nb, 1) * sizeof(i64))
    st.chosen = <int *> malloc((max(m, 1) + 1) * sizeof(int))
    st.best_chosen = <int *> malloc((max(m, 1) + 1) * sizeof(int))
    try:
        for k in range(m):
            st.masks[k] = masks[k]
            st.costs[k] = costs[k]
        pos = 0
        for k in range(nb):
            st.bits[k] = bits[k]
            st.cand_start[k] = pos
            st.cand_len[k] = len(cand_lists[k])
            st.cheapest[k] = costs[cand_lists[k][0]]
            for i in cand_lists[k]:
                st.cands[pos] = i
                pos += 1
        st.depth = 0
        st.best_len = 0
        st.best = 0
        st.have_best = 0
        with nogil:
            _dfs(&st, 0, 0)
        if not st.have_best:
            return None
        return st.best, sorted(st.best_chosen[k] for k in range(st.best_len))
    finally:
        free(st.masks)
        free(st.costs)
        free(st.bits)
        free(st.cand_start)
        free(st.cand_len)
        free(st.cands)
        free(st.cheapest)
        free(st.chosen)
        free(st.best_chosen)


cdef inline bint _lex_less(u64 a, u64 b) noexcept nogil:
    cdef u64 d, low, above
    if a == b:
        return False
    d = a ^ b
    low = d & (~d + 1)
    above = ~((low << 1) - 1)
    if a & low:
        return (b & above) != 0
    return (a & above) == 0


def odd_cut_scan(int n, edge_ends, link_masks, weights, i64 denom):
    if n < 2:
        return None
    cdef int ne = len(edge_ends)
    cdef int nl = len(link_masks)
    cdef int *ea = <int *> malloc(max(ne, 1) * sizeof(int))
    cdef int *eb = <int *> malloc(max(ne, 1) * sizeof(int))
    cdef u64 *lm = <u64 *> malloc(max(nl, 1) * sizeof(u64))
    cdef i64 *w = <i64 *> malloc(max(nl, 1) * sizeof(i64))
    cdef u64 s, count, bnd, best_mask = 0
    cdef int k, size, best_size = 0, have = 0, hits
    cdef i64 acc, score, best_score = 0
    try:
        for k in range(ne):
            ea[k] = edge_ends[k][0]
            eb[k] = edge_ends[k][1]
        for k in range(nl):
            lm[k] = link_masks[k]
            w[k] = weights[k]
        count = (<u64> 1) << (n - 1)
        with nogil:
            for s in range(count):
                bnd = 0
                for k in range(ne):
                    if ((s >> ea[k]) & 1) != ((s >> eb[k]) & 1):
                        bnd |= (<u64> 1) << k
                size = popcount(bnd)
                if not (size & 1):
                    continue
                acc = 0
                for k in range(nl):
                    hits = popcount(lm[k] & bnd)
                    if hits:
                        acc += w[k] * ((hits + 1) // 2)
                score = 2 * acc - denom * (size + 1)
                if (not have) or score < best_score or (
                    score == best_score and (size < best_size or (size == best_size and _lex_less(s, best_mask)))
                ):
                    have = 1
                    best_score = score
                    best_size = size
                    best_mask = s
        if not have:
            return None
        return best_score, best_size, best_mask
    finally:
        free(ea)
        free(eb)
        free(lm)
        free(w)
