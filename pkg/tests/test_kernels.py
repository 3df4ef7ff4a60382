import itertools
import random

import pytest
from hypothesis import given, strategies as st

from wtap import kernels

IMPLS = sorted(kernels.available().items())


def naive_cover(masks, costs, full):
    best = None
    for k in range(len(masks) + 1):
        for combo in itertools.combinations(range(len(masks)), k):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc & full == full:
                c = sum(costs[i] for i in combo)
                if best is None or c < best:
                    best = c
    return best


def naive_scan(n, edge_ends, link_masks, weights, denom):
    best = None
    for mask in range(1, 1 << n):
        boundary = [k for k, (a, b) in enumerate(edge_ends) if (mask >> a & 1) != (mask >> b & 1)]
        if len(boundary) % 2 == 0:
            continue
        bm = sum(1 << k for k in boundary)
        lhs = sum(w * ((bin(m & bm).count("1") + 1) // 2) for m, w in zip(link_masks, weights))
        score = 2 * lhs - denom * (len(boundary) + 1)
        best = score if best is None else min(best, score)
    return best


def test_backend_is_known():
    assert kernels.backend in kernels.available()
    assert "python" in kernels.available()


@pytest.mark.parametrize("name,impl", IMPLS)
@given(seed=st.integers(0, 10_000))
def test_min_cover(name, impl, seed):
    rng = random.Random(seed)
    bits = rng.randint(1, 8)
    m = rng.randint(1, 9)
    masks = [rng.randint(1, (1 << bits) - 1) for _ in range(m)]
    costs = [rng.randint(1, 6) for _ in range(m)]
    full = (1 << bits) - 1
    res = kernels.min_cover(masks, costs, full, impl=impl)
    ref = naive_cover(masks, costs, full)
    if ref is None:
        assert res is None
    else:
        cost, chosen = res
        assert cost == ref == sum(costs[i] for i in chosen)
        acc = 0
        for i in chosen:
            acc |= masks[i]
        assert acc & full == full


@pytest.mark.parametrize("name,impl", IMPLS)
@given(seed=st.integers(0, 10_000))
def test_odd_cut_scan(name, impl, seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    edge_ends = [(i, rng.randrange(i)) for i in range(1, n)]
    k = rng.randint(0, 5)
    link_masks = [rng.randint(1, (1 << (n - 1)) - 1) for _ in range(k)]
    weights = [rng.randint(0, 6) for _ in range(k)]
    denom = rng.randint(1, 4)
    res = kernels.odd_cut_scan(n, edge_ends, link_masks, weights, denom, impl=impl)
    assert res[0] == naive_scan(n, edge_ends, link_masks, weights, denom)


@given(seed=st.integers(0, 10_000))
def test_implementations_agree(seed):
    rng = random.Random(seed)
    masks = [rng.randint(1, 255) for _ in range(rng.randint(1, 14))]
    costs = [rng.randint(1, 9) for _ in masks]
    n = rng.randint(2, 9)
    edge_ends = [(i, rng.randrange(i)) for i in range(1, n)]
    lm = [rng.randint(1, (1 << (n - 1)) - 1) for _ in range(4)]
    w = [rng.randint(0, 5) for _ in lm]
    outs = {name: (kernels.min_cover(masks, costs, 255, impl=m), kernels.odd_cut_scan(n, edge_ends, lm, w, 3, impl=m))
            for name, m in IMPLS}
    assert len(set(map(repr, outs.values()))) == 1


def test_large_masks_fall_back_to_python():
    full = (1 << 70) - 1
    assert kernels.min_cover([full], [1], full) == (1, [0])
