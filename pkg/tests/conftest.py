import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from wtap.generators import COST_MODELS, FAMILIES, GeneratorSpec, generate
from wtap.instance import WtapInstance

settings.register_profile("wtap", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("wtap")

# criterion number -> (ok, detail); filled by test_acceptance, printed at the end
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def spec_for(seed, n_max=12, family=None, max_cost=3, density=None):
    fam = family or FAMILIES[seed % len(FAMILIES)]
    n = 3 + seed % max(n_max - 2, 1)
    dens = density if density is not None else Fraction(1 + seed % 3, 2) + Fraction(1, 2)
    return GeneratorSpec(fam, n, dens, COST_MODELS[seed % 3], max_cost, seed)


def random_instance(seed, **kw):
    return generate(spec_for(seed, **kw))


def naive_opt(instance):
    """Cheapest cover by trying every link subset in order of size (tiny instances only)."""
    links = instance.real_links()
    need = {e.id for e in instance.edges}
    best = None
    for k in range(len(links) + 1):
        for combo in itertools.combinations(links, k):
            covered = set()
            for l in combo:
                covered |= instance.path_edges(l.id)
            if covered >= need:
                cost = sum((l.cost for l in combo), Fraction(0))
                if best is None or cost < best:
                    best = cost
    return best


def covering_x(instance, rng: random.Random, denom=4):
    """Random rational x with every tree edge covered at least once."""
    links = instance.real_links()
    x = {l.id: Fraction(rng.randint(0, denom), denom) for l in links if rng.random() < 0.5}
    cmap = instance.cover_map()
    for e in instance.edges:
        cov = instance.coverage(x, e.id)
        if cov < 1:
            lid = rng.choice(sorted(cmap[e.id]))
            x[lid] = x.get(lid, Fraction(0)) + 1 - cov
    return {k: v for k, v in x.items() if v}


def heavy_gadget(t):
    """Caterpillar head with one doubly covered pendant edge, then a path of 2t edges.

    Every link is forced to 1 in the LP, pendant edge (1, 4) has coverage 2,
    and the tail carries t units of mass for thin-edge splits.
    """
    edges = [(0, 1), (1, 2), (0, 3), (1, 4), (2, 5)]
    links = [(3, 4, 1), (4, 5, 1)]
    last = 5
    for _ in range(2 * t):
        edges.append((last, last + 1))
        last += 1
    for i in range(t):
        links.append((5 + 2 * i, 7 + 2 * i, 1))
    return WtapInstance(range(last + 1), edges, links)


def branching_gadget(t):
    """heavy_gadget with a second forced-link tail hanging off node 0."""
    base = heavy_gadget(t)
    edges = [(e.u, e.v) for e in base.edges]
    links = [(l.u, l.v, l.cost) for l in base.links]
    last = max(base.nodes)
    prev = 0
    start = last + 1
    for i in range(2 * t):
        edges.append((prev, last + 1))
        prev = last + 1
        last += 1
    chain = [0] + list(range(start, last + 1))
    for i in range(0, 2 * t, 2):
        links.append((chain[i], chain[i + 2], 1))
    return WtapInstance(range(last + 1), edges, links)


@pytest.fixture
def star():
    from wtap.generators import three_star

    return three_star()
