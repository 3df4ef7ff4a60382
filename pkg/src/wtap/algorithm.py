"""End-to-end approximation: LP, decomposition, per-pair rounding."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .decomposition import decompose
from .errors import InfeasibleError, ResourceLimitError, StateError
from .exact import brute_force_wtap
from .instance import WtapInstance, frac_str, is_feasible, normalize_costs, shadow_complete
from .lp import solve_with_separation
from .oddcut import cut_lp_model, odd_cut_oracle
from .params import AlgorithmParams
from .rounding import BundleRowViolated, RoundingContext, round_pair

ZERO = Fraction(0)


@dataclass
class ApproxResult:
    links: frozenset
    cost: Fraction
    report: dict = field(default_factory=dict)
    decomposition: object = None

    def __iter__(self):  # unpacks as (links, cost, report)
        return iter((self.links, self.cost, self.report))


def _ms(t0):
    return round((time.perf_counter() - t0) * 1000, 3)


def wtap_approx(instance: WtapInstance, params: AlgorithmParams | None = None, oracle: bool = False) -> ApproxResult:
    """Approximate minimum-cost cover of ``instance``.

    ``params`` defaults to epsilon = 1/2 with M read off the normalized costs.
    With ``oracle`` the exact optimum is computed as well and the ratio
    reported.
    """
    t_start = time.perf_counter()
    for eid, cov in instance.cover_map().items():
        if not cov:
            raise InfeasibleError(f"tree edge {eid} is not covered by any link")
    norm, scale = normalize_costs(instance)
    if params is None:
        params = AlgorithmParams.default("1/2", norm.cost_bound)
    G = shadow_complete(norm)

    timings = {"lp": 0.0, "decompose": 0.0, "rounding": 0.0}
    bundle_rows = []
    cut_pool = []
    restarts = 0
    cuts_added = 0
    while True:
        t0 = time.perf_counter()
        model = cut_lp_model(G).with_rows(cut_pool + bundle_rows)
        out, cuts = solve_with_separation(model, [odd_cut_oracle(G)])
        cut_pool.extend(cuts)
        cuts_added += len(cuts)
        timings["lp"] += _ms(t0)
        x = {lid: v for lid, v in out.solution.items() if v}

        t0 = time.perf_counter()
        dec = decompose(G, x, params)
        timings["decompose"] += _ms(t0)

        t0 = time.perf_counter()
        ctx = RoundingContext(G, x, dec.contracted_nodes, params)
        try:
            outcomes = [round_pair(p, p.beta_center, ctx) for p in dec.pairs]
        except BundleRowViolated as exc:
            timings["rounding"] += _ms(t0)
            bundle_rows.append(exc.constraint.to_row())
            restarts += 1
            if restarts > params.max_restarts:
                raise ResourceLimitError(f"more than {params.max_restarts} bundle-row restarts") from exc
            continue
        timings["rounding"] += _ms(t0)
        break

    chosen = set(dec.heavy_cover) | set(dec.split_cover)
    for o in outcomes:
        chosen |= o.chosen
    originals = set()
    for lid in chosen:
        link = G.link(lid)
        originals.add(link.origin if link.origin is not None else lid)
    links = frozenset(instance.link(lid) for lid in originals)
    if not is_feasible(instance, links):
        raise StateError("assembled link set does not cover the tree")
    cost = sum((l.cost for l in links), ZERO)

    rounded = sum((o.cost for o in outcomes), ZERO)
    aggregate_bound = len(dec.contracted_nodes) + Fraction(3, 2) * dec.cost_pairs
    report = {
        "digest": instance.digest(),
        "params": params.to_json(),
        "lp_value": frac_str(out.objective / scale),
        "opt_if_known": None,
        "output_cost": frac_str(cost),
        "ratio": None,
        "per_pair": [o.to_json(scale) for o in outcomes],
        "cuts_added": cuts_added,
        "bundles_added": len(bundle_rows),
        "restarts": restarts,
        "feasible": True,
        "ledger": {
            "cost_x": frac_str(dec.cost_x / scale),
            "cost_pairs": frac_str(dec.cost_pairs / scale),
            "cost_heavy": frac_str(dec.cost_heavy / scale),
            "cost_split": frac_str(dec.cost_split / scale),
            "heavy_edges": len(dec.heavy_edges),
            "split_edges": len(dec.split_edges),
            "contracted_nodes": len(dec.contracted_nodes),
            "pairs": len(dec.pairs),
        },
        "aggregate_check": rounded <= aggregate_bound,
    }
    if oracle:
        t0 = time.perf_counter()
        opt = brute_force_wtap(instance).cost
        timings["oracle"] = _ms(t0)
        report["opt_if_known"] = frac_str(opt)
        report["ratio"] = frac_str(cost / opt) if opt else "1"
    timings["total"] = _ms(t_start)
    report["timings_ms"] = timings
    return ApproxResult(links, cost, report, dec)
