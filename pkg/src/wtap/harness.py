"""Per-instance property checks and seeded batch runs."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .algorithm import wtap_approx
from .exact import solve_up_cross_exact, verify_binet_certificate
from .generators import FAMILIES, GeneratorSpec, generate
from .errors import PreconditionError
from .instance import as_fraction, frac_str, is_feasible, normalize_costs
from .oddcut import brute_force_separate, separate_odd_cut, solve_cut_lp
from .params import AlgorithmParams

COST_CYCLE = ("unit", "uniform-integer", "rational")


def seeded_spec(seed: int, n_max: int = 12, max_cost: int = 3, family: str | None = None) -> GeneratorSpec:
    """Spread seeds over families, sizes and cost models."""
    fam = family or FAMILIES[seed % len(FAMILIES)]
    n = 3 + (seed // len(FAMILIES)) % max(n_max - 2, 1)
    return GeneratorSpec(fam, n, Fraction(1), COST_CYCLE[seed % 3], max_cost, seed)


def check_instance(instance, params_kw=None, separation=True) -> dict:
    """Run the algorithm with the exact oracle and check every bound in exact arithmetic."""
    t0 = time.perf_counter()
    params = None
    if params_kw:
        norm, _ = normalize_costs(instance)
        M = params_kw.get("cost_bound") or norm.cost_bound
        params = AlgorithmParams.default(params_kw.get("epsilon", "1/2"), M,
                                         alpha_thin=params_kw.get("alpha_thin"),
                                         heavy_threshold=params_kw.get("heavy_threshold"))
    res = wtap_approx(instance, params, oracle=True)
    rep = res.report
    opt = as_fraction(rep["opt_if_known"])
    lp = as_fraction(rep["lp_value"])
    ledger = rep["ledger"]
    certs = sum((as_fraction(p["certificate"]) for p in rep["per_pair"]), Fraction(0))
    checks = {
        "feasible": is_feasible(instance, res.links),
        "within_twice_opt": res.cost <= 2 * opt,
        "within_certificates": res.cost <= certs + as_fraction(ledger["cost_heavy"]) + as_fraction(ledger["cost_split"]),
        "lp_below_opt": lp <= opt,
        "aggregate": rep["aggregate_check"],
    }
    if separation and len(instance.nodes) <= 12:
        x = solve_cut_lp(instance).solution
        fast = separate_odd_cut(instance, x)
        slow = brute_force_separate(instance, x)
        same = (fast is None) == (slow is None)
        if fast is not None and slow is not None:
            same = fast.violation(x) == slow.violation(x)
        checks["separation_agrees"] = same
    if instance.root is not None:
        try:
            sol = solve_up_cross_exact(instance)
        except PreconditionError:
            sol = None
        if sol is not None:
            checks["up_cross_integral"] = sol.cost == opt == sol.lp_value
            checks["binet"] = verify_binet_certificate(instance)
    return {
        "digest": instance.digest(),
        "n": len(instance.nodes),
        "links": len(instance.links),
        "lp_value": rep["lp_value"],
        "opt": rep["opt_if_known"],
        "output_cost": rep["output_cost"],
        "ratio": rep["ratio"],
        "checks": checks,
        "ok": all(checks.values()),
        "time_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def _bench_one(args):
    seed, n_max, max_cost, family, params_kw, oracle = args
    inst = generate(seeded_spec(seed, n_max, max_cost, family))
    if oracle:
        out = check_instance(inst, params_kw, separation=False)
    else:
        t0 = time.perf_counter()
        res = wtap_approx(inst)
        out = {"digest": inst.digest(), "n": len(inst.nodes), "links": len(inst.links),
               "lp_value": res.report["lp_value"], "output_cost": frac_str(res.cost),
               "ok": is_feasible(inst, res.links), "time_ms": round((time.perf_counter() - t0) * 1000, 3)}
    out["seed"] = seed
    return out


def run_batch(seeds, n_max=12, max_cost=3, family=None, params_kw=None, oracle=True, workers=1):
    """One report per seed, in seed order regardless of worker scheduling."""
    jobs = [(s, n_max, max_cost, family, params_kw, oracle) for s in seeds]
    if workers <= 1:
        results = [_bench_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_one, jobs))
    return sorted(results, key=lambda r: r["seed"])


def ratio_summary(results) -> dict:
    ratios = sorted(as_fraction(r["ratio"]) for r in results if r.get("ratio"))
    if not ratios:
        return {}
    mean = sum(ratios, Fraction(0)) / len(ratios)
    return {
        "count": len(ratios),
        "min": frac_str(ratios[0]),
        "median": frac_str(ratios[len(ratios) // 2]),
        "max": frac_str(ratios[-1]),
        "mean": f"{float(mean):.4f}",
        "optimal": sum(1 for r in ratios if r == 1),
    }
