"""Command line front end.

Exit codes: 0 ok, 1 infeasible, 2 invalid input, 3 resource limit,
4 property-check failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import CertificateViolation, InfeasibleError, PreconditionError, ResourceLimitError, StateError
from .instance import as_fraction, frac_str, normalize_costs, shadow_complete

EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_LIMIT, EXIT_PROPERTY = 0, 1, 2, 3, 4


def _emit(args, data, text=None):
    if args.format == "json":
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text if text is not None else _plain(data))


def _plain(data, indent=""):
    lines = []
    for k, v in data.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_plain(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                lines.append(indent + "  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def _params(args, instance):
    from .params import AlgorithmParams

    norm, _ = normalize_costs(instance)
    M = as_fraction(args.max_cost) if args.max_cost else norm.cost_bound
    return AlgorithmParams.default(
        args.epsilon, M, alpha_thin=args.override_alpha, heavy_threshold=args.override_heavy)


def cmd_gen(args):
    from .generators import GeneratorSpec, generate

    spec = GeneratorSpec(args.family, args.n, as_fraction(args.density), args.costs, args.max_cost_int, args.seed)
    inst = generate(spec)
    text = json.dumps(io.to_json(inst), indent=2) if args.format == "json" else io.to_text(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def cmd_solve(args):
    from .algorithm import wtap_approx

    inst = io.read_instance(args.instance)
    res = wtap_approx(inst, _params(args, inst), oracle=args.oracle)
    data = {"solution": io.solution_json(inst, res.links), "report": res.report}
    _emit(args, data)
    if args.oracle and as_fraction(res.report["ratio"]) > 2:
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_exact(args):
    from .exact import brute_force_wtap

    inst = io.read_instance(args.instance)
    sol = brute_force_wtap(inst)
    _emit(args, io.solution_json(inst, sol.links))
    return EXIT_OK


def cmd_lp(args):
    from .lp import check_certificate, solve_lp, solve_with_separation
    from .oddcut import cut_lp_model, odd_cut_oracle

    inst = io.read_instance(args.instance)
    model = cut_lp_model(inst)
    added = []
    if args.kind == "cut":
        out = solve_lp(model)
    elif args.kind == "odd-cut":
        out, added = solve_with_separation(model, [odd_cut_oracle(inst)])
    else:
        from .algorithm import wtap_approx

        res = wtap_approx(inst, _params(args, inst))
        data = {"kind": args.kind, "objective": res.report["lp_value"],
                "cuts_added": res.report["cuts_added"], "bundles_added": res.report["bundles_added"]}
        _emit(args, data)
        return EXIT_OK
    if not out.optimal:
        raise InfeasibleError("LP is infeasible")
    cert = check_certificate(model, out)
    data = {
        "kind": args.kind,
        "objective": frac_str(out.objective),
        "solution": {str(k): frac_str(v) for k, v in sorted(out.solution.items()) if v},
        "cuts_added": len(added),
        "certificate_ok": cert.ok,
    }
    if args.dump:
        data["model"] = model.with_rows(added).dump()
    _emit(args, data)
    return EXIT_OK if cert.ok else EXIT_PROPERTY


def cmd_separate(args):
    from .oddcut import brute_force_separate, separate_odd_cut, solve_cut_lp

    inst = io.read_instance(args.instance)
    if args.x:
        with open(args.x) as fh:
            x = io.parse_solution_values(fh.read())
    else:
        x = solve_cut_lp(inst).solution
    con = separate_odd_cut(inst, x)
    data = {"x": {str(k): frac_str(v) for k, v in sorted(x.items()) if v}}
    if con is None:
        data["cut"] = None
    else:
        data["cut"] = {
            "set": sorted(con.source_set.members),
            "boundary": sorted(con.source_set.boundary),
            "multiplicities": {str(k): m for k, m in sorted(con.multiplicities.items())},
            "rhs": frac_str(con.rhs),
            "violation": frac_str(con.violation(x)),
        }
    if args.oracle:
        slow = brute_force_separate(inst, x)
        agree = (slow is None) == (con is None) and (con is None or slow.violation(x) == con.violation(x))
        data["oracle_agrees"] = agree
        _emit(args, data)
        return EXIT_OK if agree else EXIT_PROPERTY
    _emit(args, data)
    return EXIT_OK


def cmd_decompose(args):
    from .decomposition import decompose, verify_decomposition
    from .oddcut import solve_odd_cut_lp

    inst = io.read_instance(args.instance)
    params = _params(args, inst)
    norm, _ = normalize_costs(inst)
    G = shadow_complete(norm)
    out, _ = solve_odd_cut_lp(G)
    x = {k: v for k, v in out.solution.items() if v}
    dec = decompose(G, x, params)
    report = verify_decomposition(dec, x, params)
    data = {"params": params.to_json(), "decomposition": dec.to_json(), "properties": report.to_json()}
    _emit(args, data)
    return EXIT_OK if report.ok else EXIT_PROPERTY


def cmd_verify(args):
    from .generators import generate
    from .harness import check_instance, seeded_spec

    failed = []
    for seed in range(args.seed, args.seed + args.count):
        inst = generate(seeded_spec(seed, args.n_max, args.max_cost_int))
        rep = check_instance(inst)
        if not rep["ok"]:
            failed.append({"seed": seed, "checks": {k: v for k, v in rep["checks"].items() if not v}})
    data = {"instances": args.count, "failed": failed}
    _emit(args, data, f"{args.count} instances, {len(failed)} failed" + "".join(f"\n  seed {f['seed']}: {f['checks']}" for f in failed))
    return EXIT_OK if not failed else EXIT_PROPERTY


def cmd_bench(args):
    from .harness import ratio_summary, run_batch

    params_kw = None
    if args.override_alpha or args.override_heavy or args.epsilon != "1/2":
        params_kw = {"epsilon": args.epsilon, "alpha_thin": args.override_alpha, "heavy_threshold": args.override_heavy}
    seeds = range(args.seed, args.seed + args.count)
    results = run_batch(seeds, args.n_max, args.max_cost_int, args.family, params_kw, args.oracle, args.workers)
    bad = [r["seed"] for r in results if not r["ok"]]
    data = {"runs": results, "summary": ratio_summary(results), "failed_seeds": bad}
    if args.format == "json":
        _emit(args, data)
    else:
        for r in results:
            print(f"seed {r['seed']:>5}  n={r['n']:<3} cost={r['output_cost']:<8} "
                  f"lp={r['lp_value']:<8} opt={r.get('opt', '-')!s:<8} ratio={r.get('ratio', '-')!s:<8} "
                  f"{r['time_ms']:>9.1f} ms {'ok' if r['ok'] else 'FAIL'}")
        print("summary:", data["summary"])
    return EXIT_OK if not bad else EXIT_PROPERTY


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", default="1/2", help="accuracy parameter as p/q (default 1/2)")
    common.add_argument("--max-cost", default=None, help="cost bound M after normalization (default: inferred)")
    common.add_argument("--override-alpha", default=None, help="thin-edge threshold instead of 4M/eps^2")
    common.add_argument("--override-heavy", default=None, help="heavy-edge threshold instead of 2/eps")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--oracle", action="store_true", help="cross-check against exhaustive solvers")

    ap = argparse.ArgumentParser(prog="wtap", description="Weighted tree augmentation: LP tools and a 3/2+eps approximation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("--family", default="random-tree")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--density", default="1", help="links per node")
    p.add_argument("--costs", default="uniform-integer", choices=["unit", "uniform-integer", "rational"])
    p.add_argument("--cost-max", dest="max_cost_int", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    for name, func, text in (
        ("solve", cmd_solve, "run the approximation algorithm"),
        ("exact", cmd_exact, "exact optimum by search"),
        ("separate", cmd_separate, "one odd-cut separation call"),
        ("decompose", cmd_decompose, "dump the decomposition of the LP solution"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("instance", help="instance file (text or JSON), '-' for stdin")
        if name == "separate":
            p.add_argument("--x", default=None, help='JSON file {"link id": "p/q"}; default: cut LP optimum')
        p.set_defaults(func=func)

    p = sub.add_parser("lp", parents=[common], help="solve an LP relaxation")
    p.add_argument("instance")
    p.add_argument("--kind", choices=["cut", "odd-cut", "bundles"], default="odd-cut")
    p.add_argument("--dump", action="store_true", help="include the final model in the output")
    p.set_defaults(func=cmd_lp)

    for name, func, text in (("verify", cmd_verify, "property suite over seeded instances"),
                             ("bench", cmd_bench, "batch ratios over seeds")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--count", type=int, default=100)
        p.add_argument("--n-max", type=int, default=12)
        p.add_argument("--cost-max", dest="max_cost_int", type=int, default=3)
        if name == "bench":
            p.add_argument("--family", default=None)
            p.add_argument("--workers", type=int, default=1)
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (CertificateViolation, StateError) as exc:
        print(f"property check failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (PreconditionError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
