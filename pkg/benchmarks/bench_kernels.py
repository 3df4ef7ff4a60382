"""Compiled vs pure-Python enumeration kernels.

Times the two hot loops (exhaustive min-cost cover, exhaustive odd-set scan)
on the same seeded instances with every available implementation and checks
that they agree.

    python3 benchmarks/bench_kernels.py --count 20 --n 16
"""
import argparse
import random
import time
from fractions import Fraction

from wtap import kernels
from wtap.exact import brute_force_wtap
from wtap.generators import GeneratorSpec, generate
from wtap.oddcut import brute_force_min_odd_cut, solve_cut_lp


def corpus(count, n, seed):
    out = []
    for s in range(seed, seed + count):
        inst = generate(GeneratorSpec("random-tree", n, Fraction(2), "uniform-integer", 3, s))
        x = solve_cut_lp(inst).solution
        out.append((inst, x))
    return out


def raw_cover_corpus(count, seed, m=40, bits=30):
    """Random set-cover inputs fed straight to the kernel (no dominance filter)."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        masks = [sum(1 << b for b in rng.sample(range(bits), rng.randint(2, 6))) for _ in range(m)]
        masks += [1 << b for b in range(bits)]
        costs = [rng.randint(1, 9) for _ in masks]
        out.append((masks, costs, (1 << bits) - 1))
    return out


def timed(fn, items, repeat):
    best = None
    results = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        results = [fn(*it) for it in items]
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--n", type=int, default=16, help="tree nodes (odd-set scan is 2^n)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    items = corpus(args.count, args.n, args.seed)
    raw = raw_cover_corpus(args.count, args.seed)
    impls = kernels.available()
    print(f"{len(items)} instances, n={args.n}; implementations: {', '.join(impls)}")
    rows = {}
    for name, mod in impls.items():
        t_cover, covers = timed(lambda inst, x: brute_force_wtap(inst, impl=mod).cost, items, args.repeat)
        t_scan, scans = timed(lambda inst, x: brute_force_min_odd_cut(inst, x, impl=mod)[1], items, args.repeat)
        t_raw, raws = timed(lambda masks, costs, full: kernels.min_cover(masks, costs, full, impl=mod), raw, args.repeat)
        rows[name] = (t_cover, t_scan, t_raw, covers, scans, raws)
        print(f"{name:>8}  min_cover {t_cover * 1000:9.1f} ms   odd_cut_scan {t_scan * 1000:9.1f} ms   "
              f"raw min_cover {t_raw * 1000:9.1f} ms")

    ref = rows["python"]
    for name, row in rows.items():
        if name == "python":
            continue
        same = row[3:] == ref[3:]
        print(f"{name} vs python: speedup cover x{ref[0] / row[0]:.1f}, scan x{ref[1] / row[1]:.1f}, "
              f"raw cover x{ref[2] / row[2]:.1f}, "
              f"results {'identical' if same else 'DIFFER'}")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
