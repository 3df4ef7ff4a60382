"""Exact rational LP: min c.x subject to a_i.x >= b_i, x >= 0.

The solver is a dual simplex on a sparse tableau.  All objectives used here
have c >= 0, so the all-slack basis is dual feasible and new rows can be
appended to a solved tableau without restarting (the basis stays dual
feasible).  Pivots follow Bland's rule on both the leaving row and the entering
column, which guarantees termination and makes every run reproducible.
"""
from __future__ import annotations

import contextlib
import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InfeasibleError, PreconditionError, ResourceLimitError, WtapError
from .instance import frac_str

ZERO = Fraction(0)
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LinearConstraint:
    """Row ``sum coefficients[v] * x_v >= rhs``."""

    coefficients: Mapping[Hashable, Fraction]
    rhs: Fraction
    tag: str = "covering"
    label: str = ""

    def lhs(self, x: Mapping[Hashable, Fraction]) -> Fraction:
        return sum((c * x.get(v, ZERO) for v, c in self.coefficients.items()), ZERO)

    def violation(self, x: Mapping[Hashable, Fraction]) -> Fraction:
        """Positive when ``x`` violates the row."""
        return self.rhs - self.lhs(x)

    def key(self):
        return (tuple(sorted((v, c) for v, c in self.coefficients.items() if c)), self.rhs)


@dataclass
class LpModel:
    variables: list
    objective: dict
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        index = {v: i for i, v in enumerate(self.variables)}
        if len(index) != len(self.variables):
            raise PreconditionError("duplicate LP variable")
        for v, c in self.objective.items():
            if v not in index:
                raise PreconditionError(f"objective names unknown variable {v!r}")
            if c < 0:
                raise PreconditionError("objective coefficients must be nonnegative")
        for row in self.constraints:
            self._check_row(row, index)

    @staticmethod
    def _check_row(row, index):
        for v in row.coefficients:
            if v not in index:
                raise PreconditionError(f"constraint {row.label or row.tag} names unknown variable {v!r}")

    def with_rows(self, rows: Iterable[LinearConstraint]) -> "LpModel":
        return LpModel(list(self.variables), dict(self.objective), list(self.constraints) + list(rows))

    def dump(self) -> str:
        """Human-readable listing of the model (debug aid)."""
        lines = ["min " + " + ".join(f"{frac_str(c)}*x[{v}]" for v, c in self.objective.items() if c)]
        for i, row in enumerate(self.constraints):
            terms = " + ".join(f"{frac_str(c)}*x[{v}]" for v, c in sorted(row.coefficients.items()) if c)
            lines.append(f"r{i} [{row.tag}] {terms or '0'} >= {frac_str(row.rhs)}")
        return "\n".join(lines)


@dataclass
class LpOutcome:
    status: str
    solution: dict
    objective: Fraction
    duals: list
    basis: tuple
    constraints: list
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dual simplex tableau with rows ``x_B + sum_j a_j x_j = b``."""

    def __init__(self, model: LpModel):
        self.vars = list(model.variables)
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.n = len(self.vars)
        self.cost = [Fraction(model.objective.get(v, 0)) for v in self.vars]
        self.d: dict[int, Fraction] = {j: c for j, c in enumerate(self.cost) if c}
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        self.row_of: dict[int, int] = {}
        self.slack: list[int] = []  # constraint index -> slack column
        self.constraints: list[LinearConstraint] = []
        self.ncols = self.n
        self.pivots = 0
        for row in model.constraints:
            self.add_row(row)

    def add_row(self, con: LinearConstraint) -> None:
        s = self.ncols
        self.ncols += 1
        row: dict[int, Fraction] = {s: Fraction(1)}
        for v, c in con.coefficients.items():
            if c:
                row[self.index[v]] = -Fraction(c)
        b = -Fraction(con.rhs)
        for col in [c for c in row if c in self.row_of]:
            f = row.get(col)
            if not f:
                continue
            k = self.row_of[col]
            for j, a in self.rows[k].items():
                val = row.get(j, ZERO) - f * a
                if val:
                    row[j] = val
                else:
                    row.pop(j, None)
            b -= f * self.rhs[k]
        self.rows.append(row)
        self.rhs.append(b)
        self.basis.append(s)
        self.row_of[s] = len(self.rows) - 1
        self.slack.append(s)
        self.constraints.append(con)

    def pivot(self, r: int, j: int) -> None:
        self.pivots += 1
        row = self.rows[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            for k in row:
                row[k] *= inv
            self.rhs[r] *= inv
        b = self.rhs[r]
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            f = other.get(j)
            if not f:
                continue
            for col, a in row.items():
                val = other.get(col, ZERO) - f * a
                if val:
                    other[col] = val
                else:
                    del other[col]
            self.rhs[k] -= f * b
        f = self.d.get(j)
        if f:
            for col, a in row.items():
                val = self.d.get(col, ZERO) - f * a
                if val:
                    self.d[col] = val
                else:
                    self.d.pop(col, None)
        old = self.basis[r]
        del self.row_of[old]
        self.basis[r] = j
        self.row_of[j] = r

    def run(self, max_pivots: int) -> str:
        while True:
            leaving = None
            for r, b in enumerate(self.rhs):
                if b < 0 and (leaving is None or self.basis[r] < self.basis[leaving]):
                    leaving = r
            if leaving is None:
                return OPTIMAL
            row = self.rows[leaving]
            best = None
            best_ratio = None
            for j, a in row.items():
                if a < 0 and j not in self.row_of:
                    ratio = self.d.get(j, ZERO) / -a
                    if best is None or ratio < best_ratio or (ratio == best_ratio and j < best):
                        best, best_ratio = j, ratio
            if best is None:
                return INFEASIBLE
            if self.pivots >= max_pivots:
                raise ResourceLimitError(f"simplex exceeded {max_pivots} pivots")
            self.pivot(leaving, best)

    def outcome(self, status: str) -> LpOutcome:
        x = {}
        for r, col in enumerate(self.basis):
            if col < self.n and self.rhs[r]:
                x[self.vars[col]] = self.rhs[r]
        obj = sum((self.cost[self.index[v]] * val for v, val in x.items()), ZERO)
        duals = [self.d.get(s, ZERO) for s in self.slack]
        return LpOutcome(
            status=status,
            solution=x if status == OPTIMAL else {},
            objective=obj if status == OPTIMAL else ZERO,
            duals=duals if status == OPTIMAL else [],
            basis=tuple(sorted(self.basis)),
            constraints=list(self.constraints),
            pivots=self.pivots,
        )


DEFAULT_MAX_PIVOTS = 200_000

_recorders: list = []


@contextlib.contextmanager
def record_outcomes():
    """Collect ``(model, outcome)`` for every optimal LP finished inside the block."""
    sink: list = []
    _recorders.append(sink)
    try:
        yield sink
    finally:
        # by identity: two empty sinks compare equal
        del _recorders[next(i for i, s in enumerate(_recorders) if s is sink)]


def _record(model, out):
    if out.optimal:
        for sink in _recorders:
            sink.append((model, out))
    return out


def solve_lp(model: LpModel, max_pivots: int = DEFAULT_MAX_PIVOTS) -> LpOutcome:
    """Exact optimal vertex of ``model``, or an ``infeasible`` outcome."""
    tab = _Tableau(model)
    return _record(model, tab.outcome(tab.run(max_pivots)))


SeparationOracle = Callable[[Mapping], "LinearConstraint | None"]


def solve_with_separation(
    model: LpModel,
    oracles: Sequence[SeparationOracle],
    max_rounds: int = 5_000,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> tuple[LpOutcome, list[LinearConstraint]]:
    """Cutting-plane loop: solve, ask oracles in order, add the first cut, repeat.

    Raises :class:`InfeasibleError` when a relaxation becomes infeasible.
    """
    tab = _Tableau(model)
    added: list[LinearConstraint] = []
    for _ in range(max_rounds):
        status = tab.run(max_pivots)
        if status != OPTIMAL:
            raise InfeasibleError("LP relaxation is infeasible")
        out = tab.outcome(status)
        cut = None
        for oracle in oracles:
            cut = oracle(out.solution)
            if cut is not None:
                break
        if cut is None:
            return _record(model, out), added
        if cut.violation(out.solution) <= 0:
            raise WtapError(f"oracle returned a row that is not violated ({cut.tag})")
        tab.add_row(cut)
        added.append(cut)
    raise ResourceLimitError(f"no convergence after {max_rounds} separation rounds")


def is_integral(x: Mapping) -> bool:
    return all(Fraction(v).denominator == 1 for v in x.values())


@dataclass
class IlpResult:
    solution: dict
    objective: Fraction
    nodes: int
    cuts: list

    def __iter__(self):  # unpacks as (solution, objective)
        return iter((self.solution, self.objective))


def _branch_variable(model: LpModel, x: Mapping):
    best = None
    best_key = None
    half = Fraction(1, 2)
    for i, v in enumerate(model.variables):
        val = x.get(v, ZERO)
        frac = val - math.floor(val)
        if frac:
            key = (abs(frac - half), i)
            if best_key is None or key < best_key:
                best, best_key = v, key
    return best


def solve_ilp(
    model: LpModel,
    oracles: Sequence[SeparationOracle] = (),
    node_limit: int = 20_000,
    seed_cuts: Iterable[LinearConstraint] = (),
) -> IlpResult:
    """Best-first branch and bound over nonnegative integer vectors.

    Oracle cuts found anywhere in the tree are kept in a shared pool; they are
    valid for every integer point, so each node re-solves with the full pool.
    """
    pool: list[LinearConstraint] = list(seed_cuts)
    pool_keys = {c.key() for c in pool}
    counter = itertools.count()
    heap: list = []
    incumbent = None
    incumbent_obj = None
    nodes = 0

    def solve_node(branch_rows):
        try:
            out, cuts = solve_with_separation(model.with_rows(pool + branch_rows), oracles)
        except InfeasibleError:
            return None
        for c in cuts:
            if c.key() not in pool_keys:
                pool_keys.add(c.key())
                pool.append(c)
        return out

    root = solve_node([])
    if root is None:
        raise InfeasibleError("integer program has no feasible LP relaxation")
    heapq.heappush(heap, (root.objective, next(counter), [], root))
    while heap:
        bound, _, rows, out = heapq.heappop(heap)
        if incumbent is not None and bound >= incumbent_obj:
            break
        nodes += 1
        if nodes > node_limit:
            raise ResourceLimitError(f"branch and bound exceeded {node_limit} nodes")
        var = _branch_variable(model, out.solution)
        if var is None:
            if incumbent is None or out.objective < incumbent_obj:
                incumbent, incumbent_obj = dict(out.solution), out.objective
            continue
        val = out.solution[var]
        down = LinearConstraint({var: Fraction(-1)}, -Fraction(math.floor(val)), "branching")
        up = LinearConstraint({var: Fraction(1)}, Fraction(math.ceil(val)), "branching")
        for extra in (down, up):
            child_rows = rows + [extra]
            child = solve_node(child_rows)
            if child is None:
                continue
            if incumbent is not None and child.objective >= incumbent_obj:
                continue
            heapq.heappush(heap, (child.objective, next(counter), child_rows, child))
    if incumbent is None:
        raise InfeasibleError("integer program is infeasible")
    return IlpResult(incumbent, incumbent_obj, nodes, pool)


@dataclass
class CertificateReport:
    primal_feasible: bool
    dual_feasible: bool
    objectives_equal: bool
    complementary: bool

    @property
    def ok(self) -> bool:
        return self.primal_feasible and self.dual_feasible and self.objectives_equal and self.complementary


def check_certificate(model: LpModel, outcome: LpOutcome) -> CertificateReport:
    """Independent exact check of an optimal outcome against ``outcome.constraints``.

    ``model`` supplies variables and objective; the rows checked are the ones
    the solver actually held (including cuts added during separation).
    """
    x = outcome.solution
    rows = outcome.constraints
    y = outcome.duals
    primal = all(v >= 0 for v in x.values()) and all(r.lhs(x) >= r.rhs for r in rows)
    reduced = {v: Fraction(model.objective.get(v, 0)) for v in model.variables}
    for yi, r in zip(y, rows):
        if yi:
            for v, a in r.coefficients.items():
                reduced[v] -= yi * a
    dual = len(y) == len(rows) and all(v >= 0 for v in y) and all(d >= 0 for d in reduced.values())
    primal_obj = sum((Fraction(model.objective.get(v, 0)) * val for v, val in x.items()), ZERO)
    dual_obj = sum((yi * r.rhs for yi, r in zip(y, rows)), ZERO)
    comp = all(yi * (r.lhs(x) - r.rhs) == 0 for yi, r in zip(y, rows)) and all(
        x.get(v, ZERO) * reduced[v] == 0 for v in model.variables
    )
    return CertificateReport(primal, dual, primal_obj == dual_obj == outcome.objective, comp)
