"""Algorithm thresholds derived from epsilon and the cost bound M."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import PreconditionError
from .instance import as_fraction, frac_str


@dataclass(frozen=True)
class AlgorithmParams:
    epsilon: Fraction
    cost_bound: Fraction
    gamma: int
    alpha_thin: Fraction
    heavy_threshold: Fraction
    beta: Fraction
    max_restarts: int = 50

    @classmethod
    def default(cls, epsilon="1/2", cost_bound=1, **overrides) -> "AlgorithmParams":
        eps = as_fraction(epsilon)
        M = as_fraction(cost_bound)
        if not 0 < eps <= 1:
            raise PreconditionError(f"epsilon must lie in (0, 1], got {eps}")
        if M < 1:
            raise PreconditionError(f"cost bound must be at least 1, got {M}")
        base = dict(
            epsilon=eps,
            cost_bound=M,
            gamma=math.ceil(28 * M / eps**2),
            alpha_thin=4 * M / eps**2,
            heavy_threshold=2 / eps,
            beta=10 * M / eps**2,
        )
        for key, val in overrides.items():
            if val is None:
                continue
            if key not in base and key != "max_restarts":
                raise PreconditionError(f"unknown parameter {key}")
            base[key] = int(val) if key in ("gamma", "max_restarts") else as_fraction(val)
        return cls(**base)

    def with_overrides(self, **kw) -> "AlgorithmParams":
        kw = {k: v for k, v in kw.items() if v is not None}
        for k in ("alpha_thin", "heavy_threshold", "beta", "epsilon", "cost_bound"):
            if k in kw:
                kw[k] = as_fraction(kw[k])
        return replace(self, **kw)

    @property
    def shortcut_threshold(self) -> Fraction:
        """Contracted-node count above which a subtree skips its bundle row."""
        return 6 * self.cost_bound / self.epsilon**2

    @property
    def overridden(self) -> bool:
        d = AlgorithmParams.default(self.epsilon, self.cost_bound)
        return (self.gamma, self.alpha_thin, self.heavy_threshold, self.beta) != (
            d.gamma, d.alpha_thin, d.heavy_threshold, d.beta)

    def to_json(self) -> dict:
        return {
            "epsilon": frac_str(self.epsilon),
            "cost_bound": frac_str(self.cost_bound),
            "gamma": self.gamma,
            "alpha_thin": frac_str(self.alpha_thin),
            "heavy_threshold": frac_str(self.heavy_threshold),
            "beta": frac_str(self.beta),
            "max_restarts": self.max_restarts,
        }
