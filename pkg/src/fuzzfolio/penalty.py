"""Exterior penalty transformation and a deterministic budget repair.

Box bounds are not penalized; the optimizer clamps positions instead.
The return-threshold constraint can be genuinely unsatisfiable at high
confidence levels, so by default it is reported post hoc rather than
penalized; ``enforce_threshold`` restores the fully penalized form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetInfeasibleError
from .model import DeterministicLP

__all__ = ["PenaltyConfig", "penalized_objective", "penalized_objective_batch", "repair"]


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty factors and exponents for the unconstrained objective.

    The defaults are deliberately mild: the final answer is budget-repaired
    anyway, and a heavy equality penalty makes cost differences reflect
    budget noise instead of allocation quality, which measurably stalls
    the population search.  A quadratic factor F caps the search's budget
    drift near max(c) / (2F), about 1% of the worked example's budget.
    """

    eq_factor: float = 0.5
    ineq_factor: float = 0.5
    eq_exponent: float = 2.0
    ineq_exponent: float = 2.0
    enforce_threshold: bool = False

    def __post_init__(self):
        if self.eq_factor <= 0 or self.ineq_factor <= 0:
            raise ValueError("penalty factors must be positive")
        if self.eq_exponent not in (1.0, 2.0) or self.ineq_exponent not in (1.0, 2.0):
            raise ValueError("penalty exponents must be 1 or 2")


def penalized_objective(lp: DeterministicLP, x, cfg: PenaltyConfig = PenaltyConfig()) -> float:
    """c . x minus the penalty charges (maximization convention)."""
    return float(penalized_objective_batch(lp, np.asarray(x, dtype=float), cfg))


def penalized_objective_batch(lp: DeterministicLP, x: np.ndarray, cfg: PenaltyConfig = PenaltyConfig()) -> np.ndarray:
    """Penalized objective for a single allocation (n,) or a batch (k, n)."""
    x = np.asarray(x, dtype=float)
    value = x @ lp.coefficients
    penalty = cfg.eq_factor * np.abs(x.sum(axis=-1) - lp.total_fund) ** cfg.eq_exponent
    if cfg.enforce_threshold:
        shortfall = np.maximum(0.0, lp.threshold - value)
        penalty = penalty + cfg.ineq_factor * shortfall ** cfg.ineq_exponent
    return value - penalty


def repair(x, m0: float, upper) -> np.ndarray:
    """Project an allocation onto {sum(x) = m0, 0 <= x <= upper}.

    Clamps to the box, then settles the budget: a deficit is spread in
    proportion to the remaining headroom (which cannot overshoot any
    bound), a surplus is removed in proportion to current mass.  Repeats
    until the residual is under 1e-12 of the budget, so reapplying the
    repair returns its input bitwise.
    """
    upper = np.asarray(upper, dtype=float)
    if float(upper.sum()) < m0:
        raise BudgetInfeasibleError(
            f"upper bounds sum to {float(upper.sum())}, below the budget {m0}"
        )
    x = np.clip(np.asarray(x, dtype=float), 0.0, upper)
    tol = 1e-12 * max(1.0, abs(m0))
    for _ in range(100):
        residual = m0 - float(x.sum())
        if abs(residual) <= tol:
            break
        if residual > 0:
            headroom = upper - x
            total_headroom = float(headroom.sum())
            if total_headroom <= 0.0:
                break
            x = x + residual * (headroom / total_headroom)
        else:
            x = x * (m0 / float(x.sum()))
        x = np.clip(x, 0.0, upper)
    return x
