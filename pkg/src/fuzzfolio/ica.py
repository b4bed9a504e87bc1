"""Imperialist competitive search over box-bounded allocations.

Countries are candidate allocations; the best ones become imperialists
and the rest are divided among them as colonies in proportion to
normalized power.  Each iteration: colonies drift toward their
imperialist (assimilation), some are randomly redrawn (revolution), a
colony that overtakes its imperialist swaps roles (exchange), and the
weakest empire loses its weakest colony to a roulette-selected rival
(competition), collapsing once it has none left.

Costs are minimized internally (cost = -penalized objective) so that
lower cost means stronger throughout.  A run is a pure function of its
inputs including the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import DeterministicLP, ResidualReport, Tolerances, objective, residuals
from .penalty import PenaltyConfig, penalized_objective_batch, repair

__all__ = [
    "Country",
    "Empire",
    "IcaConfig",
    "IterationRecord",
    "RunReport",
    "cost_function",
    "initialize",
    "form_empires",
    "assimilate",
    "revolve",
    "exchange",
    "empire_power",
    "compete",
    "run",
]

CostFn = Callable[[np.ndarray], np.ndarray]


@dataclass(eq=False)
class Country:
    position: np.ndarray
    cost: float


@dataclass(eq=False)
class Empire:
    imperialist: Country
    colonies: list[Country]

    def members(self) -> list[Country]:
        return [self.imperialist, *self.colonies]


@dataclass(frozen=True)
class IcaConfig:
    n_countries: int = 100
    n_imperialists: int = 10
    revolution_rate: float = 0.2
    max_iterations: int = 25
    epsilon: float = 0.05
    assimilation_beta: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n_imperialists < self.n_countries:
            raise ValueError(
                f"need 1 <= n_imperialists < n_countries, got {self.n_imperialists} of {self.n_countries}"
            )
        if not 0.0 <= self.revolution_rate <= 1.0:
            raise ValueError(f"revolution_rate must lie in [0, 1], got {self.revolution_rate}")
        if not 0.0 < self.epsilon < 0.1:
            raise ValueError(f"epsilon must lie in (0, 0.1), got {self.epsilon}")
        if not self.assimilation_beta > 1.0:
            raise ValueError(f"assimilation_beta must exceed 1, got {self.assimilation_beta}")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be nonnegative, got {self.max_iterations}")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    best_cost: float
    n_empires: int


@dataclass(frozen=True)
class RunReport:
    """Outcome of a seeded run.

    ``best_position`` is the budget-repaired best allocation ever
    evaluated and ``best_objective`` its plain (unpenalized) objective;
    ``best_cost`` is the raw internal cost of the unrepaired best.
    """

    best_position: np.ndarray
    best_cost: float
    best_objective: float
    trace: tuple[IterationRecord, ...]
    residuals: ResidualReport
    seed: int


def cost_function(lp: DeterministicLP, cfg: PenaltyConfig = PenaltyConfig()) -> CostFn:
    """Minimization cost over one allocation (n,) or a batch (k, n)."""

    def cost(x: np.ndarray) -> np.ndarray:
        return -penalized_objective_batch(lp, x, cfg)

    return cost


def initialize(cost_fn: CostFn, config: IcaConfig, bounds: np.ndarray, rng: np.random.Generator) -> list[Country]:
    """Draw the initial population uniformly inside the box."""
    bounds = np.asarray(bounds, dtype=float)
    positions = rng.uniform(0.0, bounds, size=(config.n_countries, bounds.size))
    costs = np.atleast_1d(cost_fn(positions))
    return [Country(positions[i].copy(), float(costs[i])) for i in range(config.n_countries)]


def form_empires(countries: Sequence[Country], config: IcaConfig, rng: np.random.Generator) -> list[Empire]:
    """Split the population into empires with power-proportional colony counts."""
    ranked = sorted(countries, key=lambda c: c.cost)
    imperialists = ranked[: config.n_imperialists]
    colonists = ranked[config.n_imperialists:]
    shares = _power_shares(np.array([imp.cost for imp in imperialists]))
    counts = _largest_remainder(shares, len(colonists))
    order = rng.permutation(len(colonists))
    empires = []
    start = 0
    for imp, k in zip(imperialists, counts):
        picks = [colonists[i] for i in order[start: start + k]]
        start += k
        empires.append(Empire(imperialist=imp, colonies=picks))
    return empires


def _power_shares(costs: np.ndarray) -> np.ndarray:
    # normalized cost c_n - max(c); both it and its sum are <= 0, so the
    # shares are nonnegative and sum to 1.  All-equal costs would divide
    # zero by zero; fall back to uniform shares.
    normalized = costs - costs.max()
    total = normalized.sum()
    if total == 0.0:
        return np.full(costs.size, 1.0 / costs.size)
    return normalized / total


def _largest_remainder(shares: np.ndarray, total: int) -> list[int]:
    # floor the quotas, then hand out the leftover by descending
    # fractional part so the counts sum to the colony pool exactly
    quotas = shares * total
    counts = np.floor(quotas).astype(int)
    leftover = total - int(counts.sum())
    order = sorted(range(shares.size), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts.tolist()


def assimilate(
    empire: Empire,
    cost_fn: CostFn,
    config: IcaConfig,
    bounds: np.ndarray,
    rng: np.random.Generator,
) -> Empire:
    """Move every colony toward its imperialist by a random per-axis step."""
    if not empire.colonies:
        return empire
    positions = np.stack([c.position for c in empire.colonies])
    steps = rng.random(positions.shape)
    target = empire.imperialist.position
    moved = positions + config.assimilation_beta * steps * (target - positions)
    np.clip(moved, 0.0, bounds, out=moved)
    costs = np.atleast_1d(cost_fn(moved))
    for i, colony in enumerate(empire.colonies):
        colony.position = moved[i]
        colony.cost = float(costs[i])
    return empire


def revolve(
    empire: Empire,
    cost_fn: CostFn,
    config: IcaConfig,
    bounds: np.ndarray,
    rng: np.random.Generator,
) -> Empire:
    """Redraw each colony, independently, with the revolution probability."""
    if not empire.colonies:
        return empire
    hit = rng.random(len(empire.colonies)) < config.revolution_rate
    chosen = [c for c, h in zip(empire.colonies, hit) if h]
    if not chosen:
        return empire
    bounds = np.asarray(bounds, dtype=float)
    fresh = rng.uniform(0.0, bounds, size=(len(chosen), bounds.size))
    costs = np.atleast_1d(cost_fn(fresh))
    for i, colony in enumerate(chosen):
        colony.position = fresh[i]
        colony.cost = float(costs[i])
    return empire


def exchange(empire: Empire) -> Empire:
    """Swap the imperialist with its best colony if that colony is strictly better."""
    if not empire.colonies:
        return empire
    best = min(range(len(empire.colonies)), key=lambda i: empire.colonies[i].cost)
    if empire.colonies[best].cost < empire.imperialist.cost:
        empire.colonies[best], empire.imperialist = empire.imperialist, empire.colonies[best]
    return empire


def empire_power(empire: Empire, config: IcaConfig) -> float:
    """Total cost of the empire; higher means weaker."""
    if not empire.colonies:
        return empire.imperialist.cost
    mean_colony = sum(c.cost for c in empire.colonies) / len(empire.colonies)
    return empire.imperialist.cost + config.epsilon * mean_colony


def compete(empires: list[Empire], config: IcaConfig, rng: np.random.Generator) -> list[Empire]:
    """Transfer the weakest empire's weakest colony to a roulette winner.

    The collapsing side is excluded from the roulette; an empire left
    with no colonies is dissolved, its imperialist joining the winner as
    a colony.
    """
    if len(empires) < 2:
        return empires
    powers = np.array([empire_power(e, config) for e in empires])
    weakest = int(np.argmax(powers))
    candidates = [i for i in range(len(empires)) if i != weakest]
    shares = _power_shares(powers[candidates])
    pick = int(np.searchsorted(np.cumsum(shares), rng.random(), side="right"))
    winner = empires[candidates[min(pick, len(candidates) - 1)]]
    weak = empires[weakest]
    if weak.colonies:
        worst = max(range(len(weak.colonies)), key=lambda i: weak.colonies[i].cost)
        winner.colonies.append(weak.colonies.pop(worst))
    if not weak.colonies:
        winner.colonies.append(weak.imperialist)
        return [e for i, e in enumerate(empires) if i != weakest]
    return empires


def run(
    lp: DeterministicLP,
    penalty_cfg: PenaltyConfig = PenaltyConfig(),
    ica_cfg: IcaConfig = IcaConfig(),
    tol: Tolerances = Tolerances(),
) -> RunReport:
    """Full optimization loop; deterministic given the config seed.

    The global best is tracked across every cost evaluation, so positions
    visited and then lost to revolution still count.  The returned
    allocation is the repaired best with its residual diagnostics.
    """
    rng = np.random.default_rng(ica_cfg.seed)
    bounds = lp.upper_bounds
    raw_cost = cost_function(lp, penalty_cfg)

    best_cost = np.inf
    best_position: np.ndarray | None = None

    def tracked(x: np.ndarray) -> np.ndarray:
        nonlocal best_cost, best_position
        costs = raw_cost(x)
        flat = np.atleast_1d(costs)
        i = int(np.argmin(flat))
        if flat[i] < best_cost:
            best_cost = float(flat[i])
            best_position = np.atleast_2d(x)[i].copy()
        return costs

    countries = initialize(tracked, ica_cfg, bounds, rng)
    empires = form_empires(countries, ica_cfg, rng)
    trace = []
    for iteration in range(1, ica_cfg.max_iterations + 1):
        for empire in empires:
            assimilate(empire, tracked, ica_cfg, bounds, rng)
            revolve(empire, tracked, ica_cfg, bounds, rng)
            exchange(empire)
        empires = compete(empires, ica_cfg, rng)
        for empire in empires:
            exchange(empire)
        trace.append(IterationRecord(iteration, best_cost, len(empires)))
        _check_invariants(empires, ica_cfg, bounds)
        if len(empires) == 1:
            break

    assert best_position is not None
    repaired = repair(best_position, lp.total_fund, bounds)
    return RunReport(
        best_position=repaired,
        best_cost=best_cost,
        best_objective=objective(lp, repaired),
        trace=tuple(trace),
        residuals=residuals(lp, repaired, tol),
        seed=ica_cfg.seed,
    )


def _check_invariants(empires: list[Empire], config: IcaConfig, bounds: np.ndarray) -> None:
    # debug-run assertions; stripped under python -O
    assert sum(len(e.members()) for e in empires) == config.n_countries
    for e in empires:
        assert all(np.all(m.position >= 0.0) and np.all(m.position <= bounds) for m in e.members())
        assert all(e.imperialist.cost <= c.cost for c in e.colonies)
