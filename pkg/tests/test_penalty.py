import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzfolio.errors import BudgetInfeasibleError
from fuzzfolio.model import ConfidenceLevels, DeterministicLP, objective
from fuzzfolio.penalty import PenaltyConfig, penalized_objective, penalized_objective_batch, repair

LEVELS = ConfidenceLevels(0.5, 0.5)


def make_lp(c, m0, u, threshold=0.0):
    return DeterministicLP(np.asarray(c, float), m0, np.asarray(u, float), threshold, LEVELS)


def test_config_validation():
    with pytest.raises(ValueError):
        PenaltyConfig(eq_factor=0.0)
    with pytest.raises(ValueError):
        PenaltyConfig(eq_exponent=3.0)


def test_feasible_point_pays_nothing():
    lp = make_lp([2.0, 1.0], 10.0, [8.0, 8.0], threshold=5.0)
    cfg = PenaltyConfig(enforce_threshold=True)
    x = [6.0, 4.0]
    assert penalized_objective(lp, x, cfg) == objective(lp, x)


def test_budget_violation_charge():
    lp = make_lp([2.0, 1.0], 10.0, [8.0, 8.0], threshold=-100.0)
    cfg = PenaltyConfig(eq_factor=1000.0, enforce_threshold=False)
    x = [7.0, 4.0]  # budget off by exactly 1
    assert penalized_objective(lp, x, cfg) == pytest.approx(objective(lp, x) - 1000.0)


def test_zero_allocation_charge():
    lp = make_lp([2.0] * 5, 200.0, [60.0] * 5)
    cfg = PenaltyConfig(eq_factor=1000.0, enforce_threshold=False)
    assert penalized_objective(lp, np.zeros(5), cfg) == pytest.approx(-4e7)


def test_threshold_charge_only_when_enforced():
    lp = make_lp([1.0, 1.0], 10.0, [8.0, 8.0], threshold=50.0)
    x = [6.0, 4.0]  # objective 10, shortfall 40
    off = penalized_objective(lp, x, PenaltyConfig(enforce_threshold=False))
    assert off == pytest.approx(10.0)
    on = penalized_objective(lp, x, PenaltyConfig(ineq_factor=2.0, enforce_threshold=True))
    assert on == pytest.approx(10.0 - 2.0 * 40.0**2)


def test_batch_matches_scalar():
    lp = make_lp([2.0, 1.0, 0.5], 10.0, [8.0, 8.0, 8.0], threshold=9.0)
    cfg = PenaltyConfig(eq_factor=3.0, ineq_factor=7.0, enforce_threshold=True)
    xs = np.random.default_rng(0).uniform(0, 8, size=(20, 3))
    batch = penalized_objective_batch(lp, xs, cfg)
    for row, got in zip(xs, batch):
        assert got == pytest.approx(penalized_objective(lp, row, cfg))


def test_penalty_dominance_via_doubling():
    # a feasible point with no worse raw objective must eventually win;
    # with any positive factor it already does, so the loop exits at once
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        u = rng.uniform(1, 10, size=n)
        m0 = float(rng.uniform(0.3, 0.9) * u.sum())
        lp = make_lp(rng.uniform(0.5, 3, size=n), m0, u)
        y = repair(rng.uniform(0, u), m0, u)
        x = np.clip(y + rng.uniform(-1, 1, size=n), 0, u)  # generally infeasible
        if abs(x.sum() - m0) < 1e-9 or objective(lp, y) < objective(lp, x):
            continue
        factor = 1e-6
        for _ in range(80):
            cfg = PenaltyConfig(eq_factor=factor)
            if penalized_objective(lp, y, cfg) > penalized_objective(lp, x, cfg):
                break
            factor *= 2
        else:
            pytest.fail("no finite factor made the feasible point dominate")


# --- repair ---------------------------------------------------------------------

def test_repair_examples():
    u = np.full(5, 60.0)
    assert np.allclose(repair(np.full(5, 100.0), 200.0, u), 40.0)
    assert np.allclose(repair(np.zeros(5), 200.0, u), 40.0)
    feasible = np.array([60.0, 0.0, 20.0, 60.0, 60.0])
    assert repair(feasible, 200.0, u).tolist() == feasible.tolist()


def test_repair_infeasible_bounds():
    with pytest.raises(BudgetInfeasibleError):
        repair(np.zeros(3), 100.0, np.full(3, 30.0))


@given(
    n=st.integers(1, 6),
    seed=st.integers(0, 2**32 - 1),
    fill=st.floats(0.05, 1.0),
)
def test_repair_feasibility_and_idempotence(n, seed, fill):
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.5, 20.0, size=n)
    m0 = float(fill * u.sum())
    x = rng.uniform(-5.0, 25.0, size=n)
    fixed = repair(x, m0, u)
    assert np.all(fixed >= 0.0) and np.all(fixed <= u)
    assert abs(fixed.sum() - m0) <= 1e-9 * max(1.0, m0)
    again = repair(fixed, m0, u)
    assert again.tobytes() == fixed.tobytes()
