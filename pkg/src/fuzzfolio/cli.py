"""Command-line interface: exact and heuristic sweeps over confidence levels.

Exit codes: 0 success, 2 validation failure, 3 budget-infeasible
instance, 4 threshold infeasible when --enforce-threshold is set.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import ica
from .errors import BudgetInfeasibleError, ValidationError
from .io import bundled_instance, bundled_names, load_instance
from .model import ConfidenceLevels, PortfolioInstance, reformulate, residuals
from .oracle import BUDGET_INFEASIBLE, solve_exact
from .penalty import PenaltyConfig
from .report import SweepRow, render_csv, render_json, render_table

__all__ = ["main", "BENCHMARK_LEVELS", "PUBLISHED_RESULTS"]

BENCHMARK_LEVELS = (0.1, 0.4, 0.7, 0.9)

# reference results published for the bundled five-asset benchmark
# (allocation and objective value per coupled lambda = eta level)
PUBLISHED_RESULTS = {
    0.1: ((60.0, 0.0, 20.0, 60.0, 60.0), 422.54),
    0.4: ((20.0, 0.0, 60.0, 60.0, 60.0), 289.3),
    0.7: ((20.0, 0.0, 60.0, 60.0, 60.0), 187.48),
    0.9: ((0.0, 60.0, 60.0, 20.0, 60.0), 95.56),
}

DEFAULT_INSTANCE = "paper_table1"


def _parse_seeds(text: str) -> list[int]:
    seeds = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo, _, hi = token.partition("..")
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad seed range {token!r}")
            if b < a:
                raise argparse.ArgumentTypeError(f"empty seed range {token!r}")
            seeds.extend(range(a, b + 1))
        else:
            try:
                seeds.append(int(token))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad seed {token!r}")
    return seeds


def _parse_levels(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzfolio",
        description="Portfolio selection under fuzzy random returns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve an instance over one or more confidence levels")
    solve.add_argument("--instance", default=DEFAULT_INSTANCE,
                       help="instance file path or bundled name (default: %(default)s)")
    solve.add_argument("--levels", action="append", type=_parse_levels, metavar="L[,L...]",
                       help="coupled lambda=eta levels; repeatable")
    solve.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="probability level (use with --eta for a decoupled pair)")
    solve.add_argument("--eta", type=float, default=None, help="necessity level")
    solve.add_argument("--solver", choices=("exact", "ica"), default="exact")
    solve.add_argument("--seeds", type=_parse_seeds, default=[0], metavar="RANGE",
                       help="ICA seeds, e.g. 7 or 1..20 or 1,5,9 (default: 0)")
    solve.add_argument("--iters", type=int, default=25, help="ICA iterations (default: %(default)s)")
    solve.add_argument("--countries", type=int, default=100)
    solve.add_argument("--imperialists", type=int, default=10)
    solve.add_argument("--revolution", type=float, default=0.2)
    solve.add_argument("--epsilon", type=float, default=0.05)
    solve.add_argument("--eq-factor", type=float, default=PenaltyConfig().eq_factor,
                       help="budget penalty factor for ICA (default: %(default)s)")
    solve.add_argument("--enforce-threshold", action="store_true",
                       help="penalize the return floor inside ICA and fail (exit 4) if it is unsatisfiable")
    _output_flags(solve)

    rep = sub.add_parser(
        "reproduce-paper",
        help="re-run the bundled benchmark at the published parameter set and compare",
    )
    rep.add_argument("--seeds", type=_parse_seeds, default=list(range(1, 21)), metavar="RANGE",
                     help="ICA seeds (default: 1..20)")
    _output_flags(rep)
    return parser


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json", "table"), default="table")


def _resolve_instance(name_or_path: str) -> tuple[PortfolioInstance, str]:
    if Path(name_or_path).exists():
        return load_instance(name_or_path), name_or_path
    if name_or_path in bundled_names():
        return bundled_instance(name_or_path), f"bundled:{name_or_path}"
    raise ValidationError(
        f"{name_or_path!r} is neither a file nor a bundled instance (bundled: {bundled_names()})"
    )


def _level_pairs(args) -> list[tuple[float, float]]:
    decoupled = args.lam is not None or args.eta is not None
    if decoupled:
        if args.levels:
            raise ValidationError("--lambda/--eta cannot be combined with --levels")
        if args.lam is None or args.eta is None:
            raise ValidationError("--lambda and --eta must be given together")
        return [(args.lam, args.eta)]
    if args.levels:
        flat = [v for chunk in args.levels for v in chunk]
    else:
        flat = list(BENCHMARK_LEVELS)
    return sorted({(v, v) for v in flat})


def _exact_row(lp, solution, published=None) -> SweepRow:
    pub_obj = pub_gap = None
    if published is not None:
        pub_obj = published[1]
        pub_gap = (solution.objective - pub_obj) / pub_obj
    res = residuals(lp, solution.x)
    return SweepRow(
        lam=lp.levels.lam,
        eta=lp.levels.eta,
        solver="exact",
        seed=None,
        status=solution.status,
        objective=solution.objective,
        oracle_objective=solution.objective,
        rel_gap=0.0,
        threshold=lp.threshold,
        threshold_ok=solution.threshold_satisfied,
        budget_residual=res.budget_residual,
        allocation=tuple(float(v) for v in solution.x),
        published_objective=pub_obj,
        published_gap=pub_gap,
    )


def _ica_row(lp, report, oracle_objective) -> SweepRow:
    gap = 0.0
    if oracle_objective != 0.0:
        gap = (oracle_objective - report.best_objective) / abs(oracle_objective)
    return SweepRow(
        lam=lp.levels.lam,
        eta=lp.levels.eta,
        solver="ica",
        seed=report.seed,
        status="heuristic",
        objective=report.best_objective,
        oracle_objective=oracle_objective,
        rel_gap=gap,
        threshold=lp.threshold,
        threshold_ok=report.best_objective >= lp.threshold,
        budget_residual=report.residuals.budget_residual,
        allocation=tuple(float(v) for v in report.best_position),
    )


def _emit(rows, args, meta) -> None:
    if args.format == "csv":
        text = render_csv(rows)
    elif args.format == "json":
        text = render_json(rows, meta)
    else:
        text = render_table(rows)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    instance, source = _resolve_instance(args.instance)
    pairs = _level_pairs(args)
    penalty_cfg = PenaltyConfig(eq_factor=args.eq_factor, enforce_threshold=args.enforce_threshold)
    base_ica = ica.IcaConfig(
        n_countries=args.countries,
        n_imperialists=args.imperialists,
        revolution_rate=args.revolution,
        max_iterations=args.iters,
        epsilon=args.epsilon,
    )
    rows: list[SweepRow] = []
    all_satisfied = True
    for lam, eta in pairs:
        lp = reformulate(instance, ConfidenceLevels(lam, eta))
        exact = solve_exact(lp)
        if exact.status == BUDGET_INFEASIBLE:
            raise BudgetInfeasibleError("upper bounds cannot absorb the total fund")
        all_satisfied &= exact.threshold_satisfied
        if args.solver == "exact":
            rows.append(_exact_row(lp, exact))
        else:
            for seed in args.seeds:
                report = ica.run(lp, penalty_cfg, dataclasses.replace(base_ica, seed=seed))
                rows.append(_ica_row(lp, report, exact.objective))
    rows.sort(key=lambda r: (r.lam, r.eta, r.solver, r.seed if r.seed is not None else -1))
    _emit(rows, args, {"instance": source, "solver": args.solver})
    if args.enforce_threshold and not all_satisfied:
        print("return threshold unsatisfiable at one or more levels", file=sys.stderr)
        return 4
    return 0


def _cmd_reproduce(args) -> int:
    instance = bundled_instance(DEFAULT_INSTANCE)
    penalty_cfg = PenaltyConfig()
    base_ica = ica.IcaConfig()  # the published parameter set is the default config
    rows: list[SweepRow] = []
    for level in BENCHMARK_LEVELS:
        lp = reformulate(instance, ConfidenceLevels(level, level))
        exact = solve_exact(lp)
        rows.append(_exact_row(lp, exact, published=PUBLISHED_RESULTS[level]))
        for seed in args.seeds:
            report = ica.run(lp, penalty_cfg, dataclasses.replace(base_ica, seed=seed))
            rows.append(_ica_row(lp, report, exact.objective))
    rows.sort(key=lambda r: (r.lam, r.eta, r.solver, r.seed if r.seed is not None else -1))
    _emit(rows, args, {"instance": f"bundled:{DEFAULT_INSTANCE}", "solver": "exact+ica"})
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_reproduce(args)
    except BudgetInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
