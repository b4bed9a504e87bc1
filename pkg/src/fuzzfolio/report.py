"""Sweep rows and their CSV / JSON / table renderings.

One row per (level, solver, seed); the human table is derived from the
same rows, aggregating ICA seeds per level.  Output is a pure function
of the rows, so identical command lines yield identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass

__all__ = ["SweepRow", "CSV_COLUMNS", "render_csv", "render_json", "render_table"]

CSV_COLUMNS = (
    "lambda",
    "eta",
    "solver",
    "seed",
    "status",
    "objective",
    "oracle_objective",
    "rel_gap",
    "threshold",
    "threshold_ok",
    "budget_residual",
    "published_objective",
    "published_gap",
    "allocation",
)


@dataclass(frozen=True)
class SweepRow:
    lam: float
    eta: float
    solver: str
    seed: int | None
    status: str
    objective: float
    oracle_objective: float
    rel_gap: float
    threshold: float
    threshold_ok: bool
    budget_residual: float
    allocation: tuple[float, ...]
    published_objective: float | None = None
    published_gap: float | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _cells(row: SweepRow) -> list[str]:
    return [
        _fmt(row.lam),
        _fmt(row.eta),
        row.solver,
        _fmt(row.seed),
        row.status,
        _fmt(row.objective),
        _fmt(row.oracle_objective),
        _fmt(row.rel_gap),
        _fmt(row.threshold),
        _fmt(row.threshold_ok),
        _fmt(row.budget_residual),
        _fmt(row.published_objective),
        _fmt(row.published_gap),
        ";".join(_fmt(v) for v in row.allocation),
    ]


def render_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(_cells(row))
    return buf.getvalue()


def render_json(rows: list[SweepRow], meta: dict) -> str:
    payload = {
        **meta,
        "rows": [
            {
                "lambda": r.lam,
                "eta": r.eta,
                "solver": r.solver,
                "seed": r.seed,
                "status": r.status,
                "objective": r.objective,
                "oracle_objective": r.oracle_objective,
                "rel_gap": r.rel_gap,
                "threshold": r.threshold,
                "threshold_ok": r.threshold_ok,
                "budget_residual": r.budget_residual,
                "published_objective": r.published_objective,
                "published_gap": r.published_gap,
                "allocation": list(r.allocation),
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _num(value: float) -> str:
    return format(value, ".6g")


def _pct(value: float) -> str:
    return format(value, ".3%")


def render_table(rows: list[SweepRow]) -> str:
    """Per-level summary: the exact row as is, ICA seeds aggregated."""
    lines = []
    levels = sorted({(r.lam, r.eta) for r in rows})
    for lam, eta in levels:
        lines.append(f"lambda={_fmt(lam)} eta={_fmt(eta)}")
        group = [r for r in rows if (r.lam, r.eta) == (lam, eta)]
        exact = [r for r in group if r.solver == "exact"]
        ica = [r for r in group if r.solver == "ica"]
        for r in exact:
            lines.append(
                f"  exact   objective {_num(r.objective):>10}  threshold {_num(r.threshold)}"
                f"  satisfied {_fmt(r.threshold_ok)}  x = [{', '.join(_num(v) for v in r.allocation)}]"
            )
            if r.published_objective is not None:
                lines.append(
                    f"          published {_num(r.published_objective):>10}"
                    f"  deviation {_pct(r.published_gap)}"
                )
        if ica:
            objs = [r.objective for r in ica]
            best = max(ica, key=lambda r: r.objective)
            lines.append(
                f"  ica     seeds {len(ica):>3}  best {_num(max(objs))}  median {_num(statistics.median(objs))}"
                f"  worst {_num(min(objs))}  gap(best) {_pct(best.rel_gap)}"
            )
            lines.append(
                f"          best x = [{', '.join(_num(v) for v in best.allocation)}] (seed {best.seed})"
            )
    return "\n".join(lines) + "\n"
