from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

import pandas as pd

from ..errors import DataError
from .sweep import SweepResult

logger = logging.getLogger("costwise.evaluation")

Objective = Tuple[str, str]  # (column, "min" | "max")

DEFAULT_OBJECTIVES: Tuple[Objective, ...] = (
    ("cost_financial", "min"),
    ("cost_caregiver_time", "min"),
    ("auc", "max"),
)


def _oriented(row: Mapping[str, Any], objectives: Sequence[Objective]) -> Tuple[float, ...]:
    # alles omzetten naar "groter is beter"
    out = []
    for key, sense in objectives:
        if key not in row:
            raise DataError(f"missing objective column '{key}'")
        v = float(row[key])
        out.append(-v if sense == "min" else v)
    return tuple(out)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """a is at least as good everywhere and strictly better somewhere."""
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def pareto_frontier(
    rows: Sequence[Mapping[str, Any]],
    objectives: Sequence[Objective] = DEFAULT_OBJECTIVES,
) -> List[Mapping[str, Any]]:
    """
    Rows not strictly dominated by any other row, in input order.

    Rows with status "error" or a NaN objective are left out. Identical
    points do not dominate each other, so duplicates are all kept.
    """
    for _, sense in objectives:
        if sense not in ("min", "max"):
            raise ValueError(f"objective sense must be 'min' or 'max', got '{sense}'")
    usable = []
    for r in rows:
        if str(r.get("status", "ok")) == "error":
            continue
        pt = _oriented(r, objectives)
        if any(math.isnan(v) for v in pt):
            continue
        usable.append((r, pt))
    return [r for r, p in usable if not any(dominates(q, p) for _, q in usable)]


@dataclass(frozen=True)
class FrontierComparison:
    matched: int
    wins: int

    @property
    def fraction(self) -> float:
        return self.wins / self.matched if self.matched else float("nan")


def compare_frontiers(
    group: Sequence[Mapping[str, Any]],
    baseline: Sequence[Mapping[str, Any]],
    cost_key: str = "cost_financial",
    auc_key: str = "auc",
    auc_tol: float = 0.0,
) -> FrontierComparison:
    """
    Match every point of the baseline's (cost, AUC) frontier with the best
    group model that costs no more, and count how often that model is at
    least as accurate (within `auc_tol`). Baseline points cheaper than every
    group model are not matched.
    """
    objectives = ((cost_key, "min"), (auc_key, "max"))
    g_front = pareto_frontier(group, objectives)
    b_front = pareto_frontier(baseline, objectives)
    matched = wins = 0
    for b in b_front:
        cost, auc = float(b[cost_key]), float(b[auc_key])
        candidates = [float(g[auc_key]) for g in g_front if float(g[cost_key]) <= cost]
        if not candidates:
            continue
        matched += 1
        if max(candidates) >= auc - auc_tol:
            wins += 1
    return FrontierComparison(matched=matched, wins=wins)


# ------------------------------------------------------------
# CSV
# ------------------------------------------------------------
def report_rows(results: Sequence[SweepResult]) -> List[Dict[str, Any]]:
    return [r.report.to_row() for r in results]


def write_sweep_csv(rows: Sequence[Mapping[str, Any]], path: Union[str, Path]) -> Path:
    p = Path(path)
    frame = pd.DataFrame(list(rows))
    frame.to_csv(p, index=False, float_format="%.17g")
    logger.info("[sweep] wrote %s (%d rows)", p.name, len(frame))
    return p


def read_sweep_csv(path: Union[str, Path]) -> List[Dict[str, Any]]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"sweep file not found: {p}")
    try:
        frame = pd.read_csv(p, keep_default_na=False, na_values=[""], float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"sweep file {p} is malformed: {e}") from e
    missing = [c for c in ("auc", "status") if c not in frame.columns]
    if missing:
        raise DataError(f"sweep file {p} lacks column '{missing[0]}'")
    return frame.to_dict(orient="records")


def write_frontier_csv(
    sweep_path: Union[str, Path],
    out_path: Union[str, Path],
    objectives: Sequence[Objective] = DEFAULT_OBJECTIVES,
) -> List[Mapping[str, Any]]:
    """Frontier of a sweep CSV; objectives the file has no column for are skipped."""
    rows = read_sweep_csv(sweep_path)
    present = [o for o in objectives if rows and o[0] in rows[0]]
    front = pareto_frontier(rows, present) if present else []
    columns = list(rows[0].keys()) if rows else []
    pd.DataFrame(front, columns=columns).to_csv(Path(out_path), index=False, float_format="%.17g")
    logger.info("[frontier] %d of %d rows on the frontier", len(front), len(rows))
    return front
