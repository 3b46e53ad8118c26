"""Published generation tables and the target-recovery check on them."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

from .train import PAPER_TARGETS, AngleTargets

PRINT_PRECISION = 0.01


@dataclass(frozen=True)
class TableRow:
    table: int
    generation: int
    servo1_deg: float | None  # None where the source prints "-"
    servo2_deg: float | None
    error1_deg: float
    error2_deg: float


@dataclass(frozen=True)
class RowCheck:
    row: TableRow
    recovered: tuple[float | None, float | None]
    consistent: bool


def load_tables() -> list[TableRow]:
    text = resources.files("crawlnet").joinpath("data/paper_tables.csv").read_text(encoding="utf-8")
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        def opt(key):
            return float(rec[key]) if rec[key] else None

        rows.append(
            TableRow(
                int(rec["table"]),
                int(rec["generation"]),
                opt("servo1_deg"),
                opt("servo2_deg"),
                float(rec["error1_deg"]),
                float(rec["error2_deg"]),
            )
        )
    return rows


def check_rows(
    rows: list[TableRow] | None = None,
    targets: AngleTargets = PAPER_TARGETS,
    tol: float = PRINT_PRECISION,
) -> list[RowCheck]:
    """Recover ``servo + error`` per printed column and compare to targets.

    Cells missing from the source are skipped; a row is consistent when
    every printed pair lands within ``tol`` of its target.
    """
    rows = load_tables() if rows is None else rows
    out = []
    for r in rows:
        rec1 = None if r.servo1_deg is None else r.servo1_deg + r.error1_deg
        rec2 = None if r.servo2_deg is None else r.servo2_deg + r.error2_deg
        ok = all(
            rec is None or abs(rec - t) <= tol
            for rec, t in ((rec1, targets.servo1_deg), (rec2, targets.servo2_deg))
        )
        out.append(RowCheck(r, (rec1, rec2), ok))
    return out


def format_report(checks: list[RowCheck], targets: AngleTargets = PAPER_TARGETS) -> str:
    lines = []
    for c in checks:
        rec = " ".join("-" if v is None else f"{v:.3f}" for v in c.recovered)
        lines.append(
            f"table {c.row.table} generation {c.row.generation:>3}: recovered {rec}  "
            f"{'ok' if c.consistent else 'INCONSISTENT'}"
        )
    n_ok = sum(c.consistent for c in checks)
    lines.append(
        f"{n_ok}/{len(checks)} rows consistent with targets "
        f"({targets.servo1_deg:g}, {targets.servo2_deg:g})"
    )
    return "\n".join(lines)
