"""Replication cases, hyperparameter sweeps, and their text/CSV outputs."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

from .net import DenormMode, NetworkConfig, init_network
from .train import (
    PAPER_TARGETS,
    AngleTargets,
    Constant,
    GenerationRecord,
    InputPolicy,
    LRSchedule,
    TrainingConfig,
    TrainingRun,
    train,
)

TABLE_GENERATIONS = (1, 2, 3, 4, 5, 10, 15, 20, 30, 50, 75, 100)

RUN_COLUMNS = ("generation", "servo1_deg", "servo2_deg", "error1_deg", "error2_deg", "cost", "lr_used")
PLOT_COLUMNS = ("generation", "error1_deg", "error2_deg")
SWEEP_COLUMNS = ("axis_value", "repeat", "converged", "generations", "oscillations")


@dataclass(frozen=True)
class CaseSpec:
    name: str
    hidden_size: int
    learning_rate: float
    tolerance_deg: float
    targets: AngleTargets = PAPER_TARGETS
    repeats: int = 1
    base_seed: int = 0
    denorm_mode: DenormMode = DenormMode.PAPER_STATED
    max_generations: int = 20_000
    lr_schedule: LRSchedule = field(default_factory=Constant)
    input_policy: InputPolicy = InputPolicy.FIXED_RANDOM

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        object.__setattr__(self, "denorm_mode", DenormMode(self.denorm_mode))

    def training_config(self, seed: int) -> TrainingConfig:
        return TrainingConfig(
            learning_rate=self.learning_rate,
            tolerance_deg=self.tolerance_deg,
            max_generations=self.max_generations,
            lr_schedule=self.lr_schedule,
            input_policy=self.input_policy,
            denorm_mode=self.denorm_mode,
            seed=seed,
        )


# The published tables print negative servo angles, which only the affine
# mapping can produce, so the replication presets use it.
PRESETS = {
    "case1": CaseSpec("case1", hidden_size=2, learning_rate=0.8, tolerance_deg=1.0,
                      denorm_mode=DenormMode.TABLE_AFFINE),
    "case2": CaseSpec("case2", hidden_size=2, learning_rate=0.5, tolerance_deg=5.0,
                      denorm_mode=DenormMode.TABLE_AFFINE),
    "hardware-replica": CaseSpec("hardware-replica", hidden_size=20, learning_rate=0.3,
                                 tolerance_deg=1.0, denorm_mode=DenormMode.TABLE_AFFINE),
}


@dataclass
class CaseResult:
    spec: CaseSpec
    runs: list[TrainingRun]

    @property
    def table(self) -> str:
        return paper_table(self.runs[0], title=self.spec.name)


@dataclass(frozen=True)
class SweepResult:
    axis: str
    value: float
    generations: tuple[int | None, ...]  # None where the repeat did not converge
    oscillations: tuple[int, ...]

    @property
    def convergence_rate(self) -> float:
        return sum(g is not None for g in self.generations) / len(self.generations)

    @property
    def median_generations(self) -> float | None:
        done = [g for g in self.generations if g is not None]
        return float(statistics.median(done)) if done else None

    @property
    def mean_oscillations(self) -> float:
        return statistics.fmean(self.oscillations)


def run_seed(spec: CaseSpec, seed: int) -> TrainingRun:
    net = init_network(NetworkConfig(hidden_size=spec.hidden_size, seed=seed))
    return train(net, spec.training_config(seed), spec.targets)


def run_case(spec: CaseSpec) -> CaseResult:
    """Train ``spec.repeats`` networks seeded ``base_seed + i``.

    An aborted repeat stays in the result with its diagnostic set.
    """
    runs = [run_seed(spec, spec.base_seed + i) for i in range(spec.repeats)]
    return CaseResult(spec, runs)


def oscillation_count(run: TrainingRun) -> int:
    """Sign changes of the servo-1 error over the run (zeros skipped)."""
    count = 0
    prev = 0.0
    for r in run.records:
        e = r.error1_deg
        if e == 0.0:
            continue
        if prev != 0.0 and (e > 0) != (prev > 0):
            count += 1
        prev = e
    return count


def _sweep(axis: str, values, make_spec) -> list[SweepResult]:
    values = list(values)
    if not values:
        raise ValueError(f"{axis} sweep needs at least one value")
    # build every spec first so a bad value fails before any training runs
    specs = [make_spec(v) for v in values]
    out = []
    for v, spec in zip(values, specs):
        runs = run_case(spec).runs
        out.append(
            SweepResult(
                axis=axis,
                value=v,
                generations=tuple(r.generations_used if r.converged else None for r in runs),
                oscillations=tuple(oscillation_count(r) for r in runs),
            )
        )
    return out


def sweep_hidden(sizes, template: CaseSpec) -> list[SweepResult]:
    """Paired comparison: every size sees the same seeds."""
    def make(h):
        NetworkConfig(hidden_size=h)
        return replace(template, hidden_size=h)

    return _sweep("hidden_size", sizes, make)


def sweep_lr(rates, template: CaseSpec) -> list[SweepResult]:
    def make(rate):
        if not rate > 0:
            raise ValueError(f"learning rate must be > 0, got {rate}")
        return replace(template, learning_rate=rate)

    return _sweep("learning_rate", rates, make)


def table_rows(run: TrainingRun) -> list[GenerationRecord]:
    if not run.records:
        return []
    last = run.records[-1].generation
    wanted = set(g for g in TABLE_GENERATIONS if g <= last) | {last}
    return [r for r in run.records if r.generation in wanted]


def paper_table(run: TrainingRun, title: str = "run") -> str:
    cfg = run.config
    status = "converged" if run.converged else ("aborted: " + run.diagnostic if run.aborted else "not converged")
    head = (
        f"# {title}: seed={cfg.seed} lr={cfg.learning_rate:g} schedule={cfg.lr_schedule} "
        f"tolerance={cfg.tolerance_deg:g} mode={cfg.denorm_mode.value} "
        f"targets=({run.targets.servo1_deg:g}, {run.targets.servo2_deg:g})\n"
        f"# {status} after {run.generations_used} generations\n"
    )
    cols = f"{'Generation':>10}  {'Servo 1 (°)':>12}  {'Servo 2 (°)':>12}  {'Error 1 (°)':>12}  {'Error 2 (°)':>12}\n"
    body = "".join(
        f"{r.generation:>10}  {r.servo1_deg:>12.3f}  {r.servo2_deg:>12.3f}  "
        f"{r.error1_deg:>12.3f}  {r.error2_deg:>12.3f}\n"
        for r in table_rows(run)
    )
    return head + cols + body


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run_csv(run: TrainingRun) -> str:
    return _csv_text(
        RUN_COLUMNS,
        (
            (r.generation, repr(r.servo1_deg), repr(r.servo2_deg), repr(r.error1_deg),
             repr(r.error2_deg), repr(r.cost), repr(r.lr_used))
            for r in run.records
        ),
    )


def plot_csv(run: TrainingRun) -> str:
    return _csv_text(
        PLOT_COLUMNS,
        ((r.generation, repr(r.error1_deg), repr(r.error2_deg)) for r in run.records),
    )


def sweep_csv(results: list[SweepResult]) -> str:
    rows = []
    for res in results:
        for i, (g, osc) in enumerate(zip(res.generations, res.oscillations)):
            rows.append((repr(res.value) if isinstance(res.value, float) else res.value, i,
                         int(g is not None), "" if g is None else g, osc))
    return _csv_text(SWEEP_COLUMNS, rows)


def parse_run_csv(text: str) -> list[GenerationRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != RUN_COLUMNS:
        raise ValueError(f"not a run CSV: header {header!r}")
    return [
        GenerationRecord(int(row[0]), *(float(v) for v in row[1:]))
        for row in reader
        if row
    ]


FORMATS = ("csv", "table", "plot")


def emit(data, fmt: str, path, title: str = "run") -> Path:
    """Write a run or a sweep to ``path`` in one of :data:`FORMATS`.

    Runs accept all three formats; a sweep (list of :class:`SweepResult`)
    only ``csv``.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    if isinstance(data, TrainingRun):
        if not data.records:
            raise ValueError("run has no records to emit")
        if fmt == "table":
            text = paper_table(data, title=title)
        else:
            text = {"csv": run_csv, "plot": plot_csv}[fmt](data)
    else:
        data = list(data)
        if not data:
            raise ValueError("sweep has no results to emit")
        if fmt != "csv":
            raise ValueError("sweeps can only be emitted as csv")
        text = sweep_csv(data)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path
