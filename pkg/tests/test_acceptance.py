"""Exit criteria. Each test prints one PASS/FAIL line (see the summary)."""

import io
import statistics
import time
from dataclasses import replace

import numpy as np

from crawlnet import DenormMode, NetworkConfig, backprop_update, feedforward, finite_diff_gradient, init_network
from crawlnet import experiments as ex
from crawlnet.cli import main
from crawlnet.crawler import DEFAULT_GEOMETRY, DEFAULT_REST, ArmGeometry, arm_tip, derive_targets, stroke
from crawlnet.store import load, save
from crawlnet.tables import check_rows

from conftest import random_triples

SEEDS = 100
SWEEP_REPEATS = 50

# Case 1 hyperparameters with the library-default denormalization, used for
# the hidden-size and learning-rate sweeps.
SWEEP_TEMPLATE = replace(ex.PRESETS["case1"], denorm_mode=DenormMode.PAPER_STATED, repeats=SWEEP_REPEATS)


def test_1_gradient_oracle(report):
    t0 = time.perf_counter()
    worst = worst_abs = 0.0
    for net, x, target in random_triples(100):
        _, grad = backprop_update(net, x, target, lr=0.1)
        fd = finite_diff_gradient(net, x, target, h=1e-6)
        diff = np.abs(grad - fd)
        rel = np.where(diff <= 1e-10, 0.0, diff / np.maximum(np.abs(grad), np.abs(fd)))
        worst = max(worst, float(rel.max()))
        worst_abs = max(worst_abs, float(diff.max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 10
    report("1 gradient oracle", ok, f"max rel err {worst:.2e} (< 1e-6, abs floor 1e-10), max abs diff {worst_abs:.1e}, {elapsed:.2f}s (< 10s)")
    assert ok


def test_2_table_fixture_verification(report):
    t0 = time.perf_counter()
    checks = check_rows()
    elapsed = time.perf_counter() - t0
    bad = [f"T{c.row.table}/g{c.row.generation}" for c in checks if not c.consistent]
    ok = len(checks) == 26 and not bad and elapsed < 1
    report("2 table fixtures", ok,
           f"{len(checks) - len(bad)}/{len(checks)} rows give (90, 120) within 0.01"
           + (f"; inconsistent: {', '.join(bad)}" if bad else "") + f", {elapsed:.3f}s")
    assert ok


def test_3_case1_statistical_replication(report):
    t0 = time.perf_counter()
    runs = ex.run_case(replace(ex.PRESETS["case1"], repeats=SEEDS, max_generations=20_000)).runs
    elapsed = time.perf_counter() - t0
    gens = [r.generations_used for r in runs if r.converged]
    rate = len(gens) / SEEDS
    median = statistics.median(gens) if gens else float("nan")
    ok = rate >= 0.95 and 30 <= median <= 3000 and elapsed < 60
    report("3 case 1 replication", ok,
           f"converged {rate:.0%} (>= 95%), median {median:g} generations in [30, 3000] "
           f"(published single run: 148), {elapsed:.1f}s")
    assert ok


def test_4_case2_paired_stop(report):
    t0 = time.perf_counter()
    loose = ex.run_case(replace(ex.PRESETS["case2"], repeats=SEEDS, tolerance_deg=5.0)).runs
    tight = ex.run_case(replace(ex.PRESETS["case2"], repeats=SEEDS, tolerance_deg=1.0)).runs
    elapsed = time.perf_counter() - t0
    prefix = sum(a.generations_used <= b.generations_used for a, b in zip(loose, tight))
    rate = sum(r.converged for r in loose) / SEEDS
    median = statistics.median(r.generations_used for r in loose if r.converged)
    ok = prefix == SEEDS and rate >= 0.95 and elapsed < 60
    report("4 case 2 paired stop", ok,
           f"{prefix}/{SEEDS} seeds stop no later at 5 deg than at 1 deg, converged {rate:.0%} (>= 95%), "
           f"median {median:g} (published: 156), {elapsed:.1f}s")
    assert ok


def _medians(results):
    return {r.value: r.median_generations for r in results}


def test_5_hidden_size_trend(report):
    t0 = time.perf_counter()
    med = _medians(ex.sweep_hidden([2, 5, 10, 20, 25, 40], SWEEP_TEMPLATE))
    elapsed = time.perf_counter() - t0
    gap = abs(med[40] - med[25])
    ok = med[20] <= med[2] and gap <= 0.25 * med[25] and elapsed < 300
    # informational only: the same sweep under the affine mapping
    affine = _medians(ex.sweep_hidden([25, 40], replace(SWEEP_TEMPLATE, denorm_mode=DenormMode.TABLE_AFFINE)))
    report("5 hidden-size trend", ok,
           "medians " + ", ".join(f"{k}:{v:g}" for k, v in med.items())
           + f"; |m40 - m25| = {gap:g} <= {0.25 * med[25]:g}, {elapsed:.1f}s"
           + f" [affine mode, not asserted: m25 {affine[25]:g}, m40 {affine[40]:g}]")
    assert ok


def test_6_learning_rate_overshoot(report):
    t0 = time.perf_counter()
    slow, fast = ex.sweep_lr([0.1, 0.9], SWEEP_TEMPLATE)
    elapsed = time.perf_counter() - t0
    ok = fast.mean_oscillations >= slow.mean_oscillations and elapsed < 120
    report("6 learning-rate overshoot", ok,
           f"mean oscillations lr 0.9: {fast.mean_oscillations:.2f} >= lr 0.1: {slow.mean_oscillations:.2f}, "
           f"{elapsed:.1f}s")
    assert ok


def test_7_persistence(report, tmp_path):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    exact = identical = 0
    for i in range(100):
        net = init_network(NetworkConfig(hidden_size=(1, 2, 20, 25)[i % 4], seed=5000 + i))
        save(net, tmp_path / "m.model")
        back, _ = load(tmp_path / "m.model")
        exact += back.to_vector().tobytes() == net.to_vector().tobytes()
        x = float(rng.uniform(-1, 2))
        a, b = feedforward(net, x), feedforward(back, x)
        identical += all(getattr(a, f).tobytes() == getattr(b, f).tobytes()
                         for f in ("hidden_pre", "hidden_out", "output_pre", "output"))
    elapsed = time.perf_counter() - t0
    ok = exact == identical == 100 and elapsed < 5
    report("7 persistence", ok, f"{exact}/100 exact round trips, {identical}/100 identical traces, {elapsed:.2f}s")
    assert ok


def test_8_determinism(report, tmp_path):
    captured = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        d.mkdir()
        out = io.StringIO()
        code = main(["case", "--name", "case1", "--seed", "7", "--out-csv", str(d / "run.csv"),
                     "--out-table", str(d / "table.txt"), "--out-plot", str(d / "plot.csv")], out=out)
        captured.append((code, out.getvalue(), *(p.read_bytes() for p in sorted(d.iterdir()))))
    ok = captured[0] == captured[1] and captured[0][0] == 0
    report("8 determinism", ok, "case1 seed 7 twice: stdout, table, run CSV and plot CSV byte-identical")
    assert ok


def test_9_kinematics_oracle(report):
    t0 = time.perf_counter()
    g = ArmGeometry(5, 5, 0)
    tips_ok = all(
        np.allclose(arm_tip(g, a, b), want, atol=1e-12)
        for a, b, want in ((0, 180, (10, 0)), (90, 180, (0, 10)), (90, 90, (5, 5)))
    )
    t = derive_targets(DEFAULT_GEOMETRY, DEFAULT_REST, 1.0)
    best = stroke(DEFAULT_GEOMETRY, t.servo1_deg, t.servo2_deg, *DEFAULT_REST)
    grid = np.arange(-180.0, 181.0, 1.0)
    rescan = max(stroke(DEFAULT_GEOMETRY, a, b, *DEFAULT_REST) for a in grid for b in grid)
    elapsed = time.perf_counter() - t0
    ok = tips_ok and rescan <= best and best > 0 and elapsed < 10
    report("9 kinematics oracle", ok,
           f"arm_tip examples {'ok' if tips_ok else 'WRONG'}; targets ({t.servo1_deg:g}, {t.servo2_deg:g}) "
           f"stroke {best:.4f} cm, rescan max {rescan:.4f} cm, {elapsed:.2f}s")
    assert ok
