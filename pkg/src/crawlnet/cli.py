"""``crawlnet`` command line.

Exit status: 0 on success (a run that does not converge still counts as
success), 1 on domain or I/O errors, 2 on usage errors. All randomness
comes from ``--seed`` (default 0).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import crawler, experiments, store, tables
from .net import DenormMode, NetworkConfig, feedforward, init_network, denormalize
from .train import AngleTargets, InputPolicy, TrainingConfig, parse_schedule, train
from .experiments import CaseSpec, emit

DEFAULT_SEED = 0


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return a, b


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _schedule(text: str):
    try:
        return parse_schedule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _geometry(text: str) -> crawler.ArmGeometry:
    try:
        l1, l2, h = (float(t) for t in text.split(","))
        return crawler.ArmGeometry(l1, l2, h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"geometry must be L1,L2,HEIGHT: {exc}") from None


def _add_training_flags(p, hidden=2, lr=0.8, tolerance=1.0):
    p.add_argument("--hidden", type=int, default=hidden, help=f"hidden neurons (default {hidden})")
    p.add_argument("--lr", type=float, default=lr, help=f"learning rate (default {lr})")
    p.add_argument("--tolerance", type=float, default=tolerance, help=f"angle tolerance, degrees (default {tolerance})")
    p.add_argument("--max-gens", type=int, default=20_000, help="generation budget (default 20000)")
    p.add_argument("--schedule", type=_schedule, default="constant",
                   help="constant | exp:FACTOR | step:FACTOR:EVERY (default constant)")
    p.add_argument("--targets", type=_pair, default=(90.0, 120.0), help="servo targets in degrees (default 90,120)")
    p.add_argument("--mode", choices=[m.value for m in DenormMode], default=DenormMode.PAPER_STATED.value,
                   help="denormalization: paper (180x) or affine (360x-180); default paper")
    p.add_argument("--input-policy", choices=[m.value for m in InputPolicy], default=InputPolicy.FIXED_RANDOM.value,
                   help="draw the input once (fixed) or every generation (resample); default fixed")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")


def _spec_from_args(args, name: str) -> CaseSpec:
    return CaseSpec(
        name=name,
        hidden_size=args.hidden,
        learning_rate=args.lr,
        tolerance_deg=args.tolerance,
        targets=AngleTargets(*args.targets),
        repeats=getattr(args, "repeats", 1),
        base_seed=args.seed,
        denorm_mode=DenormMode(args.mode),
        max_generations=args.max_gens,
        lr_schedule=args.schedule,
        input_policy=InputPolicy(args.input_policy),
    )


def _status(run) -> str:
    if run.converged:
        return f"converged in {run.generations_used} generations"
    if run.aborted:
        return f"aborted after {run.generations_used} generations: {run.diagnostic}"
    return f"did not converge within {run.config.max_generations} generations"


def _write_outputs(run, args, title):
    if getattr(args, "out_csv", None):
        emit(run, "csv", args.out_csv)
    if getattr(args, "out_plot", None):
        emit(run, "plot", args.out_plot)
    if getattr(args, "out_table", None):
        emit(run, "table", args.out_table, title=title)


def cmd_train(args, out) -> int:
    spec = _spec_from_args(args, "train")
    net = init_network(NetworkConfig(hidden_size=spec.hidden_size, seed=args.seed))
    run = train(net, spec.training_config(args.seed), spec.targets)
    out.write(experiments.paper_table(run, title="train"))
    out.write(_status(run) + "\n")
    _write_outputs(run, args, "train")
    if args.out_model:
        meta = store.ModelMetadata(
            targets=spec.targets.as_tuple(),
            tolerance_deg=spec.tolerance_deg,
            learning_rate=spec.learning_rate,
            generations_used=run.generations_used,
            denorm_mode=spec.denorm_mode.value,
            seed=args.seed,
            input_value=run.input_value,
        )
        store.save(run.final_network, args.out_model, meta)
    return 0


def cmd_case(args, out) -> int:
    spec = experiments.PRESETS[args.name]
    overrides = {"base_seed": args.seed, "repeats": args.repeats}
    if args.max_gens is not None:
        overrides["max_generations"] = args.max_gens
    spec = replace(spec, **overrides)
    result = experiments.run_case(spec)
    out.write(result.table)
    for run in result.runs:
        out.write(f"seed {run.config.seed}: {_status(run)}\n")
    _write_outputs(result.runs[0], args, spec.name)
    return 0


def _print_sweep(results, out):
    out.write(f"{results[0].axis:>14}  {'converged':>9}  {'median_gens':>11}  {'mean_osc':>8}\n")
    for r in results:
        med = "-" if r.median_generations is None else f"{r.median_generations:g}"
        out.write(f"{r.value:>14g}  {r.convergence_rate:>9.2f}  {med:>11}  {r.mean_oscillations:>8.2f}\n")


def cmd_sweep(args, out) -> int:
    template = _spec_from_args(args, args.command)
    if args.command == "sweep-hidden":
        results = experiments.sweep_hidden(args.sizes, template)
    else:
        results = experiments.sweep_lr(args.rates, template)
    _print_sweep(results, out)
    if args.out_csv:
        emit(results, "csv", args.out_csv)
    return 0


def cmd_replay(args, out) -> int:
    if args.model:
        net, meta = store.load(args.model)
        mode = DenormMode(meta.denorm_mode or DenormMode.PAPER_STATED.value)
        x = 0.5 if meta.input_value is None else meta.input_value
        o = feedforward(net, x).output
        angles = [(denormalize(float(o[0]), mode), denormalize(float(o[1]), mode))] * args.cycles
    else:
        with open(args.run_csv, encoding="utf-8") as fh:
            records = experiments.parse_run_csv(fh.read())
        if not records:
            raise ValueError(f"{args.run_csv}: no generation rows")
        angles = [(r.servo1_deg, r.servo2_deg) for r in records]
    poses = crawler.replay_angles(angles, args.geometry, tuple(args.rest))
    lines = ["generation,x,y,heading"]
    lines += [f"{i},{p.x!r},{p.y!r},{p.heading!r}" for i, p in enumerate(poses, start=1)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    final = poses[-1]
    out.write(f"{len(poses)} cycles, final pose x={final.x:.3f} y={final.y:.3f} heading={final.heading:.1f}\n")
    return 0


def cmd_verify_tables(args, out) -> int:
    checks = tables.check_rows()
    out.write(tables.format_report(checks) + "\n")
    return 0 if all(c.consistent for c in checks) else 1


def cmd_derive_targets(args, out) -> int:
    t = crawler.derive_targets(args.geometry, tuple(args.rest), args.step, DenormMode(args.mode))
    out.write(f"{t.servo1_deg:g},{t.servo2_deg:g}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crawlnet", description="Online-trained servo network for a one-armed crawler.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("train", help="train one network and report its generations")
    _add_training_flags(p)
    p.add_argument("--out-model", help="save the final network here")
    p.add_argument("--out-csv", help="per-generation run CSV")
    p.add_argument("--out-plot", help="generation/error plot-data CSV")
    p.add_argument("--out-table", help="paper-style table text")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("case", help="run a preset replication case")
    p.add_argument("--name", choices=sorted(experiments.PRESETS), required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"base seed (default {DEFAULT_SEED})")
    p.add_argument("--repeats", type=int, default=1, help="seeds to run (default 1)")
    p.add_argument("--max-gens", type=int, default=None, help="override the preset budget")
    p.add_argument("--out-csv", help="run CSV of the first repeat")
    p.add_argument("--out-plot", help="plot-data CSV of the first repeat")
    p.add_argument("--out-table", help="paper-style table of the first repeat")
    p.set_defaults(func=cmd_case)

    p = sub.add_parser("sweep-hidden", help="paired-seed sweep over hidden sizes")
    _add_training_flags(p)
    p.add_argument("--sizes", type=_int_list, default=[2, 5, 10, 20, 25, 40])
    p.add_argument("--repeats", type=int, default=50)
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sweep-lr", help="paired-seed sweep over learning rates")
    _add_training_flags(p)
    p.add_argument("--rates", type=_float_list, default=[0.1, 0.3, 0.5, 0.8, 0.9])
    p.add_argument("--repeats", type=int, default=50)
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay", help="drive the crawler simulator with a model or a run CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="saved model file")
    src.add_argument("--run-csv", help="run CSV written by train/case")
    p.add_argument("--geometry", type=_geometry, default=crawler.DEFAULT_GEOMETRY,
                   help="L1,L2,SHOULDER_HEIGHT in cm (default 5,5,6)")
    p.add_argument("--rest", type=_pair, default=crawler.DEFAULT_REST, help="rest pose in degrees (default 90,180)")
    p.add_argument("--cycles", type=int, default=10, help="strokes to replay from a model (default 10)")
    p.add_argument("--out", help="trajectory CSV (generation,x,y,heading)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify-tables", help="check servo + error = targets on the published tables")
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("derive-targets", help="grid-search the servo pair with the longest crawl stroke")
    p.add_argument("--geometry", type=_geometry, default=crawler.DEFAULT_GEOMETRY)
    p.add_argument("--rest", type=_pair, default=crawler.DEFAULT_REST)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--mode", choices=[m.value for m in DenormMode], default=DenormMode.TABLE_AFFINE.value)
    p.set_defaults(func=cmd_derive_targets)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(err)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(err)
        return 2
    try:
        return args.func(args, out)
    except (ValueError, OSError) as exc:
        err.write(f"crawlnet {args.command}: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
