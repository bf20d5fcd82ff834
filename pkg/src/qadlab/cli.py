"""Command-line entry point binding the experiments to the filesystem.

Exit codes: 0 success, 2 validation/usage error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import experiments
from .povm import build_mub, fiducial_to_json, find_sic_fiducial, mub_povm


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("QADLAB_OUT") or "."
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _parse_dims(text: str):
    dims = tuple(int(x) for x in text.split(",") if x.strip())
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("dims must be integers >= 2")
    return dims


def _subparser_for(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise LookupError(command)


def _apply_config(parser, args):
    """--config <json> supplies defaults for flags not given explicitly."""
    if not getattr(args, "config", None):
        return args
    sub = _subparser_for(parser, args.command)
    with open(args.config) as fh:
        cfg = json.load(fh)
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, attr) == sub.get_default(attr):
            if attr == "dims" and isinstance(value, str):
                value = _parse_dims(value)
            elif attr == "dims":
                value = tuple(int(v) for v in value)
            setattr(args, attr, value)
    return args


def _add_common(sp, dims_default=None):
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None,
                    help="output directory (QADLAB_OUT fallback, then cwd)")
    sp.add_argument("--format", choices=("csv", "json", "both"),
                    default="both")
    sp.add_argument("--config", default=None,
                    help="JSON file providing defaults for these flags")
    if dims_default is not None:
        sp.add_argument("--dims", type=_parse_dims, default=dims_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qadlab",
        description="Single-copy state estimation experiments with "
                    "group-structured measurements")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("qubit-example", help="worked qubit example")
    _add_common(sp)

    sp = sub.add_parser("qudit-sweep", help="Monte Carlo qudit sweep")
    _add_common(sp, dims_default=experiments.DEFAULT_DIMS)
    sp.add_argument("--trials", type=int, default=experiments.DEFAULT_TRIALS)
    sp.add_argument("--purity", type=float,
                    default=experiments.DEFAULT_PURITY)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("capacity-scan", help="purity/capacity scan")
    _add_common(sp, dims_default=(2, 4, 8, 13))
    sp.add_argument("--trials", type=int, default=200)

    sp = sub.add_parser("adaptive-demo", help="two-stage adaptive protocol")
    _add_common(sp)
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--n-coarse", type=int, default=10000)

    sp = sub.add_parser("sic-search", help="SIC fiducial search")
    _add_common(sp, dims_default=(2, 3, 4, 5))
    sp.add_argument("--restarts", type=int, default=64)
    sp.add_argument("--max-iter", type=int, default=5000)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = sub.add_parser("mub-check", help="MUB construction check")
    _add_common(sp, dims_default=(2, 3, 5, 7, 11, 13))
    return parser


def _validate(args):
    if getattr(args, "trials", 1) < 1:
        raise ValueError("trials must be >= 1")
    if not (0.0 < getattr(args, "purity", 0.7) <= 1.0):
        raise ValueError("purity must lie in (0, 1]")
    if getattr(args, "threads", 1) < 1:
        raise ValueError("threads must be >= 1")


def _write_table(rows, columns, out=None):
    out = sys.stdout if out is None else out
    widths = [max(len(str(c)), max((len(str(r[i])) for r in rows),
                                   default=0)) for i, c in enumerate(columns)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*columns), file=out)
    for r in rows:
        print(fmt.format(*[str(x) for x in r]), file=out)


def _cmd_qubit_example(args, out_dir: Path) -> int:
    report = experiments.run_qubit_example()
    experiments.write_json(out_dir / "qubit_example.json", report)
    rows = [(r["method"], r["rank"],
             f"{r['uhlmann_fidelity']:.4f}", f"{r['linear_fidelity']:.4f}",
             f"{r['reference_fidelity']:.2f}",
             f"{r['discrepancy_vs_reference']:+.4f}")
            for r in report["rows"]]
    _write_table(rows, ("method", "rank", "uhlmann", "linear",
                        "reference", "discrepancy"))
    return 0


def _cmd_qudit_sweep(args, out_dir: Path) -> int:
    records, summary = experiments.run_qudit_sweep(
        dims=args.dims, trials=args.trials, target_purity=args.purity,
        master_seed=args.seed, threads=args.threads)
    if args.format in ("csv", "both"):
        experiments.write_records_csv(out_dir / "sweep_records.csv",
                                      records, experiments.SWEEP_FIELDS)
    if args.format in ("json", "both"):
        experiments.write_records_json(out_dir / "sweep_records.json",
                                       records, experiments.SWEEP_FIELDS)
    experiments.write_json(out_dir / "sweep_summary.json", summary)
    rows = []
    for d, entry in summary["per_dimension"].items():
        rows.append((d,
                     f"{entry['fidelity_standard']['mean']:.3f}",
                     f"{entry['fidelity_hw']['mean']:.3f}",
                     f"{entry['fidelity_matched']['mean']:.3f}",
                     f"{entry['ratio_hw_over_standard']:.2f}"))
    _write_table(rows, ("d", "standard", "hw", "matched", "hw/std"))
    return 0


def _cmd_capacity_scan(args, out_dir: Path) -> int:
    records = experiments.run_capacity_scan(
        dims=args.dims, trials=args.trials, master_seed=args.seed)
    if args.format in ("csv", "both"):
        experiments.write_records_csv(out_dir / "capacity_records.csv",
                                      records, experiments.CAPACITY_FIELDS)
    if args.format in ("json", "both"):
        experiments.write_records_json(out_dir / "capacity_records.json",
                                       records, experiments.CAPACITY_FIELDS)
    print(f"wrote {len(records)} capacity records for dims "
          f"{','.join(str(d) for d in args.dims)}")
    return 0


def _cmd_adaptive_demo(args, out_dir: Path) -> int:
    report = experiments.run_adaptive_demo(args.dim, args.n_coarse,
                                           master_seed=args.seed)
    experiments.write_json(out_dir / "adaptive_report.json", report)
    print(f"d={report['d']}  delta_q before={report['delta_q_before']:.4f} "
          f"after={report['delta_q_after']:.4f}  "
          f"fidelity adapted={report['fidelities']['adapted']:.4f} "
          f"baseline={report['fidelities']['baseline']:.4f}")
    return 0


def _cmd_sic_search(args, out_dir: Path) -> int:
    results = {}
    rows = []
    for d in args.dims:
        fid = find_sic_fiducial(d, restarts=args.restarts,
                                max_iter=args.max_iter, tol=args.tol,
                                seed=args.seed)
        results[str(d)] = fiducial_to_json(fid)
        rows.append((d, f"{fid.zauner_residual:.2e}", fid.converged))
    experiments.write_json(out_dir / "sic_fiducials.json", results)
    _write_table(rows, ("d", "zauner_residual", "converged"))
    return 0


def _cmd_mub_check(args, out_dir: Path) -> int:
    import numpy as np
    results = {}
    rows = []
    for d in args.dims:
        bases = build_mub(d)
        povm = mub_povm(bases)
        worst = 0.0
        for b1 in range(len(bases)):
            for b2 in range(b1 + 1, len(bases)):
                ov = np.abs(bases[b1].conj().T @ bases[b2]) ** 2
                worst = max(worst, float(np.max(np.abs(ov - 1.0 / d))))
        comp = float(np.linalg.norm(sum(povm.effects) - np.eye(d)))
        results[str(d)] = {"bases": len(bases), "effects": len(povm),
                           "max_unbiasedness_deviation": worst,
                           "completeness_residual": comp}
        rows.append((d, len(bases), f"{worst:.2e}", f"{comp:.2e}"))
    experiments.write_json(out_dir / "mub_report.json", results)
    _write_table(rows, ("d", "bases", "max_dev", "completeness"))
    return 0


_COMMANDS = {
    "qubit-example": _cmd_qubit_example,
    "qudit-sweep": _cmd_qudit_sweep,
    "capacity-scan": _cmd_capacity_scan,
    "adaptive-demo": _cmd_adaptive_demo,
    "sic-search": _cmd_sic_search,
    "mub-check": _cmd_mub_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(parser, args)
        _validate(args)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, _out_dir(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
