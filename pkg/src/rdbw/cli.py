"""Command line front end: CSV in, JSON/CSV out.

Four subcommands: `select` picks bandwidths from a data file, `estimate`
computes the jump ratio (with given or auto-selected bandwidths),
`simulate` runs the Monte Carlo engine on a built-in design, and
`dgp-sample` emits one raw simulated data set.  Every command exits 0 on
success and nonzero with a single-line error otherwise; all randomness
flows from an explicit seed.
"""

import argparse
import csv
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParseError, RdbwError, UsageError, ValidationError
from .estimator import frd_estimate
from .kernels import FAMILIES, KernelSpec
from .local_poly import Sample
from .selector import select_bandwidths
from .simlab import DgpSpec, draw_sample, run_monte_carlo

_COLUMNS = ("x", "y", "d")


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command plus everything it needs."""

    command: str
    input_path: Optional[str] = None
    cutoff: float = 0.0
    kernel: KernelSpec = KernelSpec()
    mode: str = "fuzzy"
    output_path: Optional[str] = None
    seed: int = 42
    reps: int = 1000
    n: int = 500
    design: Optional[str] = None
    method: str = "mmse_f"
    h_plus: Optional[float] = None
    h_minus: Optional[float] = None
    auto: bool = False
    error_sd: float = 0.1295
    rep_index: int = 0
    out_dir: str = "."
    jobs: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    # argparse wants to print-and-exit; surface a typed error instead
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rdbw", description="Two-sided bandwidth selection for jump-ratio estimation at a cutoff.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_flags(p):
        p.add_argument("--input", required=True, help="CSV file with columns x, y, d (header required)")
        p.add_argument("--cutoff", type=float, default=0.0, help="cutoff point (default 0)")
        p.add_argument("--kernel", choices=FAMILIES, default="triangular")
        p.add_argument("--mode", choices=("fuzzy", "sharp"), default="fuzzy")
        p.add_argument("--output", default=None, help="JSON output path (default: stdout)")

    p_sel = sub.add_parser("select", help="select bandwidths from a data file")
    add_data_flags(p_sel)

    p_est = sub.add_parser("estimate", help="estimate the jump ratio from a data file")
    add_data_flags(p_est)
    p_est.add_argument("--h-plus", type=float, default=None, help="right-side bandwidth")
    p_est.add_argument("--h-minus", type=float, default=None, help="left-side bandwidth")
    p_est.add_argument("--auto", action="store_true", help="select bandwidths first")

    p_sim = sub.add_parser("simulate", help="Monte Carlo run on a built-in design")
    p_sim.add_argument("--design", choices=("1", "2"), required=True)
    p_sim.add_argument("--method", choices=("mmse-f", "mmse-s"), default="mmse-f")
    p_sim.add_argument("--n", type=int, default=500)
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=42)
    p_sim.add_argument("--kernel", choices=FAMILIES, default="triangular")
    p_sim.add_argument("--error-sd", type=float, default=0.1295)
    p_sim.add_argument("--jobs", type=int, default=None, help="parallel worker processes")
    p_sim.add_argument("--out-dir", default=".", help="directory for cdf.csv and table.csv")
    p_sim.add_argument("--output", default=None, help="summary JSON path (default: stdout)")

    p_dgp = sub.add_parser("dgp-sample", help="emit one simulated data set as CSV")
    p_dgp.add_argument("--design", choices=("1", "2"), required=True)
    p_dgp.add_argument("--n", type=int, default=500)
    p_dgp.add_argument("--seed", type=int, default=42)
    p_dgp.add_argument("--error-sd", type=float, default=0.1295)
    p_dgp.add_argument("--rep-index", type=int, default=0)
    p_dgp.add_argument("--output", default=None, help="CSV output path (default: stdout)")
    return parser


def parse_args(argv) -> RunConfig:
    """Parse and validate a command line into a RunConfig."""
    ns = _build_parser().parse_args(argv)
    cmd = ns.command

    if cmd in ("select", "estimate"):
        cfg = RunConfig(
            command=cmd,
            input_path=ns.input,
            cutoff=ns.cutoff,
            kernel=KernelSpec(ns.kernel),
            mode=ns.mode,
            output_path=ns.output,
            h_plus=getattr(ns, "h_plus", None),
            h_minus=getattr(ns, "h_minus", None),
            auto=getattr(ns, "auto", False),
        )
        if cmd == "estimate":
            manual = cfg.h_plus is not None or cfg.h_minus is not None
            if cfg.auto and manual:
                raise UsageError("--auto excludes --h-plus/--h-minus")
            if not cfg.auto and (cfg.h_plus is None or cfg.h_minus is None):
                raise UsageError("estimate needs --auto or both --h-plus and --h-minus")
            if manual and (cfg.h_plus <= 0 or cfg.h_minus <= 0):
                raise UsageError("bandwidths must be positive")
        return cfg

    design = f"design{ns.design}"
    if cmd == "simulate":
        if ns.reps < 1:
            raise UsageError("--reps must be at least 1")
        return RunConfig(
            command=cmd,
            design=design,
            method=ns.method.replace("-", "_"),
            n=ns.n,
            reps=ns.reps,
            seed=ns.seed,
            kernel=KernelSpec(ns.kernel),
            error_sd=ns.error_sd,
            jobs=ns.jobs,
            out_dir=ns.out_dir,
            output_path=ns.output,
        )
    return RunConfig(
        command=cmd,
        design=design,
        n=ns.n,
        seed=ns.seed,
        error_sd=ns.error_sd,
        rep_index=ns.rep_index,
        output_path=ns.output,
    )


def load_csv(path: str, cutoff: float) -> Sample:
    """Read observations from a headered CSV file.

    The header must name columns x, y and d (case-insensitive, any
    order, extras ignored).  Error messages carry 1-based file line
    numbers.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot open {path}: {e.strerror}") from e
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: file is empty") from None
        names = [cell.strip().lower() for cell in header]
        try:
            idx = {col: names.index(col) for col in _COLUMNS}
        except ValueError:
            missing = [c for c in _COLUMNS if c not in names]
            raise ParseError(f"{path}: header lacks column(s) {', '.join(missing)}") from None

        cols = {col: [] for col in _COLUMNS}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < len(names):
                raise ParseError(f"{path}: row {line_no} has {len(row)} fields, expected {len(names)}")
            for col in _COLUMNS:
                cell = row[idx[col]].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}: row {line_no} column {col} is not a number: {cell!r}"
                    ) from None
                if not np.isfinite(value):
                    raise ValidationError(f"{path}: row {line_no} column {col} is not finite")
                cols[col].append(value)
            d_val = cols["d"][-1]
            if d_val not in (0.0, 1.0):
                raise ValidationError(f"{path}: row {line_no}: d must be 0 or 1, got {d_val:g}")

    try:
        return Sample(
            x=np.array(cols["x"]),
            y=np.array(cols["y"]),
            d=np.array(cols["d"]),
            c=cutoff,
        )
    except ValueError as e:
        raise ValidationError(f"{path}: {e}") from e


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _select_payload(result) -> dict:
    pair = result.bandwidths
    return {
        "h_plus": pair.h_plus,
        "h_minus": pair.h_minus,
        "regime": pair.regime,
        "objective_value": pair.objective_value,
        "pilots": dataclasses.asdict(result.pilots),
        "coefficients": dataclasses.asdict(result.coefficients),
    }


def _cmd_select(cfg: RunConfig) -> int:
    sample = load_csv(cfg.input_path, cfg.cutoff)
    result = select_bandwidths(sample, cfg.kernel, cfg.mode)
    _emit(_to_json(_select_payload(result)), cfg.output_path)
    return 0


def _cmd_estimate(cfg: RunConfig) -> int:
    sample = load_csv(cfg.input_path, cfg.cutoff)
    if cfg.auto:
        pair = select_bandwidths(sample, cfg.kernel, cfg.mode).bandwidths
        h_plus, h_minus = pair.h_plus, pair.h_minus
    else:
        h_plus, h_minus = cfg.h_plus, cfg.h_minus
    est = frd_estimate(sample, h_plus, h_minus, cfg.kernel)
    _emit(_to_json(dataclasses.asdict(est)), cfg.output_path)
    return 0


def _cmd_simulate(cfg: RunConfig) -> int:
    spec = DgpSpec(design=cfg.design, n=cfg.n, error_sd=cfg.error_sd, seed=cfg.seed)
    summary = run_monte_carlo(spec, cfg.method, cfg.reps, cfg.kernel, jobs=cfg.jobs)
    _emit(_to_json(dataclasses.asdict(summary)), cfg.output_path)

    os.makedirs(cfg.out_dir, exist_ok=True)
    with open(os.path.join(cfg.out_dir, "cdf.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "fraction"])
        for t, frac in summary.cdf:
            writer.writerow([f"{t:.17g}", f"{frac:.17g}"])
    with open(os.path.join(cfg.out_dir, "table.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        fields = [
            "method",
            "h_plus_mean",
            "h_plus_sd",
            "h_minus_mean",
            "h_minus_sd",
            "bias_trimmed",
            "rmse_trimmed",
            "reps_total",
            "reps_failed",
        ]
        writer.writerow(fields)
        writer.writerow([getattr(summary, f) for f in fields])
    return 0


def _cmd_dgp_sample(cfg: RunConfig) -> int:
    spec = DgpSpec(design=cfg.design, n=cfg.n, error_sd=cfg.error_sd, seed=cfg.seed)
    sample = draw_sample(spec, cfg.rep_index)
    lines = ["x,y,d"]
    for xi, yi, di in zip(sample.x, sample.y, sample.d):
        lines.append(f"{xi:.17g},{yi:.17g},{di:.0f}")
    _emit("\n".join(lines), cfg.output_path)
    return 0


_COMMANDS = {
    "select": _cmd_select,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "dgp-sample": _cmd_dgp_sample,
}


def main(argv=None) -> int:
    """Entry point; returns the process exit status."""
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_args(list(argv))
        return _COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 2
    except RdbwError as e:
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 1


def _one_line(e: Exception) -> str:
    return " ".join(str(e).split())


if __name__ == "__main__":
    sys.exit(main())
