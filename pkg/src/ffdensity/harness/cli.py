"""Command line entry point: ``ffdensity --mode ...`` or ``python -m ffdensity``.

Exit codes: 0 success, 1 a verification suite failed, 2 bad configuration,
3 a shift sits too close to a pole of the predicted series.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from ..densities import SmallDenominator
from ..kernels import BACKEND
from ..ratios.recipe import TAIL_VARIANTS, PoleProximityError
from . import commands, report
from .config import MODES, PRECISIONS, SWEEP_LEVELS, ConfigError, RunConfig, validate
from .suites import GRIDS

EXIT_OK, EXIT_SUITE, EXIT_CONFIG, EXIT_POLE = 0, 1, 2, 3


def _int_list(text: str) -> tuple:
    """'1,2' or '2..7' (inclusive) or a mix: '1,3..5'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _float_list(text: str) -> tuple:
    return tuple(float(p) for p in text.split(",") if p.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffdensity",
                                description="Level densities of quadratic L-functions over F_q[x].")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--q", type=int, default=5, help="field size, a prime = 1 mod 4")
    p.add_argument("--g", type=int, default=1, help="genus; discriminants have degree 2g+1")
    p.add_argument("--N", type=int, default=1, help="support cutoff of the test function")
    for name, default in (("alpha", 0.01), ("beta", 0.02), ("gamma", 0.0), ("delta", 0.0)):
        p.add_argument(f"--{name}-re", type=float, default=default)
        p.add_argument(f"--{name}-im", type=float, default=0.0)
    p.add_argument("--tail-variant", choices=TAIL_VARIANTS, default="geometric")
    p.add_argument("--cutoff", type=int, default=None, help="prime degree cutoff (default max(30, 4g+10))")
    p.add_argument("--order", type=int, default=None, help="series truncation order (default N+2)")
    p.add_argument("--precision", choices=PRECISIONS, default="double")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", choices=tuple(GRIDS), default="quick", help="verify-lemmas grid size")
    p.add_argument("--timings", action="store_true",
                   help="embed wall-clock timings in the report (makes it non-reproducible)")
    sw = p.add_argument_group("sweep")
    sw.add_argument("--sweep-level", choices=SWEEP_LEVELS, default="two-level")
    sw.add_argument("--sweep-g", type=_int_list, default=(1, 2), help="e.g. 1,2 or 1..3")
    sw.add_argument("--sweep-N", type=_int_list, default=(2, 3, 4, 5, 6, 7), help="e.g. 2..7")
    sw.add_argument("--sweep-alpha", type=_float_list, default=(),
                    help="real alpha values; default is the single --alpha-re/--alpha-im")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        mode=ns.mode, q=ns.q, g=ns.g, N=ns.N,
        alpha=complex(ns.alpha_re, ns.alpha_im), beta=complex(ns.beta_re, ns.beta_im),
        gamma=complex(ns.gamma_re, ns.gamma_im), delta=complex(ns.delta_re, ns.delta_im),
        tail_variant=ns.tail_variant, cutoff=ns.cutoff, order=ns.order, precision=ns.precision,
        output_path=ns.out, seed=ns.seed, threads=ns.threads, grid=ns.grid,
        sweep_level=ns.sweep_level, sweep_g=ns.sweep_g, sweep_N=ns.sweep_N,
        sweep_alpha=tuple(complex(a) for a in ns.sweep_alpha),
    )


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _emit_timings(timings: dict) -> None:
    print(json.dumps({"backend": BACKEND, "timings": timings}, sort_keys=True), file=sys.stderr)


def run(cfg: RunConfig, embed_timings: bool = False) -> int:
    """Execute a validated config and write its output."""
    if cfg.nudged:
        print(f"note: beta nudged from {cfg.nudged['from']} to {cfg.nudged['to']} "
              "(alpha and beta nearly equal)", file=sys.stderr)
    if cfg.mode == "sweep":
        with _output(cfg.output_path) as fh:
            sink = report.CsvSink(fh)
            try:
                _, status, timings = commands.cmd_sweep(cfg, sink)
            except KeyboardInterrupt:
                sink.truncate("interrupted")
                return 130
            except PoleProximityError as exc:
                sink.truncate(f"pole proximity: {exc}")
                raise
        _emit_timings(timings)
        return status
    rep, status, timings = commands.COMMANDS[cfg.mode](cfg)
    if embed_timings:
        rep["timings"] = timings
    text = report.dumps(rep)
    with _output(cfg.output_path) as fh:
        fh.write(text)
    if not embed_timings:
        _emit_timings(timings)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own message; exit 2 on bad usage
        return int(exc.code or 0)
    try:
        cfg = validate(config_from_args(ns))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(cfg, ns.timings)
    except (PoleProximityError, SmallDenominator) as exc:
        print(f"numerical signal: {exc}", file=sys.stderr)
        return EXIT_POLE


if __name__ == "__main__":
    sys.exit(main())
