"""Run configuration and its validation.

Validation happens before any arithmetic so a bad command line never
costs a family enumeration.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

from ..ffpoly import FieldSpec
from ..ratios.recipe import TAIL_VARIANTS, default_cutoff

MODES = ("verify-lemmas", "one-level", "two-level", "ratio-average", "sweep")
PRECISIONS = ("double", "extended")
SWEEP_LEVELS = ("one-level", "two-level")

# closer than this and the one-swap tail term has a pole at alpha = beta
NUDGE_THRESHOLD = 1e-6
NUDGE = 1e-3j


class ConfigError(ValueError):
    """Raised for any configuration the harness refuses to run."""


@dataclass(frozen=True)
class RunConfig:
    mode: str
    q: int = 5
    g: int = 1
    N: int = 1
    alpha: complex = 0.01
    beta: complex = 0.02
    gamma: complex = 0j
    delta: complex = 0j
    tail_variant: str = "geometric"
    cutoff: int | None = None
    order: int | None = None
    precision: str = "double"
    output_path: str | None = None
    seed: int = 0
    threads: int = 1
    grid: str = "quick"
    sweep_level: str = "two-level"
    sweep_g: tuple = (1, 2)
    sweep_N: tuple = (2, 3, 4, 5, 6, 7)
    sweep_alpha: tuple = ()
    nudged: dict | None = field(default=None, compare=False)

    @property
    def effective_cutoff(self) -> int:
        return default_cutoff(self.g) if self.cutoff is None else self.cutoff

    @property
    def effective_order(self) -> int:
        return self.N + 2 if self.order is None else self.order

    def echo(self) -> dict:
        """Config fields that determine the numbers (output path and threads excluded)."""
        d = asdict(self)
        for k in ("output_path", "threads", "nudged"):
            d.pop(k)
        if self.mode != "verify-lemmas":
            d.pop("grid")
        if self.mode != "sweep":
            for k in ("sweep_level", "sweep_g", "sweep_N", "sweep_alpha"):
                d.pop(k)
        if self.mode != "ratio-average":
            d.pop("gamma")
            d.pop("delta")
        d["cutoff"] = self.effective_cutoff
        d["order"] = self.effective_order
        return d


def _check_field(q: int) -> None:
    try:
        FieldSpec(q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def nudge_shifts(cfg: RunConfig) -> RunConfig:
    """Move beta off alpha by 1e-3 i when the two nearly coincide."""
    if abs(complex(cfg.alpha) - complex(cfg.beta)) >= NUDGE_THRESHOLD:
        return cfg
    new_beta = complex(cfg.beta) + NUDGE
    return replace(cfg, beta=new_beta,
                   nudged={"field": "beta", "from": complex(cfg.beta), "to": new_beta})


def validate(cfg: RunConfig) -> RunConfig:
    """Return a checked (possibly nudged) copy of ``cfg`` or raise ConfigError."""
    if cfg.mode not in MODES:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    _check_field(cfg.q)
    if cfg.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if cfg.precision not in PRECISIONS:
        raise ConfigError(f"--precision must be one of {PRECISIONS}")
    if cfg.tail_variant not in TAIL_VARIANTS:
        raise ConfigError(f"--tail-variant must be one of {TAIL_VARIANTS}")
    if cfg.cutoff is not None and cfg.cutoff < 1:
        raise ConfigError("--cutoff must be >= 1")
    if cfg.mode == "verify-lemmas":
        from .suites import GRIDS
        if cfg.grid not in GRIDS:
            raise ConfigError(f"--grid must be one of {tuple(GRIDS)}")
        return cfg
    if cfg.mode == "sweep":
        if cfg.sweep_level not in SWEEP_LEVELS:
            raise ConfigError(f"--sweep-level must be one of {SWEEP_LEVELS}")
        if not cfg.sweep_g or min(cfg.sweep_g) < 1:
            raise ConfigError("sweep genus values must be >= 1")
        if not cfg.sweep_N or min(cfg.sweep_N) < 1:
            raise ConfigError("sweep N values must be >= 1")
        if cfg.sweep_level == "two-level" and min(cfg.sweep_N) < 2:
            raise ConfigError("two-level sweeps need N >= 2")
        for a in cfg.sweep_alpha or (cfg.alpha,):
            if complex(a) == 0:
                raise ConfigError("alpha = 0 is a removable singularity; pick a nonzero shift")
        return cfg if cfg.sweep_level == "one-level" else nudge_shifts(cfg)
    if cfg.g < 1:
        raise ConfigError("--g must be >= 1")
    if cfg.N < 1:
        raise ConfigError("--N must be >= 1")
    if cfg.order is not None and cfg.order < cfg.N:
        raise ConfigError("--order must be >= N")
    if cfg.mode == "one-level":
        if cfg.N >= 4 * cfg.g:
            raise ConfigError(f"one-level needs N < 4g (got N={cfg.N}, 4g={4 * cfg.g}); "
                              "the prediction drops two-swap terms that appear from 4g on")
        if complex(cfg.alpha) == 0:
            raise ConfigError("alpha = 0 is a removable singularity; pick a nonzero shift")
        return cfg
    if cfg.mode == "two-level":
        if cfg.N < 2:
            raise ConfigError("two-level needs N >= 2")
        if complex(cfg.alpha) == 0 or complex(cfg.beta) == 0:
            raise ConfigError("alpha and beta must be nonzero")
        return nudge_shifts(cfg)
    # ratio-average
    for name in ("alpha", "beta", "gamma", "delta"):
        if abs(complex(getattr(cfg, name)).real) >= 0.25:
            raise ConfigError(f"|Re {name}| must be below 1/4 for the Euler product to converge")
    return cfg
