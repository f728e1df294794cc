"""Amplitude-ladder orchestration for lifespan scaling measurements.

Runs the radial solver across a strictly decreasing ladder of initial-data
amplitudes eps, collects the measured blowup times, and regresses the
scaling law: log T against log eps in the power regimes, log log T against
log eps in the exponential one.  Measured lifespans are true numerical
blowup times while the theory supplies only upper bounds, so the fit is
always reported next to the prediction, never merged with it.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .errors import InsufficientBlowups, LifespanLabError, PreconditionViolation
from .exponents import ModelParams, predict_lifespan
from .solver import DEFAULT_CFL, GridSpec, SimResult, run

# field snapshots retained per run, feeding downstream functional traces
SNAPSHOT_COUNT = 33

# snapshots stop at this fraction of the reference time so the last one
# lands before the blowup cells saturate the sup norm
SNAPSHOT_SPAN_FRACTION = 0.95

# the exponential-regime fit works on log log T, so T must clear this
LOGLOG_FLOOR = 1.0


@dataclass(frozen=True)
class SweepConfig:
    """One amplitude ladder over a fixed model and grid template.

    mp_base supplies (N, V0, p, R0); its eps field is ignored and replaced
    by each ladder entry in turn.  When out_path is non-empty the sweep
    writes its CSV there.
    """

    mp_base: ModelParams
    eps_ladder: tuple
    grid_dr: float
    grid_t_max: float
    cfl: float = DEFAULT_CFL
    refine: bool = False
    shape: str = "bump"
    out_path: str = ""

    def __post_init__(self):
        ladder = tuple(float(e) for e in self.eps_ladder)
        object.__setattr__(self, "eps_ladder", ladder)
        if len(ladder) < 3:
            raise PreconditionViolation(
                f"eps ladder needs at least 3 entries, got {len(ladder)}"
            )
        if any(not e > 0 for e in ladder):
            raise PreconditionViolation("eps ladder entries must be positive")
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise PreconditionViolation("eps ladder must be strictly decreasing")
        if not self.grid_dr > 0:
            raise PreconditionViolation(f"need grid_dr > 0, got {self.grid_dr}")
        if not self.grid_t_max > 0:
            raise PreconditionViolation(f"need grid_t_max > 0, got {self.grid_t_max}")


@dataclass
class SweepRecord:
    """One ladder point: amplitude, run outcome, measured lifespan.

    lifespan is present exactly when status is "blowup".  result keeps the
    full simulation for in-process consumers and is never serialized.
    """

    eps: float
    status: str
    lifespan: float | None
    result: SimResult | None = None

    def __post_init__(self):
        if (self.status == "blowup") != (self.lifespan is not None):
            raise PreconditionViolation(
                f"lifespan must be present iff status is blowup, got "
                f"status={self.status!r} lifespan={self.lifespan!r}"
            )

    @property
    def log_eps(self) -> float:
        return math.log(self.eps)

    @property
    def log_lifespan(self) -> float | None:
        if self.lifespan is None:
            return None
        return math.log(self.lifespan)


@dataclass(frozen=True)
class FitResult:
    """Least-squares scaling fit over the blowup subset of a ladder.

    kind "power" fits log T against log eps; kind "exponential" fits
    log log T against log eps.  exponent is -slope either way, the
    measured counterpart of the predicted lifespan exponent.
    """

    kind: str
    slope: float
    stderr: float
    exponent: float
    n_points: int


def _run_one(cfg: SweepConfig, eps: float) -> SweepRecord:
    mp = replace(cfg.mp_base, eps=eps)
    grid = GridSpec.make(mp, cfg.grid_dr, cfg.grid_t_max, cfl=cfg.cfl)
    if not cfg.refine:
        times = np.linspace(
            0.0, SNAPSHOT_SPAN_FRACTION * grid.t_max, SNAPSHOT_COUNT
        )
        res = run(mp, grid, snapshot_times=list(times), shape=cfg.shape)
        life = res.lifespan_estimate if res.status == "blowup" else None
        return SweepRecord(eps=eps, status=res.status, lifespan=life, result=res)

    coarse = run(mp, grid, shape=cfg.shape)
    if coarse.status != "blowup":
        return SweepRecord(eps=eps, status=coarse.status, lifespan=None, result=coarse)
    fine_grid = GridSpec(grid.dr / 2, grid.r_max, grid.dt / 2, grid.t_max)
    times = np.linspace(
        0.0, SNAPSHOT_SPAN_FRACTION * coarse.lifespan_estimate, SNAPSHOT_COUNT
    )
    fine = run(mp, fine_grid, snapshot_times=list(times), shape=cfg.shape)
    if fine.status != "blowup":
        # refinement flipped the verdict; report the finer answer honestly
        return SweepRecord(eps=eps, status=fine.status, lifespan=None, result=fine)
    richardson = (4.0 * fine.lifespan_estimate - coarse.lifespan_estimate) / 3.0
    return SweepRecord(eps=eps, status="blowup", lifespan=richardson, result=fine)


def fit_records(records: list, kind: str) -> FitResult:
    """Regress the measured lifespans of the blowup records.

    Raises InsufficientBlowups when fewer than 3 usable points remain.
    """
    if kind not in ("power", "exponential"):
        raise PreconditionViolation(f"unknown fit kind {kind!r}")
    blow = [r for r in records if r.status == "blowup"]
    if len(blow) < 3:
        raise InsufficientBlowups(
            f"scaling fit needs at least 3 blowup points, got {len(blow)}"
        )
    eps = np.array([r.eps for r in blow], dtype=float)
    life = np.array([r.lifespan for r in blow], dtype=float)
    if kind == "exponential":
        keep = life > LOGLOG_FLOOR
        if int(keep.sum()) < 3:
            raise InsufficientBlowups(
                "log log T fit needs at least 3 lifespans above "
                f"{LOGLOG_FLOOR}, got {int(keep.sum())}"
            )
        x = np.log(eps[keep])
        y = np.log(np.log(life[keep]))
    else:
        x = np.log(eps)
        y = np.log(life)
    res = stats.linregress(x, y)
    return FitResult(
        kind=kind,
        slope=float(res.slope),
        stderr=float(res.stderr),
        exponent=float(-res.slope),
        n_points=len(x),
    )


def write_csv(records: list, path: str):
    """Emit the ladder as CSV with columns exactly eps,lifespan,status."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "lifespan", "status"])
        for rec in records:
            life = "" if rec.lifespan is None else repr(rec.lifespan)
            writer.writerow([repr(rec.eps), life, rec.status])


def sweep(cfg: SweepConfig, threads: int = 1):
    """Run the ladder, fit the scaling law, and pair it with the prediction.

    Returns (records, fit, prediction).  prediction is None when the model
    sits outside every blowup regime; the ladder still runs in that case
    and the fit falls back to the power form.  Records are sorted by eps
    (descending, the ladder order) before fitting.
    """
    try:
        prediction = predict_lifespan(cfg.mp_base)
    except LifespanLabError:
        prediction = None
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda e: _run_one(cfg, e), cfg.eps_ladder))
    else:
        records = [_run_one(cfg, eps) for eps in cfg.eps_ladder]
    records.sort(key=lambda r: r.eps, reverse=True)
    if cfg.out_path:
        write_csv(records, cfg.out_path)
    kind = prediction.kind if prediction is not None else "power"
    fit = fit_records(records, kind)
    return records, fit, prediction
