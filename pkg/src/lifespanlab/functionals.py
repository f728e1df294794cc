"""Weighted blowup functionals along solver trajectories.

Tracks G(t) = integral of |u|^p Phi_beta over space, the kernel integrals
H(t) = int_0^t (t-s)(2+s) G(s) ds and J(t) = int_0^t (2+s)^{-3} H(s) ds,
the exact identity (2+t)^2 J(t) = (1/2) int_0^t (t-s)^2 G(s) ds, the data
moments E0, E1 of the initial profiles against Phi_beta, and an
effective-constant check of the comparison chain that bounds the kernel
integral of G by weighted L^p norms of the solution.

All time integrals treat the stored G samples as piecewise linear and
integrate that interpolant exactly: H comes from the moment accumulators
I0 = int G, I1 = int s G, I2 = int s^2 G via H = t(2 I0 + I1) - (2 I1 + I2),
and each J increment integrates H(s)/(2+s)^3 in closed form (H restricted
to one interval is a quartic in w = 2+s with no w^2 term, so the
antiderivative needs no logarithms).  Both sides of the identity are then
exact for the interpolant and the residual sits at roundoff level for any
sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonMonotoneTime,
    PreconditionViolation,
    QuadratureFailure,
    SupportViolation,
)
from .exponents import ModelParams, ProofParams
from .solver import GridSpec, RadialField, SimResult, support_radius
from .testfn import TestFunctionSpec, phi

#: Largest admissible effective constant in the comparison-chain check.
C_CAP = 1e12

#: Relative tolerance for the refined data-moment quadrature.
MOMENT_REL_TOL = 1e-10

#: Panel-count bounds for the refined data-moment quadrature.
MOMENT_MIN_PANELS = 256
MOMENT_MAX_PANELS = 2**17


def unit_sphere_area(N: int) -> float:
    """Surface area of the unit sphere in R^N."""
    if N < 1:
        raise PreconditionViolation(f"need N >= 1, got {N}")
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


@dataclass
class FunctionalTrace:
    """Sampled functionals along one trajectory.

    Samples must start at t = 0 and arrive in strictly increasing time
    order.  E0 and E1 stay NaN until data moments are attached.
    """

    beta: float
    times: list[float] = field(default_factory=list)
    G: list[float] = field(default_factory=list)
    H: list[float] = field(default_factory=list)
    J: list[float] = field(default_factory=list)
    lp_norm: list[float] = field(default_factory=list)
    identity_residual: list[float] = field(default_factory=list)
    E0: float = math.nan
    E1: float = math.nan
    _i0: float = 0.0
    _i1: float = 0.0
    _i2: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise PreconditionViolation(f"need beta > 0, got {self.beta}")


def accumulate(
    trace: FunctionalTrace, t: float, g: float, lp: float = math.nan
) -> FunctionalTrace:
    """Append one (t, G) sample, updating H, J, and the identity residual."""
    if not g >= 0.0:
        raise PreconditionViolation(f"need G >= 0, got {g}")
    if not (math.isnan(lp) or lp >= 0.0):
        raise PreconditionViolation(f"need lp_norm >= 0, got {lp}")
    if not trace.times:
        if t != 0.0:
            raise PreconditionViolation(
                f"trace must start at t = 0, got first sample at t = {t}"
            )
        trace.times.append(0.0)
        trace.G.append(g)
        trace.H.append(0.0)
        trace.J.append(0.0)
        trace.lp_norm.append(lp)
        trace.identity_residual.append(0.0)
        return trace

    t0, g0 = trace.times[-1], trace.G[-1]
    if not t > t0:
        raise NonMonotoneTime(f"time must increase strictly: {t} after {t0}")
    dt = t - t0
    slope = (g - g0) / dt

    # J increment first: it needs the accumulators from before the interval.
    w0, w1 = 2.0 + t0, 2.0 + t
    b = g0 - slope * w0
    p_acc = 2.0 * trace._i0 + trace._i1
    q_acc = 4.0 * trace._i0 + 4.0 * trace._i1 + trace._i2
    c1 = p_acc - b * w0**2 / 2.0 - slope * w0**3 / 3.0
    c0 = -q_acc + b * w0**3 / 3.0 + slope * w0**4 / 4.0
    dj = (
        slope / 24.0 * dt * (w0 + w1)
        + b / 6.0 * dt
        + c1 * dt / (w0 * w1)
        + c0 / 2.0 * dt * (w0 + w1) / (w0 * w1) ** 2
    )
    trace.J.append(trace.J[-1] + dj)

    # exact piecewise-linear moments of G
    trace._i0 += dt * (g0 + g) / 2.0
    trace._i1 += dt / 6.0 * (g0 * (2.0 * t0 + t) + g * (t0 + 2.0 * t))
    trace._i2 += dt / 12.0 * (
        g0 * (3.0 * t0**2 + 2.0 * t0 * t + t**2)
        + g * (t0**2 + 2.0 * t0 * t + 3.0 * t**2)
    )

    trace.times.append(t)
    trace.G.append(g)
    trace.lp_norm.append(lp)
    trace.H.append(t * (2.0 * trace._i0 + trace._i1) - (2.0 * trace._i1 + trace._i2))
    rhs = 0.5 * (t**2 * trace._i0 - 2.0 * t * trace._i1 + trace._i2)
    trace.identity_residual.append(abs(w1**2 * trace.J[-1] - rhs) / (1.0 + rhs))
    return trace


def trick_identity_residual(trace: FunctionalTrace) -> float:
    """Worst relative gap between (2+t)^2 J and its double-integral form."""
    if not trace.times:
        raise PreconditionViolation("trace is empty")
    return max(trace.identity_residual)


def g_beta(
    snapshot: RadialField, grid: GridSpec, spec: TestFunctionSpec, p: float
) -> float:
    """Weighted nonlinearity mass: |S^{N-1}| int |u|^p Phi_beta r^{N-1} dr."""
    if not p > 1:
        raise PreconditionViolation(f"need p > 1, got {p}")
    if support_radius(snapshot, grid) >= 2.0 + snapshot.t:
        raise SupportViolation(
            f"support at t={snapshot.t} reaches the weight-function cone r = 2+t"
        )
    live = np.nonzero(snapshot.u)[0]
    if live.size == 0:
        return 0.0
    r = grid.radii()[live]
    u = snapshot.u[live]
    weights = phi(spec, r, snapshot.t) * r ** (spec.N - 1)
    return unit_sphere_area(spec.N) * float(
        np.sum(np.abs(u) ** p * weights) * grid.dr
    )


def lp_norm(snapshot: RadialField, grid: GridSpec, N: int, p: float) -> float:
    """Radial L^p norm of u: (|S^{N-1}| int |u|^p r^{N-1} dr)^{1/p}."""
    if not p > 1:
        raise PreconditionViolation(f"need p > 1, got {p}")
    r = grid.radii()
    total = unit_sphere_area(N) * float(
        np.sum(np.abs(snapshot.u) ** p * r ** (N - 1)) * grid.dr
    )
    return total ** (1.0 / p)


def trace_from_result(
    result: SimResult, spec: TestFunctionSpec, p: float | None = None
) -> FunctionalTrace:
    """Build a trace from a run's snapshots (which must start at t = 0)."""
    if result.grid is None or result.params is None:
        raise PreconditionViolation("result lacks grid or params metadata")
    if not result.snapshots:
        raise PreconditionViolation("result has no snapshots")
    if result.snapshots[0].t != 0.0:
        raise PreconditionViolation("snapshots must include t = 0")
    p_eff = result.params.p if p is None else p
    trace = FunctionalTrace(beta=spec.beta)
    for snap in result.snapshots:
        accumulate(
            trace,
            snap.t,
            g_beta(snap, result.grid, spec, p_eff),
            lp_norm(snap, result.grid, spec.N, p_eff),
        )
    return trace


def _refine_midpoint(fn, r_max: float) -> float:
    """Midpoint quadrature on [0, r_max], doubling until stable."""
    panels = MOMENT_MIN_PANELS
    prev = None
    while panels <= MOMENT_MAX_PANELS:
        h = r_max / panels
        r = (np.arange(panels) + 0.5) * h
        val = float(np.sum(fn(r)) * h)
        if prev is not None and abs(val - prev) <= MOMENT_REL_TOL * max(
            1e-300, abs(val)
        ):
            return val
        prev = val
        panels *= 2
    raise QuadratureFailure(
        f"data-moment quadrature did not stabilize within {MOMENT_MAX_PANELS} panels"
    )


def data_moments(mp: ModelParams, spec: TestFunctionSpec, f, g) -> tuple[float, float]:
    """Initial-data pairings with the weight function at t = 0.

    E0 pairs f with Phi_beta; E1 collects the g pairing, the beta-shifted
    f pairing, and the damping (f/r) pairing.  f and g are radial profile
    callables supported in r < R0 (not scaled by eps).
    """
    if mp.R0 >= 2.0:
        raise SupportViolation(
            f"data of radius R0 = {mp.R0} leave the weight-function cone r < 2 at t = 0"
        )
    spec_up = TestFunctionSpec(beta=spec.beta + 1.0, N=spec.N, V0=spec.V0)
    area = unit_sphere_area(spec.N)
    nm1 = spec.N - 1

    e0 = area * _refine_midpoint(
        lambda r: f(r) * phi(spec, r, 0.0) * r**nm1, mp.R0
    )
    term_g = area * _refine_midpoint(
        lambda r: g(r) * phi(spec, r, 0.0) * r**nm1, mp.R0
    )
    term_shift = spec.beta * area * _refine_midpoint(
        lambda r: f(r) * phi(spec_up, r, 0.0) * r**nm1, mp.R0
    )
    term_damp = 0.0
    if mp.V0 > 0:
        term_damp = mp.V0 * area * _refine_midpoint(
            lambda r: f(r) * phi(spec, r, 0.0) * r ** (nm1 - 1), mp.R0
        )
    return e0, term_g + term_shift + term_damp


@dataclass(frozen=True)
class ChainReport:
    """Effective constant extracted from the comparison-chain inequality."""

    c1_eff: float
    cap: float
    passed: bool
    critical: bool
    n_points: int


def _cumulative_moments(times: np.ndarray, g: np.ndarray):
    """Running int G and int s G for piecewise-linear samples."""
    s0, s1 = times[:-1], times[1:]
    g0, g1 = g[:-1], g[1:]
    d = s1 - s0
    inc0 = d * (g0 + g1) / 2.0
    inc1 = d / 6.0 * (g0 * (2.0 * s0 + s1) + g1 * (s0 + 2.0 * s1))
    i0 = np.concatenate(([0.0], np.cumsum(inc0)))
    i1 = np.concatenate(([0.0], np.cumsum(inc1)))
    return i0, i1


def check_base2_chain(
    trace: FunctionalTrace, mp: ModelParams, pp: ProofParams
) -> ChainReport:
    """Minimal constant C1 making the chain inequality hold along the trace.

    Subcritical (pp.lam > 0): eps E0 + eps E1 t + int (t-s) G ds against
    ||u(t)||_p (2+t)^{N/p'-beta} plus the (2+s)^{N/p'-(N-1-V0)/2-1/p'}
    weighted integral of ||u(s)||_p.  Critical (pp.lam = 0): the kernel
    integral of G alone against the same leading term plus the
    log-weighted integral with exponent N/p'-beta-1; the trace should then
    carry G built with beta = pp.beta0.
    """
    if not trace.times:
        raise PreconditionViolation("trace is empty")
    times = np.asarray(trace.times)
    g = np.asarray(trace.G)
    lp = np.asarray(trace.lp_norm)
    if np.isnan(lp).any():
        raise PreconditionViolation("chain check needs lp_norm at every sample")
    critical = pp.lam == 0.0
    if not critical and not (math.isfinite(trace.E0) and math.isfinite(trace.E1)):
        raise PreconditionViolation("attach data moments E0, E1 before the check")

    p = mp.p
    p_conj = p / (p - 1.0)
    e_lead = mp.N / p_conj - trace.beta
    if critical:
        e_tail = mp.N / p_conj - trace.beta - 1.0
        log_w = np.log(2.0 + times) ** (1.0 / p_conj)
    else:
        e_tail = mp.N / p_conj - (mp.N - 1.0 - mp.V0) / 2.0 - 1.0 / p_conj
        log_w = np.ones_like(times)

    i0, i1 = _cumulative_moments(times, g)
    kernel = times * i0 - i1
    lhs = kernel if critical else mp.eps * (trace.E0 + trace.E1 * times) + kernel

    tail_integrand = lp * (2.0 + times) ** e_tail * log_w
    tail = np.concatenate(
        ([0.0], np.cumsum(np.diff(times) * (tail_integrand[:-1] + tail_integrand[1:]) / 2.0))
    )
    rhs = lp * (2.0 + times) ** e_lead + tail

    live = rhs > 0.0
    if not live.any():
        c1_eff = 0.0
    else:
        c1_eff = float(np.max(lhs[live] / rhs[live]))
        c1_eff = max(c1_eff, 0.0)
    return ChainReport(
        c1_eff=c1_eff,
        cap=C_CAP,
        passed=c1_eff <= C_CAP,
        critical=critical,
        n_points=times.size,
    )
