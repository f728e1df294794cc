"""Positive wave-type weight family used to test solutions for blowup.

The family Phi_beta(r, t) = (2+t+r)^(-beta) * 2F1(beta, (N-1+V0)/2; N-1; z)
with z = 2r/(2+t+r) solves the linear radial wave equation with the
anti-damping term -(V0/r) d/dt on the cone r < 2+t.  (Prefactor and
argument share the same combination 2+t+r; this is the time-shifted
self-similar form, and it is what makes the identities below hold to
machine precision.)  Downstream it serves as the weight in the blowup
functionals; here it is exposed together with numerical checks of its
defining identities:

* the derivative identity  d/dt Phi_beta = -beta * Phi_{beta+1},
* the anti-damped wave equation residual, and
* two-sided envelope comparisons against (2+t)^(-beta), with an extra
  cone-boundary factor when beta exceeds (N-1-V0)/2.

All checks are finite-difference based; none rely on the algebra they are
meant to verify.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import qmc

from .errors import (
    DegeneratePoint,
    EmptySamples,
    OutsideCone,
    PreconditionViolation,
    TooCloseToAxis,
)
from .special import HypTriple, hyp2f1

#: Points with hypergeometric argument beyond 1 - Z_BOUNDARY_MARGIN are
#: rejected as effectively on the cone boundary rather than extrapolated.
Z_BOUNDARY_MARGIN = 1e-9

#: Default lower time bound for envelope sampling.
SAMPLE_T_MIN = 0.0

#: Default relative offset from the cone boundary for generated samples,
#: chosen to keep the hypergeometric argument below the rejection margin.
SAMPLE_BOUNDARY_MARGIN = 1e-6


@dataclass(frozen=True)
class TestFunctionSpec:
    """Parameters (beta, N, V0) selecting one member of the weight family.

    The regime tag records which envelope bound applies: `sub` when
    beta < (N-1-V0)/2, where the weight is comparable to (2+t)^(-beta)
    uniformly up to the cone boundary, and `super` when beta exceeds the
    threshold, where a boundary factor enters.
    """

    __test__ = False  # bare data holder; keeps pytest from collecting it

    beta: float
    N: int
    V0: float

    def __post_init__(self):
        if not self.beta > 0:
            raise PreconditionViolation(f"need beta > 0, got {self.beta}")
        if not (isinstance(self.N, int) and self.N >= 3):
            raise PreconditionViolation(f"need integer N >= 3, got {self.N!r}")
        if not self.V0 >= 0:
            raise PreconditionViolation(f"need V0 >= 0, got {self.V0}")
        # At least one slot of the integral route must be admissible so that
        # near-boundary arguments stay evaluable.
        c = self.N - 1.0
        if not (self.beta < c or (self.N - 1.0 + self.V0) / 2.0 < c):
            raise PreconditionViolation(
                f"triple ({self.beta}, {(self.N - 1 + self.V0) / 2}, {c}) "
                "admits no integral evaluation route"
            )

    @property
    def triple(self) -> HypTriple:
        return HypTriple(self.beta, (self.N - 1.0 + self.V0) / 2.0, self.N - 1.0)

    @property
    def envelope_threshold(self) -> float:
        return (self.N - 1.0 - self.V0) / 2.0

    @property
    def regime(self) -> str:
        thr = self.envelope_threshold
        if self.beta < thr:
            return "sub"
        if self.beta > thr:
            return "super"
        raise PreconditionViolation(
            f"beta = {self.beta} sits exactly on the envelope threshold {thr}"
        )


def phi(spec: TestFunctionSpec, r, t: float):
    """Evaluate the weight at radius r (scalar or array) and time t >= 0.

    Requires every point inside the cone r < 2 + t and away from the
    degenerate corner r = t = 0; arguments whose hypergeometric coordinate
    exceeds 1 - Z_BOUNDARY_MARGIN are rejected as boundary points.
    """
    if not t >= 0:
        raise PreconditionViolation(f"need t >= 0, got {t}")
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    if np.any(r_arr < 0):
        raise PreconditionViolation("need r >= 0")
    if np.any(r_arr >= 2.0 + t):
        raise OutsideCone(f"r >= 2 + t at t = {t}")
    if t == 0.0 and np.any(r_arr == 0.0):
        raise DegeneratePoint("the corner r = t = 0 is excluded")
    big_r = 2.0 + t + r_arr
    z = 2.0 * r_arr / big_r
    if np.any(z > 1.0 - Z_BOUNDARY_MARGIN):
        raise OutsideCone(
            "point lies in the rejected boundary layer z > 1 - "
            f"{Z_BOUNDARY_MARGIN}"
        )
    val = big_r ** (-spec.beta) * hyp2f1(spec.triple, z)
    return float(val) if scalar else val


def phi_dt_identity_residual(
    spec: TestFunctionSpec, r: float, t: float, h: float = 1e-4
) -> float:
    """|centered d/dt of Phi_beta + beta * Phi_{beta+1}| at one point.

    Decays at second order in h wherever the point is interior with margin h.
    """
    if not h > 0:
        raise PreconditionViolation(f"need h > 0, got {h}")
    if t - h < 0:
        raise PreconditionViolation(f"need t - h >= 0, got t = {t}, h = {h}")
    d_dt = (phi(spec, r, t + h) - phi(spec, r, t - h)) / (2.0 * h)
    bumped = replace(spec, beta=spec.beta + 1.0)
    return abs(d_dt + spec.beta * phi(bumped, r, t))


def pde_residual(spec: TestFunctionSpec, r: float, t: float, h: float = 1e-3) -> float:
    """Absolute residual of the anti-damped radial wave equation at (r, t).

    Evaluates d2/dt2 Phi - [d2/dr2 + (N-1)/r d/dr] Phi - (V0/r) d/dt Phi
    with centered second differences; O(h^2) at interior points.
    """
    if not h > 0:
        raise PreconditionViolation(f"need h > 0, got {h}")
    if r <= h:
        raise TooCloseToAxis(f"need r > h, got r = {r}, h = {h}")
    if t - h < 0:
        raise PreconditionViolation(f"need t - h >= 0, got t = {t}, h = {h}")
    if r + h >= 2.0 + (t - h):
        raise OutsideCone("stencil leaves the cone; shrink h or move inward")
    center = phi(spec, r, t)
    t_plus = phi(spec, r, t + h)
    t_minus = phi(spec, r, t - h)
    r_plus = phi(spec, r + h, t)
    r_minus = phi(spec, r - h, t)
    dtt = (t_plus - 2.0 * center + t_minus) / (h * h)
    drr = (r_plus - 2.0 * center + r_minus) / (h * h)
    dr = (r_plus - r_minus) / (2.0 * h)
    dt = (t_plus - t_minus) / (2.0 * h)
    return abs(dtt - drr - (spec.N - 1.0) / r * dr - spec.V0 / r * dt)


def envelope_weight(spec: TestFunctionSpec, r, t: float):
    """The comparison weight for the regime of spec.

    Sub regime: (2+t)^(-beta).  Super regime: the same with the extra
    factor ((2+t-r)/(2+t))^((N-1-V0)/2 - beta), which diverges toward the
    cone boundary at the same rate as the weight itself.
    """
    base = (2.0 + t) ** (-spec.beta)
    if spec.regime == "sub":
        return base * np.ones_like(np.asarray(r, dtype=float))
    frac = (2.0 + t - np.asarray(r, dtype=float)) / (2.0 + t)
    return base * frac ** (spec.envelope_threshold - spec.beta)


def envelope_ratio(spec: TestFunctionSpec, samples) -> tuple[float, float]:
    """Extrema of Phi / envelope_weight over the given (r, t) samples.

    The returned (min, max) straddle the two-sided comparison constant;
    both are finite and positive for interior samples.
    """
    ratios = []
    for r, t in samples:
        ratios.append(phi(spec, r, t) / float(envelope_weight(spec, r, t)))
    if not ratios:
        raise EmptySamples("envelope_ratio needs at least one sample")
    return min(ratios), max(ratios)


def cone_samples(
    n: int,
    t_max: float,
    seed: int,
    *,
    t_min: float = SAMPLE_T_MIN,
    boundary_margin: float = SAMPLE_BOUNDARY_MARGIN,
) -> list[tuple[float, float]]:
    """n quasi-random (r, t) points filling the cone r < 2 + t.

    Uses a scrambled Halton sequence so successive sample sets with the
    same seed are reproducible.  t runs over [t_min, t_max]; r covers
    [0, (2+t)(1 - boundary_margin)] including near-boundary points.  The
    margin keeps the hypergeometric argument below the rejection layer.
    """
    if not (n > 0 and t_max > t_min >= 0):
        raise PreconditionViolation(
            f"need n > 0 and t_max > t_min >= 0, got n = {n}, "
            f"t_min = {t_min}, t_max = {t_max}"
        )
    unit = qmc.Halton(d=2, seed=seed).random(n)
    t = t_min + unit[:, 0] * (t_max - t_min)
    r = unit[:, 1] * (2.0 + t) * (1.0 - boundary_margin)
    return list(zip(r.tolist(), t.tolist()))
