"""Scalar exponent machinery for the damped-wave blowup model.

Everything in here is closed-form arithmetic on the model parameters
(N, V0, p): the quadratic gamma(n; p) whose positive root is the
Strauss-type critical exponent, the damping threshold V*, the Fujita
exponent, the classifier for the four blowup regimes, the predicted
lifespan exponents, and the auxiliary (q, beta, lambda) selection used
by the blowup functional machinery downstream.

No numerics beyond sqrt; all functions are pure and cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfeasibleDelta, PreconditionViolation

# Relative tolerance for deciding p == strauss_root(N + V0).  The critical
# curve has measure zero, so callers normally land on it only when they ask
# for it explicitly (e.g. the CLI --critical flag); the tolerance just
# absorbs the float round-trip.
TOL_CRIT = 1e-9


# ---------------------------------------------------------------------------
# model parameters


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the radial damped-wave blowup problem.

    N      spatial dimension
    V0     coefficient of the inverse-distance damping V0/|x|
    p      nonlinearity exponent of |u|^p
    eps    amplitude multiplying the initial data
    R0     support radius of the initial data
    """

    N: int
    V0: float
    p: float
    eps: float = 1.0
    R0: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.N, int) and self.N >= 3):
            raise PreconditionViolation(f"need integer N >= 3, got {self.N!r}")
        if not self.V0 >= 0:
            raise PreconditionViolation(f"need V0 >= 0, got {self.V0}")
        if not self.p > 1:
            raise PreconditionViolation(f"need p > 1, got {self.p}")
        if not self.eps >= 0:
            raise PreconditionViolation(f"need eps >= 0, got {self.eps}")
        if not self.R0 > 0:
            raise PreconditionViolation(f"need R0 > 0, got {self.R0}")

    def require_scaling_range(self):
        """Enforce the p-range on which the lifespan bounds are stated.

        p must exceed N/(N-1), and for N >= 5 stay below (N-2)/(N-4).
        Classification and prediction refuse to run outside this window.
        """
        lo = self.N / (self.N - 1)
        if not self.p > lo:
            raise PreconditionViolation(
                f"p = {self.p} must exceed N/(N-1) = {lo:.6g}"
            )
        if self.N >= 5:
            hi = (self.N - 2) / (self.N - 4)
            if not self.p < hi:
                raise PreconditionViolation(
                    f"p = {self.p} must lie below (N-2)/(N-4) = {hi:.6g} "
                    f"for N = {self.N}"
                )


# ---------------------------------------------------------------------------
# closed-form exponents


def gamma_poly(n: float, p: float) -> float:
    """The quadratic 2 + (n+1)p - (n-1)p^2.

    Positive between the roots; its positive root in p is the critical
    exponent separating the power-lifespan regime from the exponential one.
    """
    return 2.0 + (n + 1.0) * p - (n - 1.0) * p * p


def strauss_root(n: float) -> float:
    """Positive root of gamma_poly(n, .) = 0."""
    if not n > 1:
        raise PreconditionViolation(f"strauss_root needs n > 1, got {n}")
    disc = (n + 1.0) ** 2 + 8.0 * (n - 1.0)
    return ((n + 1.0) + math.sqrt(disc)) / (2.0 * (n - 1.0))


def v_star(N: int) -> float:
    """Damping threshold (N-1)^2/(N+1) below which wave-type blowup applies."""
    if not N >= 3:
        raise PreconditionViolation(f"v_star needs N >= 3, got {N}")
    return (N - 1.0) ** 2 / (N + 1.0)


def fujita(N: int, alpha: float) -> float:
    """Fujita exponent 1 + 2/(N - alpha) of the heat-dominated regime."""
    if not N >= 3:
        raise PreconditionViolation(f"fujita needs N >= 3, got {N}")
    if not 0.0 <= alpha <= 1.0:
        raise PreconditionViolation(f"fujita needs 0 <= alpha <= 1, got {alpha}")
    return 1.0 + 2.0 / (N - alpha)


# ---------------------------------------------------------------------------
# regime classifier


class Region(Enum):
    """Blowup regime tag for a (p, V0) pair at fixed N.

    Omega0 is the critical curve p = strauss_root(N + V0); Omega1 is the
    wave-dominated subcritical band below it; Omega2 is a strip of strong
    damping where diffusive scaling takes over; Omega3 is the low-p band
    where only the trivial power bound is available.  Outside means none
    of the four predicates hold.
    """

    OMEGA0 = "Omega0"
    OMEGA1 = "Omega1"
    OMEGA2 = "Omega2"
    OMEGA3 = "Omega3"
    OUTSIDE = "Outside"


def classify(mp: ModelParams) -> Region:
    """Evaluate the four regime predicates, first match wins.

    The membership tests are transcribed literally; precedence
    Omega0 -> Omega1 -> Omega2 -> Omega3 resolves boundary overlap
    deterministically rather than assuming the sets partition the
    parameter strip.  Note Omega3's predicate carries no upper bound
    on V0, so a thin sliver with V0 >= v_star(N) is genuinely Omega3.
    """
    mp.require_scaling_range()
    N, V0, p = mp.N, mp.V0, mp.p
    vs = v_star(N)
    crit = strauss_root(N + V0)

    if V0 < vs and abs(p - crit) <= TOL_CRIT * max(1.0, abs(crit)):
        return Region.OMEGA0
    if V0 < vs:
        lower = max(strauss_root(N + 2.0 + V0), 2.0 / (N - 1.0 - V0))
        if lower <= p < crit:
            return Region.OMEGA1
    if (N + 1.0) * (N - 2.0) / (N + 2.0) < V0 < vs:
        if 2.0 * (N + 1.0) / (N + 1.0 + V0) < p < 2.0 / (N - 1.0 - V0):
            return Region.OMEGA2
    low3 = max(N / (N - 1.0), (N + 3.0 + V0) / (N + 1.0 + V0))
    high3 = max(strauss_root(N + 2.0 + V0), 2.0 * (N + 1.0) / (N + 1.0 + V0))
    if low3 < p < high3:
        return Region.OMEGA3
    return Region.OUTSIDE


# ---------------------------------------------------------------------------
# lifespan prediction


@dataclass(frozen=True)
class LifespanPrediction:
    """Predicted small-eps lifespan growth.

    kind "power" means T(eps) <= C eps^(-exponent - delta) for every small
    delta > 0 (delta_note True records that slack); kind "exponential"
    means log T(eps) <= C eps^(-exponent).
    """

    kind: str
    exponent: float
    delta_note: bool

    def __post_init__(self):
        if self.kind not in ("power", "exponential"):
            raise PreconditionViolation(f"unknown prediction kind {self.kind!r}")
        if not self.exponent > 0:
            raise PreconditionViolation(
                f"prediction exponent must be positive, got {self.exponent}"
            )


def predict_lifespan(mp: ModelParams) -> LifespanPrediction:
    """Map the classified regime to its lifespan exponent.

    Omega0: exponential with exponent p(p-1).
    Omega1: power with exponent 2p(p-1)/gamma_poly(N+V0, p).
    Omega2: power with exponent 2(p-1)/(2N - (N-1+V0)p).
    Omega3: power with exponent 1 (not believed sharp; the sweep harness
            reports the measured slope separately rather than asserting it).
    """
    region = classify(mp)
    N, V0, p = mp.N, mp.V0, mp.p
    if region is Region.OMEGA0:
        return LifespanPrediction("exponential", p * (p - 1.0), False)
    if region is Region.OMEGA1:
        return LifespanPrediction(
            "power", 2.0 * p * (p - 1.0) / gamma_poly(N + V0, p), True
        )
    if region is Region.OMEGA2:
        return LifespanPrediction(
            "power", 2.0 * (p - 1.0) / (2.0 * N - (N - 1.0 + V0) * p), True
        )
    if region is Region.OMEGA3:
        return LifespanPrediction("power", 1.0, True)
    raise PreconditionViolation(
        f"(p, V0) = ({p}, {V0}) at N = {N} lies outside every blowup regime"
    )


# ---------------------------------------------------------------------------
# proof-parameter selection


@dataclass(frozen=True)
class ProofParams:
    """Auxiliary exponents used by the blowup functional chain.

    q is the dual integrability index, beta = (N-1-V0)/2 - 1/q the decay
    rate of the weight, lam the resulting envelope power (the growth
    budget of the lower-bound ODE; written 0 in the critical selection,
    where a logarithm plays its role).  beta0 and beta_delta are the
    critical-curve variants with 1/p and 1/(p+delta) in place of 1/q.
    """

    q: float
    beta: float
    lam: float
    beta0: float
    beta_delta: float
    delta: float


def choose_proof_params(mp: ModelParams, delta: float) -> ProofParams:
    """Pick (q, beta, lambda) for the regime mp sits in.

    Subcritical (Omega1/2/3): 1/q is set per regime,

        Omega1: 1/q = 1/p - delta
        Omega2: 1/q = (N-1-V0)/2 - delta
        Omega3: 1/q = ((N+1+V0)p - (N+3+V0))/2 - delta

    then beta = (N-1-V0)/2 - 1/q and
    lam = gamma_poly(N+V0, p)/(2p) - 1/p + 1/q.  The selection is only
    usable when q > p, beta lands in (0, (N-1-V0)/2) and lam lands in
    (0, p-1); a delta too large to keep them there raises InfeasibleDelta.

    Critical (Omega0): returns beta0 and beta_delta; q degenerates to
    p + delta and lam to 0.
    """
    if not delta > 0:
        raise PreconditionViolation(f"need delta > 0, got {delta}")
    region = classify(mp)
    N, V0, p = mp.N, mp.V0, mp.p
    half_width = (N - 1.0 - V0) / 2.0
    beta0 = half_width - 1.0 / p
    beta_delta = half_width - 1.0 / (p + delta)

    if region is Region.OMEGA0:
        return ProofParams(
            q=p + delta,
            beta=beta_delta,
            lam=0.0,
            beta0=beta0,
            beta_delta=beta_delta,
            delta=delta,
        )
    if region is Region.OUTSIDE:
        raise PreconditionViolation(
            f"no proof parameters outside the blowup regimes "
            f"(p = {p}, V0 = {V0}, N = {N})"
        )

    if region is Region.OMEGA1:
        inv_q = 1.0 / p - delta
    elif region is Region.OMEGA2:
        inv_q = half_width - delta
    else:
        inv_q = ((N + 1.0 + V0) * p - (N + 3.0 + V0)) / 2.0 - delta

    if not 0.0 < inv_q < 1.0 / p:
        raise InfeasibleDelta(
            f"delta = {delta} gives 1/q = {inv_q:.6g}, outside (0, 1/p)"
        )
    q = 1.0 / inv_q
    beta = half_width - inv_q
    lam = gamma_poly(N + V0, p) / (2.0 * p) - 1.0 / p + inv_q
    if not 0.0 < beta < half_width:
        raise InfeasibleDelta(
            f"delta = {delta} gives beta = {beta:.6g}, outside "
            f"(0, {half_width:.6g})"
        )
    if not 0.0 < lam < p - 1.0:
        raise InfeasibleDelta(
            f"delta = {delta} gives lambda = {lam:.6g}, outside (0, p-1)"
        )
    return ProofParams(
        q=q, beta=beta, lam=lam, beta0=beta0, beta_delta=beta_delta, delta=delta
    )
