"""Blowup-time scaling for the two ordinary differential criteria.

Each criterion is a second-order differential inequality together with
standing lower bounds on H and H':

    case i:  H'' + c H'/sigma      >= C H^p,            H >= eps^p C sigma^2,
                                                        H' >= eps^p C sigma
    case ii: H'' + c H'            >= C sigma^{1-p} H^p, H >= eps^p C sigma,
                                                        H' >= eps^p C

The slowest member of that class runs the inequality at equality while the
floors hold the state up, so integrate_blowup evolves (H, H') with every
right-hand-side occurrence replaced by its floored value.  The floors are
not a numerical convenience: at pure equality from the tiny initial data
the trajectory stalls at a constant and the blowup time picks up the wrong
power of eps (the class exponent -(p-1)/2 for case i becomes -p(p-1)/2).
With the floors in place the system is exactly self-similar: rescaling
sigma by eps^{-(p-1)/2} (case i) or eps^{-p(p-1)} (case ii) removes eps
from the dynamics up to the transient near sigma0, which is why fitted
log-log slopes land on the class exponents already on short ladders.

Initial data sit on the floors: case i starts at
(eps^p C sigma0^2, eps^p C sigma0), case ii at (eps^p C sigma0, eps^p C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.integrate import solve_ivp

from .errors import (
    DegenerateFit,
    NoBlowupInWindow,
    NonConvergence,
    PreconditionViolation,
    StepUnderflow,
)
from .exponents import ModelParams, ProofParams

#: Blowup threshold for H; raising it to 1e14 moves sigma_star by < 0.5%.
H_BLOW = 1e12

#: Base relative tolerance; the confirmation pass tightens it 100-fold.
RTOL = 1e-9

#: Safety window: integration aborts at SIGMA_MAX_COEF * eps^{-p(p-1)}.
SIGMA_MAX_COEF = 1e6

#: Largest admissible relative shift between base and tightened sigma_star.
TIGHTEN_SHIFT = 1e-2


@dataclass(frozen=True)
class OdeCriterionSpec:
    """One blowup-criterion configuration.

    c multiplies the first-order term (H'/sigma in case i, H' in case ii;
    the criterion's own value for case ii is 2).  Ccoef multiplies the
    superlinear forcing and the floors.
    """

    case: str
    p: float
    c: float
    Ccoef: float
    eps: float
    sigma0: float

    def __post_init__(self):
        if self.case not in ("i", "ii"):
            raise PreconditionViolation(f"case must be 'i' or 'ii', got {self.case!r}")
        if not self.p > 1:
            raise PreconditionViolation(f"need p > 1, got {self.p}")
        for name in ("c", "Ccoef", "eps", "sigma0"):
            if not getattr(self, name) > 0:
                raise PreconditionViolation(
                    f"need {name} > 0, got {getattr(self, name)}"
                )


def from_proof_params(mp: ModelParams, pp: ProofParams) -> OdeCriterionSpec:
    """Criterion configuration matching the regime's lower-bound chain.

    Subcritical (pp.lam > 0): case i with c = (4+lam)/lam and
    sigma0 = (2/lam) 2^{lam/2}, the values produced by the change of
    variable sigma = (2/lam)(2+t)^{lam/2}.  Critical: case ii with c = 2
    and sigma0 = log 2 (from sigma = log(2+t) - at t = 0).
    """
    if pp.lam > 0.0:
        return OdeCriterionSpec(
            case="i",
            p=mp.p,
            c=(4.0 + pp.lam) / pp.lam,
            Ccoef=1.0,
            eps=mp.eps,
            sigma0=(2.0 / pp.lam) * 2.0 ** (pp.lam / 2.0),
        )
    return OdeCriterionSpec(
        case="ii", p=mp.p, c=2.0, Ccoef=1.0, eps=mp.eps, sigma0=math.log(2.0)
    )


def _floored_rhs(spec: OdeCriterionSpec):
    p, c, amp = spec.p, spec.c, spec.Ccoef
    floor_amp = spec.eps**p * spec.Ccoef
    if spec.case == "i":

        def rhs(sigma, y):
            heff = max(y[0], floor_amp * sigma * sigma)
            weff = max(y[1], floor_amp * sigma)
            return (weff, amp * heff**p - c * weff / sigma)

    else:

        def rhs(sigma, y):
            heff = max(y[0], floor_amp * sigma)
            weff = max(y[1], floor_amp)
            return (weff, amp * sigma ** (1.0 - p) * heff**p - c * weff)

    return rhs


def _integrate_once(
    spec: OdeCriterionSpec, sigma_max: float, h_blow: float, rtol: float
) -> float:
    floor_amp = spec.eps**spec.p * spec.Ccoef
    if spec.case == "i":
        y0 = (floor_amp * spec.sigma0**2, floor_amp * spec.sigma0)
    else:
        y0 = (floor_amp * spec.sigma0, floor_amp)

    def hit_threshold(sigma, y):
        return y[0] - h_blow

    hit_threshold.terminal = True
    hit_threshold.direction = 1.0

    scale = floor_amp * max(1.0, spec.sigma0) ** 2
    sol = solve_ivp(
        _floored_rhs(spec),
        (spec.sigma0, sigma_max),
        y0,
        method="RK45",
        rtol=rtol,
        atol=1e-12 * scale,
        events=hit_threshold,
    )
    if sol.status == 1:
        return float(sol.t_events[0][0])
    if sol.status == 0:
        raise NoBlowupInWindow(
            f"H stayed below {h_blow:g} up to sigma = {sigma_max:g} "
            f"(case {spec.case}, p = {spec.p}, eps = {spec.eps})"
        )
    raise StepUnderflow(sol.message)


def integrate_blowup(spec: OdeCriterionSpec, h_blow: float = H_BLOW) -> float:
    """Blowup coordinate sigma_star where H first exceeds h_blow.

    Integrates with an embedded 4/5 pair at relative tolerance 1e-9, then
    repeats 100x tighter and demands the two answers agree to 1%.
    """
    sigma_max = SIGMA_MAX_COEF * spec.eps ** (-spec.p * (spec.p - 1.0))
    base = _integrate_once(spec, sigma_max, h_blow, RTOL)
    tight = _integrate_once(spec, sigma_max, h_blow, RTOL / 100.0)
    if abs(base - tight) > TIGHTEN_SHIFT * tight:
        raise NonConvergence(
            f"sigma_star moved {abs(base - tight) / tight:.2%} under "
            f"tolerance tightening (base {base:g}, tight {tight:g})"
        )
    return tight


def fit_scaling(records) -> tuple[float, float]:
    """Least-squares slope of log sigma_star against log eps, with stderr."""
    records = list(records)
    if len(records) < 4:
        raise PreconditionViolation(
            f"need at least 4 records for a scaling fit, got {len(records)}"
        )
    eps = np.array([r[0] for r in records], dtype=float)
    sigma = np.array([r[1] for r in records], dtype=float)
    if not ((eps > 0).all() and (sigma > 0).all()):
        raise PreconditionViolation("all records must be positive")
    if np.ptp(eps) == 0.0:
        raise DegenerateFit("all eps values coincide; slope is undefined")
    result = stats.linregress(np.log(eps), np.log(sigma))
    return float(result.slope), float(result.stderr)
