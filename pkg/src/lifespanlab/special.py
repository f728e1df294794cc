"""Gauss hypergeometric function 2F1 on the unit interval, by two independent routes.

The package needs 2F1(a, b; c; z) for 0 <= z < 1 with accuracy near 1e-12 and
with arguments that may approach the endpoint z = 1 (points close to the light
cone).  Two deliberately independent evaluation paths are kept side by side so
each can serve as an oracle for the other:

* a direct power series with Pochhammer-ratio recurrence (`hyp2f1_series`),
  restricted to z <= 0.9 where convergence is fast, and
* an Euler-type integral (`hyp2f1_integral`), valid for c > a > 0, evaluated
  with a tanh-sinh (double-exponential) rule whose variable change absorbs the
  algebraic endpoint singularities of the weight s**(a-1) * (1-s)**(c-a-1).

`hyp2f1` dispatches between them: series for z <= 0.9, integral beyond.  When
the integral precondition fails in the (a, c) slot, the argument symmetry
2F1(a, b; c; z) = 2F1(b, a; c; z) is used to try the (b, c) slot instead; every
parameter triple generated elsewhere in this package is covered by one of the
two slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    InvalidTriple,
    NonConvergence,
    PreconditionViolation,
    QuadratureFailure,
)

#: Largest argument handled by the power series; beyond it convergence slows
#: and evaluation routes through the integral representation.
Z_MAX_SERIES = 0.9

#: Absolute / relative term tolerances for series truncation.
SERIES_TOL_ABS = 1e-15
SERIES_TOL_REL = 1e-14

#: Hard cap on the number of series terms.
SERIES_MAX_TERMS = 10_000

#: Relative tolerance target for the integral route.
INTEGRAL_REL_TOL = 1e-12


def pochhammer(d: float, n: int) -> float:
    """Rising factorial (d)_n = d (d+1) ... (d+n-1), with (d)_0 = 1."""
    if n < 0 or n != int(n):
        raise PreconditionViolation(f"pochhammer order must be a nonnegative integer, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= d + k
    return out


def beta_fn(x: float, y: float) -> float:
    """Euler beta function B(x, y) for x, y > 0, evaluated in the log domain."""
    if x <= 0 or y <= 0:
        raise PreconditionViolation(f"beta_fn requires positive arguments, got ({x}, {y})")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


@dataclass(frozen=True)
class HypTriple:
    """Parameter triple (a, b, c) of 2F1.

    Rejects c equal to zero or a negative integer at construction, since the
    series coefficients divide by (c)_n.
    """

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        c = self.c
        if c <= 0 and abs(c - round(c)) < 1e-12:
            raise InvalidTriple(f"c = {c} is zero or a negative integer")

    @property
    def euler_admissible(self) -> bool:
        """True when the Euler integral representation applies: c > a > 0."""
        return self.c > self.a > 0

    def swapped(self) -> "HypTriple":
        """The triple with a and b exchanged (2F1 is symmetric in a, b)."""
        return HypTriple(self.b, self.a, self.c)


def _as_unit_interval_array(z, *, what: str) -> np.ndarray:
    z_arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z_arr)) or np.any(z_arr < 0.0) or np.any(z_arr >= 1.0):
        raise PreconditionViolation(f"{what} requires 0 <= z < 1")
    return z_arr


def hyp2f1_series(
    triple: HypTriple,
    z,
    *,
    z_max: float = Z_MAX_SERIES,
    tol_abs: float = SERIES_TOL_ABS,
    tol_rel: float = SERIES_TOL_REL,
    max_terms: int = SERIES_MAX_TERMS,
):
    """Power series sum of 2F1(a, b; c; z) for 0 <= z <= z_max.

    Accepts a scalar or an ndarray of arguments (one triple, many z).  Terms
    are accumulated with the ratio recurrence
    term_{n+1} = term_n * (a+n)(b+n) / ((c+n)(n+1)) * z and truncated once
    every entry satisfies |term| < tol_abs + tol_rel * |partial sum|.

    Raises NonConvergence when the cap is reached first, and InvalidTriple if
    a zero coefficient denominator is hit (c a nonpositive integer that slipped
    past construction-time validation).
    """
    a, b, c = triple.a, triple.b, triple.c
    z_arr = _as_unit_interval_array(z, what="hyp2f1_series")
    if np.any(z_arr > z_max):
        raise PreconditionViolation(
            f"series route is restricted to z <= {z_max}; use hyp2f1() for larger arguments"
        )
    total = np.ones_like(z_arr)
    term = np.ones_like(z_arr)
    for n in range(max_terms):
        denom = (c + n) * (n + 1.0)
        if denom == 0.0:
            raise InvalidTriple(f"series coefficient denominator vanished at n = {n} (c = {c})")
        term = term * ((a + n) * (b + n) / denom) * z_arr
        total = total + term
        if np.all(np.abs(term) < tol_abs + tol_rel * np.abs(total)):
            return total if z_arr.ndim else float(total)
    raise NonConvergence(f"series did not reach tolerance within {max_terms} terms")


@lru_cache(maxsize=64)
def _tanh_sinh_table(level: int, tau_max_q: float):
    """Node table for the tanh-sinh rule at step h = 0.5 / 2**level.

    Returns (ln s_k, ln (1 - s_k), ln w_k) for nodes s_k = sigmoid(pi sinh tau_k),
    computed in the log domain so the endpoint approach is represented exactly
    even when s_k underflows to 0 or 1 in direct arithmetic.
    """
    h = 0.5 / (1 << level)
    n_side = int(math.ceil(tau_max_q / h))
    tau = h * np.arange(-n_side, n_side + 1)
    u = 0.5 * np.pi * np.sinh(tau)
    # softplus(x) = log(1 + e^x) without overflow for large |x|
    softplus = lambda x: np.log1p(np.exp(-np.abs(x))) + np.maximum(x, 0.0)
    ln_s = -softplus(-2.0 * u)
    ln_one_minus_s = -softplus(2.0 * u)
    ln_cosh_u = np.abs(u) + np.log1p(np.exp(-2.0 * np.abs(u))) - math.log(2.0)
    # ds/dtau = (pi/2) cosh(tau) / (2 cosh(u)^2)
    ln_w = np.log(0.5 * np.pi * np.cosh(tau)) - math.log(2.0) - 2.0 * ln_cosh_u
    return ln_s, ln_one_minus_s, ln_w


def hyp2f1_integral(triple: HypTriple, z, *, rel_tol: float = INTEGRAL_REL_TOL, max_level: int = 6):
    """Euler integral evaluation of 2F1(a, b; c; z), requiring c > a > 0.

    Computes (1/B(a, c-a)) * int_0^1 s^(a-1) (1-s)^(c-a-1) (1-zs)^(-b) ds with
    a tanh-sinh rule, doubling the node density until two successive levels
    agree to rel_tol.  The factor (1 - z s) is formed as (1-s) + s(1-z), which
    stays accurate all the way to z = 1 - 1e-16.

    Accepts scalar or ndarray z.  Raises QuadratureFailure if the level cap is
    reached without convergence.
    """
    a, b, c = triple.a, triple.b, triple.c
    if not triple.euler_admissible:
        raise PreconditionViolation(
            f"integral route requires c > a > 0, got (a, c) = ({a}, {c})"
        )
    z_arr = _as_unit_interval_array(z, what="hyp2f1_integral")
    scalar = z_arr.ndim == 0
    z_col = np.atleast_1d(z_arr)[:, None]

    # The integrand tail decays like exp(-mu * (pi/2) e^|tau|); pick tau_max so
    # the discarded tail is below 1e-18 even for small exponents.
    mu = min(a, c - a)
    sinh_needed = max(84.0 / (np.pi * min(mu, 1.0)), 16.0)
    tau_max_q = math.ceil(4.0 * math.asinh(sinh_needed)) / 4.0

    ln_beta = math.lgamma(a) + math.lgamma(c - a) - math.lgamma(c)
    prev = None
    for level in range(max_level + 1):
        ln_s, ln_oms, ln_w = _tanh_sinh_table(level, tau_max_q)
        h = 0.5 / (1 << level)
        with np.errstate(over="ignore", invalid="ignore"):
            ln_base = (a - 1.0) * ln_s + (c - a - 1.0) * ln_oms + ln_w
            one_minus_zs = np.exp(ln_oms)[None, :] + np.exp(ln_s)[None, :] * (1.0 - z_col)
            ln_term = ln_base[None, :] - b * np.log(one_minus_zs)
            peak = np.max(ln_term, axis=1, keepdims=True)
            sums = np.sum(np.exp(ln_term - peak), axis=1)
        ln_integral = peak[:, 0] + np.log(sums) + math.log(h)
        val = np.exp(ln_integral - ln_beta)
        if prev is not None and np.all(np.abs(val - prev) <= rel_tol * np.abs(val)):
            break
        prev = val
    else:
        raise QuadratureFailure(
            f"tanh-sinh levels exhausted without reaching rel_tol = {rel_tol}"
        )
    return float(val[0]) if scalar else val.reshape(np.shape(z_arr))


def hyp2f1(triple: HypTriple, z):
    """Evaluate 2F1(a, b; c; z) on 0 <= z < 1, choosing the route per argument.

    z <= 0.9 goes through the series; larger arguments go through the Euler
    integral, using the a-slot when c > a > 0 and otherwise the b-slot via the
    a/b symmetry.  Raises NonConvergence when neither slot is admissible for a
    large argument.
    """
    z_arr = _as_unit_interval_array(z, what="hyp2f1")
    scalar = z_arr.ndim == 0
    z_flat = np.atleast_1d(z_arr).ravel()
    out = np.empty_like(z_flat)
    low = z_flat <= Z_MAX_SERIES
    if np.any(low):
        out[low] = hyp2f1_series(triple, z_flat[low])
    if np.any(~low):
        z_high = z_flat[~low]
        if triple.euler_admissible:
            out[~low] = hyp2f1_integral(triple, z_high)
        elif triple.c > triple.b > 0:
            out[~low] = hyp2f1_integral(triple.swapped(), z_high)
        else:
            raise NonConvergence(
                "no admissible evaluation route for z > 0.9 with "
                f"(a, b, c) = ({triple.a}, {triple.b}, {triple.c})"
            )
    if scalar:
        return float(out[0])
    return out.reshape(np.shape(z_arr))


def hyp2f1_ode_residual(triple: HypTriple, z: float, h: float = 1e-4) -> float:
    """Residual of the hypergeometric ODE at z, with derivatives by central differences.

    The function phi = 2F1(a, b; c; .) satisfies
    z(1-z) phi'' + (c - (1+a+b) z) phi' - a b phi = 0; this evaluates the left
    side using the series route at z - h, z, z + h and returns its absolute
    value.  Requires h < z < 1 - h (and z + h within the series range, else the
    underlying evaluation error propagates).
    """
    if not (h < z < 1.0 - h):
        raise PreconditionViolation(f"need h < z < 1 - h, got z = {z}, h = {h}")
    a, b, c = triple.a, triple.b, triple.c
    f_minus = hyp2f1_series(triple, z - h)
    f_mid = hyp2f1_series(triple, z)
    f_plus = hyp2f1_series(triple, z + h)
    d1 = (f_plus - f_minus) / (2.0 * h)
    d2 = (f_plus - 2.0 * f_mid + f_minus) / (h * h)
    return abs(z * (1.0 - z) * d2 + (c - (1.0 + a + b) * z) * d1 - a * b * f_mid)
