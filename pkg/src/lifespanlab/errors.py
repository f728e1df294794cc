"""Exception hierarchy shared by all lifespanlab modules.

Every failure mode that callers are expected to handle gets its own class so
tests and the CLI can react to precise conditions (usage error vs numerical
breakdown) instead of string-matching messages.
"""


class LifespanLabError(Exception):
    """Base class for all package-specific errors."""


class PreconditionViolation(LifespanLabError, ValueError):
    """An argument is outside the documented domain of an operation."""


class InvalidTriple(LifespanLabError, ValueError):
    """Hypergeometric parameter triple is degenerate (c a nonpositive integer)."""


class NonConvergence(LifespanLabError):
    """An iterative evaluation hit its term cap before reaching tolerance."""


class QuadratureFailure(LifespanLabError):
    """Adaptive quadrature exhausted refinement levels without converging."""


class OutsideCone(LifespanLabError, ValueError):
    """A space-time point lies outside the cone r < 2 + t (or too close to it)."""


class DegeneratePoint(LifespanLabError, ValueError):
    """Weight evaluation requested at the singular space-time origin r = t = 0."""


class TooCloseToAxis(LifespanLabError, ValueError):
    """Finite-difference stencil would cross the symmetry axis r = 0."""


class EmptySamples(LifespanLabError, ValueError):
    """A sample-set reduction was requested on an empty collection."""


class GridTooCoarse(LifespanLabError, ValueError):
    """Radial grid does not resolve the initial-data support (< 16 cells)."""


class SupportViolation(LifespanLabError):
    """A field's support escaped the region where the cone weight is defined."""


class NonMonotoneTime(LifespanLabError, ValueError):
    """Trace samples were supplied with non-increasing time stamps."""


class Unstable(LifespanLabError):
    """Solver sup norm oscillates above the instability watermark (CFL failure)."""


class InfeasibleDelta(LifespanLabError, ValueError):
    """Slack parameter delta leaves no admissible auxiliary exponent."""


class NoBlowupInWindow(LifespanLabError):
    """ODE criterion trajectory stayed bounded over the whole search window."""


class StepUnderflow(LifespanLabError):
    """Adaptive ODE integrator drove the step size below its floor."""


class DegenerateFit(LifespanLabError, ValueError):
    """Scaling-law fit requested on samples without spread in the regressor."""


class InsufficientBlowups(LifespanLabError):
    """Sweep produced fewer than three blowup records; no fit is possible."""
