"""Numerical laboratory for blowup lifespan scaling of radial semilinear waves
with an inverse-distance damping potential V0/r.

Subpackages by concern:

* ``special``     - Gauss hypergeometric 2F1 on [0, 1), dual evaluation routes
* ``exponents``   - critical exponents, parameter-region classification,
                    lifespan predictions and auxiliary proof parameters
* ``testfn``      - cone weight functions built from 2F1 and their residual checks
* ``solver``      - radial finite-difference solver with blowup detection
* ``functionals`` - weighted space-time functionals of solver output
* ``odecrit``     - ordinary differential blowup criteria and scaling fits
* ``sweep``       - lifespan sweeps, scaling-law fits, report suites
* ``cli``         - command-line front end
"""

from . import errors

__all__ = ["errors"]
__version__ = "0.1.0"
