"""Numerical tolerance profiles, selected via the GHK_TOLERANCE_PROFILE env var."""

import os
from dataclasses import dataclass

from .errors import InvalidParamsError

ENV_VAR = "GHK_TOLERANCE_PROFILE"


@dataclass(frozen=True)
class ToleranceProfile:
    """Tolerances shared across the library.

    Attributes:
        name: profile identifier.
        sym_atol: maximum absolute asymmetry accepted in a covariance matrix.
        phys_tol: slack below 1/2 allowed for symplectic eigenvalues. Also
            the width of the pure-mode window in which the square-root
            spectrum map kappa -> kappa + sqrt(kappa^2 - 1/4) is replaced by
            its analytic limit (identity); the square root has infinite
            slope at kappa = 1/2, so round-off there must not be amplified.
    """

    name: str
    sym_atol: float
    phys_tol: float


PROFILES = {
    "default": ToleranceProfile("default", sym_atol=1e-10, phys_tol=1e-9),
    "strict": ToleranceProfile("strict", sym_atol=1e-12, phys_tol=1e-12),
}


def active_profile() -> ToleranceProfile:
    """Return the profile named by GHK_TOLERANCE_PROFILE (default: "default")."""
    name = os.environ.get(ENV_VAR, "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise InvalidParamsError(
            f"unknown tolerance profile {name!r}; expected one of {sorted(PROFILES)}"
        ) from None
