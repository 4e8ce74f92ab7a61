"""Independent verification oracles.

Two kinds of brute force, deliberately ignorant of the closed forms they
check:

  * a multi-start simplex search maximizing the affinity over product
    Gaussian states, parameterized through the square-root state of the
    candidate product (so each objective evaluation is a plain Gaussian
    integral, no spectral decomposition in the hot loop);
  * truncated photon-number sums for diagonal (thermal) states, with the
    geometric tail certified below a configured bound before any
    comparison is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discord import ProductStateParams
from .errors import (
    InvalidParamsError,
    NegativeOccupancyError,
    NotConvergedError,
    NotPhysicalError,
    TruncationInsufficientError,
)
from .symplectic import as_covariance, is_physical, square_root_cm, symplectic_eigenvalues

_ETA_EPS = 1e-12  # offset in the log transform keeping eta above 1/2
_MAX_FOCK_CUTOFF = 2**14


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start simplex search settings.

    The search runs over (eta1, eta2, r1, r2, phi1, phi2) of the candidate
    product state's square root; eta is optimized through
    log(eta - 1/2 + eps) so the simplex can never propose an unphysical
    value. eta_bounds defaults to [1/2, 10 max(kt1, kt2)] of the input
    state, which contains the closed-form optimum for every family in
    scope.
    """

    starts: int = 32
    max_iters: int = 1000
    xtol: float = 1e-8
    ftol: float = 1e-10
    eta_bounds: tuple[float, float] | None = None
    r_bounds: tuple[float, float] = (-5.0, 5.0)
    phi_bounds: tuple[float, float] = (-math.pi, math.pi)

    def __post_init__(self) -> None:
        if self.starts < 1 or self.max_iters < 1:
            raise InvalidParamsError("starts and max_iters must be >= 1")
        if self.xtol <= 0 or self.ftol <= 0:
            raise InvalidParamsError("tolerances must be positive")


@dataclass(frozen=True)
class FockOracleConfig:
    """Photon-number truncation settings for the diagonal-state oracle."""

    truncation: int = 400
    tail_bound: float = 1e-12

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise InvalidParamsError("truncation must be >= 1")
        if not 0.0 < self.tail_bound < 1.0:
            raise InvalidParamsError("tail bound must lie in (0, 1)")


def _det4_flat(
    m00, m01, m02, m03, m11, m12, m13, m22, m23, m33
) -> float:
    # cofactor expansion of a symmetric 4x4 along the first row
    d0 = (
        m11 * (m22 * m33 - m23 * m23)
        - m12 * (m12 * m33 - m23 * m13)
        + m13 * (m12 * m23 - m22 * m13)
    )
    d1 = (
        m01 * (m22 * m33 - m23 * m23)
        - m12 * (m02 * m33 - m23 * m03)
        + m13 * (m02 * m23 - m22 * m03)
    )
    d2 = (
        m01 * (m12 * m33 - m23 * m13)
        - m11 * (m02 * m33 - m23 * m03)
        + m13 * (m02 * m13 - m12 * m03)
    )
    d3 = (
        m01 * (m12 * m23 - m22 * m13)
        - m11 * (m02 * m23 - m22 * m03)
        + m12 * (m02 * m13 - m12 * m03)
    )
    return m00 * d0 - m01 * d1 + m02 * d2 - m03 * d3


def _make_negative_affinity(vt_in: np.ndarray):
    """Closure computing -affinity(input, product(x)) in scalar arithmetic.

    x = (t1, t2, r1, r2, phi1, phi2) with eta_j = 1/2 - eps + exp(t_j) the
    square-root-state eigenvalues of the candidate product. The candidate's
    square-root CM follows directly from the parameterization, so one
    evaluation costs a handful of flops; values in [-1, 0] on valid input,
    large positive as an out-of-range penalty.
    """
    f00, f01, f02, f03 = vt_in[0]
    f11, f12, f13 = vt_in[1, 1], vt_in[1, 2], vt_in[1, 3]
    f22, f23, f33 = vt_in[2, 2], vt_in[2, 3], vt_in[3, 3]
    det_in = _det4_flat(f00, f01, f02, f03, f11, f12, f13, f22, f23, f33)
    quarter_root = det_in**0.25

    def negative_affinity(x) -> float:
        t1, t2, r1, r2, p1, p2 = x
        if t1 > 60.0 or t2 > 60.0 or abs(r1) > 20.0 or abs(r2) > 20.0:
            return 2.0 + abs(t1) + abs(t2) + abs(r1) + abs(r2)
        e1 = 0.5 - _ETA_EPS + math.exp(t1)
        e2 = 0.5 - _ETA_EPS + math.exp(t2)
        ch1, sh1 = math.cosh(2.0 * r1), math.sinh(2.0 * r1)
        ch2, sh2 = math.cosh(2.0 * r2), math.sinh(2.0 * r2)
        c1, s1 = math.cos(p1), math.sin(p1)
        c2, s2 = math.cos(p2), math.sin(p2)
        m00 = f00 + e1 * (ch1 + c1 * sh1)
        m01 = f01 + e1 * s1 * sh1
        m11 = f11 + e1 * (ch1 - c1 * sh1)
        m22 = f22 + e2 * (ch2 + c2 * sh2)
        m23 = f23 + e2 * s2 * sh2
        m33 = f33 + e2 * (ch2 - c2 * sh2)
        det_sum = _det4_flat(m00, m01, f02, f03, m11, f12, f13, m22, m23, m33)
        if det_sum <= 0.0:
            return 2.0
        # det of the product's sqrt CM is (e1 e2)^2
        return -4.0 * quarter_root * math.sqrt(e1 * e2) / math.sqrt(det_sum)

    return negative_affinity


def _nelder_mead(fn, x0, steps, max_iters, xtol, ftol):
    """Minimize fn from x0; plain simplex method on python floats.

    Returns (fbest, xbest). Reflection/expansion/contraction/shrink with
    the standard coefficients; stops when both the f-spread and the
    coordinate spread of the simplex fall below the tolerances.
    """
    dim = len(x0)
    points = [list(x0)]
    for i in range(dim):
        p = list(x0)
        p[i] += steps[i]
        points.append(p)
    values = [fn(p) for p in points]
    for _ in range(max_iters):
        order = sorted(range(dim + 1), key=values.__getitem__)
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < ftol:
            spread = max(
                max(abs(p[i] - points[0][i]) for p in points) for i in range(dim)
            )
            if spread < xtol:
                break
        centroid = [
            sum(p[i] for p in points[:-1]) / dim for i in range(dim)
        ]
        worst = points[-1]
        reflected = [2.0 * centroid[i] - worst[i] for i in range(dim)]
        f_r = fn(reflected)
        if values[0] <= f_r < values[-2]:
            points[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[0]:
            expanded = [centroid[i] + 2.0 * (reflected[i] - centroid[i]) for i in range(dim)]
            f_e = fn(expanded)
            if f_e < f_r:
                points[-1], values[-1] = expanded, f_e
            else:
                points[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[-1]:
            contracted = [centroid[i] + 0.5 * (reflected[i] - centroid[i]) for i in range(dim)]
        else:
            contracted = [centroid[i] + 0.5 * (worst[i] - centroid[i]) for i in range(dim)]
        f_c = fn(contracted)
        if f_c < min(f_r, values[-1]):
            points[-1], values[-1] = contracted, f_c
            continue
        best = points[0]
        points = [best] + [
            [best[i] + 0.5 * (p[i] - best[i]) for i in range(dim)] for p in points[1:]
        ]
        values = [values[0]] + [fn(p) for p in points[1:]]
    order = sorted(range(dim + 1), key=values.__getitem__)
    return values[order[0]], points[order[0]]


def oracle_max_affinity(
    V, cfg: OptimizerConfig | None = None, rng: np.random.Generator | None = None
) -> tuple[float, ProductStateParams]:
    """Brute-force maximal product-state affinity of a zero-mean state.

    Runs ``cfg.starts`` simplex searches from random points in the search
    box and keeps the best. The two best starts must agree to 10 ftol,
    otherwise NotConverged is raised. Returns the best value and the
    optimal parameters in the same square-root parameterization used by
    ``closest_product_state``.
    """
    cfg = cfg or OptimizerConfig()
    rng = rng or np.random.default_rng(0)
    cov = as_covariance(V)
    if not is_physical(cov):
        raise NotPhysicalError("covariance matrix is not a physical state")
    vt_in = square_root_cm(cov).matrix
    if cfg.eta_bounds is None:
        kt_max = float(np.max(symplectic_eigenvalues(vt_in)))
        eta_lo, eta_hi = 0.5, 10.0 * kt_max
    else:
        eta_lo, eta_hi = cfg.eta_bounds
    objective = _make_negative_affinity(vt_in)
    steps = [0.7, 0.7, 0.25, 0.25, 0.5, 0.5]
    finals = []
    for _ in range(cfg.starts):
        etas = rng.uniform(max(eta_lo, 0.5), eta_hi, 2)
        x0 = [
            math.log(etas[0] - 0.5 + _ETA_EPS),
            math.log(etas[1] - 0.5 + _ETA_EPS),
            rng.uniform(*cfg.r_bounds),
            rng.uniform(*cfg.r_bounds),
            rng.uniform(*cfg.phi_bounds),
            rng.uniform(*cfg.phi_bounds),
        ]
        f_best, x_best = _nelder_mead(
            objective, x0, steps, cfg.max_iters, cfg.xtol, cfg.ftol
        )
        finals.append((f_best, x_best))
    finals.sort(key=lambda fx: fx[0])
    if len(finals) > 1 and finals[1][0] - finals[0][0] > 10.0 * cfg.ftol:
        raise NotConvergedError(
            "best two starts disagree: "
            f"{-finals[0][0]:.12g} vs {-finals[1][0]:.12g}"
        )
    f_opt, x_opt = finals[0]
    params = ProductStateParams(
        eta1=0.5 - _ETA_EPS + math.exp(x_opt[0]),
        eta2=0.5 - _ETA_EPS + math.exp(x_opt[1]),
        r1=x_opt[2],
        r2=x_opt[3],
        phi1=x_opt[4],
        phi2=x_opt[5],
    )
    return -f_opt, params


def _fold_half_pi(phi: float) -> float:
    """Fold a squeeze angle into (-pi/2, pi/2] (the (r, phi) ambiguity)."""
    x = math.fmod(phi, math.pi)
    if x > math.pi / 2.0:
        x -= math.pi
    elif x <= -math.pi / 2.0:
        x += math.pi
    return x


def verify_phi_zero(
    V, cfg: OptimizerConfig | None = None, rng: np.random.Generator | None = None
) -> bool:
    """Check that the brute-force optimum needs no squeeze rotation.

    True when both optimal angles fold to within 1e-3 of zero. Angles are
    meaningless where the optimal squeezing vanishes, so |r| < 1e-4 counts
    as zero.
    """
    _, params = oracle_max_affinity(V, cfg, rng)
    for r, phi in ((params.r1, params.phi1), (params.r2, params.phi2)):
        if abs(r) < 1e-4:
            continue
        if abs(_fold_half_pi(phi)) > 1e-3:
            return False
    return True


def _certified_cutoff(nbar: float, cfg: FockOracleConfig) -> int:
    """Smallest admissible cutoff with geometric tail below the bound."""
    if nbar < 0:
        raise NegativeOccupancyError("mean occupancy must be >= 0")
    if nbar == 0:
        return cfg.truncation
    log_ratio = math.log(nbar / (nbar + 1.0))
    cutoff = cfg.truncation
    while (cutoff + 1) * log_ratio > math.log(cfg.tail_bound):
        cutoff *= 2
        if cutoff > _MAX_FOCK_CUTOFF:
            raise TruncationInsufficientError(
                f"tail bound {cfg.tail_bound} not reachable below cutoff "
                f"{_MAX_FOCK_CUTOFF} for nbar = {nbar}"
            )
    return cutoff


def fock_thermal_spectrum(nbar: float, cfg: FockOracleConfig | None = None) -> np.ndarray:
    """Photon-number probabilities p_n = nbar^n / (nbar + 1)^(n+1), n <= N.

    N starts at cfg.truncation and doubles until the (exactly known)
    geometric tail drops below cfg.tail_bound.
    """
    cfg = cfg or FockOracleConfig()
    cutoff = _certified_cutoff(nbar, cfg)
    n = np.arange(cutoff + 1)
    ratio = nbar / (nbar + 1.0)
    return (1.0 / (nbar + 1.0)) * ratio**n


def _paired_spectra(nbar1, nbar2, cfg) -> tuple[np.ndarray, np.ndarray]:
    cutoff = max(_certified_cutoff(nbar1, cfg), _certified_cutoff(nbar2, cfg))
    n = np.arange(cutoff + 1)
    p = (1.0 / (nbar1 + 1.0)) * (nbar1 / (nbar1 + 1.0)) ** n
    q = (1.0 / (nbar2 + 1.0)) * (nbar2 / (nbar2 + 1.0)) ** n
    return p, q


def fock_affinity_diagonal(
    nbar1: float, nbar2: float, cfg: FockOracleConfig | None = None
) -> float:
    """Affinity of two thermal states from the spectral sum sum sqrt(p q).

    The truncation error is bounded by sqrt(tail_p tail_q) (Cauchy-Schwarz)
    and both factors are certified below the tail bound.
    """
    cfg = cfg or FockOracleConfig()
    p, q = _paired_spectra(nbar1, nbar2, cfg)
    return float(np.sum(np.sqrt(p * q)))


def fock_trace_distance_diagonal(
    nbar1: float, nbar2: float, cfg: FockOracleConfig | None = None
) -> float:
    """Trace distance of two thermal states: sum |p_n - q_n| / 2."""
    cfg = cfg or FockOracleConfig()
    p, q = _paired_spectra(nbar1, nbar2, cfg)
    return float(0.5 * np.sum(np.abs(p - q)))


def fock_sqrt_trace_diagonal(nbar: float, cfg: FockOracleConfig | None = None) -> float:
    """Tr sqrt(rho) of a thermal state from the spectral sum sum sqrt(p_n)."""
    cfg = cfg or FockOracleConfig()
    # sqrt weakens the geometric decay: certify with the squared tail bound
    strict = FockOracleConfig(cfg.truncation, cfg.tail_bound**2)
    p = fock_thermal_spectrum(nbar, strict)
    return float(np.sum(np.sqrt(p)))


def fock_product_trace_diagonal(
    nbar1: float, nbar2: float, cfg: FockOracleConfig | None = None
) -> float:
    """Tr(rho1 rho2) of two thermal states from the spectral sum sum p q."""
    cfg = cfg or FockOracleConfig()
    p, q = _paired_spectra(nbar1, nbar2, cfg)
    return float(np.sum(p * q))
