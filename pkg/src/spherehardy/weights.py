"""Weight functions of the logarithmic Hardy problem on S^2.

All evaluators accept a float or a numpy array of polar angles in [0, pi]
and return the same shape.  Functions that cancel two ~1/t^2 terms near a
pole switch to a truncated series below ``SERIES_CUTOFF``; bounded functions
return their analytic limit at the endpoints.

The pole-symmetric functions (psi, F, M, G) are evaluated through the
distance ``u = min(t, pi - t)``; for t >= pi/2 the subtraction ``pi - t`` is
exact in binary floating point, so ``w(t) == w(pi - t)`` holds bit for bit.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy import optimize

from .errors import DomainError

PI = math.pi
LOG_PI = math.log(PI)
SERIES_CUTOFF = 1e-2
INV_PI2 = 1.0 / PI**2

__all__ = [
    "Angle", "WeightKind", "PI", "SERIES_CUTOFF",
    "phi", "phi_complement", "psi", "psi_prime", "rho_phi",
    "big_f", "big_m", "big_g", "big_k", "small_h", "small_h_prime",
    "evaluate", "sup_abs", "const_a", "const_b",
]


class Angle(float):
    """A polar angle, validated to lie in [0, pi] on construction."""

    def __new__(cls, value):
        v = float(value)
        if not 0.0 <= v <= PI:
            raise DomainError(f"angle {v!r} outside [0, pi]")
        return super().__new__(cls, v)


class WeightKind(enum.Enum):
    PHI = "phi"
    PSI = "psi"
    RHO_PHI = "rho_phi"
    F = "F"
    G = "G"
    M = "M"
    K = "K"
    H = "h"


def _angles(t):
    arr = np.asarray(t, dtype=float)
    if not np.all((arr >= 0.0) & (arr <= PI)):
        raise DomainError("polar angle outside [0, pi]")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _pole_distance(arr):
    # exact for arr >= pi/2 (Sterbenz)
    return np.minimum(arr, PI - arr)


def _phi(t):
    with np.errstate(divide="ignore"):
        return 1.0 + LOG_PI - np.log(t)


def phi(t):
    """phi(t) = log(pi e / t); +inf is not returned, t = 0 raises."""
    arr = _angles(t)
    if np.any(arr == 0.0):
        raise DomainError("phi is unbounded at t = 0")
    return _ret(_phi(arr), t)


def phi_complement(s):
    """phi(pi - s) evaluated from the distance s to the south pole."""
    arr = _angles(s)
    return _ret(1.0 - np.log1p(-arr / PI), s)


def psi(t):
    """psi(t) = phi(sin t); unbounded at both poles."""
    arr = _angles(t)
    u = _pole_distance(arr)
    if np.any(u == 0.0):
        raise DomainError("psi is unbounded at the poles")
    return _ret(_phi(np.sin(u)), t)


def psi_prime(t):
    """d psi / d theta = -cot(theta)."""
    arr = _angles(t)
    if np.any((arr == 0.0) | (arr == PI)):
        raise DomainError("psi' is unbounded at the poles")
    return _ret(-np.cos(arr) / np.sin(arr), t)


def rho_phi(t):
    arr = _angles(t)
    with np.errstate(invalid="ignore"):
        out = np.where(arr == 0.0, 0.0, arr * _phi(arr))
    return _ret(out, t)


# --- 1/u^2 - cot^2 u -------------------------------------------------------

def _m_core_series(u):
    u2 = u * u
    return 2.0 / 3.0 - u2 * (1.0 / 15.0 + u2 * (2.0 / 189.0 + u2 / 675.0))


def _m_core_direct(u):
    c = np.cos(u) / np.sin(u)
    return 1.0 / (u * u) - c * c


def _m_core(u):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.where(u < SERIES_CUTOFF, _m_core_series(u), _m_core_direct(u))


def big_m(t):
    """M(t) = 1/t^2 + 1/(pi-t)^2 - cot^2 t, continuous on [0, pi]."""
    arr = _angles(t)
    u = _pole_distance(arr)
    far = PI - u
    return _ret(_m_core(u) + 1.0 / (far * far), t)


# --- F -----------------------------------------------------------------------

def _f_near_series(u):
    """F minus its far-pole term, for small distance u, cancellation free."""
    u2 = u * u
    d_over_u2 = 1.0 / 6.0 + u2 * (1.0 / 180.0 + u2 * (1.0 / 2835.0 + u2 / 37800.0))
    delta = d_over_u2 * u2           # phi(sin u) - phi(u)
    with np.errstate(divide="ignore"):
        r = 1.0 / _phi(u)            # 0 at u = 0
    dr = delta * r
    r_sin = r / (1.0 + dr)           # 1 / phi(sin u)
    log_part = d_over_u2 * r**3 * (2.0 + dr) / (1.0 + dr) ** 2
    return log_part + _m_core_series(u) * r_sin**2 + 2.0 * r_sin


def _f_near_direct(u):
    ph = _phi(u)
    ps = _phi(np.sin(u))
    c = np.cos(u) / np.sin(u)
    return 1.0 / (u * u * ph * ph) - c * c / (ps * ps) + 2.0 / ps


def big_f(t):
    """F(t) from the phi-weighted inequality; F(0) = F(pi) = 1/pi^2."""
    arr = _angles(t)
    u = _pole_distance(arr)
    far = PI - u
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        near = np.where(u < SERIES_CUTOFF, _f_near_series(u), _f_near_direct(u))
    far_term = 1.0 / (far * far * _phi(far) ** 2)
    return _ret(near + far_term, t)


def big_g(t):
    """G(t) = M(t)/psi(t)^2 + 2/psi(t); G(0) = G(pi) = 0."""
    arr = _angles(t)
    u = _pole_distance(arr)
    far = PI - u
    m = _m_core(u) + 1.0 / (far * far)
    with np.errstate(divide="ignore"):
        r = 1.0 / _phi(np.sin(u))
    return _ret(m * r * r + 2.0 * r, t)


# --- h and K -----------------------------------------------------------------

def _h_over_t_series(t):
    t2 = t * t
    return 1.0 / 3.0 + t2 * (1.0 / 45.0 + t2 * (2.0 / 945.0 + t2 / 4725.0))


def _h_series(t):
    return t * _h_over_t_series(t)


def _h_direct(t):
    return 1.0 / t - np.cos(t) / np.sin(t)


def small_h(t):
    """h(t) = 1/t - cot t on [0, pi); h(0) = 0."""
    arr = _angles(t)
    if np.any(arr == PI):
        raise DomainError("h is unbounded at t = pi")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(arr < SERIES_CUTOFF, _h_series(arr), _h_direct(arr))
    return _ret(out, t)


def small_h_prime(t):
    """Closed form h'(t) = (t^2 - sin^2 t)/(t^2 sin^2 t); h'(0) = 1/3."""
    arr = _angles(t)
    if np.any(arr == PI):
        raise DomainError("h' is unbounded at t = pi")
    t2 = arr * arr
    series = 1.0 / 3.0 + t2 * (1.0 / 15.0 + t2 * (2.0 / 189.0 + t2 / 675.0))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s2 = np.sin(arr) ** 2
        direct = (t2 - s2) / (t2 * s2)
    return _ret(np.where(arr < SERIES_CUTOFF, series, direct), t)


def _k_series_left(t):
    with np.errstate(divide="ignore"):
        r = 1.0 / _phi(t)
    return _h_over_t_series(t) * r - 1.0 / (PI * (PI - t))


def _k_series_right(s):
    t = PI - s
    t_phi = t * (1.0 - np.log1p(-s / PI))
    cot_minus_inv = -s * (1.0 / 3.0 + s * s * (1.0 / 45.0 + s * s * 2.0 / 945.0))
    x = s / PI
    d_over_s = x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 12.0
                    + x * (1.0 / 20.0 + x * (1.0 / 30.0 + x / 42.0)))))
    return (1.0 / t + cot_minus_inv + d_over_s / PI) / t_phi


def _k_direct(t):
    s = PI - t
    return (1.0 / t - np.cos(t) / np.sin(t)) / (t * _phi(t)) - 1.0 / (PI * s)


def big_k(t):
    """K(t) = h(t)/(t phi(t)) - 1/(pi (pi - t)); K(0) = -1/pi^2, K(pi) = 1/pi^2."""
    arr = _angles(t)
    s = PI - arr
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(
            arr < SERIES_CUTOFF, _k_series_left(arr),
            np.where(s < SERIES_CUTOFF, _k_series_right(s), _k_direct(arr)))
    return _ret(out, t)


_EVALUATORS = {
    WeightKind.PHI: phi,
    WeightKind.PSI: psi,
    WeightKind.RHO_PHI: rho_phi,
    WeightKind.F: big_f,
    WeightKind.G: big_g,
    WeightKind.M: big_m,
    WeightKind.K: big_k,
    WeightKind.H: small_h,
}

_BOUNDED = {WeightKind.RHO_PHI, WeightKind.F, WeightKind.G, WeightKind.M, WeightKind.K}


def evaluate(kind: WeightKind, t):
    return _EVALUATORS[WeightKind(kind)](t)


def const_a() -> float:
    """A = F(pi/2) = 2/(1 + log pi) + 8/((1 + log 2)^2 pi^2)."""
    return 2.0 / (1.0 + LOG_PI) + 8.0 / ((1.0 + math.log(2.0)) ** 2 * PI**2)


def const_b() -> float:
    """B = G(pi/2) = 2/(1 + log pi) + 8/((1 + log pi)^2 pi^2)."""
    return 2.0 / (1.0 + LOG_PI) + 8.0 / ((1.0 + LOG_PI) ** 2 * PI**2)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, a, b, tol):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
        if c >= d:  # interval collapsed to rounding level
            break
    candidates = [(fn(a), a), (fc, c), (fd, d), (fn(b), b)]
    return max(candidates)[1]


def sup_abs(kind: WeightKind, grid_n: int = 4096, tol: float = 1e-12):
    """Locate the maximizer of |w| on [0, pi] for a bounded weight ``kind``.

    Dense scan on ``grid_n + 1`` points, golden-section refinement on the
    bracketing cell, then (interior maxima only) a root solve of the
    central-difference slope, which resolves a flat maximum well below the
    sqrt(machine epsilon) limit of value comparisons.  Ties between equal
    |w| values are broken toward the larger signed value.
    """
    kind = WeightKind(kind)
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    if kind not in _BOUNDED:
        raise DomainError(f"{kind.value} is unbounded on [0, pi]")
    fn = _EVALUATORS[kind]
    grid = np.linspace(0.0, PI, grid_n + 1)
    grid[-1] = PI
    vals = np.asarray(fn(grid))
    key = np.lexsort((vals, np.abs(vals)))
    i = int(key[-1])

    def absval(x):
        return abs(fn(float(x)))

    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_n)]
    x = _golden_max(absval, lo, hi, tol)
    if i == 0 or i == grid_n:
        # maximizer sits on the boundary when the endpoint beats the scan
        end = grid[i]
        if absval(end) >= absval(x):
            x = end
    else:
        h = 1e-4

        def slope(y):
            return (absval(y + h) - absval(y - h)) / (2.0 * h)

        a_, b_ = max(h, x - 5 * h), min(PI - h, x + 5 * h)
        if a_ + h < b_ - h and slope(a_) > 0.0 > slope(b_):
            root = optimize.brentq(slope, a_, b_, xtol=1e-15)
            if absval(root) >= absval(x) - 1e-15:
                x = root
    return Angle(min(max(x, 0.0), PI)), absval(x)
