"""Adaptive Gauss-Kronrod (7,15) quadrature with log-type endpoint singularities.

Integrands are called with numpy arrays of 15 abscissae and must return an
array of the same length.

A flagged singular endpoint ``e`` is handled in three layers: the outer
1e-2 cell next to ``e`` is split geometrically (ratio 1/4, 40 cells); the
piece left over below the finest cell is integrated in the variable
``u = log(pi e / d)``, ``d = |x - e|``; and the part beyond the deepest
sampled ``u`` is a power law ``C u**-p`` fitted to the integrand in that
variable.  Integrable singularities of the form d^-1 log(1/d)^-p (p > 1)
have mass far below the smallest representable d, so no amount of
bisection in x can resolve them in double precision; the fit can.  A
fitted exponent p <= 1 signals a divergent integral (value +inf).

The u-variable stages are exact only for an endpoint at 0.  For a nonzero
endpoint the distance |x - e| is limited by the spacing of doubles near
``e``; callers that need full accuracy reflect the problem so that the
singular point sits at 0.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = ["QuadratureSpec", "QuadratureResult", "integrate", "integrate_log_sub"]

_EPS = np.finfo(float).eps
_LOG_PI_E = math.log(math.pi) + 1.0
_MAX_CELLS = 20000
_SPLIT_CELL = 1e-2
_SPLIT_RATIO = 0.25
_SPLIT_STEPS = 40
_MAX_TAIL_U = 170.0
_DIVERGENCE_GAP = 1e-9

# Kronrod abscissae on [0, 1); the Gauss 7-point nodes are the odd entries.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 60
    singular_left: bool = False
    singular_right: bool = False

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    def with_singular(self, left=False, right=False) -> "QuadratureSpec":
        return replace(self, singular_left=left, singular_right=right)

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )

    def scaled(self, c: float) -> "QuadratureResult":
        return QuadratureResult(c * self.value, abs(c) * self.error_estimate,
                                self.evaluations, self.converged)

    @property
    def divergent(self) -> bool:
        return math.isinf(self.value)


ZERO = QuadratureResult(0.0, 0.0, 0, True)


def _gk15(f, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = np.asarray(f(center + half * NODES), dtype=float)
    if y.shape != (15,):
        y = np.broadcast_to(y, (15,))
    k = half * float(KRONROD_WEIGHTS @ y)
    g = half * float(GAUSS_WEIGHTS @ y)
    resabs = abs(half) * float(KRONROD_WEIGHTS @ np.abs(y))
    err = max(abs(k - g), 50.0 * _EPS * resabs)
    if not (math.isfinite(k) and math.isfinite(err)):
        return math.nan, math.inf
    return k, err


def _adaptive(f, cells, spec, extra=ZERO):
    """Error-driven bisection over an initial list of (a, b) cells.

    ``extra`` is a fixed contribution (already integrated) that counts
    towards the tolerance and the totals.
    """
    heap = []
    frozen = []
    evals = 0
    for a, b in cells:
        v, e = _gk15(f, a, b)
        evals += 15
        heap.append((-e, a, b, 0, v))
    heapq.heapify(heap)
    total_v = math.fsum(c[4] for c in heap) + extra.value
    total_e = math.fsum(-c[0] for c in heap) + extra.error_estimate
    converged = False
    steps = 0
    while True:
        if math.isnan(total_v):
            break
        if total_e <= spec.tolerance(total_v):
            converged = True
            break
        if not heap or len(heap) + len(frozen) >= _MAX_CELLS:
            break
        neg_e, a, b, depth, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if depth >= spec.max_depth or not a < mid < b:
            frozen.append((neg_e, a, b, depth, v))
            continue
        v1, e1 = _gk15(f, a, mid)
        v2, e2 = _gk15(f, mid, b)
        evals += 30
        heapq.heappush(heap, (-e1, a, mid, depth + 1, v1))
        heapq.heappush(heap, (-e2, mid, b, depth + 1, v2))
        total_v += v1 + v2 - v
        total_e += e1 + e2 + neg_e
        steps += 1
        if steps % 64 == 0:
            allc = heap + frozen
            total_v = math.fsum(c[4] for c in allc) + extra.value
            total_e = math.fsum(-c[0] for c in allc) + extra.error_estimate
    allc = heap + frozen
    total_v = math.fsum(c[4] for c in allc) + extra.value
    total_e = math.fsum(-c[0] for c in allc) + extra.error_estimate
    if math.isnan(total_v):
        total_e = math.inf
    converged = converged and extra.converged and total_e <= spec.tolerance(total_v)
    return QuadratureResult(total_v, total_e, evals + extra.evaluations, converged)


def _distance_of_u(u):
    return np.exp(_LOG_PI_E - u)


def _u_of_distance(d):
    return _LOG_PI_E - math.log(d)


def _tail_fit(G, pts, alt):
    """Integral of a fitted C u^-p from pts[0] to infinity, with error."""

    def fit(u1, u2):
        g1, g2 = G(u1), G(u2)
        if not (math.isfinite(g1) and math.isfinite(g2)):
            return None, None
        if g1 == 0.0 or g2 == 0.0:
            return g1, math.inf
        if g1 * g2 < 0.0:
            return None, None
        return g1, math.log(g1 / g2) / math.log(u2 / u1)

    g0, p = fit(*pts)
    if g0 is None:
        g = G(pts[0])
        return QuadratureResult(0.0, abs(g) * pts[0], 4, False)
    if g0 == 0.0 or math.isinf(p):
        return QuadratureResult(0.0, 0.0, 4, True)
    if p - 1.0 <= _DIVERGENCE_GAP:
        return QuadratureResult(math.inf, math.inf, 4, False)
    u0 = pts[0]
    tail = g0 * u0 / (p - 1.0)
    _, p_alt = fit(*alt)
    if p_alt is None or math.isinf(p_alt) or p_alt - 1.0 <= _DIVERGENCE_GAP:
        err = abs(tail)
    else:
        err = abs(tail - g0 * u0 / (p_alt - 1.0))
    err += 16.0 * _EPS * abs(tail) * (1.0 + 1.0 / (p - 1.0))
    return QuadratureResult(tail, err, 4, True)


def _remnant(f, endpoint, sign, d_r, spec):
    """Integral of f over the distance range (0, d_r] from ``endpoint``."""

    def sample(d):
        x = endpoint + sign * d
        d_eff = abs(x - endpoint)
        return x, d_eff

    def G_scalar(u):
        x, d_eff = sample(float(_distance_of_u(u)))
        if d_eff == 0.0:
            return math.nan
        return float(np.asarray(f(np.full(15, x)), dtype=float).reshape(-1)[0]) * d_eff

    u_r = _u_of_distance(d_r)
    if endpoint == 0.0:
        u_hi = min(2.0 * u_r, _MAX_TAIL_U)

        def G(u):
            d = _distance_of_u(u)
            return np.asarray(f(sign * d), dtype=float) * d

        body = _adaptive(G, [(u_r, u_hi)], spec) if u_hi > u_r else ZERO
        tail = _tail_fit(G_scalar, (u_hi, 2.0 * u_hi), (0.5 * u_hi, u_hi))
        return body + tail
    return _tail_fit_nonzero(G_scalar, u_r)


def _tail_fit_nonzero(G, u_r):
    # samples only at resolvable distances (u <= u_r); extrapolate beyond u_r
    g_r, g_h = G(u_r), G(0.5 * u_r)
    if g_r == 0.0 or math.isnan(g_r):
        return QuadratureResult(0.0, 0.0 if g_r == 0.0 else math.inf, 2, g_r == 0.0)
    if g_h == 0.0 or g_r * g_h < 0.0 or math.isnan(g_h):
        return QuadratureResult(0.0, abs(g_r) * u_r, 2, False)
    p = math.log(g_h / g_r) / math.log(2.0)
    if p - 1.0 <= _DIVERGENCE_GAP:
        return QuadratureResult(math.inf, math.inf, 2, False)
    tail = g_r * u_r / (p - 1.0)
    g_q = G(0.25 * u_r)
    if g_q != 0.0 and g_q * g_h > 0.0:
        p_alt = math.log(g_q / g_h) / math.log(2.0)
        err = abs(tail - g_r * u_r / (p_alt - 1.0)) if p_alt > 1.0 + _DIVERGENCE_GAP \
            else abs(tail)
    else:
        err = abs(tail)
    return QuadratureResult(tail, err + 16.0 * _EPS * abs(tail), 3, True)


def _geometric_cells(endpoint, sign, length):
    """Cells shrinking by 1/4 toward ``endpoint``; returns (cells, remnant width)."""
    cells = []
    floor = 0.0 if endpoint == 0.0 else 256.0 * math.ulp(endpoint)
    d = length
    for _ in range(_SPLIT_STEPS):
        d_next = d * _SPLIT_RATIO
        if d_next < floor:
            break
        lo, hi = sorted((endpoint + sign * d_next, endpoint + sign * d))
        cells.append((lo, hi))
        d = d_next
    return cells, d


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> QuadratureResult:
    """Adaptive GK(7,15) integral of ``f`` over [a, b].

    Never raises on non-convergence: the returned result carries
    ``converged=False`` (callers decide whether that is fatal).  A
    divergent singular endpoint gives ``value=inf``.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    left, right = spec.singular_left, spec.singular_right
    if left and right:
        m = 0.5 * (a + b)
        half = replace(spec, rel_tol=spec.rel_tol, abs_tol=0.5 * spec.abs_tol)
        return (integrate(f, a, m, half.with_singular(left=True))
                + integrate(f, m, b, half.with_singular(right=True)))
    cells = []
    remnant = ZERO
    lo, hi = a, b
    if left or right:
        length = min(_SPLIT_CELL, 0.5 * (b - a))
        endpoint, sign = (a, 1.0) if left else (b, -1.0)
        geo, d_r = _geometric_cells(endpoint, sign, length)
        cells.extend(geo)
        remnant = _remnant(f, endpoint, sign, d_r, spec)
        if remnant.divergent:
            return remnant
        if left:
            lo = a + length
        else:
            hi = b - length
    cells.append((lo, hi))
    return _adaptive(f, cells, spec, extra=remnant)


def integrate_log_sub(w, p_exponent: float, theta_hi: float,
                      spec: QuadratureSpec = QuadratureSpec(),
                      u_cut: float = 50.0) -> QuadratureResult:
    """Integral of w(t) / (t phi(t)**p) over (0, theta_hi], phi(t) = log(pi e / t).

    Uses u = phi(t), t = pi e**(1 - u): the integral becomes the integral of
    w(t(u)) u**-p over [phi(theta_hi), inf).  The range beyond ``u_cut`` is
    replaced by the exact power-law tail w(0+) u_cut**(1-p) / (p - 1).
    """
    p = float(p_exponent)
    if not p > 1.0:
        raise DomainError("integral diverges for p_exponent <= 1")
    if not 0.0 < theta_hi <= math.pi:
        raise DomainError("theta_hi must lie in (0, pi]")
    u_lo = _u_of_distance(theta_hi)

    def integrand(u):
        return np.asarray(w(_distance_of_u(u)), dtype=float) * u ** (-p)

    theta_cut = float(_distance_of_u(u_cut))
    w_arr = np.asarray(w(np.array([theta_cut, theta_cut / math.e])), dtype=float)
    w0 = float(w_arr[0])
    scale = u_cut ** (1.0 - p) / (p - 1.0)
    tail = QuadratureResult(
        w0 * scale, (abs(w_arr[0] - w_arr[1]) + 4.0 * _EPS * abs(w0)) * scale, 2, True)
    if u_lo >= u_cut:
        return QuadratureResult(w0 * u_lo ** (1.0 - p) / (p - 1.0),
                                tail.error_estimate, 2, True)
    return _adaptive(integrand, [(u_lo, u_cut)], spec, extra=tail)
