"""Test functions on S^2 of the form f(theta, phi) = g(theta) cos(m phi).

The pole p of the geodesic distance sits at the north pole, so d(x, p) is
just the polar angle theta.  Each function carries its profile g and the
exact derivative g'.  It also carries a *south view*, the same two
functions written in the distance s = pi - theta to the south pole.  The
south view gives accurate values next to theta = pi, where forming
pi - theta would lose digits.

All integrals over the sphere reduce to one-dimensional integrals in
theta with the weight sin(theta).  ``polar_integral`` splits at pi/2: the
north half is integrated in theta and the south half in s, so that both
poles are handled as left endpoints at 0 (see quadrature).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DivergentNorm, ModeError, NoConvergence
from .quadrature import QuadratureResult, QuadratureSpec, ZERO, integrate
from .weights import PI

__all__ = [
    "SphereFunction", "PolarSample", "polar_integral", "azimuthal_factor",
    "l2_norm_sq", "grad_norm_sq", "grad_theta_sq",
    "l2_norm_sq_result", "grad_norm_sq_result", "grad_theta_sq_result",
    "constant", "legendre", "sin_mode1",
]

HALF_PI = 0.5 * PI


def _reflected(fn):
    return lambda s: fn(PI - np.asarray(s, dtype=float))


def _negated(fn):
    return lambda s: -np.asarray(fn(s), dtype=float)


@dataclass(frozen=True)
class SphereFunction:
    """f(theta, phi) = profile(theta) cos(mode phi).

    ``south_profile(s)`` must equal ``profile(pi - s)`` and
    ``south_deriv(s)`` must equal ``profile_deriv(pi - s)`` (the theta
    derivative, not the s derivative).  When omitted they are built by
    composing with pi - s.
    """

    profile: Callable
    profile_deriv: Callable
    mode: int = 0
    singular_left: bool = False
    singular_right: bool = False
    label: str = ""
    south_profile: Callable | None = None
    south_deriv: Callable | None = None
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if int(self.mode) != self.mode or self.mode < 0:
            raise ValueError("mode must be a non-negative integer")
        if self.south_profile is None:
            object.__setattr__(self, "south_profile", _reflected(self.profile))
        if self.south_deriv is None:
            object.__setattr__(self, "south_deriv", _reflected(self.profile_deriv))
        bps = tuple(sorted({float(b) for b in self.breakpoints if 0.0 < b < PI}))
        object.__setattr__(self, "breakpoints", bps)

    # pointwise access ------------------------------------------------------
    def value(self, theta):
        return np.asarray(self.profile(np.asarray(theta, dtype=float)), dtype=float)

    def deriv(self, theta):
        return np.asarray(self.profile_deriv(np.asarray(theta, dtype=float)), dtype=float)

    def value_south(self, s):
        return np.asarray(self.south_profile(np.asarray(s, dtype=float)), dtype=float)

    def deriv_south(self, s):
        return np.asarray(self.south_deriv(np.asarray(s, dtype=float)), dtype=float)

    # algebra ---------------------------------------------------------------
    def reflect(self) -> "SphereFunction":
        """The function composed with theta -> pi - theta."""
        return SphereFunction(
            profile=self.south_profile,
            profile_deriv=_negated(self.south_deriv),
            mode=self.mode,
            singular_left=self.singular_right,
            singular_right=self.singular_left,
            label=f"reflect({self.label})",
            south_profile=self.profile,
            south_deriv=_negated(self.profile_deriv),
            breakpoints=tuple(PI - b for b in self.breakpoints),
        )

    def scale(self, c: float) -> "SphereFunction":
        c = float(c)
        mul = lambda fn: (lambda t: c * np.asarray(fn(t), dtype=float))  # noqa: E731
        return replace(
            self, profile=mul(self.profile), profile_deriv=mul(self.profile_deriv),
            south_profile=mul(self.south_profile), south_deriv=mul(self.south_deriv),
            label=f"{c:g}*{self.label}")

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def __add__(self, other: "SphereFunction") -> "SphereFunction":
        if not isinstance(other, SphereFunction):
            return NotImplemented
        if other.mode != self.mode:
            raise ModeError("cannot add functions with different azimuthal modes")
        add = lambda f1, f2: (lambda t: np.asarray(f1(t), dtype=float)  # noqa: E731
                              + np.asarray(f2(t), dtype=float))
        return SphereFunction(
            profile=add(self.profile, other.profile),
            profile_deriv=add(self.profile_deriv, other.profile_deriv),
            mode=self.mode,
            singular_left=self.singular_left or other.singular_left,
            singular_right=self.singular_right or other.singular_right,
            label=f"({self.label}+{other.label})",
            south_profile=add(self.south_profile, other.south_profile),
            south_deriv=add(self.south_deriv, other.south_deriv),
            breakpoints=self.breakpoints + other.breakpoints,
        )

    def __sub__(self, other):
        return self + (-other)

    def derivative_mismatch(self, points, h: float = 1e-6) -> float:
        """max |central difference - profile_deriv| / (1 + |profile_deriv|)."""
        pts = np.asarray(points, dtype=float)
        fd = (self.value(pts + h) - self.value(pts - h)) / (2.0 * h)
        d = self.deriv(pts)
        return float(np.max(np.abs(fd - d) / (1.0 + np.abs(d))))


# --- constructors -------------------------------------------------------------
def constant(c: float = 1.0, label: str | None = None) -> SphereFunction:
    c = float(c)
    val = lambda t: np.full(np.shape(t), c)  # noqa: E731
    zero = lambda t: np.zeros(np.shape(t))  # noqa: E731
    return SphereFunction(val, zero, label=label or f"const({c:g})",
                          south_profile=val, south_deriv=zero)


def legendre(l: int) -> SphereFunction:
    """Zonal harmonic P_l(cos theta)."""
    if l < 0:
        raise ValueError("degree must be >= 0")
    p = np.polynomial.legendre.Legendre.basis(l)
    dp = p.deriv()
    return SphereFunction(
        profile=lambda t: p(np.cos(t)),
        profile_deriv=lambda t: -np.sin(t) * dp(np.cos(t)),
        label=f"P{l}",
        south_profile=lambda s: p(-np.cos(s)),
        south_deriv=lambda s: -np.sin(s) * dp(-np.cos(s)),
    )


def sin_mode1() -> SphereFunction:
    """sin(theta) cos(phi), the x coordinate."""
    return SphereFunction(
        profile=np.sin, profile_deriv=np.cos, mode=1, label="sin*cos(phi)",
        south_profile=np.sin, south_deriv=lambda s: -np.cos(s))


# --- polar integral engine ------------------------------------------------------
@dataclass(frozen=True)
class PolarSample:
    """Quadrature nodes for one hemisphere, seen from both poles.

    ``dn`` is theta (distance to the north pole) and ``ds`` is pi - theta.
    Whichever one is the integration variable is exact.  ``values`` and
    ``derivs`` hold g and g' (theta derivative) for each function passed
    to ``polar_integral``.
    """

    dn: np.ndarray
    ds: np.ndarray
    sin: np.ndarray
    cos: np.ndarray
    values: tuple
    derivs: tuple
    north: bool


def _sample_north(funcs, t):
    return PolarSample(
        dn=t, ds=PI - t, sin=np.sin(t), cos=np.cos(t),
        values=tuple(f.value(t) for f in funcs),
        derivs=tuple(f.deriv(t) for f in funcs), north=True)


def _sample_south(funcs, s):
    return PolarSample(
        dn=PI - s, ds=s, sin=np.sin(s), cos=-np.cos(s),
        values=tuple(f.value_south(s) for f in funcs),
        derivs=tuple(f.deriv_south(s) for f in funcs), north=False)


def _pieces(lo, hi, cuts):
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    return list(zip(edges[:-1], edges[1:]))


def polar_integral(funcs: Sequence[SphereFunction], kernel, spec: QuadratureSpec = QuadratureSpec(),
                   singular=(True, True)) -> QuadratureResult:
    """Integral over [0, pi] of kernel(sample) * sin(theta) d theta.

    ``singular`` flags the poles for the endpoint treatment of
    ``integrate``; the flags of the functions themselves are added in.
    Pieces between breakpoints are integrated separately.
    """
    funcs = tuple(funcs)
    north_sing = singular[0] or any(f.singular_left for f in funcs)
    south_sing = singular[1] or any(f.singular_right for f in funcs)
    bps = sorted({b for f in funcs for b in f.breakpoints})
    north_cuts = [b for b in bps if b < HALF_PI]
    south_cuts = sorted(PI - b for b in bps if b > HALF_PI)

    def run(sampler, cuts, sing):
        def integrand(x):
            smp = sampler(funcs, x)
            return np.asarray(kernel(smp), dtype=float) * smp.sin

        total = ZERO
        pieces = _pieces(0.0, HALF_PI, cuts)
        # split the tolerance so the halves and pieces add up to it
        sub = replace(spec, abs_tol=spec.abs_tol / (2 * len(pieces)))
        for i, (a, b) in enumerate(pieces):
            s = sub.with_singular(left=(i == 0 and sing))
            total = total + integrate(integrand, a, b, s)
            if total.divergent:
                break
        return total

    north = run(_sample_north, north_cuts, north_sing)
    if north.divergent:
        return north
    return north + run(_sample_south, south_cuts, south_sing)


def azimuthal_factor(mode: int) -> float:
    """Integral of cos^2(m phi) over [0, 2 pi]."""
    return 2.0 * PI if mode == 0 else PI


def checked(res: QuadratureResult, what: str) -> float:
    if res.divergent or math.isnan(res.value):
        raise DivergentNorm(f"{what}: integral diverges")
    if not res.converged:
        raise NoConvergence(f"{what}: quadrature above tolerance "
                            f"(err {res.error_estimate:.3g})", res)
    return res.value


# --- norms ------------------------------------------------------------------
def l2_norm_sq_result(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()):
    res = polar_integral([f], lambda s: s.values[0] ** 2, spec)
    return res.scaled(azimuthal_factor(f.mode))


def grad_theta_sq_result(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()):
    res = polar_integral([f], lambda s: s.derivs[0] ** 2, spec)
    return res.scaled(azimuthal_factor(f.mode))


def grad_norm_sq_result(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()):
    m2 = float(f.mode) ** 2
    if m2 == 0.0:
        return grad_theta_sq_result(f, spec)

    def kernel(s):
        g, dg = s.values[0], s.derivs[0]
        return dg * dg + m2 * (g / s.sin) ** 2

    res = polar_integral([f], kernel, spec)
    return res.scaled(azimuthal_factor(f.mode))


def l2_norm_sq(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Squared L2 norm over the sphere."""
    return checked(l2_norm_sq_result(f, spec), "l2_norm_sq")


def grad_norm_sq(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Dirichlet energy: integral of |grad f|^2 over the sphere."""
    return checked(grad_norm_sq_result(f, spec), "grad_norm_sq")


def grad_theta_sq(f: SphereFunction, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Polar part only: integral of (df/dtheta)^2 over the sphere."""
    return checked(grad_theta_sq_result(f, spec), "grad_theta_sq")
