"""Hardy-type functionals on S^2 and the checks built from them.

Every quadratic functional is the diagonal of a symmetric bilinear form
``*_form(f1, f2, spec)`` returning a QuadratureResult.  The Gram matrices
of the rayleigh module are assembled from the same forms.  Functions with
different azimuthal modes are orthogonal in every form used here.

Weights near a pole are always evaluated from the exact distance to that
pole (``PolarSample.dn`` / ``ds``), never from pi - theta.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModeError
from .quadrature import QuadratureResult, QuadratureSpec, ZERO
from .spherefn import (SphereFunction, azimuthal_factor, checked, legendre,
                       polar_integral, sin_mode1)
from .weights import LOG_PI, PI, const_a, const_b, psi, psi_prime, small_h

__all__ = [
    "Weight", "Pole", "FunctionalReport",
    "l2_form", "grad_form", "grad_theta_form", "q_form", "t_form", "s_form",
    "boundary_form", "thm4_lhs_form", "thm4_rhs_form", "h_form",
    "q_functional", "t_functional", "s_functional", "u_functional", "boundary_term",
    "thm1_check", "thm4_check", "laplace_psi_check", "ibp_identity_residual",
    "psi_ibp_residual", "decomposition_terms", "decomposition_residual",
    "h_positivity_probe", "standard_family",
]

S_COEFF = 1.0 / (2.0 * PI * PI)
J_COEFF = 1.0 / (2.0 * PI)


class Weight(enum.Enum):
    PHI = "phi"
    PSI = "psi"


class Pole(enum.Enum):
    NORTH = "north"
    SOUTH = "south"

    def opposite(self) -> "Pole":
        return Pole.SOUTH if self is Pole.NORTH else Pole.NORTH


def _phi_of(d):
    return 1.0 + LOG_PI - np.log(d)


def _product(s):
    return s.values[0] * s.values[-1]


def _bilinear(f1, f2, kernel, spec, mode_factor=True):
    if f1.mode != f2.mode:
        return ZERO
    funcs = [f1] if f1 is f2 else [f1, f2]
    res = polar_integral(funcs, kernel, spec)
    return res.scaled(azimuthal_factor(f1.mode)) if mode_factor else res


# --- bilinear forms -----------------------------------------------------------
def l2_form(f1, f2, spec=QuadratureSpec()):
    return _bilinear(f1, f2, _product, spec)


def grad_theta_form(f1, f2, spec=QuadratureSpec()):
    return _bilinear(f1, f2, lambda s: s.derivs[0] * s.derivs[-1], spec)


def grad_form(f1, f2, spec=QuadratureSpec()):
    m2 = float(f1.mode) ** 2

    def kernel(s):
        out = s.derivs[0] * s.derivs[-1]
        if m2:
            out = out + m2 * _product(s) / (s.sin * s.sin)
        return out

    return _bilinear(f1, f2, kernel, spec)


def _q_kernel(weight):
    if weight is Weight.PHI:
        def kernel(s):
            rn = s.dn * _phi_of(s.dn)
            rs = s.ds * _phi_of(s.ds)
            return 0.25 * _product(s) * (1.0 / (rn * rn) + 1.0 / (rs * rs))
    else:
        def kernel(s):
            # psi(theta) = psi(pi - theta); both singular terms share it
            ps = _phi_of(s.sin)
            return 0.25 * _product(s) * (1.0 / (s.dn * s.dn) + 1.0 / (s.ds * s.ds)) / (ps * ps)
    return kernel


def q_form(f1, f2, weight: Weight, spec=QuadratureSpec()):
    """(1/4) int f1 f2 (1/rho^2(theta) + 1/rho^2(pi - theta)) d sigma.

    For PSI the weight is 1/(theta^2 psi^2) + 1/((pi - theta)^2 psi^2),
    which is the same as rho(t) = t psi(t) at theta and pi - theta since psi is symmetric.
    """
    return _bilinear(f1, f2, _q_kernel(Weight(weight)), spec)


def t_form(f1, f2, c: float, spec=QuadratureSpec()):
    """int grad f1 . grad f2 + (c/4) int f1 f2, as one integral."""
    m2 = float(f1.mode) ** 2
    c4 = 0.25 * float(c)

    def kernel(s):
        out = s.derivs[0] * s.derivs[-1] + c4 * _product(s)
        if m2:
            out = out + m2 * _product(s) / (s.sin * s.sin)
        return out

    return _bilinear(f1, f2, kernel, spec)


def s_form(f1, f2, spec=QuadratureSpec()):
    return _bilinear(
        f1, f2, lambda s: s.derivs[0] * s.derivs[-1] + S_COEFF * _product(s), spec)


def boundary_form(f1, f2, pole: Pole, coeff: float, spec=QuadratureSpec()):
    """coeff * int f1 f2 / d d sigma, d the distance to ``pole``."""
    pole = Pole(pole)
    if pole is Pole.NORTH:
        kernel = lambda s: coeff * _product(s) / s.dn  # noqa: E731
    else:
        kernel = lambda s: coeff * _product(s) / s.ds  # noqa: E731
    return _bilinear(f1, f2, kernel, spec)


def thm4_lhs_form(f1, f2, side: Pole, spec=QuadratureSpec()):
    """(1/4) int f1 f2 / rho_phi^2(d) d sigma, d = distance to ``side``'s pole."""
    side = Pole(side)

    def kernel(s):
        d = s.dn if side is Pole.NORTH else s.ds
        r = d * _phi_of(d)
        return 0.25 * _product(s) / (r * r)

    return _bilinear(f1, f2, kernel, spec)


def thm4_rhs_form(f1, f2, side: Pole, spec=QuadratureSpec()):
    """S-form plus (1/(2 pi)) int f1 f2 / d' d sigma, d' the distance to the other pole."""
    side = Pole(side)

    def kernel(s):
        d_other = s.ds if side is Pole.NORTH else s.dn
        return (s.derivs[0] * s.derivs[-1]
                + _product(s) * (S_COEFF + J_COEFF / d_other))

    return _bilinear(f1, f2, kernel, spec)


def _h(s):
    """h(theta) = 1/theta - cot(theta); series near the north pole."""
    if s.north:
        return small_h(s.dn)
    return 1.0 / s.dn - s.cos / s.sin


def h_form(f1, f2, spec=QuadratureSpec()):
    """int h(theta) f1 f2 / (theta phi(theta)) d sigma."""

    def kernel(s):
        return _h(s) * _product(s) / (s.dn * _phi_of(s.dn))

    return _bilinear(f1, f2, kernel, spec)


# --- quadratic functionals ---------------------------------------------------------
def q_functional(f: SphereFunction, weight: Weight, spec=QuadratureSpec()) -> float:
    return checked(q_form(f, f, weight, spec), "q_functional")


def t_functional(f: SphereFunction, c: float, spec=QuadratureSpec()) -> float:
    if not c > 0:
        raise ValueError("c must be positive")
    return checked(t_form(f, f, c, spec), "t_functional")


def s_functional(f: SphereFunction, spec=QuadratureSpec()) -> float:
    return checked(s_form(f, f, spec), "s_functional")


def u_functional(f: SphereFunction, spec=QuadratureSpec()) -> float:
    """Profile version of S without the 2 pi azimuthal factor (m = 0 only)."""
    if f.mode != 0:
        raise ModeError("U is defined for axisymmetric profiles")
    return checked(s_form(f, f, spec), "u_functional") / (2.0 * PI)


def boundary_term(f: SphereFunction, pole: Pole, coeff: float, spec=QuadratureSpec()) -> float:
    return checked(boundary_form(f, f, pole, coeff, spec), "boundary_term")


# --- inequality checks -----------------------------------------------------------------
@dataclass(frozen=True)
class FunctionalReport:
    lhs: float
    rhs: float
    lhs_err: float
    rhs_err: float
    label: str = ""

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return bool(self.margin >= -(self.lhs_err + self.rhs_err))

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @classmethod
    def from_results(cls, lhs: QuadratureResult, rhs: QuadratureResult, label=""):
        return cls(float(checked(lhs, "lhs")), float(checked(rhs, "rhs")),
                   float(lhs.error_estimate), float(rhs.error_estimate), label)

    def as_row(self) -> dict:
        return {"case_label": self.label, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "lhs_err": self.lhs_err,
                "rhs_err": self.rhs_err, "holds": self.holds}


def thm1_check(f: SphereFunction, which: Weight, spec=QuadratureSpec()) -> FunctionalReport:
    """Q(f; phi) <= T_A(f), or Q(f; psi) <= T_B(f)."""
    which = Weight(which)
    c = const_a() if which is Weight.PHI else const_b()
    return FunctionalReport.from_results(
        q_form(f, f, which, spec), t_form(f, f, c, spec),
        f"thm1/{which.value}/{f.label}")


def thm4_check(f: SphereFunction, side: Pole, spec=QuadratureSpec()) -> FunctionalReport:
    """(1/4) int f^2/rho_phi^2(d) <= S(f) + (1/(2 pi)) int f^2/(pi - d), d the distance to ``side``.

    NORTH puts rho_phi(theta) left and 1/(pi - theta) right; SOUTH mirrors.
    """
    side = Pole(side)
    return FunctionalReport.from_results(
        thm4_lhs_form(f, f, side, spec), thm4_rhs_form(f, f, side, spec),
        f"thm4/{side.value}/{f.label}")


# --- identities ------------------------------------------------------------------
def laplace_psi_check(sample_count: int = 100, fn=None, fn_prime=None, h: float = 1e-5) -> float:
    """max |(1/sin) d/dtheta (sin fn'(theta)) - 1| on [0.1, pi - 0.1].

    The outer derivative is a central difference with step ``h``.  With
    ``fn_prime`` omitted the inner derivative of ``fn`` is a central
    difference too.  Defaults to psi, whose Laplacian is exactly 1.
    """
    if sample_count < 10:
        raise ValueError("sample_count must be >= 10")
    if fn is None:
        fn, fn_prime = psi, psi_prime
    if fn_prime is None:
        def fn_prime(t):
            return (fn(t + h) - fn(t - h)) / (2.0 * h)

    t = np.linspace(0.1, PI - 0.1, sample_count)
    flux = lambda x: np.sin(x) * fn_prime(x)  # noqa: E731
    lap = (flux(t + h) - flux(t - h)) / (2.0 * h) / np.sin(t)
    return float(np.max(np.abs(lap - 1.0)))


def ibp_identity_residual(f: SphereFunction, spec=QuadratureSpec(), detail=False):
    """Integration by parts against grad(1/phi(theta)).

    int f^2/(theta^2 phi^2) = -2 int f f'/(theta phi) + I, with
    I = int h(theta) f^2 / (theta phi) the combined convergent integral.
    Returns |lhs - rhs| (and the pieces when ``detail`` is set).
    """
    if f.mode != 0:
        raise ModeError("identity is stated for axisymmetric f")

    def lhs_kernel(s):
        r = s.dn * _phi_of(s.dn)
        return s.values[0] ** 2 / (r * r)

    def cross_kernel(s):
        return -2.0 * s.values[0] * s.derivs[0] / (s.dn * _phi_of(s.dn))

    lhs = _bilinear(f, f, lhs_kernel, spec)
    cross = _bilinear(f, f, cross_kernel, spec)
    i_term = h_form(f, f, spec)
    lhs_v = checked(lhs, "ibp lhs")
    rhs_v = checked(cross, "ibp cross") + checked(i_term, "ibp I")
    residual = abs(lhs_v - rhs_v)
    if detail:
        err = lhs.error_estimate + cross.error_estimate + i_term.error_estimate
        return residual, {"lhs": lhs_v, "cross": cross.value, "I": i_term.value, "err": err}
    return residual


def psi_ibp_residual(f: SphereFunction, spec=QuadratureSpec()):
    """int <grad psi, grad f^2> + int f^2 - 2 pi (f(0)^2 + f(pi)^2), for m = 0.

    Integration by parts with Laplacian(psi) = 1.  Because psi is
    logarithmic at both poles, each pole adds a flux 2 pi f(pole)^2.  So the
    identity needs f to be finite at the poles.  Returns (residual,
    combined error estimate).
    """
    if f.mode != 0:
        raise ModeError("identity is checked for axisymmetric f")
    poles = float(f.value(0.0)) ** 2 + float(f.value_south(0.0)) ** 2
    if not math.isfinite(poles):
        raise ValueError("f must be finite at the poles")

    def kernel(s):
        # psi' = -cot(theta), written with the exact sin/cos of the sample
        return -2.0 * s.values[0] * s.derivs[0] * s.cos / s.sin

    a = _bilinear(f, f, kernel, spec)
    b = l2_form(f, f, spec)
    total = checked(a, "grad psi . grad f^2") + checked(b, "l2") - 2.0 * PI * poles
    return abs(total), a.error_estimate + b.error_estimate


def decomposition_terms(f: SphereFunction, t: float) -> dict:
    """Pieces of psi |grad g|^2 = |grad f|^2 - f_theta^2 + (f_theta - f psi'/(2 psi))^2.

    g = f / sqrt(psi); profiles are amplitudes of cos(m phi), so the
    azimuthal part of |grad f|^2 is m^2 f^2 / sin^2.
    """
    t = float(t)
    if not 0.0 < t < PI:
        raise ValueError("t must lie strictly between the poles")
    fv = float(f.value(t))
    fd = float(f.deriv(t))
    ps = psi(t)
    dps = psi_prime(t)
    sq = math.sqrt(ps)
    g = fv / sq
    dg = fd / sq - 0.5 * fv * dps / (ps * sq)
    m2 = float(f.mode) ** 2
    sin2 = math.sin(t) ** 2
    lhs = ps * (dg * dg + m2 * g * g / sin2)
    azimuthal = m2 * fv * fv / sin2
    bracket = fd - 0.5 * fv * dps / ps
    return {"lhs": lhs, "azimuthal": azimuthal, "bracket_sq": bracket * bracket,
            "rhs": azimuthal + bracket * bracket}


def decomposition_residual(f: SphereFunction, t: float) -> float:
    terms = decomposition_terms(f, t)
    return abs(terms["lhs"] - terms["rhs"])


def h_positivity_probe(f: SphereFunction, spec=QuadratureSpec()) -> float:
    """int h(theta) f^2 / (theta phi(theta)) d sigma; zero would mean an extremal for the one-pole inequality."""
    return checked(h_form(f, f, spec), "h_positivity_probe")


# --- standard test family ----------------------------------------------------------
def _smootherstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x))


def _smootherstep_deriv(x):
    inside = (x > 0.0) & (x < 1.0)
    x = np.clip(x, 0.0, 1.0)
    return np.where(inside, 30.0 * x * x * (1.0 - x) ** 2, 0.0)


def bump(center: float, width: float = PI / 8, label: str | None = None) -> SphereFunction:
    """C^2 bump S(1 - |theta - center|/width), S the quintic smootherstep."""

    def prof(t):
        return _smootherstep(1.0 - np.abs(np.asarray(t) - center) / width)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        x = 1.0 - np.abs(t - center) / width
        return -np.sign(t - center) / width * _smootherstep_deriv(x)

    return SphereFunction(prof, deriv, label=label or f"bump({center:.4g})",
                          breakpoints=(center - width, center, center + width))


def standard_family(axisymmetric_only: bool = False) -> list:
    """P_l (l <= 6), f_n (n = 2, 4, 8, 16), sin(theta)cos(phi), bumps at pi/4 and pi/2."""
    from .sequences import make_f_n

    fam = [legendre(l) for l in range(7)]
    fam += [make_f_n(n) for n in (2, 4, 8, 16)]
    if not axisymmetric_only:
        fam.append(sin_mode1())
    fam += [bump(PI / 4, label="bump(pi/4)"), bump(PI / 2, label="bump(pi/2)")]
    return fam
