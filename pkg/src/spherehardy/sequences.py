"""Extremizing sequences f_n = phi^(1/2 - 1/n) and g_n = psi^(1/2 - 1/n).

Each ratio is computed two ways.  The direct way evaluates the sphere
functionals on f_n.  The formula way uses the one-dimensional integrals
alpha, beta, gamma, in which the ratio is an algebraic expression.

  PHI:   Q(f_n; phi) / T_A(f_n)    = (alpha + beta) / (a alpha + gamma)
  PSI:   Q(g_n; psi) / T_B(g_n)    = alpha~ / (a alpha~ + beta~)
  THM4:  lhs(f_n) / rhs(f_n)       = alpha / (a alpha + beta4 + gamma4)

Here a = (1 - 2/n)^2.  The one-pole (THM4) quotient is multiplied through by 4
so that it has the same shape as the PHI one:
beta4 = (2/pi) int phi^(1-2/n) sin/(pi - theta) and
gamma4 = (2/pi^2) int phi^(1-2/n) sin.

The exponent of phi in beta is 1 - 2/n, as in its definition.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, NoConvergence
from .functionals import (FunctionalReport, Pole, Weight, q_form, t_form,
                          thm4_lhs_form, thm4_rhs_form, grad_form)
from .quadrature import QuadratureResult, QuadratureSpec, integrate, integrate_log_sub
from .spherefn import SphereFunction, checked
from .weights import LOG_PI, PI, big_m, const_a, const_b, phi_complement

__all__ = [
    "SequenceRecord", "make_f_n", "make_g_n", "alpha_n", "beta_n", "gamma_n",
    "alpha_tilde_n", "beta_tilde_n", "thm4_beta_n", "thm4_gamma_n",
    "ratio_ladder", "thm4_ratio_ladder", "closed_form_check",
    "make_flattened_root", "nonattain_probe", "fit_decay", "alpha_lower_bound",
    "alpha_tilde_lower_bound", "DEFAULT_LADDER", "MAX_N",
]

HALF_PI = 0.5 * PI
DEFAULT_LADDER = (16, 32, 64, 128, 256, 512, 1024)
MAX_N = 4096


def _phi(d):
    with np.errstate(divide="ignore"):
        return 1.0 + LOG_PI - np.log(d)


def _check_n(n, lo=2):
    if int(n) != n or n < lo:
        raise DomainError(f"n must be an integer >= {lo}")
    if n > MAX_N:
        raise DomainError(f"n is capped at {MAX_N}")
    return int(n)


def a_n(n: int) -> float:
    return (1.0 - 2.0 / n) ** 2


# --- constructors -------------------------------------------------------------
def make_f_n(n: int) -> SphereFunction:
    """f_n = phi(theta)^(1/2 - 1/n), singular (for n > 2) at the north pole."""
    n = _check_n(n)
    e = 0.5 - 1.0 / n
    k = 1.0 / n - 0.5

    def prof(t):
        return _phi(np.asarray(t, dtype=float)) ** e

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return k / (t * _phi(t) ** (0.5 + 1.0 / n))

    def prof_s(s):
        return phi_complement(s) ** e

    def deriv_s(s):
        s = np.asarray(s, dtype=float)
        return k / ((PI - s) * phi_complement(s) ** (0.5 + 1.0 / n))

    return SphereFunction(prof, deriv, singular_left=n > 2, label=f"f_{n}",
                          south_profile=prof_s, south_deriv=deriv_s)


def _psi_of_dist(d):
    # psi at polar distance d from either pole
    return _phi(np.sin(np.asarray(d, dtype=float)))


def make_g_n(n: int) -> SphereFunction:
    """g_n = psi(theta)^(1/2 - 1/n), symmetric under theta -> pi - theta."""
    n = _check_n(n)
    e = 0.5 - 1.0 / n

    def prof(t):
        return _psi_of_dist(t) ** e

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return -e * _psi_of_dist(t) ** (-0.5 - 1.0 / n) * np.cos(t) / np.sin(t)

    def deriv_s(s):
        s = np.asarray(s, dtype=float)
        return e * _psi_of_dist(s) ** (-0.5 - 1.0 / n) * np.cos(s) / np.sin(s)

    return SphereFunction(prof, deriv, singular_left=n > 2, singular_right=n > 2,
                          label=f"g_{n}", south_profile=prof, south_deriv=deriv_s)


# --- one-dimensional ingredients --------------------------------------------------
def _value(res: QuadratureResult, what: str) -> QuadratureResult:
    checked(res, what)
    return res


def _split(north_integrand, south_integrand, spec, left=True):
    """int over [0, pi] as theta in [0, pi/2] plus s = pi - theta in [0, pi/2]."""
    s = spec.with_singular(left=left)
    return (integrate(north_integrand, 0.0, HALF_PI, s)
            + integrate(south_integrand, 0.0, HALF_PI, s))


def alpha_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n, 1)
    p = 1.0 + 2.0 / n
    near = integrate_log_sub(lambda t: np.sin(t) / t, p, HALF_PI, spec)

    def far(s):
        t = PI - s
        return np.sin(s) / (t * t * phi_complement(s) ** p)

    return _value(near + integrate(far, 0.0, HALF_PI, spec), "alpha_n")


def alpha_n(n, spec=QuadratureSpec()) -> float:
    """int_0^pi sin(theta) / (theta^2 phi^(1+2/n)) d theta."""
    return alpha_n_result(n, spec).value


def beta_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n)
    e = 1.0 - 2.0 / n

    def north(t):
        u = PI - t
        return _phi(t) ** e * np.sin(t) / (u * u * phi_complement(t) ** 2)

    # near the south pole: s = pi - theta, singular weight 1/(s phi(s)^2)
    south = integrate_log_sub(lambda s: phi_complement(s) ** e * np.sin(s) / s, 2.0, HALF_PI, spec)
    return _value(integrate(north, 0.0, HALF_PI, spec.with_singular(left=True)) + south, "beta_n")


def beta_n(n, spec=QuadratureSpec()) -> float:
    """int_0^pi phi^(1-2/n)(theta) sin / ((pi - theta)^2 phi^2(pi - theta)) d theta."""
    return beta_n_result(n, spec).value


def _phi_power_sin(e, spec, weight_n=None, weight_s=None):
    wn = weight_n or (lambda t: 1.0)
    ws = weight_s or (lambda s: 1.0)
    return _split(lambda t: _phi(t) ** e * np.sin(t) * wn(t),
                  lambda s: phi_complement(s) ** e * np.sin(s) * ws(s), spec)


def gamma_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n)
    return _value(_phi_power_sin(1.0 - 2.0 / n, spec).scaled(const_a()), "gamma_n")


def gamma_n(n, spec=QuadratureSpec()) -> float:
    """A int_0^pi phi^(1-2/n) sin d theta."""
    return gamma_n_result(n, spec).value


def thm4_beta_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n)
    res = _phi_power_sin(1.0 - 2.0 / n, spec,
                         weight_n=lambda t: 1.0 / (PI - t), weight_s=lambda s: 1.0 / s)
    return _value(res.scaled(2.0 / PI), "thm4_beta_n")


def thm4_beta_n(n, spec=QuadratureSpec()) -> float:
    """(2/pi) int phi^(1-2/n) sin / (pi - theta) d theta."""
    return thm4_beta_n_result(n, spec).value


def thm4_gamma_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n)
    return _value(_phi_power_sin(1.0 - 2.0 / n, spec).scaled(2.0 / PI ** 2), "thm4_gamma_n")


def thm4_gamma_n(n, spec=QuadratureSpec()) -> float:
    """(2/pi^2) int phi^(1-2/n) sin d theta."""
    return thm4_gamma_n_result(n, spec).value


def alpha_tilde_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n, 1)
    p = 1.0 + 2.0 / n

    def w(t):
        # sin/theta * (phi(theta)/psi(theta))^p, smooth and -> 1 at 0
        return np.sin(t) / t * (_phi(t) / _psi_of_dist(t)) ** p

    def far(s):
        t = PI - s
        return np.sin(s) / (t * t * _psi_of_dist(s) ** p)

    near = integrate_log_sub(w, p, HALF_PI, spec)
    far_res = integrate(far, 0.0, HALF_PI, spec.with_singular(left=True))
    return _value((near + far_res).scaled(2.0), "alpha_tilde_n")


def alpha_tilde_n(n, spec=QuadratureSpec()) -> float:
    """2 int_0^pi sin / (theta^2 psi^(1+2/n)) d theta."""
    return alpha_tilde_n_result(n, spec).value


def beta_tilde_n_result(n, spec=QuadratureSpec()) -> QuadratureResult:
    n = _check_n(n)
    e = 1.0 - 2.0 / n
    p = 1.0 + 2.0 / n
    a = a_n(n)

    def integrand(t):
        ps = _psi_of_dist(t)
        return np.sin(t) * (const_b() * ps ** e - a * big_m(t) / ps ** p)

    # symmetric about pi/2
    res = integrate(integrand, 0.0, HALF_PI, spec.with_singular(left=True)).scaled(2.0)
    return _value(res, "beta_tilde_n")


def beta_tilde_n(n, spec=QuadratureSpec()) -> float:
    """B int psi^(1-2/n) sin - a_n int M sin / psi^(1+2/n)."""
    return beta_tilde_n_result(n, spec).value


def alpha_lower_bound(n) -> float:
    return n / (PI * (1.0 + math.log(2.0)) ** (2.0 / n))


def alpha_tilde_lower_bound(n) -> float:
    return 4.0 * n / (PI ** 2 * (1.0 + math.log(PI)) ** (2.0 / n))


def closed_form_check(n, spec=QuadratureSpec()) -> float:
    """|int_0^pi d theta / (theta phi^(1+2/n)) - n/2|."""
    n = _check_n(n, 1)
    res = integrate_log_sub(lambda t: np.ones_like(t), 1.0 + 2.0 / n, PI, spec)
    return abs(res.value - 0.5 * n)


# --- ladders --------------------------------------------------------------------------
@dataclass(frozen=True)
class SequenceRecord:
    n: int
    a_n: float
    alpha: float
    beta: float
    gamma: float
    ratio_direct: float
    ratio_formula: float
    quadrature_err: float
    direct_err: float = 0.0
    formula_err: float = 0.0

    def as_row(self) -> dict:
        row = asdict(self)
        row.pop("direct_err")
        row.pop("formula_err")
        return row


def _ratio_err(num: QuadratureResult, den: QuadratureResult) -> tuple:
    r = num.value / den.value
    return r, abs(r) * (num.error_estimate / abs(num.value) + den.error_estimate / abs(den.value))


def _record(n, alpha, beta, gamma, num_f, den_f, direct: FunctionalReport):
    rf, ef = _ratio_err(num_f, den_f)
    rd = direct.ratio
    ed = abs(rd) * (direct.lhs_err / abs(direct.lhs) + direct.rhs_err / abs(direct.rhs))
    return SequenceRecord(
        n=n, a_n=a_n(n), alpha=alpha.value, beta=beta.value, gamma=gamma.value,
        ratio_direct=rd, ratio_formula=rf, quadrature_err=ed + ef,
        direct_err=ed, formula_err=ef)


def _ladder_ns(ns):
    ns = [_check_n(n, 3) for n in ns]
    if not ns:
        raise ValueError("empty ladder")
    return ns


def _phi_record(n, spec):
    a = a_n(n)
    al, be, ga = alpha_n_result(n, spec), beta_n_result(n, spec), gamma_n_result(n, spec)
    f = make_f_n(n)
    direct = FunctionalReport.from_results(
        q_form(f, f, Weight.PHI, spec), t_form(f, f, const_a(), spec), f"phi/f_{n}")
    return _record(n, al, be, ga, al + be, al.scaled(a) + ga, direct)


def _psi_record(n, spec):
    a = a_n(n)
    at, bt = alpha_tilde_n_result(n, spec), beta_tilde_n_result(n, spec)
    g = make_g_n(n)
    direct = FunctionalReport.from_results(
        q_form(g, g, Weight.PSI, spec), t_form(g, g, const_b(), spec), f"psi/g_{n}")
    zero = QuadratureResult(0.0, 0.0, 0, True)
    return _record(n, at, bt, zero, at, at.scaled(a) + bt, direct)


def ratio_ladder(ns=DEFAULT_LADDER, which: Weight = Weight.PHI, spec=QuadratureSpec()) -> list:
    """Q/T ratios along the ladder; PSI stores alpha~, beta~ and gamma = 0."""
    which = Weight(which)
    make = _phi_record if which is Weight.PHI else _psi_record
    return [make(n, spec) for n in _ladder_ns(ns)]


def thm4_ratio_ladder(ns=DEFAULT_LADDER, side: Pole = Pole.NORTH, spec=QuadratureSpec()) -> list:
    """One-pole inequality quotients for f_n (NORTH) or its reflection (SOUTH)."""
    side = Pole(side)
    out = []
    for n in _ladder_ns(ns):
        a = a_n(n)
        al = alpha_n_result(n, spec)
        be, ga = thm4_beta_n_result(n, spec), thm4_gamma_n_result(n, spec)
        f = make_f_n(n)
        if side is Pole.SOUTH:
            f = f.reflect()
        direct = FunctionalReport.from_results(
            thm4_lhs_form(f, f, side, spec), thm4_rhs_form(f, f, side, spec),
            f"thm4/{side.value}/f_{n}")
        out.append(_record(n, al, be, ga, al, al.scaled(a) + be + ga, direct))
    return out


def fit_decay(ns, ratios) -> tuple:
    """Least-squares fit of log(1 - ratio) = log C + slope log n; returns (C, slope, R^2)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(1.0 - np.asarray(ratios, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return math.exp(intercept), float(slope), r2


# --- non-attainment ---------------------------------------------------------------------
def make_flattened_root(eps: float, weight: Weight = Weight.PSI) -> SphereFunction:
    """sqrt(psi) (both caps) or sqrt(phi) (north cap) held constant within eps of the pole.

    The flattened function is continuous, in H^1, and has an exact
    derivative (zero on the caps).
    """
    eps = float(eps)
    if not 0.0 < eps < PI / 4:
        raise DomainError("eps must lie in (0, pi/4)")
    weight = Weight(weight)
    if weight is Weight.PSI:
        cap = math.sqrt(float(_psi_of_dist(eps)))

        def prof(t):
            t = np.asarray(t, dtype=float)
            d = np.minimum(t, PI - t)
            return np.where(d < eps, cap, np.sqrt(_psi_of_dist(np.maximum(d, eps))))

        def deriv(t):
            t = np.asarray(t, dtype=float)
            d = np.minimum(t, PI - t)
            live = d >= eps
            dd = np.where(live, d, HALF_PI)
            return np.where(live, -0.5 * np.cos(t) / np.sin(t) / np.sqrt(_psi_of_dist(dd)), 0.0)

        def deriv_s(s):
            return -deriv(np.asarray(s, dtype=float))

        return SphereFunction(prof, deriv, label=f"sqrt(psi)|{eps:g}",
                              south_profile=prof, south_deriv=deriv_s,
                              breakpoints=(eps, PI - eps))
    cap = math.sqrt(float(_phi(eps)))

    def prof_phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < eps, cap, np.sqrt(_phi(np.maximum(t, eps))))

    def deriv_phi(t):
        t = np.asarray(t, dtype=float)
        tt = np.maximum(t, eps)
        return np.where(t < eps, 0.0, -0.5 / (tt * np.sqrt(_phi(tt))))

    return SphereFunction(
        prof_phi, deriv_phi, label=f"sqrt(phi)|{eps:g}",
        south_profile=lambda s: np.sqrt(phi_complement(s)),
        south_deriv=lambda s: -0.5 / ((PI - np.asarray(s)) * np.sqrt(phi_complement(s))),
        breakpoints=(eps,))


def nonattain_probe(eps_ladder=(1e-2, 1e-4, 1e-6, 1e-8), spec=QuadratureSpec()) -> list:
    """(eps, grad energy, Q(f;psi)/T_B(f)) for flattened sqrt(psi)."""
    eps_ladder = [float(e) for e in eps_ladder]
    if any(b >= a for a, b in zip(eps_ladder, eps_ladder[1:])):
        raise ValueError("eps values must be decreasing")
    rows = []
    for eps in eps_ladder:
        f = make_flattened_root(eps, Weight.PSI)
        energy = checked(grad_form(f, f, spec), "grad energy")
        rep = FunctionalReport.from_results(
            q_form(f, f, Weight.PSI, spec), t_form(f, f, const_b(), spec))
        rows.append((eps, energy, rep.ratio))
    return rows
