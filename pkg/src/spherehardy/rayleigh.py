"""Subspace lower bounds for the sharp constant via Q v = lambda T v.

The largest generalized eigenvalue over span(basis) is the maximum of the
ratio Q(f)/T(f) on that subspace.  It never exceeds the supremum, which
is 1.  Gram entries come from the bilinear forms in ``functionals`` (not
polarization) and are cached per (form, element pair, spec), so nested
ladders only pay for their new rows.

The solver equilibrates T to unit diagonal.  It then factors T = L L^T
(rejecting the basis if the pivot ratio exceeds 1e12), forms
C = L^-1 Q L^-T and diagonalizes C by cyclic Jacobi.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConditioningError, NoConvergence, NotPositiveDefinite
from .functionals import Pole, Weight, q_form, t_form, thm4_lhs_form, thm4_rhs_form
from .quadrature import QuadratureSpec
from .sequences import make_f_n, make_g_n
from .spherefn import SphereFunction, checked, legendre
from .weights import const_a, const_b

__all__ = [
    "ElementKind", "BasisElement", "Form", "BasisSpec", "GramPair",
    "assemble", "cholesky", "jacobi_eigh", "max_gen_eig", "eig_residual",
    "sharpness_curve", "default_ladder", "PIVOT_RATIO_LIMIT",
]

PIVOT_RATIO_LIMIT = 1e12
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


class ElementKind(enum.Enum):
    LEGENDRE = "legendre"
    PHI_POWER = "phi-pow"
    PSI_POWER = "psi-pow"


@dataclass(frozen=True)
class BasisElement:
    kind: ElementKind
    index: int
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ElementKind(self.kind))
        lo = 0 if self.kind is ElementKind.LEGENDRE else 3
        if int(self.index) != self.index or self.index < lo:
            raise ValueError(f"{self.kind.value} index must be an integer >= {lo}")

    def function(self) -> SphereFunction:
        return _element_function(self.kind, int(self.index), float(self.scale))

    def __str__(self):
        s = f"{self.kind.value}:{self.index}"
        return s if self.scale == 1.0 else f"{self.scale:g}*{s}"


@lru_cache(maxsize=None)
def _element_function(kind, index, scale):
    if kind is ElementKind.LEGENDRE:
        f = legendre(index)
    elif kind is ElementKind.PHI_POWER:
        f = make_f_n(index)
    else:
        f = make_g_n(index)
    return f if scale == 1.0 else f.scale(scale)


class Form(enum.Enum):
    PHI = "phi"
    PSI = "psi"
    THM4_NORTH = "thm4-north"
    THM4_SOUTH = "thm4-south"


@dataclass(frozen=True)
class BasisSpec:
    elements: tuple
    which_form: Form = Form.PHI

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "which_form", Form(self.which_form))
        if not self.elements:
            raise ValueError("basis must be nonempty")
        keys = [(e.kind, e.index) for e in self.elements]
        if len(set(keys)) != len(keys):
            raise ValueError("basis elements must be pairwise distinct")

    def __len__(self):
        return len(self.elements)

    def contains(self, other: "BasisSpec") -> bool:
        return other.which_form is self.which_form and set(other.elements) <= set(self.elements)


@dataclass(frozen=True)
class GramPair:
    q_matrix: np.ndarray
    t_matrix: np.ndarray
    basis: BasisSpec
    assembly_err: float


def _pair_forms(form: Form, f1, f2, spec):
    if form is Form.PHI:
        return q_form(f1, f2, Weight.PHI, spec), t_form(f1, f2, const_a(), spec)
    if form is Form.PSI:
        return q_form(f1, f2, Weight.PSI, spec), t_form(f1, f2, const_b(), spec)
    side = Pole.NORTH
    if form is Form.THM4_SOUTH:
        # the mirrored problem: elements reflected, singular at the south pole
        side = Pole.SOUTH
        f1, f2 = (f1.reflect(), f1.reflect()) if f1 is f2 else (f1.reflect(), f2.reflect())
    return thm4_lhs_form(f1, f2, side, spec), thm4_rhs_form(f1, f2, side, spec)


@lru_cache(maxsize=None)
def _entry(form, e1, e2, spec):
    f1 = e1.function()
    f2 = f1 if e1 == e2 else e2.function()
    q, t = _pair_forms(form, f1, f2, spec)
    return (checked(q, f"Q[{e1},{e2}]"), q.error_estimate,
            checked(t, f"T[{e1},{e2}]"), t.error_estimate)


def assemble(basis: BasisSpec, spec: QuadratureSpec = QuadratureSpec()) -> GramPair:
    n = len(basis)
    q = np.zeros((n, n))
    t = np.zeros((n, n))
    err = 0.0
    els = basis.elements
    for i in range(n):
        for j in range(i, n):
            a, b = sorted((els[i], els[j]), key=str)
            qv, qe, tv, te = _entry(basis.which_form, a, b, spec)
            q[i, j] = q[j, i] = qv
            t[i, j] = t[j, i] = tv
            err = max(err, qe, te)
    return GramPair(q, t, basis, err)


# --- dense symmetric linear algebra ----------------------------------------------
def cholesky(a: np.ndarray, pivot_limit: float = PIVOT_RATIO_LIMIT) -> np.ndarray:
    """Lower-triangular L with a = L L^T.

    Pivots are the diagonal entries d_k = L_kk^2.  A non-positive pivot
    raises NotPositiveDefinite; max(d)/min(d) above ``pivot_limit``
    raises ConditioningError.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    L = np.zeros_like(a)
    piv = np.zeros(n)
    for k in range(n):
        d = a[k, k] - L[k, :k] @ L[k, :k]
        if not d > 0.0:
            raise NotPositiveDefinite(f"non-positive pivot {d:.3g} at index {k}", pivot=k)
        piv[k] = d
        L[k, k] = math.sqrt(d)
        for i in range(k + 1, n):
            L[i, k] = (a[i, k] - L[i, :k] @ L[k, :k]) / L[k, k]
    ratio = piv.max() / piv.min()
    if ratio > pivot_limit:
        raise ConditioningError(f"pivot ratio {ratio:.3g} exceeds {pivot_limit:.0e}",
                                pivot_ratio=ratio)
    return L


def _off(a):
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi for a symmetric matrix: returns (eigenvalues, eigenvectors as columns)."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        if _off(a) <= tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(a[p, q])
                if apq == 0.0:
                    continue
                # python floats: an overflowing tau becomes inf, giving t = 0
                tau = float(a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    if _off(a) <= tol * scale:
        return np.diag(a).copy(), v
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def _lower_solve(L, b):
    x = np.zeros_like(b, dtype=float)
    for i in range(L.shape[0]):
        x[i] = (b[i] - L[i, :i] @ x[:i]) / L[i, i]
    return x


def _upper_solve_t(L, b):
    # solve L^T x = b
    n = L.shape[0]
    x = np.zeros_like(b, dtype=float)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def _solve_generalized(q, t):
    d = 1.0 / np.sqrt(np.diag(t))
    ts = t * np.outer(d, d)
    qs = q * np.outer(d, d)
    L = cholesky(ts)
    # C = L^-1 Qs L^-T, built column by column
    y = np.column_stack([_lower_solve(L, qs[:, j]) for j in range(q.shape[0])])
    c = np.column_stack([_lower_solve(L, y[j, :]) for j in range(q.shape[0])]).T
    c = 0.5 * (c + c.T)
    w, vecs = jacobi_eigh(c)
    return w, vecs, L, d


def max_gen_eig(pair) -> tuple:
    """(lambda_max, v) for Q v = lambda T v; v is normalized to v^T T v = 1.

    ``pair`` is a GramPair or a (Q, T) tuple of matrices.
    """
    q, t = (pair.q_matrix, pair.t_matrix) if isinstance(pair, GramPair) else pair
    q = np.asarray(q, dtype=float)
    t = np.asarray(t, dtype=float)
    w, vecs, L, d = _solve_generalized(q, t)
    k = int(np.argmax(w))
    v = d * _upper_solve_t(L, vecs[:, k])
    v = v / math.sqrt(float(v @ t @ v))
    return float(w[k]), v


def eig_residual(pair, lam: float, v) -> float:
    """||Q v - lam T v|| / max(||Q v||, ||T v||)."""
    q, t = (pair.q_matrix, pair.t_matrix) if isinstance(pair, GramPair) else pair
    qv = np.asarray(q) @ v
    tv = np.asarray(t) @ v
    return float(np.linalg.norm(qv - lam * tv) / max(np.linalg.norm(qv), np.linalg.norm(tv)))


def sharpness_curve(ladder, spec: QuadratureSpec = QuadratureSpec()) -> list:
    """[(N, lambda_max, residual)] along a nested ladder of bases."""
    ladder = list(ladder)
    for small, big in zip(ladder, ladder[1:]):
        if not big.contains(small):
            raise ValueError("basis ladder must be nested with a common form")
    out = []
    for basis in ladder:
        pair = assemble(basis, spec)
        lam, v = max_gen_eig(pair)
        out.append((len(basis), lam, eig_residual(pair, lam, v)))
    return out


def _els(kind, idx):
    return [BasisElement(kind, i) for i in idx]


def default_ladder(form: Form = Form.PHI) -> list:
    """Nested sizes 4, 8, 12, 14 ending at Legendre <= 8 and phi-powers 4..64."""
    L, P = ElementKind.LEGENDRE, ElementKind.PHI_POWER
    steps = [
        _els(L, range(4)),
        _els(L, (4, 5)) + _els(P, (4, 8)),
        _els(L, (6, 7)) + _els(P, (16, 32)),
        _els(L, (8,)) + _els(P, (64,)),
    ]
    out, acc = [], []
    for s in steps:
        acc = acc + s
        out.append(BasisSpec(tuple(acc), form))
    return out
