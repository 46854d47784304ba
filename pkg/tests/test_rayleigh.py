import math

import numpy as np
import pytest
import scipy.linalg

from spherehardy import functionals as FN
from spherehardy import rayleigh as R
from spherehardy.errors import ConditioningError, NoConvergence, NotPositiveDefinite
from spherehardy.functionals import Weight
from spherehardy.rayleigh import BasisElement, BasisSpec, ElementKind, Form
from spherehardy.sequences import ratio_ladder
from spherehardy.weights import const_a

PI = math.pi
L, P, G = ElementKind.LEGENDRE, ElementKind.PHI_POWER, ElementKind.PSI_POWER


@pytest.fixture(scope="module")
def curves():
    return {form: R.sharpness_curve(R.default_ladder(form)) for form in Form}


# --- linear algebra ---------------------------------------------------------------------
def test_cholesky_reconstructs():
    rng = np.random.default_rng(0)
    b = rng.normal(size=(6, 6))
    a = b @ b.T + 6 * np.eye(6)
    lo = R.cholesky(a)
    assert np.allclose(lo @ lo.T, a, rtol=1e-13, atol=1e-13)
    assert np.allclose(lo, np.linalg.cholesky(a), rtol=1e-12)


def test_cholesky_errors():
    with pytest.raises(NotPositiveDefinite) as info:
        R.cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert info.value.pivot == 1
    with pytest.raises(ConditioningError):
        R.cholesky(np.diag([1.0, 1e-13]))


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(1)
    b = rng.normal(size=(12, 12))
    a = 0.5 * (b + b.T)
    w, v = R.jacobi_eigh(a)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-12)
    assert np.allclose(v.T @ v, np.eye(12), atol=1e-12)
    assert np.allclose(a @ v, v * w, atol=1e-11)


def test_jacobi_sweep_cap():
    with pytest.raises(NoConvergence):
        R.jacobi_eigh(np.array([[1.0, 0.5], [0.5, 2.0]]), max_sweeps=0)


def test_diagonal_example():
    lam, v = R.max_gen_eig((np.diag([0.3, 0.7]), np.eye(2)))
    assert lam == pytest.approx(0.7, abs=1e-15)
    assert abs(v[0]) <= 1e-15 and abs(v[1]) == pytest.approx(1.0)


def test_two_by_two_is_three():
    q = np.array([[2.0, 1.0], [1.0, 2.0]])
    lam, v = R.max_gen_eig((q, np.eye(2)))
    assert abs(lam - 3.0) <= 1e-12
    assert R.eig_residual((q, np.eye(2)), lam, v) <= 1e-15


def test_generalized_against_scipy():
    rng = np.random.default_rng(2)
    for n in (3, 8, 14):
        b = rng.normal(size=(n, n))
        t = b @ b.T + n * np.eye(n)
        c = rng.normal(size=(n, n))
        q = 0.5 * (c + c.T)
        lam, v = R.max_gen_eig((q, t))
        ref = scipy.linalg.eigh(q, t, eigvals_only=True)[-1]
        assert lam == pytest.approx(ref, rel=1e-12, abs=1e-13)
        assert float(v @ t @ v) == pytest.approx(1.0, rel=1e-13)
        assert R.eig_residual((q, t), lam, v) <= 1e-12


# --- basis / assembly --------------------------------------------------------------------
def test_element_validation():
    with pytest.raises(ValueError):
        BasisElement(P, 2)
    with pytest.raises(ValueError):
        BasisElement(L, -1)
    assert str(BasisElement(P, 8)) == "phi-pow:8"


def test_basis_validation():
    with pytest.raises(ValueError):
        BasisSpec((), Form.PHI)
    with pytest.raises(ValueError):
        BasisSpec((BasisElement(L, 1), BasisElement(L, 1)), Form.PHI)
    small = BasisSpec((BasisElement(L, 0),), Form.PHI)
    big = BasisSpec((BasisElement(L, 0), BasisElement(L, 1)), Form.PHI)
    assert big.contains(small) and not small.contains(big)
    with pytest.raises(ValueError):
        R.sharpness_curve([big, BasisSpec((BasisElement(L, 3),), Form.PHI)])


def test_single_constant():
    pair = R.assemble(BasisSpec((BasisElement(L, 0),), Form.PHI))
    assert pair.q_matrix.shape == (1, 1)
    assert pair.q_matrix[0, 0] == pytest.approx(FN.q_functional(FN.legendre(0), Weight.PHI),
                                                rel=1e-14)
    assert pair.t_matrix[0, 0] == pytest.approx(const_a() * PI, rel=1e-13)


def test_diagonal_entries_are_functionals():
    els = (BasisElement(L, 2), BasisElement(P, 8), BasisElement(L, 5))
    pair = R.assemble(BasisSpec(els, Form.PSI))
    for i, e in enumerate(els):
        f = e.function()
        assert pair.q_matrix[i, i] == pytest.approx(FN.q_functional(f, Weight.PSI), rel=1e-14)
        assert pair.t_matrix[i, i] == pytest.approx(
            FN.t_functional(f, FN.const_b()), rel=1e-14)


def test_symmetry_and_permutation():
    els = [BasisElement(L, 0), BasisElement(P, 4), BasisElement(L, 3), BasisElement(P, 16)]
    a = R.assemble(BasisSpec(tuple(els), Form.PHI))
    perm = [2, 0, 3, 1]
    b = R.assemble(BasisSpec(tuple(els[i] for i in perm), Form.PHI))
    for m in (a.q_matrix, a.t_matrix):
        assert np.array_equal(m, m.T)
    assert np.array_equal(b.q_matrix, a.q_matrix[np.ix_(perm, perm)])
    assert np.array_equal(b.t_matrix, a.t_matrix[np.ix_(perm, perm)])
    R.cholesky(a.t_matrix / np.sqrt(np.outer(np.diag(a.t_matrix), np.diag(a.t_matrix))))


def test_polarization_cross_check():
    u, v = FN.legendre(1), FN.legendre(3) + FN.bump(PI / 3)
    direct = FN.checked(FN.q_form(u, v, Weight.PHI), "q")
    polar = (FN.q_functional(u + v, Weight.PHI) - FN.q_functional(u - v, Weight.PHI)) / 4
    assert direct == pytest.approx(polar, rel=1e-10, abs=1e-12)
    direct_t = FN.checked(FN.t_form(u, v, const_a()), "t")
    polar_t = (FN.t_functional(u + v, const_a()) - FN.t_functional(u - v, const_a())) / 4
    assert direct_t == pytest.approx(polar_t, rel=1e-10, abs=1e-12)


def test_singleton_matches_sequence_ratio():
    recs = {r.n: r for r in ratio_ladder([16, 64], Weight.PHI)}
    for n in (16, 64):
        lam, _ = R.max_gen_eig(R.assemble(BasisSpec((BasisElement(P, n),), Form.PHI)))
        assert abs(lam - recs[n].ratio_direct) <= recs[n].quadrature_err + 1e-14


def test_scale_invariance():
    els = [BasisElement(L, 0), BasisElement(L, 2), BasisElement(P, 8), BasisElement(P, 32)]
    lam0, _ = R.max_gen_eig(R.assemble(BasisSpec(tuple(els), Form.PHI)))
    els[2] = BasisElement(P, 8, scale=10.0)
    lam1, _ = R.max_gen_eig(R.assemble(BasisSpec(tuple(els), Form.PHI)))
    assert abs(lam1 - lam0) <= 1e-12


def test_hardy_pair_bracket():
    els = tuple([BasisElement(P, n) for n in (4, 8, 16, 32, 64)]
                + [BasisElement(L, l) for l in range(9)])
    pair = R.assemble(BasisSpec(els, Form.PHI))
    lam, v = R.max_gen_eig(pair)
    singles = np.diag(pair.q_matrix) / np.diag(pair.t_matrix)
    assert singles.max() - 1e-10 <= lam < 1
    assert R.eig_residual(pair, lam, v) <= 1e-10


def test_psi_powers_basis():
    els = (BasisElement(L, 0), BasisElement(L, 2), BasisElement(G, 8), BasisElement(G, 64))
    lam, _ = R.max_gen_eig(R.assemble(BasisSpec(els, Form.PSI)))
    assert 0.9 < lam < 1


# --- default ladders ----------------------------------------------------------------------
def test_default_ladder_shape():
    ladder = R.default_ladder(Form.PHI)
    assert [len(b) for b in ladder] == [4, 8, 12, 14]
    last = set(ladder[-1].elements)
    assert last == {BasisElement(L, l) for l in range(9)} | {BasisElement(P, n)
                                                             for n in (4, 8, 16, 32, 64)}


@pytest.mark.parametrize("form", list(Form))
def test_sharpness_curve(curves, form):
    curve = curves[form]
    lams = [lam for _, lam, _ in curve]
    assert all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))
    assert all(lam < 1 for lam in lams)
    assert lams[-1] > 0.9
    assert all(res <= 1e-10 for _, _, res in curve)


def test_north_south_thm4_agree(curves):
    a = [lam for _, lam, _ in curves[Form.THM4_NORTH]]
    b = [lam for _, lam, _ in curves[Form.THM4_SOUTH]]
    assert np.allclose(a, b, rtol=1e-9)
