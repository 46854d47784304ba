"""Acceptance criteria, one check per criterion.

Each ``criterion_k`` returns (ok, detail).  Under pytest every result is
recorded and printed as one PASS/FAIL line in the terminal summary (see
conftest.py).  Run as a script to print the same lines directly:

    python3 tests/test_acceptance.py
"""
import math
import time

import numpy as np
import pytest

from spherehardy import functionals as FN
from spherehardy import rayleigh as R
from spherehardy import sequences as S
from spherehardy.functionals import Pole, Weight
from spherehardy.weights import WeightKind, const_a, const_b, sup_abs

PI = math.pi
LADDER = S.DEFAULT_LADDER
RESULTS = []


def criterion_1():
    a_closed = 2 / (1 + math.log(PI)) + 8 / ((1 + math.log(2)) ** 2 * PI**2)
    b_closed = 2 / (1 + math.log(PI)) + 8 / ((1 + math.log(PI)) ** 2 * PI**2)
    xf, vf = sup_abs(WeightKind.F)
    xg, vg = sup_abs(WeightKind.G)
    xk, vk = sup_abs(WeightKind.K)
    checks = [
        abs(xf - PI / 2) <= 1e-9, abs(vf - a_closed) <= 1e-10, abs(const_a() - a_closed) <= 1e-15,
        abs(xg - PI / 2) <= 1e-9, abs(vg - b_closed) <= 1e-10, abs(const_b() - b_closed) <= 1e-15,
        xk == PI, abs(vk - 1 / PI**2) <= 1e-10,
    ]
    detail = (f"sup|F|={vf:.15f} at {xf:.12f} (A={a_closed:.15f}); "
              f"sup|G|={vg:.15f} at {xg:.12f}; sup|K|={vk:.15f} at {xk!r}")
    return all(checks), detail


def criterion_2():
    r = FN.laplace_psi_check(100, h=1e-5)
    return r <= 1e-5, f"max |Laplacian(psi) - 1| over 100 points = {r:.3e} (tol 1e-5)"


def criterion_3():
    worst = 0.0
    for n in (1, 2, 10, 100, 1024):
        worst = max(worst, S.closed_form_check(n) / (n / 2))
    return worst <= 1e-8, f"max relative error over n in {{1,2,10,100,1024}} = {worst:.3e} (tol 1e-8)"


def criterion_4():
    reps = []
    for f in FN.standard_family():
        for w in Weight:
            reps.append(FN.thm1_check(f, w))
    for f in FN.standard_family(axisymmetric_only=True):
        for side in Pole:
            reps.append(FN.thm4_check(f, side))
    bad = [r.label for r in reps if not r.holds]
    worst = min(r.margin / abs(r.rhs) for r in reps)
    return not bad, f"{len(reps) - len(bad)}/{len(reps)} checks hold; min margin/rhs = {worst:.3e}" + (
        f"; failing: {bad}" if bad else "")


def _ladder_ok(recs):
    ratios = [r.ratio_direct for r in recs]
    agree = all(abs(r.ratio_direct - r.ratio_formula) <= r.quadrature_err for r in recs)
    inc = all(b > a for a, b in zip(ratios, ratios[1:]))
    last = 0.95 <= ratios[-1] < 1
    below = all(x < 1 for x in ratios)
    c, slope, r2 = S.fit_decay([r.n for r in recs], ratios)
    ok = agree and inc and last and below and r2 >= 0.95
    return ok, (f"ratio(1024)={ratios[-1]:.6f} agree={agree} increasing={inc} "
                f"C={c:.3f} slope={slope:.3f} R2={r2:.4f}")


def criterion_5():
    parts, ok = [], True
    for name, recs in (("phi", S.ratio_ladder(LADDER, Weight.PHI)),
                       ("psi", S.ratio_ladder(LADDER, Weight.PSI)),
                       ("thm4-north", S.thm4_ratio_ladder(LADDER, Pole.NORTH)),
                       ("thm4-south", S.thm4_ratio_ladder(LADDER, Pole.SOUTH))):
        good, d = _ladder_ok(recs)
        ok &= good
        parts.append(f"{name}: {d}")
    return ok, " | ".join(parts)


def criterion_6():
    ns = sorted(set(LADDER) | {2, 3, 4, 8, 2048, 4096})
    worst_a = min(S.alpha_n(n) / S.alpha_lower_bound(n) for n in ns)
    worst_t = min(S.alpha_tilde_n(n) / S.alpha_tilde_lower_bound(n) for n in ns)
    ok = worst_a >= 1 and worst_t >= 1
    return ok, (f"n in {ns}: min alpha_n/bound = {worst_a:.6f}, "
                f"min alpha~_n/bound = {worst_t:.6f}")


def criterion_7():
    parts, ok = [], True
    for form in R.Form:
        ladder = R.default_ladder(form)
        curve = R.sharpness_curve(ladder)
        lams = [lam for _, lam, _ in curve]
        pair = R.assemble(ladder[-1])
        singles = float(np.max(np.diag(pair.q_matrix) / np.diag(pair.t_matrix)))
        lam, v = R.max_gen_eig(pair)
        qv = np.linalg.norm(pair.q_matrix @ v)
        strict_res = np.linalg.norm(pair.q_matrix @ v - lam * pair.t_matrix @ v) / qv
        good = (all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))
                and lams[-1] >= singles - 1e-10 and 0.9 < lams[-1] < 1
                and strict_res <= 1e-10)
        ok &= good
        parts.append(f"{form.value}: lambda={lams[-1]:.12f} single_max={singles:.6f} "
                     f"residual={strict_res:.1e}")
    lam2, _ = R.max_gen_eig((np.array([[2.0, 1.0], [1.0, 2.0]]), np.eye(2)))
    ok &= abs(lam2 - 3.0) <= 1e-12
    parts.append(f"2x2: |lambda-3|={abs(lam2 - 3.0):.1e}")
    return ok, " | ".join(parts)


def criterion_8():
    rows = S.nonattain_probe((1e-2, 1e-4, 1e-6, 1e-8))
    energies = [e for _, e, _ in rows]
    ratios = [r for _, _, r in rows]
    inc = all(b > a for a, b in zip(energies, energies[1:]))
    below = all(r < 1 for r in ratios)
    probes = [FN.h_positivity_probe(f) for f in FN.standard_family(axisymmetric_only=True)]
    probes.append(FN.h_positivity_probe(FN.bump(1.55, width=1.45)))
    pos = all(p > 0 for p in probes)
    return inc and below and pos, (
        "energies=" + ",".join(f"{e:.4f}" for e in energies)
        + " ratios=" + ",".join(f"{r:.4f}" for r in ratios)
        + f" min h-probe={min(probes):.3e} over {len(probes)} functions")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]
NOTE_9 = ("9 NOTE: no empirical tables exist to reproduce; acceptance is property and "
          "oracle based (criteria 1-8)")


def _run(k):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k - 1]()
    line = f"{k} {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f}s): {detail}"
    RESULTS.append(line)
    return ok, line


@pytest.mark.parametrize("k", range(1, 9))
def test_acceptance(k):
    ok, line = _run(k)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for k in range(1, 9):
        print(_run(k)[1], flush=True)
    print(NOTE_9)
