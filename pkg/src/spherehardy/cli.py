"""Command-line front end: ``spherehardy <command> [options]``.

Exit codes: 0 all checks hold, 1 a check failed, 2 usage error,
3 quadrature failure (non-convergence or divergence), 4 basis rejected
as ill-conditioned.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import functionals as fn
from . import sequences as sq
from .errors import ConditioningError, DivergentNorm, DomainError, NoConvergence
from .quadrature import QuadratureSpec
from .rayleigh import BasisElement, BasisSpec, ElementKind, Form, assemble, eig_residual, \
    max_gen_eig, sharpness_curve
from .weights import PI, WeightKind, evaluate

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_QUADRATURE, EXIT_CONDITIONING = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict
    rows: list
    all_hold: bool
    worst_margin: float = math.nan
    notes: str = ""
    extra: dict = field(default_factory=dict)
    started_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def summary(self) -> dict:
        out = {"all_hold": self.all_hold, "worst_margin": self.worst_margin, "notes": self.notes}
        out.update(self.extra)
        return out


# --- parsing --------------------------------------------------------------------
def parse_angle(text: str) -> float:
    t = text.strip().lower().replace(" ", "")
    named = {"pi": PI, "pi/2": 0.5 * PI, "pi/4": 0.25 * PI, "0": 0.0}
    if t in named:
        return named[t]
    try:
        return float(t)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def parse_int_list(text: str) -> list:
    """'16,32,...,1024' (doubling or constant step inferred) or an explicit list."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if "..." not in parts:
        try:
            return [int(p) for p in parts]
        except ValueError:
            raise UsageError(f"cannot parse integer list {text!r}") from None
    i = parts.index("...")
    if i < 2 or i != len(parts) - 2:
        raise UsageError("ellipsis form is 'a,b,...,z'")
    try:
        head = [int(p) for p in parts[:i]]
        last = int(parts[-1])
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None
    a, b = head[-2], head[-1]
    out = list(head)
    if a > 0 and b % a == 0 and b // a > 1:
        step = lambda x: x * (b // a)  # noqa: E731
    elif b > a:
        step = lambda x: x + (b - a)  # noqa: E731
    else:
        raise UsageError("ellipsis list must be increasing")
    while (nxt := step(out[-1])) <= last:
        out.append(nxt)
    if out[-1] != last:
        raise UsageError(f"{last} is not on the progression {head}")
    return out


def parse_float_list(text: str) -> list:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


_KINDS = {"legendre": ElementKind.LEGENDRE, "phi-pow": ElementKind.PHI_POWER,
          "psi-pow": ElementKind.PSI_POWER}


def parse_basis(text: str) -> list:
    """'legendre:8,phi-pow:4-64' -> P_0..P_8, f_4, f_8, ..., f_64.

    legendre:L means degrees 0..L and legendre:a-b degrees a..b.  For the
    power families a-b doubles from a up to b, and a single n is one element.
    """
    elements = []
    for group in (g.strip() for g in text.split(",") if g.strip()):
        name, _, arg = group.partition(":")
        kind = _KINDS.get(name.strip().lower())
        if kind is None or not arg:
            raise UsageError(f"bad basis group {group!r}")
        try:
            lo_s, dash, hi_s = arg.partition("-")
            lo, hi = int(lo_s), int(hi_s) if dash else None
        except ValueError:
            raise UsageError(f"bad basis range {arg!r}") from None
        if kind is ElementKind.LEGENDRE:
            idx = range(0, lo + 1) if hi is None else range(lo, hi + 1)
        elif hi is None:
            idx = [lo]
        else:
            idx = []
            k = lo
            while k <= hi and k > 0:
                idx.append(k)
                k *= 2
        try:
            elements += [BasisElement(kind, i) for i in idx]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not elements:
        raise UsageError("empty basis")
    if len(set(elements)) != len(elements):
        raise UsageError("basis contains duplicate elements")
    return elements


# --- output -----------------------------------------------------------------------
def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": report.command, "parameters": report.parameters,
               "started_at": report.started_at, "rows": report.rows,
               "summary": report.summary()}
        return json.dumps(_json_value(doc), indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# command: {report.command}\n")
    buf.write(f"# parameters: {json.dumps(_json_value(report.parameters), sort_keys=True)}\n")
    buf.write(f"# started_at: {report.started_at}\n")
    buf.write(f"# summary: {json.dumps(_json_value(report.summary()), sort_keys=True)}\n")
    if report.rows:
        cols = list(report.rows[0].keys())
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in report.rows:
            w.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- commands ---------------------------------------------------------------------
def _spec(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(rel_tol=args.tol, abs_tol=args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_TABLE_COLS = [("phi", WeightKind.PHI), ("psi", WeightKind.PSI), ("rho_phi", WeightKind.RHO_PHI),
               ("F", WeightKind.F), ("G", WeightKind.G), ("M", WeightKind.M),
               ("K", WeightKind.K), ("h", WeightKind.H)]


def cmd_weights_table(args) -> RunReport:
    lo, hi = parse_angle(args.from_), parse_angle(args.to)
    if not (0.0 <= lo < hi <= PI):
        raise UsageError("need 0 <= from < to <= pi")
    if args.points < 2:
        raise UsageError("points must be >= 2")
    grid = np.linspace(lo, hi, args.points)
    grid[-1] = hi
    rows = []
    for t in grid:
        row = {"theta": float(t)}
        for name, kind in _TABLE_COLS:
            try:
                row[name] = float(evaluate(kind, float(t)))
            except DomainError:
                row[name] = math.inf
        rows.append(row)
    params = {"from": lo, "to": hi, "points": args.points}
    return RunReport("weights-table", params, rows, True, notes="unbounded values shown as inf")


def _check_row(label, lhs, rhs, lhs_err=0.0, rhs_err=0.0):
    rep = fn.FunctionalReport(float(lhs), float(rhs), float(lhs_err), float(rhs_err), label)
    return rep.as_row()


def _verify_thm1(spec):
    rows = []
    for f in fn.standard_family():
        for w in fn.Weight:
            rows.append(fn.thm1_check(f, w, spec).as_row())
    return rows


def _verify_thm4(spec):
    rows = []
    for f in fn.standard_family(axisymmetric_only=True):
        for side in fn.Pole:
            rows.append(fn.thm4_check(f, side, spec).as_row())
    return rows


def _verify_identities(spec):
    rows = []
    lap = fn.laplace_psi_check(100)
    rows.append(_check_row("laplace_psi/100pts", lap, 1e-5))
    rng = np.random.default_rng(20240611)
    fam = fn.standard_family()
    for f in fam:
        if f.mode != 0:
            continue
        res, detail = fn.ibp_identity_residual(f, spec, detail=True)
        rows.append(_check_row(f"ibp/{f.label}", res, max(1e-8, detail["err"])))
        hval = fn.h_positivity_probe(f, spec)
        rows.append(_check_row(f"h_positive/{f.label}", 0.0, hval))
        if not f.singular_left:
            r, err = fn.psi_ibp_residual(f, spec)
            rows.append(_check_row(f"psi_ibp/{f.label}", r, max(1e-8, err)))
    worst = 0.0
    for _ in range(100):
        f = fam[int(rng.integers(len(fam)))]
        t = float(rng.uniform(0.05, PI - 0.05))
        worst = max(worst, fn.decomposition_residual(f, t))
    rows.append(_check_row("decomposition/100pairs", worst, 1e-12))
    return rows


_SUITES = {"thm1": _verify_thm1, "thm4": _verify_thm4, "identities": _verify_identities}


def cmd_verify(args) -> RunReport:
    spec = _spec(args)
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        rows += _SUITES[name](spec)
    worst = min(r["margin"] for r in rows)
    ok = all(r["holds"] for r in rows)
    params = {"suite": args.suite, "tol": args.tol, "abs_tol": args.abs_tol}
    return RunReport("verify", params, rows, ok, worst_margin=worst,
                     notes=f"{sum(r['holds'] for r in rows)}/{len(rows)} checks hold")


def cmd_sharpness(args) -> RunReport:
    spec = _spec(args)
    ns = parse_int_list(args.ns)
    if any(b <= a for a, b in zip(ns, ns[1:])) or min(ns) < 3:
        raise UsageError("ns must be ascending integers >= 3")
    if max(ns) > sq.MAX_N:
        raise UsageError(f"n is capped at {sq.MAX_N}")
    if args.which == "phi":
        recs = sq.ratio_ladder(ns, fn.Weight.PHI, spec)
        bound = sq.alpha_lower_bound
    elif args.which == "psi":
        recs = sq.ratio_ladder(ns, fn.Weight.PSI, spec)
        bound = sq.alpha_tilde_lower_bound
    else:
        recs = sq.thm4_ratio_ladder(ns, fn.Pole.NORTH, spec)
        bound = sq.alpha_lower_bound
    rows = []
    for r in recs:
        row = r.as_row()
        row["alpha_bound"] = bound(r.n)
        row["bound_holds"] = bool(r.alpha >= row["alpha_bound"])
        rows.append(row)
    ratios = [r.ratio_direct for r in recs]
    agree = all(abs(r.ratio_direct - r.ratio_formula) <= r.quadrature_err for r in recs)
    below = all(x < 1.0 for x in ratios)
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    bounds = all(row["bound_holds"] for row in rows)
    extra = {"max_ratio": max(ratios), "increasing": increasing, "formula_agrees": agree}
    if len(ns) >= 3:
        c, slope, r2 = sq.fit_decay(ns, ratios)
        extra.update({"fit_C": c, "fit_slope": slope, "fit_r2": r2})
    params = {"which": args.which, "ns": ns, "tol": args.tol, "abs_tol": args.abs_tol}
    return RunReport("sharpness", params, rows, agree and below and bounds,
                     worst_margin=min(1.0 - x for x in ratios),
                     notes="margin is 1 - ratio_direct", extra=extra)


def cmd_rayleigh(args) -> RunReport:
    spec = _spec(args)
    elements = parse_basis(args.basis)
    form = Form(args.form)
    if args.nested:
        ladder = [BasisSpec(tuple(elements[:k]), form) for k in range(1, len(elements) + 1)]
        curve = sharpness_curve(ladder, spec)
    else:
        pair = assemble(BasisSpec(tuple(elements), form), spec)
        lam, v = max_gen_eig(pair)
        curve = [(len(elements), lam, eig_residual(pair, lam, v))]
    rows = [{"basis_size": n, "lambda_max": lam, "residual": res} for n, lam, res in curve]
    lams = [r["lambda_max"] for r in rows]
    monotone = all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))
    below = all(x < 1.0 for x in lams)
    params = {"basis": args.basis, "form": form.value, "nested": bool(args.nested),
              "elements": [str(e) for e in elements], "tol": args.tol, "abs_tol": args.abs_tol}
    return RunReport("rayleigh", params, rows, monotone and below,
                     worst_margin=min(1.0 - x for x in lams), notes="margin is 1 - lambda_max",
                     extra={"lambda_max": lams[-1], "monotone": monotone, "below_one": below})


def cmd_nonattain(args) -> RunReport:
    spec = _spec(args)
    eps = parse_float_list(args.eps)
    if not eps or any(not 0.0 < e < PI / 4 for e in eps):
        raise UsageError("eps values must lie in (0, pi/4)")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise UsageError("eps values must be decreasing")
    probe = sq.nonattain_probe(eps, spec)
    rows = [{"eps": e, "grad_energy": g, "ratio": r} for e, g, r in probe]
    energies = [r["grad_energy"] for r in rows]
    increasing = all(b > a for a, b in zip(energies, energies[1:]))
    below = all(r["ratio"] < 1.0 for r in rows)
    params = {"eps": eps, "tol": args.tol, "abs_tol": args.abs_tol}
    trend = "strictly increasing" if increasing else "NOT increasing"
    return RunReport("nonattain", params, rows, increasing and below,
                     worst_margin=min(1.0 - r["ratio"] for r in rows),
                     notes=f"gradient energy {trend}; margin is 1 - ratio",
                     extra={"energy_increasing": increasing, "ratios_below_one": below})


# --- entry point --------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spherehardy",
                                description="Numerical checks of critical Hardy inequalities on S^2.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, quad=True):
        sp.add_argument("--out", default="-", help="output path, '-' for stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if quad:
            d = QuadratureSpec()
            sp.add_argument("--tol", type=float, default=d.rel_tol, help="quadrature rel_tol")
            sp.add_argument("--abs-tol", type=float, default=d.abs_tol, help="quadrature abs_tol")

    w = sub.add_parser("weights-table", help="tabulate phi, psi, rho_phi, F, G, M, K, h")
    w.add_argument("--from", dest="from_", default="0")
    w.add_argument("--to", default="pi")
    w.add_argument("--points", type=int, default=33)
    common(w, quad=False)
    w.set_defaults(run=cmd_weights_table)

    v = sub.add_parser("verify", help="inequality suites and identities on the test family")
    v.add_argument("--suite", choices=("thm1", "thm4", "identities", "all"), default="all")
    common(v)
    v.set_defaults(run=cmd_verify)

    s = sub.add_parser("sharpness", help="ratio ladders along f_n / g_n")
    s.add_argument("--which", choices=("phi", "psi", "thm4"), default="phi")
    s.add_argument("--ns", default="16,32,...,1024")
    common(s)
    s.set_defaults(run=cmd_sharpness)

    r = sub.add_parser("rayleigh", help="generalized eigenvalue lower bounds")
    r.add_argument("--basis", default="legendre:8,phi-pow:4-64")
    r.add_argument("--form", choices=[f.value for f in Form], default="phi")
    r.add_argument("--nested", action="store_true", help="report every prefix of the basis")
    common(r)
    r.set_defaults(run=cmd_rayleigh)

    n = sub.add_parser("nonattain", help="flattened sqrt(psi) probe")
    n.add_argument("--eps", default="1e-2,1e-4,1e-6,1e-8")
    common(n)
    n.set_defaults(run=cmd_nonattain)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, DivergentNorm) as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except ConditioningError as exc:
        print(f"basis rejected: {exc}", file=sys.stderr)
        return EXIT_CONDITIONING
    text = render(report, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)
    return EXIT_OK if report.all_hold else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
