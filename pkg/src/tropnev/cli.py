"""Command-line front end.

Every numeric result is printed as ``exact (decimal)``. Exit status is 0 on
success, 1 for invalid input and 2 when a computation cannot proceed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import constructions as cons
from . import curves, defect, nevanlinna, troplin
from .errors import ComputationError, ValidationError
from .nevanlinna import CORRECTED, LITERAL, parse_schedule
from .plfun import FinitePL, LazyPL, eval_at, window
from .semiring import TropScalar
from .serialize import (
    combo_from_json,
    curve_from_json,
    dumps,
    hompoly_from_json,
    load_json,
    matrix_from_json,
    pl_from_json,
    to_json_value,
    witness_from_json,
)

DECIMALS = 10


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def rational_list(text: str) -> list[Fraction]:
    return [rational(t) for t in text.split(",") if t.strip()]


def fmt(v: Any) -> str:
    if isinstance(v, TropScalar):
        return "-inf" if v.is_bottom else fmt(v.value)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v)
        return f"{v} ({float(v):.{DECIMALS}g})"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{DECIMALS}g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


class Output:
    """Collects key/value lines, or a JSON document with ``--json``."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.items: list[tuple[Optional[str], Any]] = []

    def add(self, key: Optional[str], value: Any):
        self.items.append((key, value))

    def render(self) -> str:
        if self.as_json:
            if len(self.items) == 1 and self.items[0][0] is None:
                return json.dumps(to_json_value(self.items[0][1])) + "\n"
            return json.dumps({k: _json_scalar(v) for k, v in self.items}, indent=2) + "\n"
        lines = [fmt(v) if k is None else f"{k}: {fmt(v)}" for k, v in self.items]
        return "\n".join(lines) + "\n"


def _json_scalar(v):
    if isinstance(v, float):
        return v
    return to_json_value(v)


def _write(text: str, path: Optional[str]):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_fn(path: str):
    return pl_from_json(load_json(path))


def _arg_fn(text: str):
    """A file holding a PL function, or a rational constant."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return _load_fn(text)


def _load_curve_poly(path: str, poly_path: Optional[str]):
    doc = load_json(path)
    if "curve" in doc:
        curve = curve_from_json(doc["curve"])
        P = doc.get("P")
    else:
        curve, P = curve_from_json(doc), None
    if poly_path:
        P = load_json(poly_path)
    if P is None:
        raise ValidationError("no polynomial given; pass --poly or use a file with a 'P' entry")
    return curve, hompoly_from_json(P)


def _schedule(args, required=False):
    if getattr(args, "schedule", None):
        return parse_schedule(args.schedule)
    if required:
        raise ValidationError("--schedule is required here")
    return None


# --- verbs --------------------------------------------------------------------


_PAIR_KEYS = {"counterexample_fa": ("f", "a"), "jump_counterexample": ("f", "g")}


def cmd_construct(args, out: Output):
    params = {k: getattr(args, k) for k in ("alpha", "beta", "s", "t", "n", "d", "q", "r")}
    if args.F:
        params["F"] = _load_fn(args.F)
    obj = cons.construct(args.name, **params)
    if args.name in _PAIR_KEYS:
        obj = dict(zip(_PAIR_KEYS[args.name], obj))
    elif args.name == "oscillating_pair":
        f, g = obj
        obj = {"f": f, "g": g, "curve": {"components": [f, g]},
               "P": {"d": "1", "terms": [{"exps": ["1", "0"], "coeff": "0"}]}}
    elif args.name == "t_curve":
        obj = dict(zip(("curve", "P"), obj))
    if isinstance(obj, dict) and not any(isinstance(v, (FinitePL, LazyPL, dict, curves.HolCurve, curves.HomPoly)) for v in obj.values()):
        # a report: print it, and also save it when asked
        for k, v in obj.items():
            out.add(k, v)
        if args.output:
            _write(dumps(obj), args.output)
        return
    _write(dumps(obj), args.output)
    if args.output:
        out.add("wrote", args.output)


def cmd_eval(args, out):
    f = _load_fn(args.file)
    for x in args.x:
        out.add(f"f({x})", eval_at(window(f, max(abs(x), Fraction(1))), x))


def cmd_analyze(args, out):
    f = _load_fn(args.file)
    if args.rmax <= 0 or args.steps < 1:
        raise ValidationError("need --rmax > 0 and --steps >= 1")
    f = window(f, args.rmax)
    rows = []
    for i in range(1, args.steps + 1):
        r = args.rmax * i / args.steps
        s = nevanlinna.characteristic(f, r, args.origin)
        rows.append((r, s.m, s.n, s.N, s.J, s.T))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["r", "m", "n", "N", "J", "T"]
    w.writerow(cols + [c + "_exact" for c in cols])
    for row in rows:
        w.writerow([f"{float(v):.{DECIMALS}g}" for v in row] + [str(v) for v in row])
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
        out.add("wrote", args.csv)
    else:
        sys.stdout.write(buf.getvalue())


def _pj_report(rep, out):
    out.add("x", rep.x)
    out.add("r", rep.r)
    out.add("mode", rep.mode)
    for k, v in rep.terms.items():
        out.add(k, v)
    out.add("reconstructed", rep.value_reconstructed)
    out.add("direct", rep.value_direct)
    out.add("residual", rep.residual)
    for k, v in rep.checks.items():
        out.add(k, v)
    if rep.mode == LITERAL and rep.residual != 0:
        out.add("discrepancy", f"closed form misses f({rep.x}) by {rep.residual}")


def cmd_jensen(args, out):
    _pj_report(nevanlinna.jensen(_load_fn(args.file), args.r, args.mode), out)


def cmd_pj(args, out):
    _pj_report(nevanlinna.poisson_jensen(_load_fn(args.file), args.r, args.x, args.mode), out)


def cmd_fmt_check(args, out):
    f, a = _load_fn(args.file), _arg_fn(args.a)
    eps = nevanlinna.fmt_epsilon(f, a, args.r)
    bound = nevanlinna.proximity(nevanlinna.as_function(a), args.r)
    out.add("epsilon", eps)
    out.add("m(r,a)", bound)
    out.add("ok", 0 <= eps <= bound)


def cmd_smt_check(args, out):
    f, a = _load_fn(args.file), _arg_fn(args.a)
    for k, v in nevanlinna.smt_terms(f, a, args.r, args.origin).items():
        out.add(k, v)
    if isinstance(f, FinitePL):
        out.add("residual_slope", nevanlinna.smt_residual_slope(f, a))


def cmd_defect(args, out):
    est = defect.defect(_load_fn(args.file), args.a, _schedule(args))
    if est.exact:
        out.add(None, est.value)
    else:
        out.add("delta_lo", est.lo)
        out.add("delta_hi", est.hi)
        out.add("method", est.method)


def cmd_defect_profile(args, out):
    f = _load_fn(args.file)
    prof = defect.defect_profile(f, args.grid, _schedule(args))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "delta_lo", "delta_hi", "method"])
    for a, est in prof.entries:
        w.writerow([str(a), str(est.lo), str(est.hi), est.method])
    plateaus = [{"a_min": str(lo), "a_max": str(hi), "value": str(v)} for lo, hi, v in prof.plateaus]
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
        out.add("wrote", args.csv)
    else:
        sys.stdout.write(buf.getvalue())
    if args.plateaus:
        Path(args.plateaus).write_text(json.dumps(plateaus, indent=2) + "\n")
    out.add("monotone", prof.monotone)


def cmd_curve_tfr(args, out):
    doc = load_json(args.file)
    curve = curve_from_json(doc.get("curve", doc))
    out.add("T_f", curves.cartan_characteristic(curve, args.r))


def cmd_compose(args, out):
    curve, P = _load_curve_poly(args.file, args.poly)
    g = curves.compose(P, curve)
    if isinstance(g, LazyPL) and not g.serializable:
        if args.r is None:
            raise ValidationError("composition with lazy components needs --r to materialize")
        g = g.materialize(args.r)
    _write(dumps(g), args.output)
    if args.output:
        out.add("wrote", args.output)


def cmd_psi(args, out):
    curve, P = _load_curve_poly(args.file, args.poly)
    b = curves.psi_bounds(P, curve, _schedule(args))
    out.add("psi", b.psi)
    out.add("Psi", b.Psi)
    out.add("exact", b.exact)


def cmd_hyper_defect(args, out):
    curve, P = _load_curve_poly(args.file, args.poly)
    est = curves.hyper_defect(P, curve, _schedule(args))
    out.add("delta", est.value)
    out.add("method", est.method)


def cmd_hyper_smt(args, out):
    curve, P = _load_curve_poly(args.file, args.poly)
    rep = curves.hyper_smt_check(P, curve, _schedule(args, required=True), args.tolerance)
    out.add("psi", rep.psi)
    out.add("Psi", rep.Psi)
    for r, ratio, coeff in rep.rows:
        out.add(f"ratio(r={r})", ratio)
    out.add("ok", rep.ok)


def cmd_dim1_check(args, out):
    doc = load_json(args.file)
    curve = curve_from_json(doc.get("curve", doc))
    rep = curves.dim1_check(curve, args.a, _schedule(args))
    out.add("residual_slope", rep.residual_slope)
    out.add("bridge_slope", rep.bridge_slope)


def cmd_det(args, out):
    A = matrix_from_json(load_json(args.file))
    out.add(None, troplin.trop_det(A, args.method))


def cmd_casorati(args, out):
    fns = [_arg_fn(p) if p != "-inf" else TropScalar(None) for p in args.files]
    res = troplin.casorati(fns, args.c, args.radius, args.method)
    if isinstance(res, TropScalar):
        out.add(None, res)
        return
    _write(dumps(res), args.output)
    if args.output:
        out.add("wrote", args.output)


def cmd_gm_verify(args, out):
    family = [_load_fn(p) for p in args.files]
    w = witness_from_json(load_json(args.witness), len(family))
    out.add(None, troplin.gm_verify(family, w, args.radius))


def cmd_gm_search(args, out):
    family = [window(_load_fn(p), args.radius) if args.radius else _load_fn(p) for p in args.files]
    w = troplin.gm_search(family, args.max_iter)
    if w is None:
        out.add(None, "unknown")
    else:
        out.add(None, json.dumps(to_json_value(w)))


def cmd_ell(args, out):
    out.add(None, troplin.shortest_length(combo_from_json(load_json(args.file))))


def cmd_ddg(args, out):
    doc = load_json(args.file)
    try:
        basis = doc["basis"]
        combos = [combo_from_json({"basis": basis, "coeffs": c}) for c in doc["combos"]]
    except (KeyError, TypeError):
        raise ValidationError("ddg input is {'basis': [...], 'combos': [[...], ...]}") from None
    out.add(None, troplin.degree_of_degeneracy(combos))


def cmd_monomials(args, out):
    for exps in troplin.monomials(args.n, args.d):
        out.add(None, " ".join(str(e) for e in exps))


def cmd_ultradiscrete(args, out):
    doc = load_json(args.R)
    try:
        R = cons.make_two_var([[rational(v) for v in t] for t in doc["numerator"]],
                              [[rational(v) for v in t] for t in doc.get("denominator", [[0, 0, 0]])])
    except (KeyError, TypeError, argparse.ArgumentTypeError) as e:
        raise ValidationError(f"bad R file: {e}") from None
    init = _load_fn(args.init)
    y = cons.ultradiscrete_extend(R, window(init, 2), args.span)
    _write(dumps(y), args.output)
    if args.output:
        out.add("wrote", args.output)


def cmd_order(args, out):
    f = _load_fn(args.file)
    est = nevanlinna.order_estimate(f, _schedule(args) or [])
    out.add("rho", est.rho)
    out.add("rho2", est.rho2)
    out.add("exact", est.exact)


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropnev", description="Exact tropical value distribution toolkit.")
    p.add_argument("--json", action="store_true", help="print results as JSON")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        return sp

    def sched(sp):
        sp.add_argument("--schedule", help="geometric:r0,ratio,count | linear:a,b,count | r1,r2,...")

    sp = verb("construct", cmd_construct, "build a catalog object")
    sp.add_argument("name", choices=cons.CATALOG_NAMES)
    for k in ("alpha", "beta", "s", "t", "n", "d", "q", "r"):
        sp.add_argument(f"--{k}", type=rational)
    sp.add_argument("--F", help="CDF file for distribution")
    sp.add_argument("-o", "--output")

    sp = verb("eval", cmd_eval, "evaluate a function")
    sp.add_argument("file")
    sp.add_argument("--x", type=rational, action="append", required=True)

    sp = verb("analyze", cmd_analyze, "tabulate m, n, N, J, T over radii")
    sp.add_argument("file")
    sp.add_argument("--rmax", type=rational, required=True)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--origin", choices=(LITERAL, CORRECTED), default=LITERAL)
    sp.add_argument("--csv")

    for name, fn in (("jensen", cmd_jensen), ("pj", cmd_pj)):
        sp = verb(name, fn, "Jensen formula at 0" if name == "jensen" else "Poisson-Jensen reconstruction")
        sp.add_argument("file")
        sp.add_argument("--r", type=rational, required=True)
        if name == "pj":
            sp.add_argument("--x", type=rational, required=True)
        sp.add_argument("--mode", choices=(LITERAL, CORRECTED), default=CORRECTED)

    sp = verb("fmt-check", cmd_fmt_check, "first main theorem error term")
    sp.add_argument("file")
    sp.add_argument("--a", required=True, help="rational or function file")
    sp.add_argument("--r", type=rational, required=True)

    sp = verb("smt-check", cmd_smt_check, "second main theorem terms")
    sp.add_argument("file")
    sp.add_argument("--a", required=True, help="rational or function file")
    sp.add_argument("--r", type=rational, required=True)
    sp.add_argument("--origin", choices=(LITERAL, CORRECTED), default=LITERAL)

    sp = verb("defect", cmd_defect, "defect at a constant")
    sp.add_argument("file")
    sp.add_argument("--a", type=rational, required=True)
    sched(sp)

    sp = verb("defect-profile", cmd_defect_profile, "defects over a grid of targets")
    sp.add_argument("file")
    sp.add_argument("--grid", type=rational_list, required=True)
    sp.add_argument("--csv")
    sp.add_argument("--plateaus", help="write the plateau JSON here")
    sched(sp)

    sp = verb("curve-tfr", cmd_curve_tfr, "Cartan characteristic of a curve")
    sp.add_argument("file")
    sp.add_argument("--r", type=rational, required=True)

    def curve_args(sp):
        sp.add_argument("file", help="curve JSON, or a file with 'curve' and 'P'")
        sp.add_argument("--poly")

    sp = verb("compose", cmd_compose, "P∘f as a function")
    curve_args(sp)
    sp.add_argument("--r", type=rational)
    sp.add_argument("-o", "--output")

    for name, fn in (("psi", cmd_psi), ("hyper-defect", cmd_hyper_defect)):
        sp = verb(name, fn, "ψ and Ψ" if name == "psi" else "hypersurface defect")
        curve_args(sp)
        sched(sp)

    sp = verb("hyper-smt", cmd_hyper_smt, "hypersurface second main theorem band")
    curve_args(sp)
    sched(sp)
    sp.add_argument("--tolerance", type=rational, default=Fraction(1, 100))

    sp = verb("dim1-check", cmd_dim1_check, "one-dimensional curve against the scalar theorem")
    sp.add_argument("file")
    sp.add_argument("--a", type=rational_list, required=True, help="a0,a1")
    sched(sp)

    sp = verb("det", cmd_det, "tropical determinant")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("assignment", "brute"), default="assignment")

    sp = verb("casorati", cmd_casorati, "tropical Casoratian")
    sp.add_argument("files", nargs="+", help="function files, rationals or -inf")
    sp.add_argument("--c", type=rational, required=True)
    sp.add_argument("--radius", type=rational, required=True)
    sp.add_argument("--method", choices=("subsets", "permutations"), default="subsets")
    sp.add_argument("-o", "--output")

    sp = verb("gm-verify", cmd_gm_verify, "check a Gondran-Minoux witness")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--witness", required=True)
    sp.add_argument("--radius", type=rational)

    sp = verb("gm-search", cmd_gm_search, "search for a Gondran-Minoux witness")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--radius", type=rational, help="materialize lazy members on this window")

    sp = verb("ell", cmd_ell, "shortest representation length")
    sp.add_argument("file")

    sp = verb("ddg", cmd_ddg, "degree of degeneracy")
    sp.add_argument("file")

    sp = verb("monomials", cmd_monomials, "exponent vectors of degree d in n+1 variables")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = verb("ultradiscrete", cmd_ultradiscrete, "extend data on [0,2] through y(x+1)+y(x-1)=R(x,y(x))")
    sp.add_argument("--R", required=True, help="JSON with numerator/denominator (a,b,c) terms")
    sp.add_argument("--init", required=True)
    sp.add_argument("--span", type=int, required=True)
    sp.add_argument("-o", "--output")

    sp = verb("order", cmd_order, "order and hyper-order")
    sp.add_argument("file")
    sched(sp)

    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        args.func(args, out)
    except ValidationError as e:
        print(f"error[validation]: {e}", file=sys.stderr)
        return 1
    except ComputationError as e:
        print(f"error[computation]: {e}", file=sys.stderr)
        return 2
    if out.items:
        sys.stdout.write(out.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
