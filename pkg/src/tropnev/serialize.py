"""JSON encodings for scalars, PL functions, curves, polynomials, matrices,
witnesses and combinations. Every number is written as an exact "p/q"
string so round trips are lossless."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .curves import HolCurve, HomPoly, make_curve, make_hompoly
from .errors import ValidationError
from .plfun import FinitePL, LazyPL, Node, lazy_from_descriptor, make_finite_pl
from .semiring import TropScalar, format_fraction, trop
from .troplin import Combo, Witness, make_combo, make_matrix, make_witness


def q(x: Fraction) -> str:
    return format_fraction(x)


def parse_q(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValidationError(f"expected a rational written as 'p/q', got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational: {s!r}") from None


def scalar_to_json(a: TropScalar) -> str:
    return str(trop(a))


def scalar_from_json(s: Any) -> TropScalar:
    if s == "-inf":
        return TropScalar(None)
    return TropScalar(parse_q(s))


def pl_to_json(f) -> dict:
    if isinstance(f, LazyPL):
        if not f.serializable:
            raise ValidationError(f"lazy function {f.name!r} has no JSON form")
        return {"lazy": f.name, "params": f.params}
    out = {"left_slope": q(f.left_slope), "right_slope": q(f.right_slope)}
    if f.anchor is not None:
        out["anchor"] = {"x": q(f.anchor[0]), "value": q(f.anchor[1])}
    out["nodes"] = [{"x": q(n.x), "left": q(n.left), "right": q(n.right), "side": n.side}
                    for n in f.nodes]
    return out


def pl_from_json(obj: Any):
    if not isinstance(obj, dict):
        raise ValidationError("a PL function must be a JSON object")
    if "lazy" in obj:
        return lazy_from_descriptor(obj["lazy"], obj.get("params", {}))
    try:
        nodes = [Node(parse_q(n["x"]), parse_q(n["left"]), parse_q(n["right"]), n.get("side", "left"))
                 for n in obj.get("nodes", [])]
        anchor = obj.get("anchor")
        if anchor is not None:
            anchor = (parse_q(anchor["x"]), parse_q(anchor["value"]))
        return make_finite_pl(parse_q(obj["left_slope"]), nodes, parse_q(obj["right_slope"]), anchor)
    except KeyError as e:
        raise ValidationError(f"missing field {e.args[0]!r}") from None


def curve_to_json(c: HolCurve) -> dict:
    return {"components": [pl_to_json(f) for f in c.components]}


def curve_from_json(obj: dict) -> HolCurve:
    if "components" not in obj:
        raise ValidationError("curve JSON needs 'components'")
    return make_curve([pl_from_json(f) for f in obj["components"]])


def _coeff_to_json(c):
    return scalar_to_json(c) if isinstance(c, TropScalar) else pl_to_json(c)


def _coeff_from_json(c):
    return pl_from_json(c) if isinstance(c, dict) else scalar_from_json(c)


def hompoly_to_json(P: HomPoly) -> dict:
    return {"d": q(P.d), "terms": [{"exps": [q(e) for e in exps], "coeff": _coeff_to_json(c)}
                                   for exps, c in P.terms]}


def hompoly_from_json(obj: dict) -> HomPoly:
    try:
        terms = [([parse_q(e) for e in t["exps"]], _coeff_from_json(t.get("coeff", "0")))
                 for t in obj["terms"]]
        d = parse_q(obj["d"]) if "d" in obj else None
    except KeyError as e:
        raise ValidationError(f"missing field {e.args[0]!r}") from None
    return make_hompoly(terms, d)


def matrix_to_json(A) -> list:
    return [[scalar_to_json(a) for a in row] for row in A]


def matrix_from_json(obj: Any):
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ValidationError("a matrix is a list of rows")
    return make_matrix([[scalar_from_json(a) for a in row] for row in obj])


def witness_to_json(w: Witness) -> dict:
    return {"I": list(w.I), "J": list(w.J), "alpha": [scalar_to_json(a) for a in w.alpha]}


def witness_from_json(obj: dict, size=None) -> Witness:
    try:
        return make_witness(obj["I"], obj["J"], [scalar_from_json(a) for a in obj["alpha"]], size)
    except KeyError as e:
        raise ValidationError(f"missing field {e.args[0]!r}") from None


def combo_to_json(c: Combo) -> dict:
    return {"basis": [pl_to_json(g) for g in c.basis],
            "coeffs": [scalar_to_json(a) for a in c.coeffs]}


def combo_from_json(obj: dict) -> Combo:
    try:
        return make_combo([pl_from_json(g) for g in obj["basis"]],
                          [scalar_from_json(a) for a in obj["coeffs"]])
    except KeyError as e:
        raise ValidationError(f"missing field {e.args[0]!r}") from None


def to_json_value(obj) -> Any:
    """Encode any supported object (or a tuple/list/dict of them)."""
    if isinstance(obj, (FinitePL, LazyPL)):
        return pl_to_json(obj)
    if isinstance(obj, HolCurve):
        return curve_to_json(obj)
    if isinstance(obj, HomPoly):
        return hompoly_to_json(obj)
    if isinstance(obj, TropScalar):
        return scalar_to_json(obj)
    if isinstance(obj, Witness):
        return witness_to_json(obj)
    if isinstance(obj, Combo):
        return combo_to_json(obj)
    if isinstance(obj, Fraction):
        return q(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_json_value(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json_value(v) for v in obj]
    raise ValidationError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_json_value(obj), indent=2, sort_keys=False) + "\n"


def load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: invalid JSON ({e.msg})") from None


def load_pl(path):
    return pl_from_json(load_json(path))
