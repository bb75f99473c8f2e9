"""JSON encodings of the domain types.

Wire shapes:
  multi-index      -> [0, 2]
  weight           -> {"pieces": [[1, 0], [0, 0.5]], "offset": 0}
  functional       -> [{"alpha": [0], "re": 1, "im": 0}, ...]
                      or {"terms": [...], "infinite_tail": true}
  germ             -> same list shape as a functional
  zero fixed weight-> null

Numeric entries may be JSON numbers or strings ("1/3") for exact rationals;
floats decode exactly, so dyadic data round-trips unchanged.  Decoding
errors carry a JSON pointer to the offending field.
"""

from __future__ import annotations

from fractions import Fraction

from ._util import as_fraction
from .core import Functional, Germ, MultiIndex, TropicalWeight, WeightPair

SCHEMA = "xicse/1"


class SpecValidationError(ValueError):
    """Invalid instance data, with a JSON pointer to the bad field."""

    def __init__(self, message: str, pointer: str):
        super().__init__(f"{message} (at {pointer or '/'})")
        self.message = message
        self.pointer = pointer or "/"

    def to_json(self) -> dict:
        return {"error": self.message, "pointer": self.pointer}


def _num(value, pointer: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise SpecValidationError("expected a number", pointer)
    try:
        return as_fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecValidationError(str(exc), pointer) from None


def _frac_json(v: Fraction):
    f = float(v)
    return int(v) if v.denominator == 1 else (f if Fraction(f) == v else str(v))


# -- weights ----------------------------------------------------------------


def weight_to_json(w: TropicalWeight | None):
    if w is None:
        return None
    return {
        "pieces": [[_frac_json(v) for v in p] for p in w.pieces],
        "offset": _frac_json(w.offset),
    }


def weight_from_json(obj, pointer: str = "") -> TropicalWeight:
    if not isinstance(obj, dict):
        raise SpecValidationError("weight must be an object", pointer)
    pieces = obj.get("pieces")
    if not isinstance(pieces, list) or not pieces:
        raise SpecValidationError("weight needs a nonempty pieces array", f"{pointer}/pieces")
    rows = []
    for i, row in enumerate(pieces):
        if not isinstance(row, list) or not row:
            raise SpecValidationError("piece must be a nonempty array", f"{pointer}/pieces/{i}")
        rows.append([_num(v, f"{pointer}/pieces/{i}/{j}") for j, v in enumerate(row)])
    offset = _num(obj.get("offset", 0), f"{pointer}/offset")
    try:
        return TropicalWeight(rows, offset)
    except ValueError as exc:
        raise SpecValidationError(str(exc), f"{pointer}/pieces") from None


def optional_weight_from_json(obj, pointer: str = "") -> TropicalWeight | None:
    return None if obj is None else weight_from_json(obj, pointer)


def pair_to_json(weights: WeightPair) -> dict:
    return {"phi": weight_to_json(weights.phi), "psi": weight_to_json(weights.psi)}


def pair_from_json(obj, pointer: str = "") -> WeightPair:
    if not isinstance(obj, dict) or "phi" not in obj:
        raise SpecValidationError("expected an object with a phi field", pointer)
    phi = weight_from_json(obj["phi"], f"{pointer}/phi")
    psi = optional_weight_from_json(obj.get("psi"), f"{pointer}/psi")
    try:
        return WeightPair(phi, psi)
    except ValueError as exc:
        raise SpecValidationError(str(exc), f"{pointer}/psi") from None


# -- sparse coefficient maps ------------------------------------------------


def _terms_to_json(terms) -> list:
    return [
        {"alpha": list(alpha), "re": val.real, "im": val.imag} for alpha, val in terms
    ]


def functional_to_json(xi: Functional):
    body = _terms_to_json(xi.terms)
    if xi.infinite_tail:
        return {"terms": body, "infinite_tail": True}
    return body


def germ_to_json(g: Germ) -> list:
    return _terms_to_json(g.terms)


def _terms_from_json(obj, dimension, pointer: str):
    if not isinstance(obj, list):
        raise SpecValidationError("expected an array of terms", pointer)
    coeffs = {}
    for i, term in enumerate(obj):
        here = f"{pointer}/{i}"
        if not isinstance(term, dict) or "alpha" not in term:
            raise SpecValidationError("term must be an object with an alpha field", here)
        alpha = term["alpha"]
        if not isinstance(alpha, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in alpha):
            raise SpecValidationError("alpha must be an array of integers", f"{here}/alpha")
        if any(a < 0 for a in alpha):
            raise SpecValidationError("alpha entries must be nonnegative", f"{here}/alpha")
        if dimension is not None and len(alpha) != dimension:
            raise SpecValidationError(
                f"alpha has length {len(alpha)}, expected {dimension}", f"{here}/alpha"
            )
        re = term.get("re", 0)
        im = term.get("im", 0)
        for fld, v in (("re", re), ("im", im)):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SpecValidationError("expected a number", f"{here}/{fld}")
        idx = MultiIndex(alpha)
        coeffs[idx] = coeffs.get(idx, 0j) + complex(re, im)
    return coeffs


def functional_from_json(obj, dimension: int | None = None, pointer: str = "") -> Functional:
    tail = False
    body = obj
    if isinstance(obj, dict):
        tail = bool(obj.get("infinite_tail", False))
        body = obj.get("terms", [])
    coeffs = _terms_from_json(body, dimension, pointer)
    dim = dimension
    if dim is None:
        if not coeffs:
            raise SpecValidationError(
                "cannot infer the dimension of an empty functional", pointer
            )
        dim = next(iter(coeffs)).dimension
    return Functional(dim, coeffs, infinite_tail=tail)


def germ_from_json(obj, dimension: int | None = None, pointer: str = "") -> Germ:
    coeffs = _terms_from_json(obj, dimension, pointer)
    dim = dimension
    if dim is None:
        if not coeffs:
            raise SpecValidationError("cannot infer the dimension of an empty germ", pointer)
        dim = next(iter(coeffs)).dimension
    return Germ(dim, coeffs)
