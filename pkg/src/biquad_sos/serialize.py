"""JSON encodings for forms and decompositions (1-based indices)."""

from __future__ import annotations

import json
from typing import Any

from .algebra import BilinearForm, BiquadForm, SosDecomposition, canonical_key
from .scalar import Scalar, format_scalar


def form_to_dict(f: BiquadForm) -> dict[str, Any]:
    return {
        "m": f.m,
        "n": f.n,
        "monomials": [
            {"i": i, "k": k, "j": j, "l": l, "coeff": format_scalar(c)}
            for (i, k, j, l), c in f.coeffs.items()
        ],
    }


def form_from_dict(data: dict[str, Any]) -> BiquadForm:
    try:
        m, n = int(data["m"]), int(data["n"])
        items = [
            ((int(e["i"]), int(e["k"]), int(e["j"]), int(e["l"])), Scalar.coerce(str(e["coeff"])))
            for e in data["monomials"]
        ]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed form JSON: {exc}") from exc
    # duplicate placements of one monomial are summed
    acc: dict = {}
    for key, c in items:
        key = canonical_key(*key)
        acc[key] = acc.get(key, Scalar()) + c
    return BiquadForm(m, n, acc)


def decomposition_to_dict(d: SosDecomposition) -> dict[str, Any]:
    m, n = d.target_dims
    return {
        "m": m,
        "n": n,
        "squares": [
            {"entries": [{"i": i, "j": j, "coeff": format_scalar(c)} for (i, j), c in sq.coeffs.items()]}
            for sq in d.squares
        ],
    }


def decomposition_from_dict(data: dict[str, Any]) -> SosDecomposition:
    try:
        m, n = int(data["m"]), int(data["n"])
        squares = []
        for sq in data["squares"]:
            acc: dict = {}
            for e in sq["entries"]:
                cell = (int(e["i"]), int(e["j"]))
                acc[cell] = acc.get(cell, Scalar()) + Scalar.coerce(str(e["coeff"]))
            squares.append(BilinearForm(m, n, acc))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed decomposition JSON: {exc}") from exc
    return SosDecomposition((m, n), squares)


def dumps_form(f: BiquadForm) -> str:
    return json.dumps(form_to_dict(f), indent=2)


def loads_form(text: str) -> BiquadForm:
    return form_from_dict(json.loads(text))


def dumps_decomposition(d: SosDecomposition) -> str:
    return json.dumps(decomposition_to_dict(d), indent=2)


def loads_decomposition(text: str) -> SosDecomposition:
    return decomposition_from_dict(json.loads(text))
