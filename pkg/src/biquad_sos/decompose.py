"""Constructive sum-of-squares decompositions.

Every public decomposer checks its own output with
:func:`~biquad_sos.algebra.verify_decomposition` and raises
:class:`VerificationError` instead of returning something unverified.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import BilinearForm, BiquadForm, Cell, SosDecomposition, verify_decomposition
from .families import gen_full, gen_P, gen_P_plus, gen_T, gen_W, w_gap
from .scalar import ONE, Scalar, ScalarLike, scalar_sqrt

logger = logging.getLogger(__name__)

HALF = Scalar.coerce(Fraction(1, 2))
HALF_ROOT3 = scalar_sqrt(Fraction(3, 4))


class VerificationError(RuntimeError):
    """A decomposer produced squares that do not expand to its target."""


class Case3SearchExhausted(RuntimeError):
    """No row/column permutation admits the fully-positive 3x3 split."""


def _checked(target: BiquadForm, d: SosDecomposition, what: str) -> SosDecomposition:
    if not verify_decomposition(target, d):
        raise VerificationError(f"internal error: {what} produced an unverifiable decomposition")
    return d


def _term(m: int, n: int, *entries: tuple[Cell, ScalarLike]) -> BilinearForm:
    return BilinearForm(m, n, {cell: Scalar.coerce(c) for cell, c in entries})


def _positive_rational(c: Scalar, where) -> Fraction:
    if not c.is_rational():
        raise ValueError(f"coefficient {c} at {where} is not rational")
    q = c.as_fraction()
    if q < 0:
        raise ValueError("not PSD-diagonal: negative coefficient at %s" % (where,))
    return q


def _singles(m: int, n: int, entries: dict[Cell, Fraction]) -> SosDecomposition:
    return SosDecomposition(
        (m, n), [_term(m, n, (cell, scalar_sqrt(a))) for cell, a in sorted(entries.items()) if a != 0]
    )


def decompose_singles(f: BiquadForm) -> SosDecomposition:
    """One square ``(sqrt(a_ij) x_i y_j)^2`` per support cell."""
    entries = {cell: _positive_rational(c, cell) for cell, c in f.diagonal_entries().items()}
    return _checked(f, _singles(f.m, f.n, entries), "decompose_singles")


def _t_squares(i, j, k, l, m, n) -> SosDecomposition:
    return SosDecomposition((m, n), [
        _term(m, n, ((i, k), 1), ((j, l), 1)),
        _term(m, n, ((i, l), 1), ((j, k), -1)),
    ])


def decompose_T(i: int, j: int, k: int, l: int, m: Optional[int] = None, n: Optional[int] = None) -> SosDecomposition:
    """``(x_i y_k + x_j y_l)^2 + (x_i y_l - x_j y_k)^2``."""
    target = gen_T(i, j, k, l, m, n)
    return _checked(target, _t_squares(i, j, k, l, target.m, target.n), "decompose_T")


def _w_squares(a_ik: Fraction, a_jl: Fraction, a_il: Fraction, a_jk: Fraction,
               i, j, k, l, m, n) -> SosDecomposition:
    alpha = a_il * a_jk / a_ik
    squares = [
        _term(m, n, ((i, k), scalar_sqrt(a_ik)), ((j, l), scalar_sqrt(alpha))),
        _term(m, n, ((i, l), scalar_sqrt(a_il)), ((j, k), -scalar_sqrt(a_jk))),
    ]
    if a_jl > alpha:
        squares.append(_term(m, n, ((j, l), scalar_sqrt(a_jl - alpha))))
    return SosDecomposition((m, n), squares)


def _as_positive_fractions(*coeffs: ScalarLike) -> list[Fraction]:
    out = []
    for c in coeffs:
        c = Scalar.coerce(c)
        if not c.is_rational():
            raise ValueError(f"W coefficient {c} must be rational")
        q = c.as_fraction()
        if q <= 0:
            raise ValueError("W coefficients must be positive")
        out.append(q)
    return out


def decompose_W(a_ik: ScalarLike, a_jl: ScalarLike, a_il: ScalarLike, a_jk: ScalarLike,
                i: int, j: int, k: int, l: int,
                m: Optional[int] = None, n: Optional[int] = None) -> SosDecomposition:
    """Two squares when ``a_ik a_jl == a_il a_jk``, three when it is larger.

    The ``x_j^2 y_l^2`` coefficient is split as ``alpha + (a_jl - alpha)`` with
    ``alpha = a_il a_jk / a_ik``; the ``alpha`` part pairs off with the other
    three terms and the rest becomes a third square.
    """
    q = _as_positive_fractions(a_ik, a_jl, a_il, a_jk)
    if w_gap(*q).sign() < 0:
        raise ValueError("indefinite split: c < 0")
    target = gen_W(*q, i, j, k, l, m, n)
    return _checked(target, _w_squares(*q, i, j, k, l, target.m, target.n), "decompose_W")


def decompose_full9() -> SosDecomposition:
    sq = [
        _term(3, 3, ((1, 1), 1), ((2, 2), 1), ((3, 3), 1)),
        _term(3, 3, ((2, 3), 1), ((3, 2), -1)),
        _term(3, 3, ((3, 1), 1), ((1, 3), -1)),
        _term(3, 3, ((1, 2), 1), ((2, 1), -1)),
    ]
    return _checked(gen_P(3, 3, 9), SosDecomposition((3, 3), sq), "decompose_full9")


def decompose_lagrange(m: int) -> SosDecomposition:
    """``1 + m(m-1)/2`` squares for the all-ones ``m x m`` form (Lagrange's identity)."""
    if m < 2:
        raise ValueError("decompose_lagrange needs m >= 2")
    sq = [_term(m, m, *(((i, i), 1) for i in range(1, m + 1)))]
    sq += [_term(m, m, ((i, j), 1), ((j, i), -1)) for i, j in itertools.combinations(range(1, m + 1), 2)]
    return _checked(gen_full(m, m), SosDecomposition((m, m), sq), "decompose_lagrange")


def find_rectangle(cells) -> Optional[tuple[int, int, int, int]]:
    """Lexicographically smallest ``(i, j, k, l)``, ``i<j``, ``k<l``, with all four corners present."""
    cells = set(cells)
    rows = sorted({i for i, _ in cells})
    cols = sorted({j for _, j in cells})
    for i, j in itertools.combinations(rows, 2):
        for k, l in itertools.combinations(cols, 2):
            if {(i, k), (i, l), (j, k), (j, l)} <= cells:
                return (i, j, k, l)
    return None


def decompose_simple_3x3(f: BiquadForm) -> SosDecomposition:
    """At most six squares for any 3x3 simple form.

    Nine terms use the four-square identity; seven or eight terms peel one
    full rectangle into two squares and write the rest as singles.
    """
    if f.dims != (3, 3):
        raise ValueError(f"expected a 3x3 form, got {f.m}x{f.n}")
    if not f.is_simple():
        raise ValueError("not a simple form")
    cells = set(f.diagonal_entries())
    t = len(cells)
    if t == 9:
        return decompose_full9()
    if t in (7, 8):
        rect = find_rectangle(cells)
        if rect is None:
            raise VerificationError(f"no rectangle in a {t}-cell support: {sorted(cells)}")
        i, j, k, l = rect
        rest = cells - {(i, k), (i, l), (j, k), (j, l)}
        d = _t_squares(i, j, k, l, 3, 3) + _singles(3, 3, {c: Fraction(1) for c in rest})
        return _checked(f, d, "decompose_simple_3x3")
    return decompose_singles(f)


@dataclass(frozen=True)
class DiagonalPlan:
    """How a 3x3 diagonal form was split; ``rows``/``cols`` map permuted -> original indices."""

    case: int
    rows: tuple[int, int, int] = (1, 2, 3)
    cols: tuple[int, int, int] = (1, 2, 3)
    permutations_tried: int = 0


def _diag_matrix(f: BiquadForm) -> dict[Cell, Fraction]:
    if f.dims != (3, 3):
        raise ValueError(f"expected a 3x3 form, got {f.m}x{f.n}")
    entries = f.diagonal_entries()
    out = {}
    for i in range(1, 4):
        for j in range(1, 4):
            c = entries.get((i, j), Scalar())
            if not c.is_rational():
                raise ValueError(f"coefficient {c} at {(i, j)} is not rational")
            if c.as_fraction() < 0:
                raise ValueError("not PSD: negative coefficient at %s" % ((i, j),))
            out[i, j] = c.as_fraction()
    return out


def _oriented_w(a: dict[Cell, Fraction], r1, r2, c1, c2) -> SosDecomposition:
    # a is indexed in final coordinates; pick the column order with c >= 0
    if a[r1, c1] * a[r2, c2] - a[r1, c2] * a[r2, c1] >= 0:
        i, j, k, l = r1, r2, c1, c2
    else:
        i, j, k, l = r1, r2, c2, c1
    return _w_squares(a[i, k], a[j, l], a[i, l], a[j, k], i, j, k, l, 3, 3)


def case3_split(b: dict[Cell, Fraction]) -> Optional[SosDecomposition]:
    """Seven-or-fewer squares for an all-positive 3x3 matrix, in its own coordinates.

    Returns ``None`` when ``b22 < b12*b21/b11`` (the split would be negative).
    """
    alpha = b[1, 2] * b[2, 1] / b[1, 1]
    beta = b[2, 2] - alpha
    if beta < 0:
        return None
    first = _w_squares(b[1, 1], alpha, b[1, 2], b[2, 1], 1, 2, 1, 2, 3, 3)
    if beta == 0:
        block = _singles(3, 3, {(2, 3): b[2, 3], (3, 2): b[3, 2], (3, 3): b[3, 3]})
    else:
        block = _oriented_w({**b, (2, 2): beta}, 2, 3, 2, 3)
    rest = _singles(3, 3, {(1, 3): b[1, 3], (3, 1): b[3, 1]})
    return first + block + rest


def plan_diagonal_3x3(f: BiquadForm) -> tuple[SosDecomposition, DiagonalPlan]:
    a = _diag_matrix(f)
    positive = {cell for cell, v in a.items() if v > 0}
    t = len(positive)
    if t <= 7:
        return _singles(3, 3, a), DiagonalPlan(case=1)
    if t == 8:
        (zr, zc), = set(a) - positive
        r1, r2 = (r for r in (1, 2, 3) if r != zr)
        c1, c2 = (c for c in (1, 2, 3) if c != zc)
        d = _oriented_w(a, r1, r2, c1, c2)
        rest = {cell: v for cell, v in a.items() if cell[0] == zr or cell[1] == zc}
        rows = (r1, r2, zr)
        cols = (c1, c2, zc)
        return d + _singles(3, 3, rest), DiagonalPlan(case=2, rows=rows, cols=cols)
    tried = 0
    for rows in itertools.permutations((1, 2, 3)):
        for cols in itertools.permutations((1, 2, 3)):
            tried += 1
            b = {(i, j): a[rows[i - 1], cols[j - 1]] for i in range(1, 4) for j in range(1, 4)}
            d = case3_split(b)
            if d is not None:
                relabeled = d.relabel(dict(enumerate(rows, 1)), dict(enumerate(cols, 1)))
                return relabeled, DiagonalPlan(case=3, rows=rows, cols=cols, permutations_tried=tried)
    logger.error("case-3 permutation search exhausted for %s; potential counterexample", a)
    raise Case3SearchExhausted("case-3 permutation search exhausted")


def decompose_diagonal_3x3(f: BiquadForm) -> SosDecomposition:
    """At most seven squares for any 3x3 diagonal form with nonnegative rational coefficients."""
    d, plan = plan_diagonal_3x3(f)
    logger.debug("diagonal 3x3 plan: %s", plan)
    return _checked(f, d, "decompose_diagonal_3x3")


def decompose_P_plus() -> SosDecomposition:
    sq = [
        _term(3, 3, ((1, 1), HALF), ((2, 3), ONE), ((1, 2), HALF_ROOT3)),
        _term(3, 3, ((2, 1), HALF), ((1, 3), ONE), ((2, 2), -HALF_ROOT3)),
        _term(3, 3, ((1, 1), HALF_ROOT3), ((1, 2), -HALF)),
        _term(3, 3, ((2, 2), HALF), ((2, 1), HALF_ROOT3)),
        _term(3, 3, ((3, 1), ONE)),
        _term(3, 3, ((3, 3), ONE)),
    ]
    return _checked(gen_P_plus(), SosDecomposition((3, 3), sq), "decompose_P_plus")


def decompose_auto(f: BiquadForm) -> tuple[SosDecomposition, str]:
    """Pick the most specific decomposer for ``f``; returns the decomposition and its name."""
    if f == gen_P_plus():
        return decompose_P_plus(), "P_plus"
    if not f.is_diagonal():
        raise ValueError("no decomposer for forms with cross monomials other than P_plus")
    entries = f.diagonal_entries()
    if f.dims == (3, 3):
        if f.is_simple():
            return decompose_simple_3x3(f), "simple_3x3"
        return decompose_diagonal_3x3(f), "diagonal_3x3"
    if len(entries) == 4:
        rect = find_rectangle(entries)
        if rect is not None:
            i, j, k, l = rect
            if f.is_simple():
                return decompose_T(i, j, k, l, f.m, f.n), "T"
            a = {cell: _positive_rational(c, cell) for cell, c in entries.items()}
            if a[i, k] * a[j, l] < a[i, l] * a[j, k]:
                k, l = l, k
            return decompose_W(a[i, k], a[j, l], a[i, l], a[j, k], i, j, k, l, f.m, f.n), "W"
    if f.m == f.n and f.is_simple() and len(entries) == f.m * f.n:
        return decompose_lagrange(f.m), "lagrange"
    return decompose_singles(f), "singles"
