"""Generators for the named biquadratic forms."""

from __future__ import annotations

from .algebra import BiquadForm, Cell, bilinear
from .scalar import ONE, Scalar, ScalarLike


def _check_dims(m: int, n: int):
    if m < 2 or n < 2:
        raise ValueError(f"dimensions must be >= 2, got {m}x{n}")


def shifted_diagonal_order(m: int, n: int) -> list[Cell]:
    """All ``m*n`` cells: the main diagonal first, then cyclic shifts of it.

    Shift ``s`` contributes ``(i, (i-1+s) mod n + 1)`` for ``i = 1..m``.  In
    3x3 this yields (1,1),(2,2),(3,3),(1,2),(2,3),(3,1),(1,3),(2,1),(3,2).
    """
    return [(i, (i - 1 + s) % n + 1) for s in range(n) for i in range(1, m + 1)]


def gen_P(m: int, n: int, s: int) -> BiquadForm:
    _check_dims(m, n)
    if not 1 <= s <= m * n:
        raise ValueError(f"s must lie in 1..{m * n}, got {s}")
    return BiquadForm.from_cells(m, n, shifted_diagonal_order(m, n)[:s])


def gen_full(m: int, n: int) -> BiquadForm:
    """All-ones form ``sum_{i,j} x_i^2 y_j^2``."""
    _check_dims(m, n)
    return BiquadForm.from_cells(m, n, [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)])


def q_cells(m: int, n: int) -> list[Cell]:
    cells = [(i, i) for i in range(1, m + 1)]
    cells += [(i, i % m + 1 if m == n else i + 1) for i in range(1, m + 1)]
    cells += [(1, j) for j in range(m + 1, n + 1)]
    return cells


def gen_Q(m: int, n: int) -> BiquadForm:
    """Extremal ``m+n``-term family; requires ``3 <= m <= n`` (transpose otherwise)."""
    if m < 3 or n < 3:
        raise ValueError(f"gen_Q needs m, n >= 3, got {m}x{n}")
    if n < m:
        raise ValueError(f"gen_Q needs n >= m; use gen_Q({n}, {m}).transpose()")
    return BiquadForm.from_cells(m, n, q_cells(m, n))


def gen_cyclic(m: int) -> BiquadForm:
    if m < 3:
        raise ValueError(f"gen_cyclic needs m >= 3, got {m}")
    return BiquadForm.from_cells(m, m, [(i, i) for i in range(1, m + 1)] + [(i, i % m + 1) for i in range(1, m + 1)])


def _rect_dims(i, j, k, l, m, n):
    if i == j or k == l:
        raise ValueError(f"degenerate rectangle indices ({i},{j},{k},{l})")
    if min(i, j, k, l) < 1:
        raise ValueError("indices are 1-based")
    m = max(2, i, j) if m is None else m
    n = max(2, k, l) if n is None else n
    if max(i, j) > m or max(k, l) > n:
        raise ValueError(f"indices ({i},{j},{k},{l}) out of range for {m}x{n}")
    return m, n


def gen_T(i: int, j: int, k: int, l: int, m: int | None = None, n: int | None = None) -> BiquadForm:
    """``x_i^2 y_k^2 + x_j^2 y_l^2 + x_i^2 y_l^2 + x_j^2 y_k^2``.

    ``i, j`` index x and ``k, l`` index y; dimensions default to the
    smallest that fit (at least 2).
    """
    m, n = _rect_dims(i, j, k, l, m, n)
    return BiquadForm.from_cells(m, n, [(i, k), (j, l), (i, l), (j, k)])


def gen_W(a_ik: ScalarLike, a_jl: ScalarLike, a_il: ScalarLike, a_jk: ScalarLike,
          i: int, j: int, k: int, l: int, m: int | None = None, n: int | None = None) -> BiquadForm:
    m, n = _rect_dims(i, j, k, l, m, n)
    coeffs = [Scalar.coerce(a) for a in (a_ik, a_jl, a_il, a_jk)]
    if any(c.sign() <= 0 for c in coeffs):
        raise ValueError("W coefficients must be positive")
    return BiquadForm.diagonal(m, n, dict(zip([(i, k), (j, l), (i, l), (j, k)], coeffs)))


def w_gap(a_ik: ScalarLike, a_jl: ScalarLike, a_il: ScalarLike, a_jk: ScalarLike) -> Scalar:
    """``a_ik*a_jl - a_il*a_jk``; its sign decides whether two squares suffice."""
    a_ik, a_jl, a_il, a_jk = (Scalar.coerce(a) for a in (a_ik, a_jl, a_il, a_jk))
    return a_ik * a_jl - a_il * a_jk


P_PLUS_EXTRA = bilinear(3, 3, {(1, 3): 1, (2, 1): 1})


def gen_P_plus() -> BiquadForm:
    """``P_{3,3,6} + (x1 y3 + x2 y1)^2``."""
    return gen_P(3, 3, 6) + P_PLUS_EXTRA.square()


def extend_form(f: BiquadForm, i: int = 1) -> BiquadForm:
    """Append a fresh ``y_{n+1}`` and add ``x_i^2 y_{n+1}^2``."""
    if not 1 <= i <= f.m:
        raise ValueError(f"row {i} out of range 1..{f.m}")
    n1 = f.n + 1
    return BiquadForm(f.m, n1, {**f.coeffs, (i, i, n1, n1): ONE})
