"""Biquadratic and bilinear forms with exact coefficients.

Indices are 1-based throughout.  A biquadratic monomial ``x_i x_k y_j y_l`` is
keyed canonically as ``(min(i,k), max(i,k), min(j,l), max(j,l))`` and the
stored coefficient is the total merged coefficient of that monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .scalar import ONE, ZERO, Scalar, ScalarLike, scalar_sqrt

Key = tuple[int, int, int, int]
Cell = tuple[int, int]


class DimensionError(ValueError):
    pass


def canonical_key(i: int, k: int, j: int, l: int) -> Key:
    return (min(i, k), max(i, k), min(j, l), max(j, l))


def _prune(items: Iterable[tuple], coerce=Scalar.coerce) -> dict:
    out: dict = {}
    for key, c in items:
        c = coerce(c)
        out[key] = out.get(key, ZERO) + c
    return {k: v for k, v in out.items() if not v.is_zero()}


@dataclass(frozen=True, eq=False)
class BiquadForm:
    """Coefficient map of ``sum a_{ijkl} x_i x_k y_j y_l`` in canonical keys."""

    m: int
    n: int
    coeffs: Mapping[Key, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionError(f"bad dimensions {self.m}x{self.n}")
        merged = _prune((canonical_key(*key), c) for key, c in dict(self.coeffs).items())
        for i, k, j, l in merged:
            if not (1 <= i <= self.m and 1 <= k <= self.m and 1 <= j <= self.n and 1 <= l <= self.n):
                raise DimensionError(f"monomial {(i, k, j, l)} out of range for {self.m}x{self.n}")
        object.__setattr__(self, "coeffs", dict(sorted(merged.items())))

    @classmethod
    def zero(cls, m: int, n: int) -> BiquadForm:
        return cls(m, n, {})

    @classmethod
    def diagonal(cls, m: int, n: int, entries: Mapping[Cell, ScalarLike]) -> BiquadForm:
        """Build ``sum a_ij x_i^2 y_j^2`` from a cell -> coefficient map."""
        return cls(m, n, {(i, i, j, j): c for (i, j), c in entries.items()})

    @classmethod
    def from_cells(cls, m: int, n: int, cells: Iterable[Cell]) -> BiquadForm:
        """Simple form with unit coefficient on every given cell."""
        return cls.diagonal(m, n, {c: ONE for c in cells})

    @property
    def dims(self) -> tuple[int, int]:
        return (self.m, self.n)

    def coefficient(self, i: int, k: int, j: int, l: int) -> Scalar:
        return self.coeffs.get(canonical_key(i, k, j, l), ZERO)

    def is_diagonal(self) -> bool:
        return all(i == k and j == l for i, k, j, l in self.coeffs)

    def is_simple(self) -> bool:
        return self.is_diagonal() and all(c == ONE for c in self.coeffs.values())

    def diagonal_entries(self) -> dict[Cell, Scalar]:
        if not self.is_diagonal():
            raise ValueError("not simple/diagonal")
        return {(i, j): c for (i, _, j, _), c in self.coeffs.items()}

    def transpose(self) -> BiquadForm:
        """Swap the roles of x and y."""
        return BiquadForm(self.n, self.m, {(j, l, i, k): c for (i, k, j, l), c in self.coeffs.items()})

    def evaluate(self, x: Sequence[ScalarLike], y: Sequence[ScalarLike]) -> Scalar:
        x = [Scalar.coerce(v) for v in x]
        y = [Scalar.coerce(v) for v in y]
        total = ZERO
        for (i, k, j, l), c in self.coeffs.items():
            total = total + c * x[i - 1] * x[k - 1] * y[j - 1] * y[l - 1]
        return total

    def _check_same(self, other: BiquadForm):
        if self.dims != other.dims:
            raise DimensionError(f"dimension mismatch {self.dims} vs {other.dims}")

    def __add__(self, other: BiquadForm) -> BiquadForm:
        self._check_same(other)
        return BiquadForm(self.m, self.n, _prune([*self.coeffs.items(), *other.coeffs.items()]))

    def __neg__(self) -> BiquadForm:
        return BiquadForm(self.m, self.n, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: BiquadForm) -> BiquadForm:
        return self + (-other)

    def scale(self, c: ScalarLike) -> BiquadForm:
        c = Scalar.coerce(c)
        return BiquadForm(self.m, self.n, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiquadForm):
            return NotImplemented
        return self.dims == other.dims and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.n, tuple(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (i, k, j, l), c in self.coeffs.items():
            xs = f"x{i}^2" if i == k else f"x{i}*x{k}"
            ys = f"y{j}^2" if j == l else f"y{j}*y{l}"
            parts.append(f"({c})*{xs}*{ys}")
        return " + ".join(parts)


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """``L = sum c_ij x_i y_j``."""

    m: int
    n: int
    coeffs: Mapping[Cell, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        merged = _prune(dict(self.coeffs).items())
        for i, j in merged:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise DimensionError(f"cell {(i, j)} out of range for {self.m}x{self.n}")
        object.__setattr__(self, "coeffs", dict(sorted(merged.items())))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.m, self.n)

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.coeffs.get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __neg__(self) -> BilinearForm:
        return BilinearForm(self.m, self.n, {c: -v for c, v in self.coeffs.items()})

    def __add__(self, other: BilinearForm) -> BilinearForm:
        if self.dims != other.dims:
            raise DimensionError(f"dimension mismatch {self.dims} vs {other.dims}")
        return BilinearForm(self.m, self.n, _prune([*self.coeffs.items(), *other.coeffs.items()]))

    def scale(self, c: ScalarLike) -> BilinearForm:
        c = Scalar.coerce(c)
        return BilinearForm(self.m, self.n, {k: v * c for k, v in self.coeffs.items()})

    def square(self) -> BiquadForm:
        acc: dict[Key, Scalar] = {}
        cells = list(self.coeffs.items())
        for (i, j), a in cells:
            for (p, q), b in cells:
                key = canonical_key(i, p, j, q)
                acc[key] = acc.get(key, ZERO) + a * b
        return BiquadForm(self.m, self.n, acc)

    def evaluate(self, x: Sequence[ScalarLike], y: Sequence[ScalarLike]) -> Scalar:
        total = ZERO
        for (i, j), c in self.coeffs.items():
            total = total + c * Scalar.coerce(x[i - 1]) * Scalar.coerce(y[j - 1])
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.dims == other.dims and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.n, tuple(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*x{i}*y{j}" for (i, j), c in self.coeffs.items())


def bilinear(m: int, n: int, entries: Mapping[Cell, ScalarLike]) -> BilinearForm:
    return BilinearForm(m, n, {cell: Scalar.coerce(c) for cell, c in entries.items()})


@dataclass(frozen=True)
class SosDecomposition:
    target_dims: tuple[int, int]
    squares: tuple[BilinearForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "target_dims", tuple(self.target_dims))
        object.__setattr__(self, "squares", tuple(self.squares))
        for sq in self.squares:
            if sq.dims != self.target_dims:
                raise DimensionError(f"square of dims {sq.dims} in a {self.target_dims} decomposition")

    def __len__(self) -> int:
        return len(self.squares)

    def __iter__(self):
        return iter(self.squares)

    def __add__(self, other: SosDecomposition) -> SosDecomposition:
        if self.target_dims != other.target_dims:
            raise DimensionError("cannot concatenate decompositions of different dimensions")
        return SosDecomposition(self.target_dims, self.squares + other.squares)

    def relabel(self, rows: Mapping[int, int], cols: Mapping[int, int], dims: Optional[tuple[int, int]] = None):
        """Rename variables: ``x_i -> x_rows[i]``, ``y_j -> y_cols[j]``."""
        m, n = dims or self.target_dims
        return SosDecomposition(
            (m, n),
            [BilinearForm(m, n, {(rows[i], cols[j]): c for (i, j), c in sq.coeffs.items()}) for sq in self.squares],
        )


@dataclass(frozen=True)
class SupportPattern:
    m: int
    n: int
    cells: frozenset[Cell] = frozenset()

    def __post_init__(self):
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        for i, j in cells:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise DimensionError(f"cell {(i, j)} out of range for {self.m}x{self.n}")
        object.__setattr__(self, "cells", cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return cell in self.cells

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def bitmask(self) -> int:
        """Bit ``(i-1)*n + (j-1)`` is set for every cell ``(i, j)``."""
        return sum(1 << ((i - 1) * self.n + (j - 1)) for i, j in self.cells)

    @classmethod
    def from_bitmask(cls, m: int, n: int, mask: int) -> SupportPattern:
        return cls(m, n, frozenset((b // n + 1, b % n + 1) for b in range(m * n) if mask >> b & 1))


def expand_squares(d: SosDecomposition) -> BiquadForm:
    """Return ``sum_t L_t^2`` as a canonical biquadratic form."""
    m, n = d.target_dims
    acc: dict[Key, Scalar] = {}
    for sq in d.squares:
        cells = list(sq.coeffs.items())
        for a, ((i, j), cij) in enumerate(cells):
            acc_key = (i, i, j, j)
            acc[acc_key] = acc.get(acc_key, ZERO) + cij * cij
            for (p, q), cpq in cells[a + 1:]:
                key = canonical_key(i, p, j, q)
                acc[key] = acc.get(key, ZERO) + 2 * cij * cpq
    return BiquadForm(m, n, acc)


def verify_decomposition(target: BiquadForm, d: SosDecomposition) -> bool:
    """Exact check that the squares of ``d`` sum to ``target``."""
    if target.dims != d.target_dims:
        raise DimensionError(f"dimension mismatch {target.dims} vs {d.target_dims}")
    return expand_squares(d) == target


def support(f: BiquadForm) -> SupportPattern:
    """Cells carrying a nonzero ``x_i^2 y_j^2`` coefficient of a simple/diagonal form."""
    return SupportPattern(f.m, f.n, frozenset(f.diagonal_entries()))


def is_perfect_square(f: BiquadForm) -> Optional[BilinearForm]:
    """Return ``L`` with ``L^2 == f`` if one exists, else ``None``.

    The pivot must be a diagonal entry with a positive rational coefficient;
    a nonzero form whose diagonal coefficients are all irrational raises.
    """
    if not f.coeffs:
        return BilinearForm(f.m, f.n, {})
    diag = {(i, j): c for (i, k, j, l), c in f.coeffs.items() if i == k and j == l}
    if not diag:
        return None  # a nonzero square always has a positive diagonal entry
    if any(c.sign() < 0 for c in diag.values()):
        return None
    rational = [(cell, c) for cell, c in diag.items() if c.is_rational()]
    if not rational:
        raise ValueError("is_perfect_square needs a rational diagonal pivot")
    (i0, j0), a = rational[0]
    a = a.as_fraction()
    # v = c_{i0 j0} * c, so v_{i0 j0} = a and c = v / sqrt(a)
    v: dict[Cell, Scalar] = {}
    for p in range(1, f.m + 1):
        for q in range(1, f.n + 1):
            if (p, q) == (i0, j0):
                v[p, q] = Scalar.coerce(a)
            elif p == i0 or q == j0:
                v[p, q] = f.coefficient(i0, p, j0, q) / 2
    for p in range(1, f.m + 1):
        for q in range(1, f.n + 1):
            if p != i0 and q != j0:
                v[p, q] = f.coefficient(i0, p, j0, q) / 2 - v[i0, q] * v[p, j0] / a
    root = scalar_sqrt(a)
    cand = BilinearForm(f.m, f.n, {cell: val * root / a for cell, val in v.items()})
    return cand if cand.square() == f else None
