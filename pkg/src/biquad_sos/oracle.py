"""Floating-point local search for R-square decompositions.

This is numeric evidence only.  A failed search says nothing about the SOS
rank; certified lower bounds live in :mod:`biquad_sos.certify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import BilinearForm, BiquadForm, Key, SosDecomposition, canonical_key
from .scalar import Scalar

_RADICANDS = (1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15)


@dataclass(frozen=True)
class FactorMatrix:
    """``R x (m*n)`` real matrix; row ``t`` holds ``c_ij^(t)`` at column ``(i-1)*n + (j-1)``."""

    m: int
    n: int
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[1] != self.m * self.n:
            raise ValueError(f"factor shape {e.shape} does not match {self.m}x{self.n}")
        if not np.all(np.isfinite(e)):
            raise ValueError("factor entries must be finite")
        object.__setattr__(self, "entries", e)

    @property
    def R(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_decomposition(cls, d: SosDecomposition) -> FactorMatrix:
        m, n = d.target_dims
        e = np.zeros((len(d), m * n))
        for t, sq in enumerate(d.squares):
            for (i, j), c in sq.coeffs.items():
                e[t, (i - 1) * n + (j - 1)] = float(c)
        return cls(m, n, e)

    def with_zero_rows(self, k: int = 1) -> FactorMatrix:
        return FactorMatrix(self.m, self.n, np.vstack([self.entries, np.zeros((k, self.m * self.n))]))

    def to_list(self) -> list[list[float]]:
        return self.entries.tolist()


class _Layout:
    """Maps the ``(mn)^2`` ordered cell pairs to canonical monomial slots."""

    def __init__(self, f: BiquadForm):
        m, n = f.m, f.n
        cells = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
        keys: dict[Key, int] = {}
        index = np.empty((len(cells), len(cells)), dtype=np.intp)
        for a, (i, j) in enumerate(cells):
            for b, (p, q) in enumerate(cells):
                index[a, b] = keys.setdefault(canonical_key(i, p, j, q), len(keys))
        for key in f.coeffs:
            if key not in keys:
                raise ValueError(f"monomial {key} outside the {m}x{n} layout")
        self.m, self.n = m, n
        self.index = index.ravel()
        self.size = len(keys)
        self.target = np.zeros(self.size)
        for key, c in f.coeffs.items():
            self.target[keys[key]] = float(c)

    def residual_vector(self, c: np.ndarray) -> np.ndarray:
        gram = c.T @ c
        return np.bincount(self.index, weights=gram.ravel(), minlength=self.size) - self.target

    def value_and_grad(self, c: np.ndarray) -> tuple[float, np.ndarray]:
        r = self.residual_vector(c)
        # d/dG_ab = 2 r[key(a,b)], symmetric in (a,b); G = C^T C gives 2 C E
        e = (2.0 * r)[self.index].reshape(c.shape[1], c.shape[1])
        return float(r @ r), 2.0 * c @ e


def _layout_for(f: BiquadForm, c: FactorMatrix) -> _Layout:
    if (c.m, c.n) != f.dims:
        raise ValueError(f"factor dims {(c.m, c.n)} do not match form dims {f.dims}")
    return _Layout(f)


def residual(f: BiquadForm, c: FactorMatrix) -> float:
    """Sum over canonical monomials of (expanded - target)^2."""
    r = _layout_for(f, c).residual_vector(c.entries)
    return float(r @ r)


def residual_gradient(f: BiquadForm, c: FactorMatrix) -> np.ndarray:
    return _layout_for(f, c).value_and_grad(c.entries)[1]


def gradient_check(f: BiquadForm, c: FactorMatrix, h: float = 1e-5) -> float:
    """Max entrywise discrepancy between the analytic gradient and central differences.

    Discrepancies are measured relative to the largest gradient entry (the
    gradient's scale), so near-zero entries do not inflate the ratio.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    layout = _layout_for(f, c)
    x = c.entries.copy()
    _, g = layout.value_and_grad(x)
    fd = np.empty_like(x)
    for idx in np.ndindex(*x.shape):
        orig = x[idx]
        x[idx] = orig + h
        fp = float(np.sum(layout.residual_vector(x) ** 2))
        x[idx] = orig - h
        fm = float(np.sum(layout.residual_vector(x) ** 2))
        x[idx] = orig
        fd[idx] = (fp - fm) / (2 * h)
    scale = max(np.max(np.abs(g)), np.max(np.abs(fd)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(g - fd)) / scale)


@dataclass
class SearchResult:
    factor: FactorMatrix
    residual: float
    success: bool
    restarts_run: int
    iterations: int

    def to_dict(self, include_factor: bool = True) -> dict:
        out = {
            "label": "numeric evidence",
            "rank": self.factor.R,
            "best_residual": self.residual,
            "success": self.success,
            "restarts_run": self.restarts_run,
        }
        if include_factor:
            out["factor"] = self.factor.to_list()
        return out


def _descend(layout: _Layout, x: np.ndarray, max_iters: int, tol: float,
             mask: Optional[np.ndarray] = None) -> tuple[np.ndarray, float, int]:
    def value_and_grad(x):
        val, g = layout.value_and_grad(x)
        return val, (g if mask is None else g * mask)

    val, g = value_and_grad(x)
    step = 1.0
    it = 0
    for it in range(1, max_iters + 1):
        gg = float(np.sum(g * g))
        if val < tol or math.sqrt(gg) < 1e-10:
            break
        # Armijo backtracking, step grows again after an accepted move
        step *= 2.0
        while True:
            x_new = x - step * g
            val_new = float(np.sum(layout.residual_vector(x_new) ** 2))
            if val_new <= val - 1e-4 * step * gg:
                break
            step *= 0.5
            if step < 1e-20:
                return x, val, it
        x = x_new
        val, g = value_and_grad(x)
    return x, val, it


def search(f: BiquadForm, R: int, restarts: int = 50, max_iters: int = 5000, tol: float = 1e-8,
           seed: Optional[int] = 0, warm_start: Optional[FactorMatrix] = None,
           stop_on_success: bool = True, prune: bool = True) -> SearchResult:
    """Gradient descent on :func:`residual` from Gaussian starts.

    With ``prune`` the columns of cells whose ``x_i^2 y_j^2`` coefficient is
    zero are held at zero: any exact decomposition has ``sum_t c_ij^2 = 0``
    there, and leaving them free makes the residual quartic-flat.

    Restart ``k`` draws from ``numpy.random.default_rng([seed, k])`` so results
    do not depend on scheduling.  ``seed=None`` draws fresh entropy.  A
    ``warm_start`` replaces the first restart's random initial point.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    layout = _Layout(f)
    mn = f.m * f.n
    trace = sum(float(c) for (i, k, j, l), c in f.coeffs.items() if i == k and j == l)
    scale = math.sqrt(max(trace, 1e-12) / R)
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
    mask = None
    if prune:
        live = np.zeros(mn)
        for (i, k, j, l), c in f.coeffs.items():
            if i == k and j == l:
                live[(i - 1) * f.n + (j - 1)] = 1.0
        mask = np.broadcast_to(live, (R, mn))
    best: Optional[tuple[np.ndarray, float]] = None
    total_iters = 0
    run = 0
    for k in range(restarts):
        run = k + 1
        if k == 0 and warm_start is not None:
            if warm_start.entries.shape != (R, mn):
                raise ValueError("warm start has the wrong shape")
            x0 = warm_start.entries.copy()
        else:
            x0 = np.random.default_rng([seed, k]).standard_normal((R, mn)) * scale
        if mask is not None:
            x0 = x0 * mask
        x, val, its = _descend(layout, x0, max_iters, tol, mask)
        total_iters += its
        if best is None or val < best[1]:
            best = (x, val)
        if stop_on_success and best[1] < tol:
            break
    x, val = best
    return SearchResult(FactorMatrix(f.m, f.n, x), val, val < tol, run, total_iters)


def recognize_scalar(x: float, tol: float = 1e-9, max_den: int = 64) -> Optional[Scalar]:
    """Return ``q*sqrt(d)`` within ``tol`` of ``x`` for a small square-free ``d``, if any."""
    if abs(x) < tol:
        return Scalar()
    for d in _RADICANDS:
        q = Fraction(x / math.sqrt(d)).limit_denominator(max_den)
        if q != 0 and abs(float(q) * math.sqrt(d) - x) < tol:
            return Scalar({d: q})
    return None


def rationalize(c: FactorMatrix, tol: float = 1e-9) -> Optional[SosDecomposition]:
    """Round every entry to an exact ``q*sqrt(d)``; ``None`` if any entry is unrecognizable."""
    squares = []
    for row in c.entries:
        coeffs = {}
        for a, v in enumerate(row):
            s = recognize_scalar(float(v), tol)
            if s is None:
                return None
            coeffs[a // c.n + 1, a % c.n + 1] = s
        squares.append(BilinearForm(c.m, c.n, coeffs))
    return SosDecomposition((c.m, c.n), squares)
