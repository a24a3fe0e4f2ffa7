"""Lower-bound certificates and exhaustive support checks.

The certificate rests on one combinatorial property of a support ``S``: no
two cells that differ in both coordinates have both opposite corners in
``S`` (equivalently, ``S`` contains no full rectangle).  When it holds, the
coefficient vectors ``C_ij = (c_ij^(1), ..., c_ij^(R))`` of any decomposition
into ``R`` squares are pairwise orthogonal and nonzero, so ``R >= |S|``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .algebra import BiquadForm, Cell, SupportPattern, support
from .decompose import decompose_simple_3x3, decompose_singles, find_rectangle
from .families import gen_P, gen_Q

Witness = tuple[Cell, Cell]


def iter_rectangle_witnesses(cells) -> Iterator[Witness]:
    cells = set(cells)
    for (i, j), (p, q) in itertools.combinations(sorted(cells), 2):
        if i != p and j != q and (i, q) in cells and (p, j) in cells:
            yield ((i, j), (p, q))


def check_rectangle_compat(s: SupportPattern) -> tuple[bool, list[Witness]]:
    """Return ``(compatible, witnesses)``; witnesses list every offending cell pair."""
    witnesses = list(iter_rectangle_witnesses(s.cells))
    return (not witnesses, witnesses)


@dataclass(frozen=True)
class RankCertificate:
    support: SupportPattern
    compatible: bool
    lower_bound: int
    witness_pairs: tuple[Witness, ...] = ()

    def to_dict(self) -> dict:
        return {
            "support": [list(c) for c in self.support.sorted_cells()],
            "compatible": self.compatible,
            "lower_bound": self.lower_bound,
            "witnesses": [[list(a), list(b)] for a, b in self.witness_pairs],
        }


def lower_bound(f: BiquadForm) -> RankCertificate:
    """Certified SOS-rank lower bound for a simple or diagonal form.

    ``lower_bound`` is ``|S|`` for a rectangle-compatible support.  Otherwise
    only the trivial bound is claimed: 1 for a nonzero form, 0 for zero.
    """
    entries = f.diagonal_entries()
    for cell, c in entries.items():
        if c.sign() <= 0:
            raise ValueError(f"support coefficient at {cell} must be positive, got {c}")
    s = support(f)
    ok, witnesses = check_rectangle_compat(s)
    return RankCertificate(s, ok, len(s) if ok else min(len(s), 1), tuple(witnesses))


# -- 3x3 lemmas --------------------------------------------------------------

GRID_3X3 = [(i, j) for i in range(1, 4) for j in range(1, 4)]


@dataclass
class RectangleLemmaReport:
    ok: bool
    rectangles: dict[frozenset, tuple[int, int, int, int]] = field(default_factory=dict)
    failures: list[frozenset] = field(default_factory=list)
    sizes: dict[int, int] = field(default_factory=dict)
    max_squares: dict[int, int] = field(default_factory=dict)


def check_rectangle_lemma() -> RectangleLemmaReport:
    """Every 7- and 8-cell subset of the 3x3 grid contains a full rectangle.

    Also records the largest square count the 3x3 simple decomposer emits
    for each subset size (expected 5 and 6).
    """
    report = RectangleLemmaReport(ok=True)
    for size in (7, 8):
        count = 0
        worst = 0
        for cells in itertools.combinations(GRID_3X3, size):
            count += 1
            key = frozenset(cells)
            rect = find_rectangle(cells)
            if rect is None:
                report.ok = False
                report.failures.append(key)
                continue
            report.rectangles[key] = rect
            worst = max(worst, len(decompose_simple_3x3(BiquadForm.from_cells(3, 3, cells))))
        report.sizes[size] = count
        report.max_squares[size] = worst
    if report.max_squares != {7: 5, 8: 6}:
        report.ok = False
    return report


@dataclass(frozen=True)
class ScanRow:
    bitmask: int
    t: int
    lower: int
    upper: int
    compatible: bool


@dataclass
class ScanReport:
    rows: list[ScanRow]
    max_upper: int
    tight_at_max: list[int]

    @property
    def p336_mask(self) -> int:
        return support(gen_P(3, 3, 6)).bitmask()

    def summary(self) -> str:
        if self.p336_mask in self.tight_at_max:
            where = "P336"
        elif self.tight_at_max:
            where = f"mask{self.tight_at_max[0]}"
        else:
            where = "none"
        return f"max_upper={self.max_upper} attained_at={where}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["support_bitmask", "t", "lower", "upper"])
        for r in self.rows:
            w.writerow([r.bitmask, r.t, r.lower, r.upper])
        return buf.getvalue()


def scan_all_3x3_supports() -> ScanReport:
    """Certified lower and constructive upper bounds for all 512 simple 3x3 supports.

    Bit ``3*(i-1) + (j-1)`` of the mask marks cell ``(i, j)``.
    """
    rows = []
    for mask in range(512):
        s = SupportPattern.from_bitmask(3, 3, mask)
        f = BiquadForm.from_cells(3, 3, s.cells)
        upper = len(decompose_simple_3x3(f))
        cert = lower_bound(f)
        rows.append(ScanRow(mask, len(s), cert.lower_bound, upper, cert.compatible))
    max_upper = max(r.upper for r in rows)
    tight = [r.bitmask for r in rows if r.upper == max_upper and r.lower == max_upper]
    return ScanReport(rows, max_upper, tight)


# -- bounds table -------------------------------------------------------------

def extremal_simple_form(m: int, n: int) -> BiquadForm:
    """Rectangle-free simple form with the largest certified bound used in the table.

    ``m, n >= 3``: the ``m+n``-term family (transposed when ``m > n``).
    ``min(m, n) == 2``: a full first row plus the first column, ``max+1`` cells.
    """
    if min(m, n) >= 3:
        return gen_Q(m, n) if m <= n else gen_Q(n, m).transpose()
    if min(m, n) < 2:
        raise ValueError("dimensions must be >= 2")
    if n == 2:
        cells = [(1, 1), (1, 2)] + [(i, 1) for i in range(2, m + 1)]
        return BiquadForm.from_cells(m, n, cells)
    return extremal_simple_form(n, m).transpose()


def certified_lower(m: int, n: int) -> int:
    cert = lower_bound(extremal_simple_form(m, n))
    if not cert.compatible:
        raise AssertionError(f"extremal form for {m}x{n} lost its certificate")
    return cert.lower_bound


def cited_upper(m: int, n: int) -> tuple[int, str]:
    """Upper bound on BSR(m, n) as quoted from the literature (not computed here)."""
    a, b = max(m, n), min(m, n)
    if (a, b) == (2, 2):
        return 3, "cited: BSR(2,2)=3"
    if (a, b) == (3, 2):
        return 4, "cited: BSR(3,2)=4"
    if b == 2:
        return 2 * a - 1, "cited: 2m-1"
    return a * b - 1, "cited: mn-1"


@dataclass(frozen=True)
class BoundsRow:
    m: int
    n: int
    lower: int
    upper: int
    lower_source: str
    upper_source: str


SUMMARY_HEADER = ("(m,n)", "Lower bound", "Upper bound")


def summary_rows(max_m: int = 8, max_n: int = 8) -> list[tuple[str, str, str]]:
    """The five summary rows; every lower bound is recomputed from certificates.

    The symbolic rows (``m+1``, ``m+n``) are emitted only after the certificate
    reproduces the formula on every grid point up to ``max_m x max_n``.
    """
    if max_m < 4 or max_n < 3:
        raise ValueError("the summary rows need max_m >= 4 and max_n >= 3")
    for m in range(4, max_m + 1):
        if certified_lower(m, 2) != m + 1:
            raise AssertionError(f"certificate for ({m},2) differs from m+1")
    for m in range(3, max_m + 1):
        for n in range(3, max_n + 1):
            if certified_lower(m, n) != m + n:
                raise AssertionError(f"certificate for ({m},{n}) differs from m+n")
    lower_33 = lower_bound(gen_P(3, 3, 6)).lower_bound
    return [
        ("(2,2)", f"{certified_lower(2, 2)} (exact)", str(cited_upper(2, 2)[0])),
        ("(3,2)", f"{certified_lower(3, 2)} (exact)", str(cited_upper(3, 2)[0])),
        ("(m,2), m>=4", "m+1", "2m-1"),
        ("(3,3)", str(lower_33), f"{cited_upper(3, 3)[0]} (conjectured {lower_33})"),
        ("(m,n), m,n>=3", "m+n", "mn-1"),
    ]


def summary_csv(max_m: int = 8, max_n: int = 8) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    w.writerows(summary_rows(max_m, max_n))
    return buf.getvalue()


def summary_text(max_m: int = 8, max_n: int = 8) -> str:
    rows = [SUMMARY_HEADER, *summary_rows(max_m, max_n)]
    widths = [max(len(r[c]) for r in rows) for c in range(3)]
    lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def bsr_bounds_table(max_m: int, max_n: int) -> list[BoundsRow]:
    """Concrete ``(m, n)`` bounds for ``2 <= m <= max_m``, ``2 <= n <= max_n``."""
    if max_m < 2 or max_n < 2:
        raise ValueError("max_m and max_n must be >= 2")
    rows = []
    for m in range(2, max_m + 1):
        for n in range(2, max_n + 1):
            up, src = cited_upper(m, n)
            rows.append(BoundsRow(m, n, certified_lower(m, n), up, "certificate", src))
    return rows


def bounds_csv(rows: list[BoundsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "n", "lower", "upper", "lower_source", "upper_source"])
    for r in rows:
        w.writerow([r.m, r.n, r.lower, r.upper, r.lower_source, r.upper_source])
    return buf.getvalue()
