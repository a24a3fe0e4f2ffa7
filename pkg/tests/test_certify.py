import itertools
import random
from fractions import Fraction

import pytest

from biquad_sos.algebra import BiquadForm, SupportPattern, support, verify_decomposition
from biquad_sos.certify import (
    bsr_bounds_table,
    certified_lower,
    check_rectangle_compat,
    check_rectangle_lemma,
    extremal_simple_form,
    lower_bound,
    scan_all_3x3_supports,
    summary_rows,
)
from biquad_sos.decompose import decompose_full9, decompose_singles
from biquad_sos.families import extend_form, gen_cyclic, gen_full, gen_P, gen_P_plus, gen_Q

from _support import rotate

# every 2x2 sub-rectangle of the 3x3 grid as a 9-bit mask, bit 3*(i-1)+(j-1)
RECT_MASKS_3X3 = [
    (1 << 3 * i + k) | (1 << 3 * i + l) | (1 << 3 * j + k) | (1 << 3 * j + l)
    for i, j in itertools.combinations(range(3), 2)
    for k, l in itertools.combinations(range(3), 2)
]


def _has_full_rectangle(cells) -> bool:
    """Independent brute force over row pairs and column pairs."""
    cells = set(cells)
    rows = {i for i, _ in cells}
    cols = {j for _, j in cells}
    return any(
        {(i, k), (i, l), (j, k), (j, l)} <= cells
        for i, j in itertools.combinations(rows, 2)
        for k, l in itertools.combinations(cols, 2)
    )


def test_compat_matches_bitmask_oracle_on_all_3x3():
    assert len(RECT_MASKS_3X3) == 9
    for mask in range(512):
        ok, _ = check_rectangle_compat(SupportPattern.from_bitmask(3, 3, mask))
        assert ok == (not any(mask & r == r for r in RECT_MASKS_3X3))


@pytest.mark.parametrize("m", range(3, 13))
def test_cyclic_compatible(m):
    ok, w = check_rectangle_compat(support(gen_cyclic(m)))
    assert ok and w == []


def test_full_grid_incompatible_with_witness():
    ok, w = check_rectangle_compat(support(gen_full(3, 3)))
    assert not ok
    assert ((1, 1), (2, 2)) in w
    for (i, j), (p, q) in w:
        cells = support(gen_full(3, 3)).cells
        assert i != p and j != q and (i, q) in cells and (p, j) in cells


def test_q34_compatible():
    cells = support(gen_Q(3, 4)).cells
    assert not _has_full_rectangle(cells)
    assert check_rectangle_compat(support(gen_Q(3, 4)))[0]


def test_lower_bound_examples():
    assert lower_bound(gen_P(3, 3, 6)).lower_bound == 6
    assert lower_bound(gen_cyclic(5)).lower_bound == 10
    assert lower_bound(gen_Q(3, 4)).lower_bound == 7


def test_lower_bound_incompatible():
    cert = lower_bound(gen_full(3, 3))
    assert not cert.compatible and cert.lower_bound == 1 and cert.witness_pairs


def test_lower_bound_zero_form():
    cert = lower_bound(BiquadForm.zero(3, 3))
    assert cert.compatible and cert.lower_bound == 0


def test_lower_bound_weighted_diagonal():
    f = BiquadForm.diagonal(3, 3, {(1, 1): 2, (2, 2): Fraction(1, 3), (1, 2): "sqrt(2)"})
    assert lower_bound(f).lower_bound == 3


def test_lower_bound_errors():
    with pytest.raises(ValueError):
        lower_bound(gen_P_plus())
    with pytest.raises(ValueError):
        lower_bound(BiquadForm.diagonal(2, 2, {(1, 1): -1}))


def test_certificate_json():
    d = lower_bound(gen_P(3, 3, 6)).to_dict()
    assert d == {
        "support": [[1, 1], [1, 2], [2, 2], [2, 3], [3, 1], [3, 3]],
        "compatible": True,
        "lower_bound": 6,
        "witnesses": [],
    }


def test_rectangle_lemma():
    report = check_rectangle_lemma()
    assert report.ok
    assert report.sizes == {7: 36, 8: 9}
    assert report.max_squares == {7: 5, 8: 6}
    for cells, (i, j, k, l) in report.rectangles.items():
        assert {(i, k), (i, l), (j, k), (j, l)} <= cells


def test_p336_contains_no_rectangle():
    assert not _has_full_rectangle(support(gen_P(3, 3, 6)).cells)


def test_scan():
    rep = scan_all_3x3_supports()
    assert len(rep.rows) == 512
    assert rep.max_upper == 6
    by_mask = {r.bitmask: r for r in rep.rows}
    p336 = by_mask[support(gen_P(3, 3, 6)).bitmask()]
    assert (p336.lower, p336.upper) == (6, 6)
    full = by_mask[511]
    assert (full.lower, full.upper) == (1, 4)
    assert rep.summary() == "max_upper=6 attained_at=P336"
    for r in rep.rows:
        assert r.lower <= r.upper


def test_scan_tight_supports_are_compatible_six_cell():
    rep = scan_all_3x3_supports()
    six_compatible = [r.bitmask for r in rep.rows if r.t == 6 and r.compatible]
    assert sorted(rep.tight_at_max) == sorted(six_compatible)
    # the compatible 6-cell supports are exactly the complements of permutation matrices
    perms = {511 ^ sum(1 << 3 * i + p[i] for i in range(3)) for p in itertools.permutations(range(3))}
    assert set(rep.tight_at_max) == perms


def test_summary_rows():
    rows = summary_rows()
    assert rows[0] == ("(2,2)", "3 (exact)", "3")
    assert rows[3] == ("(3,3)", "6", "8 (conjectured 6)")


def test_bounds_table_examples():
    rows = {(r.m, r.n): r for r in bsr_bounds_table(6, 6)}
    assert (rows[3, 3].lower, rows[3, 3].upper) == (6, 8)
    assert (rows[2, 2].lower, rows[2, 2].upper) == (3, 3)
    assert (rows[4, 5].lower, rows[4, 5].upper) == (9, 19)
    assert (rows[5, 2].lower, rows[5, 2].upper) == (6, 9)
    assert rows[5, 4].lower == rows[4, 5].lower


def test_extremal_forms_are_rectangle_free():
    for m in range(2, 8):
        for n in range(2, 8):
            f = extremal_simple_form(m, n)
            assert f.dims == (m, n)
            assert not _has_full_rectangle(support(f).cells)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(3, 9) for n in range(m, 9)])
def test_q_rank_exact(m, n):
    f = gen_Q(m, n)
    assert lower_bound(f).lower_bound == len(decompose_singles(f)) == m + n


def test_monotonicity_shadow():
    forms = [gen_P(3, 3, 6), gen_cyclic(4), gen_Q(3, 5), gen_Q(4, 6).transpose()]
    for f in forms:
        for i in range(1, f.m + 1):
            assert lower_bound(extend_form(f, i)).lower_bound == lower_bound(f).lower_bound + 1


# -- soundness cross-check ---------------------------------------------------

def test_certificate_never_exceeds_verified_decompositions():
    r = random.Random(99)
    checked = 0
    while checked < 60:
        m, n = r.randint(2, 4), r.randint(2, 4)
        cells = [c for c in itertools.product(range(1, m + 1), range(1, n + 1)) if r.random() < 0.5]
        if not cells:
            continue
        f = BiquadForm.from_cells(m, n, cells)
        cert = lower_bound(f)
        if not cert.compatible:
            continue
        d = rotate(decompose_singles(f), r, extra=r.randint(0, 2))
        assert verify_decomposition(f, d)
        assert sum(1 for sq in d if not sq.is_zero()) >= cert.lower_bound
        checked += 1


def test_anti_soundness_probe():
    assert not lower_bound(gen_full(3, 3)).compatible
    assert verify_decomposition(gen_full(3, 3), decompose_full9())
    assert len(decompose_full9()) == 4 < 9


def test_certified_lower_requires_certificate():
    assert certified_lower(3, 3) == 6
    assert certified_lower(2, 2) == 3
