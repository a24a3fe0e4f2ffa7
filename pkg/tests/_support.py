"""Helpers shared by test modules."""

import random
from fractions import Fraction

from biquad_sos.algebra import BilinearForm, SosDecomposition

PYTHAGOREAN = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)), (Fraction(8, 17), Fraction(15, 17))]


def rotate(d: SosDecomposition, r: random.Random, extra: int = 0, rounds: int = 6) -> SosDecomposition:
    """Pad with zero squares, apply rational Givens rotations and a signed permutation.

    Each step preserves the sum of squares exactly.
    """
    m, n = d.target_dims
    sq = list(d.squares) + [BilinearForm(m, n, {})] * extra
    for _ in range(rounds):
        if len(sq) < 2:
            break
        a, b = r.sample(range(len(sq)), 2)
        c, s = r.choice(PYTHAGOREAN)
        la, lb = sq[a], sq[b]
        sq[a] = la.scale(c) + lb.scale(s)
        sq[b] = la.scale(-s) + lb.scale(c)
    r.shuffle(sq)
    sq = [x if r.random() < 0.5 else -x for x in sq]
    return SosDecomposition((m, n), sq)
