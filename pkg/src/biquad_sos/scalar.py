"""Exact radical-rational scalars.

A :class:`Scalar` is a finite sum ``sum_d q_d * sqrt(d)`` with rational ``q_d``
and square-free radicands ``d >= 1`` (``d = 1`` is the rational part).  The set
is closed under addition, negation and multiplication, which is all the
decompositions in this package ever need.  Division is only provided by
rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

ScalarLike = Union["Scalar", int, Fraction, str]


@lru_cache(maxsize=4096)
def square_free_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free.

    Trial division; radicands in this package stay tiny.
    """
    if n < 1:
        raise ValueError(f"square_free_split needs a positive integer, got {n}")
    s, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * n


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class Scalar:
    """Immutable element of the ring Q[sqrt(2), sqrt(3), sqrt(5), ...].

    Stored canonically as a sorted tuple of ``(radicand, coefficient)`` pairs
    with no zero coefficients, so equality is structural.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        acc: dict[int, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for d, q in items:
            d = int(d)
            if d < 1:
                raise ValueError(f"radicand must be >= 1, got {d}")
            s, sf = square_free_split(d)
            acc[sf] = acc.get(sf, Fraction(0)) + Fraction(q) * s
        self._items = tuple(sorted((d, q) for d, q in acc.items() if q != 0))
        self._hash = None

    @classmethod
    def _raw(cls, acc: dict[int, Fraction]) -> Scalar:
        # acc keys are already square-free
        obj = object.__new__(cls)
        obj._items = tuple(sorted((d, q) for d, q in acc.items() if q != 0))
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def coerce(cls, value: ScalarLike) -> Scalar:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, (int, Fraction)):
            return cls._raw({1: Fraction(value)})
        if isinstance(value, str):
            return parse_scalar(value)
        if isinstance(value, Rational):
            return cls._raw({1: Fraction(value.numerator, value.denominator)})
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def is_rational(self) -> bool:
        return not self._items or (len(self._items) == 1 and self._items[0][0] == 1)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._items[0][1] if self._items else Fraction(0)

    def __float__(self) -> float:
        return float(sum(float(q) * d ** 0.5 for d, q in self._items))

    def sign(self) -> int:
        """Exact sign (-1, 0 or 1)."""
        return _sign(self._items)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: ScalarLike) -> Scalar:
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._items)
        for d, q in other._items:
            acc[d] = acc.get(d, Fraction(0)) + q
        return Scalar._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw({d: -q for d, q in self._items})

    def __pos__(self) -> Scalar:
        return self

    def __sub__(self, other: ScalarLike) -> Scalar:
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> Scalar:
        return Scalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> Scalar:
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for d1, q1 in self._items:
            for d2, q2 in other._items:
                # both square-free: d1*d2 = g^2 * (d1/g)*(d2/g), the latter square-free
                g = _gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                acc[d] = acc.get(d, Fraction(0)) + q1 * q2 * g
        return Scalar._raw(acc)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[int, Fraction, Scalar]) -> Scalar:
        if isinstance(other, Scalar):
            other = other.as_fraction()
        other = Fraction(other)
        if other == 0:
            raise ZeroDivisionError("division of Scalar by zero")
        return Scalar._raw({d: q / other for d, q in self._items})

    def __pow__(self, k: int) -> Scalar:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self._items == other._items
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._items == Scalar.coerce(other)._items
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __lt__(self, other: ScalarLike) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: ScalarLike) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: ScalarLike) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: ScalarLike) -> bool:
        return (self - other).sign() >= 0

    def __bool__(self) -> bool:
        return bool(self._items)

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar('{format_scalar(self)}')"


ZERO = Scalar()
ONE = Scalar({1: 1})


def _split_on_prime(items: tuple, p: int) -> tuple[tuple, tuple]:
    a, b = {}, {}
    for d, q in items:
        if d % p == 0:
            b[d // p] = q
        else:
            a[d] = q
    return Scalar._raw(a)._items, Scalar._raw(b)._items


def _sign(items: tuple) -> int:
    if not items:
        return 0
    if len(items) == 1:
        d, q = items[0]
        return 1 if q > 0 else -1
    # two or more canonical terms: at least one radicand exceeds 1
    p = max(p for d, _ in items for p in _prime_factors(d))
    # x = A + B*sqrt(p) where A, B do not involve sqrt(p)
    a_items, b_items = _split_on_prime(items, p)
    sa, sb = _sign(a_items), _sign(b_items)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    a, b = Scalar._raw(dict(a_items)), Scalar._raw(dict(b_items))
    # A^2 - p B^2 is never zero here since sqrt(p) is not in the subfield
    return sa if (a * a - b * b * p).sign() > 0 else sb


def scalar_sqrt(q: Union[int, Fraction, Scalar, str]) -> Scalar:
    """Square root of a non-negative rational as an exact Scalar.

    >>> scalar_sqrt(Fraction(3, 4))
    Scalar('1/2*sqrt(3)')
    """
    if isinstance(q, (Scalar, str)):
        q = Scalar.coerce(q).as_fraction()
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return ZERO
    # sqrt(p/r) = sqrt(p*r)/r
    s, d = square_free_split(q.numerator * q.denominator)
    return Scalar._raw({d: Fraction(s, q.denominator)})


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<rat>\d+(?:/\d+)?)(?:\s*\*\s*sqrt\(\s*(?P<rad1>\d+)\s*\))?(?:\s*/\s*(?P<den1>\d+))?
        | sqrt\(\s*(?P<rad2>\d+)\s*\)(?:\s*/\s*(?P<den2>\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"1/2*sqrt(3)+1"``-style text (signed terms ``[rat][*sqrt(int)]``)."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar text")
    acc: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (not first and m.group("sign") is None):
            raise ValueError(f"malformed scalar: {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("rat") is not None:
            coeff = Fraction(m.group("rat"))
            rad = int(m.group("rad1")) if m.group("rad1") else 1
            den = m.group("den1")
        else:
            coeff = Fraction(1)
            rad = int(m.group("rad2"))
            den = m.group("den2")
        if den is not None:
            coeff /= int(den)
        if rad < 1:
            raise ValueError(f"radicand must be positive in {text!r}")
        k, d = square_free_split(rad)
        acc[d] = acc.get(d, Fraction(0)) + sign * coeff * k
        pos = m.end()
        first = False
    return Scalar._raw(acc)


def format_scalar(x: Scalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for d, q in x._items:
        if d == 1:
            body = str(abs(q))
        elif abs(q) == 1:
            body = f"sqrt({d})"
        else:
            body = f"{abs(q)}*sqrt({d})"
        if not parts:
            parts.append(("-" if q < 0 else "") + body)
        else:
            parts.append(("-" if q < 0 else "+") + body)
    return "".join(parts)
