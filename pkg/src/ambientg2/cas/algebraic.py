"""Exact constants in K = Q(2^(1/6), sqrt 3).

Elements are stored sparsely over the basis ``2^(i/6) * 3^(j/2)``
(``0 <= i <= 5``, ``j in {0, 1}``); :meth:`AlgebraicConstant.coords` gives
the 12 rational coordinates, ordered with ``i`` running fastest.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from . import poly as P
from .poly import ONE_Q, Q


class AlgebraicConstant:
    __slots__ = ("elem",)

    def __init__(self, elem: dict | None = None):
        elem = elem or {}
        if any(m >> P.ALG_BITS for m in elem):
            raise ValueError("not a constant")
        self.elem = {m: Q(c) for m, c in elem.items() if c}

    @classmethod
    def rational(cls, c) -> "AlgebraicConstant":
        return cls({0: Q(c)})

    @classmethod
    def from_coords(cls, coords) -> "AlgebraicConstant":
        if len(coords) != 12:
            raise ValueError("expected 12 rational coordinates")
        return cls(P.k_from_coords([Q(Fraction(c)) for c in coords]))

    @classmethod
    def radical(cls, i: int = 0, j: int = 0, c=1) -> "AlgebraicConstant":
        """``c * 2^(i/6) * 3^(j/2)`` for integer ``i`` and ``j`` (negative allowed)."""
        c = Q(c)
        ii, jj = i % 6, j % 2
        c = c * Q(2) ** ((i - ii) // 6) * Q(3) ** ((j - jj) // 2)
        return cls({ii | (jj << P.FIELD): c})

    def coords(self) -> list[Fraction]:
        return [Fraction(int(c.numerator), int(c.denominator)) for c in P.k_coords(self.elem)]

    def is_zero(self) -> bool:
        return not self.elem

    def is_rational(self) -> bool:
        return set(self.elem) <= {0}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("irrational constant")
        c = self.elem.get(0, Q(0))
        return Fraction(int(c.numerator), int(c.denominator))

    def __add__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else AlgebraicConstant(P.add(self.elem, o.elem))

    __radd__ = __add__

    def __sub__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else AlgebraicConstant(P.sub(self.elem, o.elem))

    def __rsub__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else o - self

    def __neg__(self) -> "AlgebraicConstant":
        return AlgebraicConstant(P.neg(self.elem))

    def __mul__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else AlgebraicConstant(P.mul(self.elem, o.elem))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicConstant":
        if not self.elem:
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicConstant(P.k_inverse(self.elem))

    def __truediv__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other) -> "AlgebraicConstant":
        o = _maybe(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int) -> "AlgebraicConstant":
        if n < 0:
            return self.inverse() ** (-n)
        return AlgebraicConstant(P.power(self.elem, n))

    def __eq__(self, other) -> bool:
        try:
            return self.elem == _coerce(other).elem
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.elem.items()))

    def interval(self, dps: int = 30):
        """Certified enclosure (an ``mpmath.iv.mpf``) computed at ``dps`` digits."""
        ctx = mpmath.iv
        saved = ctx.dps
        ctx.dps = dps + 5
        try:
            r = ctx.exp(ctx.log(ctx.mpf(2)) / 6)
            s = ctx.sqrt(ctx.mpf(3))
            acc = ctx.mpf(0)
            for m, c in self.elem.items():
                i, j = m & P.FMASK, (m >> P.FIELD) & P.FMASK
                acc += ctx.mpf(int(c.numerator)) / int(c.denominator) * r**i * s**j
            return acc
        finally:
            ctx.dps = saved

    def __float__(self) -> float:
        return float(mpmath.mpf(self.interval(20).mid))

    def sign(self) -> int:
        if not self.elem:
            return 0
        dps = 30
        while True:
            iv = self.interval(dps)
            if iv.a > 0:
                return 1
            if iv.b < 0:
                return -1
            dps *= 2

    def __repr__(self) -> str:
        from .serialize import constant_text

        return f"AlgebraicConstant({constant_text(self.elem)})"

    def __str__(self) -> str:
        from .serialize import constant_text

        return constant_text(self.elem)


def _coerce(x) -> AlgebraicConstant:
    if isinstance(x, AlgebraicConstant):
        return x
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq":
        return AlgebraicConstant.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to AlgebraicConstant")


def _maybe(x) -> AlgebraicConstant | None:
    """Coerce, or ``None`` so that binary operators can defer to the other operand."""
    try:
        return _coerce(x)
    except TypeError:
        return None


ROOT2_6 = AlgebraicConstant.radical(1, 0)
SQRT3 = AlgebraicConstant.radical(0, 1)
ONE = AlgebraicConstant({0: ONE_Q})


def cbrt2(k: int = 1) -> AlgebraicConstant:
    """``2^(k/3)``."""
    return AlgebraicConstant.radical(2 * k, 0)


def sqrt2(k: int = 1) -> AlgebraicConstant:
    """``2^(k/2)``."""
    return AlgebraicConstant.radical(3 * k, 0)


def sqrt6() -> AlgebraicConstant:
    return AlgebraicConstant.radical(3, 1)
