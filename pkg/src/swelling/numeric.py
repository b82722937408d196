"""Exact scalars: rationals (``fractions.Fraction``) and the ordered field Q(sqrt2).

A :class:`QuadScalar` is ``rat + irr*sqrt2`` with rational parts.  Order and
floor are decided exactly; floats never enter a comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import UsageError

__all__ = ["QuadScalar", "qs", "parse_scalar", "parse_rational", "format_rational", "SQRT2"]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise UsageError(f"not an exact rational: {value!r}")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadScalar:
    """Immutable element ``rat + irr*sqrt2`` of Q(sqrt2)."""

    __slots__ = ("rat", "irr", "_hash")

    def __init__(self, rat=0, irr=0):
        object.__setattr__(self, "rat", _as_fraction(rat))
        object.__setattr__(self, "irr", _as_fraction(irr))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    def __reduce__(self):
        return (QuadScalar, (self.rat, self.irr))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @classmethod
    def coerce(cls, value) -> "QuadScalar":
        if isinstance(value, QuadScalar):
            return value
        if isinstance(value, str):
            return parse_scalar(value)
        return cls(value, 0)

    # -- field operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.rat + other.rat, self.irr + other.irr)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.rat - other.rat, self.irr - other.irr)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return QuadScalar(-self.rat, -self.irr)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        p, q, r, s = self.rat, self.irr, other.rat, other.irr
        return QuadScalar(p * r + 2 * q * s, p * s + q * r)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``rat**2 - 2*irr**2`` (product with the conjugate)."""
        return self.rat * self.rat - 2 * self.irr * self.irr

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.rat, -self.irr)

    def inverse(self) -> "QuadScalar":
        n = self.norm()
        if n == 0:
            # norm vanishes only at zero since sqrt2 is irrational
            raise ZeroDivisionError("QuadScalar division by zero")
        return QuadScalar(self.rat / n, -self.irr / n)

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``rat + irr*sqrt2``."""
        sp, sq = _sign(self.rat), _sign(self.irr)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare rat**2 with 2*irr**2 over a common denominator
        a, b = self.rat.numerator, self.rat.denominator
        c, d = self.irr.numerator, self.irr.denominator
        return sp * _sign(a * a * d * d - 2 * c * c * b * b)

    def cmp(self, other) -> int:
        return (self - QuadScalar.coerce(other)).sign()

    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.rat == other.rat and self.irr == other.irr

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.rat) if self.irr == 0 else hash((self.rat, self.irr))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.rat) or bool(self.irr)

    # -- floor ----------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.irr == 0

    def floor(self) -> int:
        """Greatest integer ``n <= self``.

        Brackets sqrt2 between consecutive convergents ``P/Q`` taken from
        powers of ``1 + sqrt2`` (squaring doubles the index) until the
        induced enclosure of ``self`` contains no integer.
        """
        if self.irr == 0:
            return self.rat.numerator // self.rat.denominator
        # self = (N + M*sqrt2) / D with integers, D > 0
        a, b = self.rat.numerator, self.rat.denominator
        c, d = self.irr.numerator, self.irr.denominator
        N, M, D = a * d, c * b, b * d
        # (P + Q sqrt2) = (1 + sqrt2)**k; P/Q alternates around sqrt2
        P, Q = 1, 1
        while True:
            brackets = ((P, Q), (P + 2 * Q, P + Q))
            # enclosure endpoints (N*Q' + M*P') / (D*Q'); strict since sqrt2 is irrational
            ends = sorted(brackets, key=lambda pq: Fraction(N * pq[1] + M * pq[0], pq[1]))
            (P1, Q1), (P2, Q2) = ends
            n = (N * Q1 + M * P1) // (D * Q1)
            hi_num, hi_den = N * Q2 + M * P2, D * Q2
            if hi_num // hi_den == n or hi_num == (n + 1) * hi_den:
                return n
            P, Q = P * P + 2 * Q * Q, 2 * P * Q

    def __floor__(self):
        return self.floor()

    def __float__(self):
        # diagnostics only
        return float(self.rat) + float(self.irr) * 2 ** 0.5

    # -- text -----------------------------------------------------------------

    def __str__(self):
        if self.irr == 0:
            return format_rational(self.rat)
        op = "+" if self.irr > 0 else "-"
        return f"{format_rational(self.rat)}{op}{format_rational(abs(self.irr))}*sqrt2"

    def __repr__(self):
        return f"QuadScalar({str(self)!r})"


def _coerce_or_none(value):
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return QuadScalar(value, 0)
    return None


SQRT2 = QuadScalar(0, 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise UsageError(f"cannot parse rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise UsageError(f"zero denominator in {text!r}")
    return Fraction(num, den)


_TERM_RE = re.compile(r"[+-]?[^+-]+")


def parse_scalar(text: str) -> QuadScalar:
    """Parse ``"p/q+r/s*sqrt2"`` and its shorthands (``"3/2"``, ``"sqrt2"``, ``"-2*sqrt2"``)."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty scalar")
    terms = _TERM_RE.findall(s)
    if "".join(terms) != s:
        raise UsageError(f"cannot parse scalar {text!r}")
    rat, irr = Fraction(0), Fraction(0)
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if body.endswith("sqrt2"):
            coeff = body[: -len("sqrt2")]
            if coeff.endswith("*"):
                coeff = coeff[:-1]
                if not coeff:
                    raise UsageError(f"cannot parse scalar {text!r}")
            irr += sign * (parse_rational(coeff) if coeff else Fraction(1))
        else:
            rat += sign * parse_rational(body)
    return QuadScalar(rat, irr)


def qs(value=0, irr=0) -> QuadScalar:
    """Shorthand constructor: ``qs(1, 1)`` is ``1+sqrt2``; ``qs("3/2")`` parses."""
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, str):
        return parse_scalar(value) + QuadScalar(0, irr)
    return QuadScalar(value, irr)
