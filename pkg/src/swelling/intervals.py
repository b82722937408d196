"""Compact subsets of the real line as finite unions of closed intervals over Q(sqrt2).

Everything is exact.  Set differences of closed sets are not closed, so
:func:`difference` returns :class:`Piece` objects that remember whether each
end is included; witnesses and measures are taken from those pieces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotApplicableError, PreconditionError, UsageError
from .finsets import SwellingVerdict
from .numeric import QuadScalar, parse_scalar

__all__ = [
    "IntervalSet",
    "Piece",
    "QuotientCoverage",
    "normalize",
    "interval_set",
    "union",
    "intersection",
    "difference",
    "translate_set",
    "is_subset",
    "measure",
    "pieces_measure",
    "contains",
    "interval_example",
    "check_muranov_real",
    "quotient_project",
    "necessary_condition_filter",
    "parse_interval_set",
]

Q = QuadScalar.coerce


@dataclass(frozen=True)
class IntervalSet:
    """Canonical union of closed intervals: sorted, pairwise separated (``hi_i < lo_{i+1}``)."""

    intervals: tuple = ()

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __contains__(self, x):
        return contains(self, x)

    @property
    def lo(self) -> QuadScalar:
        return self.intervals[0][0]

    @property
    def hi(self) -> QuadScalar:
        return self.intervals[-1][1]

    def __str__(self):
        if not self.intervals:
            return "empty"
        return "u".join(f"[{lo},{hi}]" for lo, hi in self.intervals)

    def to_json(self) -> list:
        return [[str(lo), str(hi)] for lo, hi in self.intervals]


def normalize(raw: Iterable[Sequence]) -> IntervalSet:
    """Sort and merge overlapping or touching closed intervals."""
    items = []
    for pair in raw:
        lo, hi = Q(pair[0]), Q(pair[1])
        if lo > hi:
            raise UsageError(f"interval with lo > hi: [{lo}, {hi}]")
        items.append((lo, hi))
    items.sort(key=lambda p: p[0])
    out: list = []
    for lo, hi in items:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return IntervalSet(tuple(out))


def interval_set(*pairs) -> IntervalSet:
    """``interval_set((0, 1), (2, "3+sqrt2"))``"""
    return normalize(pairs)


def union(A: IntervalSet, B: IntervalSet) -> IntervalSet:
    return normalize(A.intervals + B.intervals)


def intersection(A: IntervalSet, B: IntervalSet) -> IntervalSet:
    out = []
    i = j = 0
    X, Y = A.intervals, B.intervals
    while i < len(X) and j < len(Y):
        lo = max(X[i][0], Y[j][0])
        hi = min(X[i][1], Y[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if X[i][1] < Y[j][1]:
            i += 1
        else:
            j += 1
    # pieces come out sorted and separated: each lies inside one interval of A
    return IntervalSet(tuple(out))


def translate_set(s, A: IntervalSet) -> IntervalSet:
    s = Q(s)
    return IntervalSet(tuple((lo + s, hi + s) for lo, hi in A.intervals))


def contains(A: IntervalSet, x) -> bool:
    x = Q(x)
    for lo, hi in A.intervals:
        if x < lo:
            return False
        if x <= hi:
            return True
    return False


def measure(A: IntervalSet) -> QuadScalar:
    total = QuadScalar(0)
    for lo, hi in A.intervals:
        total = total + (hi - lo)
    return total


@dataclass(frozen=True)
class Piece:
    """Interval with optional open ends, as produced by set difference."""

    lo: QuadScalar
    hi: QuadScalar
    lo_closed: bool
    hi_closed: bool

    def witness(self) -> QuadScalar:
        """An included endpoint if there is one, else the midpoint."""
        if self.lo_closed:
            return self.lo
        if self.hi_closed:
            return self.hi
        return (self.lo + self.hi) / 2


def difference(A: IntervalSet, B: IntervalSet) -> list[Piece]:
    """``A \\ B`` as sorted pieces."""
    out = []
    Y = B.intervals
    j = 0
    for lo, hi in A.intervals:
        while j < len(Y) and Y[j][1] < lo:
            j += 1
        cur, cur_closed = lo, True
        k = j
        done = False
        while k < len(Y) and Y[k][0] <= hi:
            c, d = Y[k]
            if cur < c:
                out.append(Piece(cur, c, cur_closed, False))
            if d >= hi:
                done = True
                break
            if d >= cur:
                cur, cur_closed = d, False
            k += 1
        if done:
            continue
        if cur < hi:
            out.append(Piece(cur, hi, cur_closed, True))
        elif cur == hi and cur_closed:
            out.append(Piece(cur, hi, True, True))
    return out


def pieces_measure(pieces: Iterable[Piece]) -> QuadScalar:
    total = QuadScalar(0)
    for p in pieces:
        total = total + (p.hi - p.lo)
    return total


def is_subset(A: IntervalSet, B: IntervalSet):
    """``(True, None)`` or ``(False, witness)`` with the witness in ``A \\ B``."""
    rest = difference(A, B)
    if not rest:
        return True, None
    return False, rest[0].witness()


def interval_example(u, v, w, t) -> dict:
    """For ``u < v < w < t``: ``A=[u,w]``, ``B=[v,t]``, ``a=t-w``, ``b=u-v``.

    Then ``(a+A)∩(b+B) = [u+t-w, u+t-v]``, which is ``c+[v,w]`` exactly for
    ``c = u+t-v-w``; that is the ``c`` returned.  The sign-flipped value
    ``v+w-u-t`` is kept as ``stated_c`` with its own verdict: the two agree
    only when ``u+t = v+w``.
    """
    u, v, w, t = Q(u), Q(v), Q(w), Q(t)
    if not (u < v < w < t):
        raise PreconditionError("interval example needs u < v < w < t")
    A, B = interval_set((u, w)), interval_set((v, t))
    a, b, c = t - w, u - v, u + t - v - w
    stated_c = -c
    return {
        "A": A,
        "B": B,
        "a": a,
        "b": b,
        "c": c,
        "verdict": check_muranov_real(A, B, a, b, c),
        "stated_c": stated_c,
        "stated_verdict": check_muranov_real(A, B, a, b, stated_c),
    }


def check_muranov_real(A: IntervalSet, B: IntervalSet, a, b, c) -> SwellingVerdict:
    """Exact verdict on ``(a+A)∪(b+B) ⊂ A∪B`` and ``(a+A)∩(b+B) ⊂ c+(A∩B)``.

    A verdict with both inclusions and a failed equality would be a
    counterexample among finite interval unions.
    """
    aA, bB = translate_set(a, A), translate_set(b, B)
    lhs_u, rhs_u = union(aA, bB), union(A, B)
    lhs_i, rhs_i = intersection(aA, bB), translate_set(c, intersection(A, B))
    u_incl, u_bad = is_subset(lhs_u, rhs_u)
    i_incl, i_bad = is_subset(lhs_i, rhs_i)
    u_eq, i_eq = lhs_u == rhs_u, lhs_i == rhs_i
    u_strict = is_subset(rhs_u, lhs_u)[1] if u_incl and not u_eq else None
    i_strict = is_subset(rhs_i, lhs_i)[1] if i_incl and not i_eq else None
    return SwellingVerdict(u_incl, i_incl, u_eq, i_eq, u_strict, i_strict, u_bad, i_bad)


@dataclass(frozen=True)
class QuotientCoverage:
    """Image of a set in ``R / modulus·Z``, drawn on the fundamental domain ``[0, modulus]``."""

    modulus: QuadScalar
    covered: IntervalSet
    deficit: QuadScalar

    @property
    def full(self) -> bool:
        return self.deficit == 0

    def to_json(self) -> dict:
        return {"modulus": str(self.modulus), "covered": self.covered.to_json(), "deficit": str(self.deficit)}


def reduce_mod(x: QuadScalar, m: QuadScalar) -> QuadScalar:
    """``x - floor(x/m)·m`` in ``[0, m)`` for ``m > 0``."""
    return x - (x / m).floor() * m


def quotient_project(A: IntervalSet, b) -> QuotientCoverage:
    b = Q(b)
    if b == 0:
        raise UsageError("quotient by the zero subgroup")
    m = abs(b)
    pieces = []
    for lo, hi in A.intervals:
        if hi - lo >= m:
            pieces = [(QuadScalar(0), m)]
            break
        r = reduce_mod(lo, m)
        e = r + (hi - lo)
        if e <= m:
            pieces.append((r, e))
        else:
            # wraps past the identified endpoint
            pieces.append((r, m))
            pieces.append((QuadScalar(0), e - m))
    covered = normalize(pieces)
    return QuotientCoverage(m, covered, m - measure(covered))


def necessary_condition_filter(A: IntervalSet, B: IntervalSet, a, b) -> dict:
    """Both ``A + bZ`` and ``B + aZ`` must be all of R once ``(a+A)∪(b+B) ⊂ A∪B``.

    Applies when ``a, b != 0`` and ``a/b`` is irrational; otherwise raises
    :class:`NotApplicableError`.
    """
    a, b = Q(a), Q(b)
    if a == 0 or b == 0:
        raise NotApplicableError("translations must be non-zero")
    if (a / b).is_rational():
        raise NotApplicableError(f"a/b = {a / b} is rational")
    dA = quotient_project(A, b).deficit
    dB = quotient_project(B, a).deficit
    return {"passes": dA == 0 and dB == 0, "deficit_A_mod_b": dA, "deficit_B_mod_a": dB}


_INTERVAL_RE = re.compile(r"\[([^\[\],]+),([^\[\],]+)\]")


def parse_interval_set(text: str) -> IntervalSet:
    """Parse ``"[0,1]u[3/2,2+1*sqrt2]"``; ``"empty"`` or ``""`` is the empty set."""
    s = text.replace(" ", "")
    if s in ("", "empty", "{}"):
        return IntervalSet()
    parts = s.split("u")
    pairs = []
    for part in parts:
        m = _INTERVAL_RE.fullmatch(part)
        if not m:
            raise UsageError(f"cannot parse interval {part!r} in {text!r}")
        pairs.append((parse_scalar(m.group(1)), parse_scalar(m.group(2))))
    return normalize(pairs)
