"""Orbit refuter for the union inclusion on the real line.

Starting from ``x0 ∈ A`` the walk takes an ``a``-step from points of ``A`` and a
``b``-step otherwise.  While ``(a+A)∪(b+B) ⊂ A∪B`` holds the walk never leaves
``A∪B``; an escape is therefore a checkable certificate that the inclusion
fails.  Reduced mod ``|b|`` the walk only moves on ``a``-steps, by ``a mod |b|``,
so its projection is a rotation orbit whose gaps are exposed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import PreconditionError, UsageError
from .intervals import (
    IntervalSet,
    check_muranov_real,
    contains,
    reduce_mod,
    translate_set,
    union,
)
from .numeric import QuadScalar

__all__ = [
    "OrbitStep",
    "OrbitTrace",
    "EscapeCertificate",
    "GapStatistics",
    "run_orbit",
    "escape_certifies_failure",
    "projected_gap_stats",
    "DEFAULT_MAX_STEPS",
]

DEFAULT_MAX_STEPS = 10**4

Q = QuadScalar.coerce


@dataclass(frozen=True)
class OrbitStep:
    n: int
    x: QuadScalar
    s: str | None  # "a", "b", or None for the starting point
    in_A: bool
    in_B: bool

    def to_json(self) -> dict:
        return {"n": self.n, "x": str(self.x), "s": self.s, "inA": self.in_A, "inB": self.in_B}


@dataclass(frozen=True)
class OrbitTrace:
    """A finished walk.  Points are kept as integer coordinates ``(P, Q)`` over a
    common denominator ``d`` (``x = (P + Q*sqrt2)/d``); :attr:`steps` builds the
    exact :class:`OrbitStep` records on first access."""

    A: IntervalSet
    B: IntervalSet
    a: QuadScalar
    b: QuadScalar
    x0: QuadScalar
    max_steps: int
    escape_index: int | None
    denominator: int = field(repr=False)
    coords: tuple = field(repr=False, compare=False)  # ((P, Q), ...)
    flags: tuple = field(repr=False, compare=False)  # ((in_A, in_B), ...)

    @property
    def escaped(self) -> bool:
        return self.escape_index is not None

    def __len__(self):
        return len(self.coords)

    def point(self, n: int) -> QuadScalar:
        P, Q = self.coords[n]
        d = self.denominator
        return QuadScalar(Fraction(P, d), Fraction(Q, d))

    def step(self, n: int) -> OrbitStep:
        s = None if n == 0 else ("a" if self.flags[n - 1][0] else "b")
        in_A, in_B = self.flags[n]
        return OrbitStep(n, self.point(n), s, in_A, in_B)

    @cached_property
    def steps(self) -> tuple:
        return tuple(self.step(n) for n in range(len(self.coords)))

    def step_counts(self) -> dict:
        moves = len(self.coords) - 1
        a_steps = sum(1 for in_A, _ in self.flags[:moves] if in_A)
        return {"a": a_steps, "b": moves - a_steps}


def _scaled(values) -> tuple[int, list]:
    """Common denominator ``d`` and integer pairs ``(rat*d, irr*d)``."""
    d = math.lcm(1, *(v.rat.denominator for v in values), *(v.irr.denominator for v in values))
    return d, [(int(v.rat * d), int(v.irr * d)) for v in values]


def _pq_sign(p: int, q: int) -> int:
    """Exact sign of ``p + q*sqrt2`` for integers."""
    if q == 0 or p == 0 or (p > 0) == (q > 0):
        return (p > 0) - (p < 0) if p else (q > 0) - (q < 0)
    return (1 if p > 0 else -1) * (1 if p * p > 2 * q * q else -1)


_R2 = math.sqrt(2)


class _FastSet:
    """Membership in a canonical interval set for scaled integer points.

    A float comparison decides unless the point is within a relative 1e-9 of
    an endpoint; then the exact integer sign test takes over.
    """

    def __init__(self, pairs):
        def tol(e):
            return 1e-9 * (abs(e[0]) + 2 * abs(e[1]) + 1)

        self.ivs = [(lo, hi, lo[0] + lo[1] * _R2, hi[0] + hi[1] * _R2, tol(lo), tol(hi)) for lo, hi in pairs]

    def __call__(self, P: int, Q: int) -> bool:
        xf = P + Q * _R2
        tx = 1e-9 * (abs(P) + 2 * abs(Q))
        for lo, hi, lof, hif, tlo, thi in self.ivs:
            t = tx + tlo
            if xf < lof - t:
                return False
            if xf <= lof + t and _pq_sign(P - lo[0], Q - lo[1]) < 0:
                return False
            t = tx + thi
            if xf < hif - t:
                return True
            if xf <= hif + t:
                return _pq_sign(P - hi[0], Q - hi[1]) <= 0
        return False


def run_orbit(A: IntervalSet, B: IntervalSet, a, b, x0=None, max_steps: int = DEFAULT_MAX_STEPS) -> OrbitTrace:
    """Walk ``x_n = a + x_{n-1}`` if ``x_{n-1} ∈ A`` else ``b + x_{n-1}``.

    ``x0`` defaults to the least point of ``A``.  Stops after ``max_steps``
    steps or at the first ``x_n ∉ A∪B``.
    """
    a, b = Q(a), Q(b)
    if a == 0 or b == 0:
        raise UsageError("orbit needs non-zero a and b")
    if not A:
        raise PreconditionError("orbit needs a non-empty A")
    x = A.lo if x0 is None else Q(x0)
    if not contains(A, x):
        raise PreconditionError(f"x0 = {x} is not in A")
    ends = [e for iv in A.intervals + B.intervals for e in iv]
    d, scaled = _scaled([a, b, x] + ends)
    (ap, aq), (bp, bq), (P, Qc) = scaled[:3]
    it = iter(scaled[3:])
    inA = _FastSet(list(zip(it, it))[: len(A.intervals)])
    it = iter(scaled[3 + 2 * len(A.intervals):])
    inB = _FastSet(list(zip(it, it)))
    coords = [(P, Qc)]
    flags = [(True, inB(P, Qc))]
    escape = None
    for n in range(1, max_steps + 1):
        if flags[-1][0]:
            P, Qc = P + ap, Qc + aq
        else:
            P, Qc = P + bp, Qc + bq
        fa, fb = inA(P, Qc), inB(P, Qc)
        coords.append((P, Qc))
        flags.append((fa, fb))
        if not (fa or fb):
            escape = n
            break
    return OrbitTrace(A, B, a, b, x, max_steps, escape, d, tuple(coords), tuple(flags))


@dataclass(frozen=True)
class EscapeCertificate:
    """``y = x_n`` lies in ``(a+A)∪(b+B)`` but not in ``A∪B``."""

    y: QuadScalar
    n: int
    predecessor: QuadScalar
    step: str
    in_translate: bool
    outside_union: bool
    inclusion_fails: bool  # independent verdict from interval algebra

    @property
    def validated(self) -> bool:
        return self.in_translate and self.outside_union and self.inclusion_fails

    def to_json(self) -> dict:
        return {
            "y": str(self.y),
            "n": self.n,
            "predecessor": str(self.predecessor),
            "step": self.step,
            "validated": self.validated,
        }


def escape_certifies_failure(trace: OrbitTrace) -> EscapeCertificate | None:
    if trace.escape_index is None:
        return None
    last = trace.step(trace.escape_index)
    prev = trace.step(trace.escape_index - 1)
    # recheck with set algebra rather than trusting the recorded flags
    shifted = translate_set(trace.a, trace.A) if last.s == "a" else translate_set(trace.b, trace.B)
    source = trace.A if last.s == "a" else trace.B
    in_translate = contains(shifted, last.x) and contains(source, prev.x)
    outside = not contains(union(trace.A, trace.B), last.x)
    verdict = check_muranov_real(trace.A, trace.B, trace.a, trace.b, 0)
    return EscapeCertificate(last.x, last.n, prev.x, last.s, in_translate, outside, not verdict.union_inclusion_holds)


@dataclass(frozen=True)
class GapStatistics:
    """Circular gaps between the distinct projected orbit points."""

    modulus: QuadScalar
    distinct_points: int
    max_gap: QuadScalar
    min_gap: QuadScalar
    gap_lengths: tuple  # distinct gap lengths, ascending
    points: tuple

    def to_json(self) -> dict:
        return {
            "modulus": str(self.modulus),
            "distinct_points": self.distinct_points,
            "max_gap": str(self.max_gap),
            "min_gap": str(self.min_gap),
            "gap_lengths": [str(g) for g in self.gap_lengths],
            "max_gap_approx": float(self.max_gap),
        }


def exact_sort(values) -> list:
    """Sort scalars by float key, then confirm every adjacent pair exactly."""
    pts = sorted(values, key=float)
    if all(x < y for x, y in zip(pts, pts[1:])):
        return pts
    return sorted(pts)


def circular_gaps(points, modulus: QuadScalar) -> list:
    """Gaps between sorted points of ``[0, modulus)``, wraparound gap last."""
    gaps = [y - x for x, y in zip(points, points[1:])]
    gaps.append(points[0] + modulus - points[-1])
    return gaps


def projected_gap_stats(trace: OrbitTrace, b=None, upto: int | None = None) -> GapStatistics:
    """Project ``x_0, ..., x_upto`` to ``[0, |b|)`` and measure circular gaps."""
    m = abs(Q(trace.b if b is None else b))
    if m == 0:
        raise UsageError("modulus must be non-zero")
    count = len(trace) if upto is None else min(len(trace), upto + 1)
    if count == 0:
        raise PreconditionError("empty trace")
    pts = exact_sort({reduce_mod(trace.point(n), m) for n in range(count)})
    gaps = circular_gaps(pts, m)
    lengths = tuple(sorted(set(gaps)))
    return GapStatistics(m, len(pts), lengths[-1], lengths[0], lengths, tuple(pts))
