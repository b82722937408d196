"""Concrete groups used as carriers for finite subsets and translations.

Elements are plain hashable Python values; the group object owns the
operation and validates membership of its carrier, so mixing carriers is an
error instead of a silent coercion:

=================  ===============================  =================
carrier            element type                     spec string
=================  ===============================  =================
``CyclicGroup``    ``int`` in ``range(m)``          ``Zmod:m``
``Integers``       ``int``                          ``Z`` / ``Zn:1``
``IntVectorGroup`` ``tuple[int, ...]`` of length n  ``Zn:n``
``SymmetricGroup3````tuple`` image of (0, 1, 2)       ``S3``
``RationalGroup``  ``Fraction``                     ``Q``
``QuadGroup``      ``QuadScalar``                   ``QSqrt2``
=================  ===============================  =================
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError
from .numeric import QuadScalar, format_rational, parse_rational, parse_scalar

__all__ = [
    "Group",
    "CyclicGroup",
    "Integers",
    "IntVectorGroup",
    "SymmetricGroup3",
    "RationalGroup",
    "QuadGroup",
    "group_from_spec",
    "S3",
]


class Group:
    """Interface shared by all carriers."""

    abelian: bool = True
    finite: bool = False

    def op(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def check(self, g):
        """Return ``g`` (possibly normalized) or raise :class:`UsageError`."""
        raise NotImplementedError

    def key(self, g):
        """Sort key realizing the carrier's stable total order."""
        return g

    def elements(self) -> list:
        raise UsageError(f"{self.spec} is infinite")

    def order(self) -> int | None:
        return None

    def parse_element(self, text: str):
        raise NotImplementedError

    def format_element(self, g) -> str:
        return str(g)

    def sample(self, rng: random.Random, bound: int = 10):
        """Random element from a small, bounded region of the carrier."""
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec

    # element separator in the CLI set syntax
    list_separator = ","

    def parse_set(self, text: str) -> list:
        text = text.strip()
        if text in ("", "{}", "empty"):
            return []
        text = text.strip("{}")
        parts = [p for p in re.split(r"[;]" if self.list_separator == ";" else r"[,;]", text) if p.strip()]
        return [self.parse_element(p) for p in parts]


def _check_int(g) -> int:
    if isinstance(g, bool) or not isinstance(g, int):
        raise UsageError(f"expected an integer element, got {g!r}")
    return g


@dataclass(frozen=True)
class CyclicGroup(Group):
    m: int
    finite = True

    def __post_init__(self):
        if self.m < 1:
            raise UsageError("Zmod needs m >= 1")

    def op(self, g, h):
        return (g + h) % self.m

    def inv(self, g):
        return (-g) % self.m

    def identity(self):
        return 0

    def check(self, g):
        g = _check_int(g)
        if not 0 <= g < self.m:
            raise UsageError(f"{g} is not a residue mod {self.m}")
        return g

    def elements(self):
        return list(range(self.m))

    def order(self):
        return self.m

    def parse_element(self, text):
        try:
            return int(text.strip()) % self.m
        except ValueError:
            raise UsageError(f"cannot parse residue {text!r}") from None

    def sample(self, rng, bound=10):
        return rng.randrange(self.m)

    @property
    def spec(self):
        return f"Zmod:{self.m}"


@dataclass(frozen=True)
class Integers(Group):
    def op(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def identity(self):
        return 0

    def check(self, g):
        return _check_int(g)

    def parse_element(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise UsageError(f"cannot parse integer {text!r}") from None

    def sample(self, rng, bound=10):
        return rng.randint(-bound, bound)

    @property
    def spec(self):
        return "Z"


@dataclass(frozen=True)
class IntVectorGroup(Group):
    """The free abelian group Z^n, 2 <= n <= 4 (use :class:`Integers` for n = 1)."""

    n: int
    list_separator = ";"

    def __post_init__(self):
        if not 2 <= self.n <= 4:
            raise UsageError("Zn supports 2 <= n <= 4 (Zn:1 is Z)")

    def op(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def identity(self):
        return (0,) * self.n

    def check(self, g):
        if not isinstance(g, tuple) or len(g) != self.n:
            raise UsageError(f"expected a {self.n}-tuple of integers, got {g!r}")
        for x in g:
            _check_int(x)
        return g

    def parse_element(self, text):
        body = text.strip().strip("()")
        try:
            return self.check(tuple(int(x) for x in body.split(",")))
        except ValueError:
            raise UsageError(f"cannot parse vector {text!r}") from None

    def format_element(self, g):
        return "(" + ",".join(str(x) for x in g) + ")"

    def sample(self, rng, bound=10):
        return tuple(rng.randint(-bound, bound) for _ in range(self.n))

    @property
    def spec(self):
        return f"Zn:{self.n}"


def _cycles(p: tuple) -> list[tuple]:
    seen, out = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = p[i]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class SymmetricGroup3(Group):
    """S3 as image tuples of (0, 1, 2); ``op(g, h)`` applies ``h`` first."""

    abelian = False
    finite = True

    def op(self, g, h):
        return tuple(g[h[i]] for i in range(3))

    def inv(self, g):
        out = [0, 0, 0]
        for i, gi in enumerate(g):
            out[gi] = i
        return tuple(out)

    def identity(self):
        return (0, 1, 2)

    def check(self, g):
        if not isinstance(g, tuple) or sorted(g) != [0, 1, 2]:
            raise UsageError(f"not a permutation of (0, 1, 2): {g!r}")
        return g

    def elements(self):
        return list(itertools.permutations(range(3)))

    def order(self):
        return 6

    def parse_element(self, text):
        """Cycle notation on points 1..3: ``e``, ``(1 2)``, ``(1 2 3)``, ``(12)(3)``."""
        text = text.strip()
        if text in ("e", "()", "id"):
            return (0, 1, 2)
        cycles = re.findall(r"\(([^()]*)\)", text)
        if not cycles or re.sub(r"\([^()]*\)", "", text).strip():
            raise UsageError(f"cannot parse permutation {text!r}")
        perm = [0, 1, 2]
        # compose right to left, matching op()
        for body in reversed(cycles):
            pts = [int(c) - 1 for c in re.findall(r"\d", body)]
            if any(not 0 <= x < 3 for x in pts) or len(set(pts)) != len(pts):
                raise UsageError(f"cannot parse permutation {text!r}")
            cyc = list(range(3))
            for i, x in enumerate(pts):
                cyc[x] = pts[(i + 1) % len(pts)]
            perm = [cyc[perm[i]] for i in range(3)]
        return tuple(perm)

    def format_element(self, g):
        cycles = _cycles(g)
        if not cycles:
            return "e"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)

    def sample(self, rng, bound=10):
        return rng.choice(self.elements())

    @property
    def spec(self):
        return "S3"


S3 = SymmetricGroup3()


@dataclass(frozen=True)
class RationalGroup(Group):
    def op(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def identity(self):
        return Fraction(0)

    def check(self, g):
        if isinstance(g, Fraction):
            return g
        if isinstance(g, int) and not isinstance(g, bool):
            return Fraction(g)
        raise UsageError(f"expected a rational element, got {g!r}")

    def parse_element(self, text):
        return parse_rational(text)

    def format_element(self, g):
        return format_rational(g)

    def sample(self, rng, bound=10):
        den = rng.randint(1, 6)
        return Fraction(rng.randint(-bound * den, bound * den), den)

    @property
    def spec(self):
        return "Q"


@dataclass(frozen=True)
class QuadGroup(Group):
    """The additive group of Q(sqrt2)."""

    def op(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def identity(self):
        return QuadScalar(0)

    def check(self, g):
        if isinstance(g, QuadScalar):
            return g
        if isinstance(g, (int, Fraction)) and not isinstance(g, bool):
            return QuadScalar(g)
        raise UsageError(f"expected a Q(sqrt2) element, got {g!r}")

    def parse_element(self, text):
        return parse_scalar(text)

    def sample(self, rng, bound=10):
        return QuadScalar(Fraction(rng.randint(-bound, bound), rng.randint(1, 4)), Fraction(rng.randint(-bound, bound), rng.randint(1, 4)))

    @property
    def spec(self):
        return "QSqrt2"


def group_from_spec(text: str) -> Group:
    """Build a carrier from ``"Zmod:6"``, ``"Zn:2"``, ``"Z"``, ``"S3"``, ``"Q"`` or ``"QSqrt2"``."""
    t = text.strip()
    name, _, param = t.partition(":")
    try:
        if name == "Zmod":
            return CyclicGroup(int(param))
        if name == "Zn":
            n = int(param)
            return Integers() if n == 1 else IntVectorGroup(n)
    except ValueError:
        raise UsageError(f"bad group parameter in {text!r}") from None
    if param:
        raise UsageError(f"unknown group spec {text!r}")
    simple = {"Z": Integers(), "S3": S3, "Q": RationalGroup(), "QSqrt2": QuadGroup()}
    if name in simple:
        return simple[name]
    raise UsageError(f"unknown group spec {text!r}")
