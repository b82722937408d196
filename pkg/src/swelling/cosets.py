"""Finitely generated subgroups with decidable membership, right-coset partitions
of finite sets, the coset-count bound ``max_x |K∩Hx| <= |KK⁻¹∩H|`` and the
per-coset counting audits behind the discrete-subgroup swelling argument.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .errors import CapacityError, PreconditionError, UsageError
from .finsets import (
    FiniteSubset,
    chain_relations,
    check_muranov,
    set_intersection,
    set_union,
    subset,
    translate,
)
from .groups import Group, Integers, IntVectorGroup, QuadGroup, RationalGroup
from .numeric import QuadScalar

__all__ = [
    "SubgroupDescriptor",
    "CosetPartition",
    "CosetRow",
    "CosetCountReport",
    "ChainAuditRow",
    "ChainAuditReport",
    "Lemma1Result",
    "build_subgroup",
    "membership",
    "coset_partition",
    "lemma1_bound_check",
    "audit_theorem_part1",
    "audit_inequality_chains",
    "random_lemma1_instance",
    "hermite_normal_form",
]

DEFAULT_CLOSURE_CAP = 10**6


# -- integer lattices -----------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Nonzero rows only; pivots strictly move right, are positive, and entries
    above each pivot are reduced into ``[0, pivot)``.
    """
    M = [list(r) for r in rows if any(r)]
    if not M:
        return ()
    ncols = len(M[0])
    basis: list[list[int]] = []
    col = 0
    while M and col < ncols:
        nz = [r for r in M if r[col] != 0]
        zero = [r for r in M if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on the column until one row holds the gcd
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (rest if r[col] != 0 else zero).append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        for prev in basis:
            q = prev[col] // piv[col]
            prev[:] = [x - q * y for x, y in zip(prev, piv)]
        basis.append(piv)
        M = [r for r in zero if any(r)]
        col += 1
    return tuple(tuple(r) for r in basis)


def _pivot(row) -> int:
    return next(i for i, x in enumerate(row) if x)


def _lattice_contains(basis, v) -> bool:
    v = list(v)
    for row in basis:
        p = _pivot(row)
        if any(v[:p]):
            return False
        q, r = divmod(v[p], row[p])
        if r:
            return False
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


# -- subgroup descriptors ----------------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Subgroup ``H = <generators>`` of ``ambient`` with an exact membership test.

    ``form`` is ``"closure"`` (finite carriers: ``elements`` enumerated),
    ``"lattice"`` (Z^n and Q(sqrt2): ``basis`` in Hermite normal form over
    integer coordinates scaled by ``scale``) or ``"cyclic"`` (Q: single
    generator ``cyclic_generator``).
    """

    ambient: Group
    generators: tuple
    form: str
    elements: frozenset | None = None
    basis: tuple = ()
    scale: int = 1
    cyclic_generator: Fraction | None = None

    def __contains__(self, g) -> bool:
        return membership(self, g)

    @cached_property
    def test(self):
        """Membership predicate on already-validated carrier elements."""
        G = self.ambient
        if self.form == "closure":
            return self.elements.__contains__
        if self.form == "cyclic":
            gen = self.cyclic_generator
            if gen == 0:
                return lambda g: g == 0
            p, q = gen.numerator, gen.denominator
            # g / (p/q) is an integer iff g.den * p divides g.num * q
            return lambda g: (g.numerator * q) % (g.denominator * p) == 0
        basis = self.basis
        if isinstance(G, Integers):
            if not basis:
                return lambda g: g == 0
            d = basis[0][0]
            return lambda g: g % d == 0
        if isinstance(G, IntVectorGroup):
            return lambda g: _lattice_contains(basis, g)
        L = self.scale

        def quad(g):
            r, s = g.rat * L, g.irr * L
            if r.denominator != 1 or s.denominator != 1:
                return False
            return _lattice_contains(basis, (r.numerator, s.numerator))

        return quad

    def describe(self) -> dict:
        G = self.ambient
        out = {"ambient": G.spec, "form": self.form, "generators": [G.format_element(g) for g in self.generators]}
        if self.form == "closure":
            out["order"] = len(self.elements)
        elif self.form == "lattice":
            out["basis"] = [list(r) for r in self.basis]
            out["scale"] = self.scale
        else:
            out["generator"] = G.format_element(self.cyclic_generator)
        return out


def _coords(G: Group, g) -> tuple:
    if isinstance(G, Integers):
        return (Fraction(g),)
    if isinstance(G, IntVectorGroup):
        return tuple(Fraction(x) for x in g)
    if isinstance(G, QuadGroup):
        return (g.rat, g.irr)
    raise UsageError(f"no lattice coordinates for {G.spec}")


def build_subgroup(G: Group, generators, closure_cap: int = DEFAULT_CLOSURE_CAP) -> SubgroupDescriptor:
    gens = tuple(G.check(g) for g in generators)
    if G.finite:
        e = G.identity()
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.op(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > closure_cap:
                            raise CapacityError(f"subgroup closure exceeds cap {closure_cap}")
            frontier = nxt
        return SubgroupDescriptor(G, gens, "closure", elements=frozenset(seen))
    if isinstance(G, RationalGroup):
        nonzero = [g for g in gens if g]
        if not nonzero:
            return SubgroupDescriptor(G, gens, "cyclic", cyclic_generator=Fraction(0))
        L = math.lcm(*(g.denominator for g in nonzero))
        num = math.gcd(*(g.numerator * (L // g.denominator) for g in nonzero))
        return SubgroupDescriptor(G, gens, "cyclic", cyclic_generator=Fraction(num, L))
    coords = [_coords(G, g) for g in gens]
    L = math.lcm(1, *(x.denominator for c in coords for x in c))
    rows = [[int(x * L) for x in c] for c in coords]
    return SubgroupDescriptor(G, gens, "lattice", basis=hermite_normal_form(rows), scale=L)


def membership(H: SubgroupDescriptor, g) -> bool:
    return H.test(H.ambient.check(g))


# -- coset partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class CosetPartition:
    """Right cosets ``Hx`` meeting a finite set; keys are least members of each class."""

    subgroup: SubgroupDescriptor
    classes: dict

    def class_of(self, x):
        H = self.subgroup
        G = H.ambient
        for rep, members in self.classes.items():
            if membership(H, G.op(x, G.inv(rep))):
                return rep
        return None


def coset_partition(K: FiniteSubset, H: SubgroupDescriptor) -> CosetPartition:
    G = H.ambient
    if K.group != G:
        raise UsageError(f"carrier mismatch: {G.spec} vs {K.group.spec}")
    test = H.test
    reps: list = []
    members: dict = {}
    for x in K.elements:  # already in carrier order, so the first member is least
        for r in reps:
            if test(G.op(x, G.inv(r))):
                members[r].append(x)
                break
        else:
            reps.append(x)
            members[x] = [x]
    return CosetPartition(H, {r: subset(G, members[r]) for r in reps})


# -- coset-count bound ----------------------------------------------------------------


@dataclass(frozen=True)
class Lemma1Result:
    max_coset_count: int
    difference_bound: int
    holds: bool


def lemma1_bound_check(K: FiniteSubset, H: SubgroupDescriptor) -> Lemma1Result:
    """Compare ``max_x |K∩Hx|`` with ``|KK⁻¹ ∩ H|``.

    The two sides are computed separately: the left from the coset
    partition, the right by testing every difference ``k1 k2⁻¹``.
    """
    G = H.ambient
    part = coset_partition(K, H)
    biggest = max((len(c) for c in part.classes.values()), default=0)
    if isinstance(G, RationalGroup) and K.elements:
        # common denominator keeps the quadratic loop in integer arithmetic
        L = math.lcm(*(k.denominator for k in K.elements))
        nums = [k.numerator * (L // k.denominator) for k in K.elements]
        diffs = {x - y for x in nums for y in nums}
        g = H.cyclic_generator
        # d/L lies in (p/q)Z iff L*p divides d*q
        bound = sum(1 for d in diffs if (d * g.denominator) % (L * g.numerator) == 0) if g else 1
    else:
        diffs = {G.op(k1, G.inv(k2)) for k1 in K.elements for k2 in K.elements}
        bound = sum(1 for d in diffs if H.test(d))
    return Lemma1Result(biggest, bound, biggest <= bound)


def random_lemma1_instance(G: Group, rng: random.Random, max_size: int = 20, max_gens: int = 2):
    """Random ``(K, H)`` with ``|K| <= max_size`` and ``H`` on at most ``max_gens`` generators."""
    size = rng.randint(0, max_size)
    K = subset(G, (G.sample(rng) for _ in range(size)))
    ngens = rng.randint(0, max_gens)
    H = build_subgroup(G, [G.sample(rng, bound=6) for _ in range(ngens)])
    return K, H


# -- per-coset audit, discrete generated subgroup -------------------------------------


@dataclass(frozen=True)
class CosetRow:
    coset_rep: object
    counts: dict
    chain: tuple
    links: tuple
    collapsed: bool
    union_piece_equal: bool
    intersection_piece_equal: bool


@dataclass
class CosetCountReport:
    subgroup: SubgroupDescriptor
    rows: list
    all_collapse: bool
    reassembled_union_equal: bool
    reassembled_intersection_equal: bool

    def to_json(self) -> list:
        G = self.subgroup.ambient
        return [
            {
                "coset_rep": G.format_element(r.coset_rep),
                "counts": r.counts,
                "links": list(r.links),
                "collapsed": r.collapsed,
            }
            for r in self.rows
        ]


def _in_coset(H: SubgroupDescriptor, S: FiniteSubset, rep) -> FiniteSubset:
    G = H.ambient
    inv = G.inv(rep)
    return subset(G, (s for s in S.elements if H.test(G.op(s, inv))))


def _check_inclusions(G, A, B, a, b, c):
    verdict = check_muranov(G, A, B, a, b, c)
    if not verdict.inclusions_hold:
        raise PreconditionError("audit needs both inclusions aA∪bB ⊂ A∪B and aA∩bB ⊂ c(A∩B)")
    return verdict


def audit_theorem_part1(G: Group, A: FiniteSubset, B: FiniteSubset, a, b, c, closure_cap: int = DEFAULT_CLOSURE_CAP) -> CosetCountReport:
    """Count along right cosets of ``H3 = <a, b, c>``.

    On each coset ``H3x`` the chain
    ``|(A∪B)∩H3x| ≥ |(aA∪bB)∩H3x| = |aA∩H3x|+|bB∩H3x|-|aA∩bB∩H3x|
    ≥ |A∩H3x|+|B∩H3x|-|A∩B∩H3x| = |(A∪B)∩H3x|`` must collapse, and the pieces
    ``(aA∪bB)∩H3x``, ``(aA∩bB)∩H3x`` must equal ``(A∪B)∩H3x``, ``c(A∩B)∩H3x``.
    """
    _check_inclusions(G, A, B, a, b, c)
    H3 = build_subgroup(G, [a, b, c], closure_cap)
    aA, bB = translate(G, a, A), translate(G, b, B)
    AuB, AiB = set_union(A, B), set_intersection(A, B)
    lhs_u, lhs_i = set_union(aA, bB), set_intersection(aA, bB)
    cAB = translate(G, c, AiB)
    universe = set_union(set_union(AuB, lhs_u), cAB)
    part = coset_partition(universe, H3)

    rows = []
    glued_u, glued_i = set(), set()
    for rep in part.classes:
        piece = lambda S: _in_coset(H3, S, rep)  # noqa: E731
        p = {
            "aA": piece(aA), "bB": piece(bB), "aA&bB": piece(lhs_i), "aA|bB": piece(lhs_u),
            "A": piece(A), "B": piece(B), "A&B": piece(AiB), "A|B": piece(AuB), "c(A&B)": piece(cAB),
        }
        n = {k: len(v) for k, v in p.items()}
        chain = (
            n["A|B"],
            n["aA|bB"],
            n["aA"] + n["bB"] - n["aA&bB"],
            n["A"] + n["B"] - n["A&B"],
            n["A|B"],
        )
        links = tuple(chain_relations(list(chain)))
        glued_u |= p["aA|bB"].members
        glued_i |= p["aA&bB"].members
        rows.append(
            CosetRow(
                rep,
                {k: n[k] for k in ("aA", "bB", "aA&bB", "A", "B", "A&B")},
                chain,
                links,
                all(r == "=" for r in links),
                p["aA|bB"] == p["A|B"],
                p["aA&bB"] == p["c(A&B)"],
            )
        )
    return CosetCountReport(
        H3,
        rows,
        all(r.collapsed for r in rows),
        glued_u == set(AuB.members),
        glued_i == set(cAB.members),
    )


# -- per-coset audit, one non-discrete direction -------------------------------------


@dataclass(frozen=True)
class ChainAuditRow:
    coset_rep: object
    chain: tuple
    links: tuple
    consequence: tuple  # (lhs, rhs) of the derived inequality lhs <= rhs
    strict: bool
    sound: bool  # every ">=" link holds as stated


@dataclass
class ChainAuditReport:
    case: str
    subgroup: SubgroupDescriptor
    rows: list
    all_equal: bool
    all_sound: bool
    strict_reps: list = field(default_factory=list)

    def to_json(self) -> list:
        G = self.subgroup.ambient
        return [
            {
                "coset_rep": G.format_element(r.coset_rep),
                "chain": list(r.chain),
                "links": list(r.links),
                "consequence": list(r.consequence),
                "collapsed": not r.strict and all(x == "=" for x in r.links),
            }
            for r in self.rows
        ]


_CASES = {"a-case": ("b", "c"), "b-case": ("a", "c"), "c-case": ("a", "b")}


def _normalizes(G: Group, t, H: SubgroupDescriptor) -> bool:
    if G.abelian:
        return True
    ti = G.inv(t)
    return all(membership(H, G.op(G.op(t, h), ti)) and membership(H, G.op(G.op(ti, h), t)) for h in H.generators)


def audit_inequality_chains(G: Group, A: FiniteSubset, B: FiniteSubset, a, b, c, H2: SubgroupDescriptor, case: str) -> ChainAuditReport:
    """Per-coset checks of the inequality chains used when ``<a, b, c>`` is not discrete.

    ``case`` names the translation outside ``H2``: ``"a-case"`` needs ``b, c ∈ H2``
    and checks ``|A∩H2a⁻¹x| <= |A∩H2x|``; ``"b-case"`` is symmetric in ``B``;
    ``"c-case"`` needs ``a, b ∈ H2`` and checks ``|A∩B∩H2x| <= |A∩B∩H2c⁻¹x|``.
    Over a discrete carrier every such inequality is an equality, so any
    strict row is reported as a bug sentinel.
    """
    if case not in _CASES:
        raise UsageError(f"case must be one of {sorted(_CASES)}")
    if H2.ambient != G:
        raise UsageError("H2 lives in a different group")
    _check_inclusions(G, A, B, a, b, c)
    named = {"a": G.check(a), "b": G.check(b), "c": G.check(c)}
    for k in _CASES[case]:
        if not membership(H2, named[k]):
            raise PreconditionError(f"{k} must lie in H2 for the {case}")
    t = named[case[0]]
    if not _normalizes(G, t, H2):
        raise PreconditionError("H2 must be normal in <a, b, c>")

    aA, bB = translate(G, a, A), translate(G, b, B)
    AuB, AiB = set_union(A, B), set_intersection(A, B)
    universe = set_union(set_union(AuB, set_union(aA, bB)), translate(G, c, AiB))
    part = coset_partition(universe, H2)
    ti = G.inv(t)

    def count(S, x):
        return len(_in_coset(H2, S, x))

    rows = []
    for x in part.classes:
        shifted = G.op(ti, x)  # H2 t⁻¹ x = t⁻¹ H2 x by normality
        if case == "c-case":
            chain = (
                count(AiB, shifted),
                count(set_intersection(aA, bB), x),
                count(aA, x) + count(bB, x) - count(set_union(aA, bB), x),
                count(A, G.op(G.inv(a), x)) + count(B, G.op(G.inv(b), x)) - count(AuB, x),
                count(AiB, x),
            )
            expected = (">=", "=", ">=", "=")
            consequence = (count(AiB, x), count(AiB, shifted))
        else:
            chain = (
                count(AuB, x),
                count(set_union(aA, bB), x),
                count(aA, x) + count(bB, x) - count(set_intersection(aA, bB), x),
                count(A, G.op(G.inv(a), x)) + count(B, G.op(G.inv(b), x)) - count(AiB, x),
            )
            expected = (">=", "=", ">=")
            S = A if case == "a-case" else B
            consequence = (count(S, shifted), count(S, x))
        links = tuple(chain_relations(list(chain)))
        sound = all(r == "=" or (e == ">=" and r == ">") for r, e in zip(links, expected))
        sound = sound and consequence[0] <= consequence[1]
        strict = consequence[0] < consequence[1] or any(r == ">" for r in links)
        rows.append(ChainAuditRow(x, chain, links, consequence, strict, sound))
    strict_reps = [r.coset_rep for r in rows if r.strict]
    return ChainAuditReport(case, H2, rows, not strict_reps, all(r.sound for r in rows), strict_reps)
