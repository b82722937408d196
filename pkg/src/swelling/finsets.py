"""Finite subsets of a group, the two-translate swelling verdict, and exhaustive sweeps.

For finite sets the union/intersection inclusions force the equalities by a
cardinality count; :func:`audit_finite_proposition` replays that count and
the sweeps check it over every tuple ``(A, B, a, b, c)`` of a small group.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CapacityError, PreconditionError, UsageError
from .groups import Group

__all__ = [
    "FiniteSubset",
    "SwellingVerdict",
    "CardinalityChainReport",
    "subset",
    "set_union",
    "set_intersection",
    "set_difference",
    "is_subset",
    "translate",
    "right_translate",
    "check_muranov",
    "audit_finite_proposition",
    "check_swelling_lemma",
    "sweep_group_2swelling",
    "sweep_group_weak_2swelling",
    "inclusion_tuples",
    "chain_relations",
]

DEFAULT_SWEEP_CAP = 6


@dataclass(frozen=True)
class FiniteSubset:
    """Canonical finite subset: sorted by the carrier order, no duplicates."""

    group: Group
    elements: tuple = ()

    def __post_init__(self):
        G = self.group
        uniq = {G.check(g) for g in self.elements}
        object.__setattr__(self, "elements", tuple(sorted(uniq, key=G.key)))

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g):
        return g in self.members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __str__(self):
        return "{" + ", ".join(self.group.format_element(g) for g in self.elements) + "}"


def subset(G: Group, elements: Iterable = ()) -> FiniteSubset:
    return FiniteSubset(G, tuple(elements))


def _same_carrier(*sets: FiniteSubset) -> Group:
    G = sets[0].group
    for s in sets[1:]:
        if s.group != G:
            raise UsageError(f"carrier mismatch: {G.spec} vs {s.group.spec}")
    return G


def set_union(A: FiniteSubset, B: FiniteSubset) -> FiniteSubset:
    G = _same_carrier(A, B)
    return FiniteSubset(G, tuple(A.members | B.members))


def set_intersection(A: FiniteSubset, B: FiniteSubset) -> FiniteSubset:
    G = _same_carrier(A, B)
    return FiniteSubset(G, tuple(A.members & B.members))


def set_difference(A: FiniteSubset, B: FiniteSubset) -> FiniteSubset:
    G = _same_carrier(A, B)
    return FiniteSubset(G, tuple(A.members - B.members))


def is_subset(A: FiniteSubset, B: FiniteSubset):
    """Return ``(True, None)`` or ``(False, least element of A \\ B)``."""
    _same_carrier(A, B)
    for g in A.elements:
        if g not in B.members:
            return False, g
    return True, None


def translate(G: Group, a, A: FiniteSubset) -> FiniteSubset:
    """Left translate ``aA``."""
    if A.group != G:
        raise UsageError(f"carrier mismatch: {G.spec} vs {A.group.spec}")
    a = G.check(a)
    return FiniteSubset(G, tuple(G.op(a, x) for x in A.elements))


def right_translate(G: Group, A: FiniteSubset, x) -> FiniteSubset:
    """Right translate ``Ax``."""
    if A.group != G:
        raise UsageError(f"carrier mismatch: {G.spec} vs {A.group.spec}")
    x = G.check(x)
    return FiniteSubset(G, tuple(G.op(y, x) for y in A.elements))


@dataclass(frozen=True)
class SwellingVerdict:
    """Truth of the four conditions for ``(A, B, a, b, c)``.

    ``union_witness`` / ``intersection_witness`` are present exactly when the
    corresponding inclusion holds strictly (a counterexample witness).  The
    ``*_inclusion_witness`` fields explain a failed inclusion instead.
    """

    union_inclusion_holds: bool
    intersection_inclusion_holds: bool
    union_equality_holds: bool
    intersection_equality_holds: bool
    union_witness: object = None
    intersection_witness: object = None
    union_inclusion_witness: object = None
    intersection_inclusion_witness: object = None

    @property
    def inclusions_hold(self) -> bool:
        return self.union_inclusion_holds and self.intersection_inclusion_holds

    @property
    def equalities_hold(self) -> bool:
        return self.union_equality_holds and self.intersection_equality_holds

    @property
    def is_counterexample(self) -> bool:
        return self.inclusions_hold and not self.equalities_hold

    def to_json(self, fmt=str) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if k.endswith("witness") and v is not None:
                out[k] = fmt(v)
        out["counterexample"] = self.is_counterexample
        return out


def check_muranov(G: Group, A: FiniteSubset, B: FiniteSubset, a, b, c) -> SwellingVerdict:
    """Decide ``aA∪bB ⊂ A∪B``, ``aA∩bB ⊂ c(A∩B)`` and the two equalities."""
    _same_carrier(A, B)
    aA, bB = translate(G, a, A), translate(G, b, B)
    lhs_u, rhs_u = set_union(aA, bB), set_union(A, B)
    lhs_i, rhs_i = set_intersection(aA, bB), translate(G, c, set_intersection(A, B))
    u_incl, u_bad = is_subset(lhs_u, rhs_u)
    i_incl, i_bad = is_subset(lhs_i, rhs_i)
    u_eq, i_eq = lhs_u == rhs_u, lhs_i == rhs_i
    u_strict = is_subset(rhs_u, lhs_u)[1] if u_incl and not u_eq else None
    i_strict = is_subset(rhs_i, lhs_i)[1] if i_incl and not i_eq else None
    return SwellingVerdict(u_incl, i_incl, u_eq, i_eq, u_strict, i_strict, u_bad, i_bad)


def chain_relations(values: list[int]) -> list[str]:
    """Relation between consecutive chain entries: ``"="``, ``">"`` or ``"<"``."""
    return ["=" if x == y else (">" if x > y else "<") for x, y in zip(values, values[1:])]


@dataclass(frozen=True)
class CardinalityChainReport:
    """``|A∪B| ≥ |aA∪bB| = |aA|+|bB|-|aA∩bB| ≥ |A|+|B|-|c(A∩B)| = |A∪B|``."""

    values: tuple
    links: tuple
    chain_collapses: bool
    # relations the argument guarantees; a mismatch is a bug sentinel
    expected_links: tuple = (">=", "=", ">=", "=")

    @property
    def consistent(self) -> bool:
        return all(
            rel == "=" or (exp == ">=" and rel == ">")
            for rel, exp in zip(self.links, self.expected_links)
        )


def audit_finite_proposition(G: Group, A: FiniteSubset, B: FiniteSubset, a, b, c) -> CardinalityChainReport:
    verdict = check_muranov(G, A, B, a, b, c)
    if not verdict.inclusions_hold:
        raise PreconditionError("audit needs both inclusions aA∪bB ⊂ A∪B and aA∩bB ⊂ c(A∩B)")
    aA, bB = translate(G, a, A), translate(G, b, B)
    cAB = translate(G, c, set_intersection(A, B))
    AuB = len(set_union(A, B))
    values = (
        AuB,
        len(set_union(aA, bB)),
        len(aA) + len(bB) - len(set_intersection(aA, bB)),
        len(A) + len(B) - len(cAB),
        AuB,
    )
    links = tuple(chain_relations(list(values)))
    return CardinalityChainReport(values, links, all(r == "=" for r in links))


def check_swelling_lemma(G: Group, A: FiniteSubset, a):
    """Return ``(aA ⊇ A, witness)``; the witness is the least element of ``A \\ aA``.

    For finite ``A`` the inclusion forces ``aA = A`` (equal cardinalities);
    that implication is asserted rather than assumed.
    """
    aA = translate(G, a, A)
    holds, witness = is_subset(A, aA)
    if holds and aA != A:
        raise AssertionError(f"aA ⊇ A but aA != A for a={a!r}, A={A}")
    return holds, witness


# -- exhaustive sweeps ----------------------------------------------------------


@dataclass
class SweepSummary:
    group: str
    variant: str
    tuples_checked: int = 0
    inclusion_tuples: int = 0
    chain_failures: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


class _MaskTables:
    """Bitmask encoding of subsets of a finite group with precomputed translates."""

    def __init__(self, G: Group):
        self.elements = sorted(G.elements(), key=G.key)
        n = len(self.elements)
        index = {g: i for i, g in enumerate(self.elements)}
        self.n = n
        self.translate = []
        for a in self.elements:
            perm = [index[G.op(a, x)] for x in self.elements]
            table = [0] * (1 << n)
            for mask in range(1, 1 << n):
                low = mask & -mask
                i = low.bit_length() - 1
                table[mask] = table[mask ^ low] | (1 << perm[i])
            self.translate.append(table)

    def decode(self, mask: int) -> tuple:
        return tuple(g for i, g in enumerate(self.elements) if mask >> i & 1)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _sweep_strong_range(G: Group, lo: int, hi: int):
    T = _MaskTables(G)
    n, full = T.n, 1 << T.n
    checked = incl = chain_bad = 0
    violations = []
    for A in range(lo, hi):
        for B in range(full):
            U, I = A | B, A & B
            cA_all = [T.translate[c][I] for c in range(n)]
            for a in range(n):
                tA = T.translate[a][A]
                for b in range(n):
                    tB = T.translate[b][B]
                    union = tA | tB
                    inter = tA & tB
                    checked += n
                    if union & ~U:
                        continue
                    for c in range(n):
                        tc = cA_all[c]
                        if inter & ~tc:
                            continue
                        incl += 1
                        # cardinality chain on popcounts
                        vals = (
                            _popcount(U),
                            _popcount(union),
                            _popcount(tA) + _popcount(tB) - _popcount(inter),
                            _popcount(A) + _popcount(B) - _popcount(tc),
                            _popcount(U),
                        )
                        if len(set(vals)) != 1:
                            chain_bad += 1
                        if union != U or inter != tc:
                            violations.append((A, B, a, b, c))
    return checked, incl, chain_bad, violations


def _sweep_weak_range(G: Group, lo: int, hi: int):
    T = _MaskTables(G)
    n, full = T.n, 1 << T.n
    checked = incl = 0
    violations = []
    for A in range(lo, hi):
        for B in range(full):
            U, I = A | B, A & B
            for a in range(n):
                tA = T.translate[a][A]
                for b in range(n):
                    tB = T.translate[b][B]
                    checked += 1
                    if tA & tB or (tA | tB) & ~U:
                        continue
                    incl += 1
                    if (tA | tB) != U or I:
                        violations.append((A, B, a, b))
    return checked, incl, 0, violations


def _run_range(args):
    kind, G, lo, hi = args
    fn = _sweep_strong_range if kind == "strong" else _sweep_weak_range
    return fn(G, lo, hi)


def _sweep(G: Group, kind: str, cap: int, jobs: int) -> SweepSummary:
    if not G.finite:
        raise UsageError(f"sweep needs a finite group, got {G.spec}")
    if G.order() > cap:
        raise CapacityError(f"|G| = {G.order()} exceeds the sweep cap {cap}")
    full = 1 << G.order()
    jobs = max(1, min(jobs, full))
    bounds = [full * i // jobs for i in range(jobs + 1)]
    tasks = [(kind, G, bounds[i], bounds[i + 1]) for i in range(jobs)]
    if jobs == 1:
        parts = [_run_range(tasks[0])]
    else:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            parts = pool.map(_run_range, tasks)
    T = _MaskTables(G)
    summary = SweepSummary(G.spec, kind)
    for checked, incl, chain_bad, violations in parts:
        summary.tuples_checked += checked
        summary.inclusion_tuples += incl
        summary.chain_failures += chain_bad
        for v in violations:
            sets = [str(subset(G, T.decode(m))) for m in v[:2]]
            elems = [G.format_element(T.elements[i]) for i in v[2:]]
            summary.violations.append(sets + elems)
    return summary


def sweep_group_2swelling(G: Group, cap: int = DEFAULT_SWEEP_CAP, jobs: int = 1) -> SweepSummary:
    """Check every ``(A, B, a, b, c)`` of a finite group; violations should be empty."""
    return _sweep(G, "strong", cap, jobs)


def sweep_group_weak_2swelling(G: Group, cap: int = DEFAULT_SWEEP_CAP, jobs: int = 1) -> SweepSummary:
    """Check every ``(A, B, a, b)`` with ``aA∩bB = ∅``: union inclusion must force
    union equality and ``A∩B = ∅``."""
    return _sweep(G, "weak", cap, jobs)


def inclusion_tuples(G: Group, cap: int = DEFAULT_SWEEP_CAP) -> Iterator[tuple]:
    """Yield every ``(A, B, a, b, c)`` satisfying both inclusions, in sweep order."""
    if G.order() > cap:
        raise CapacityError(f"|G| = {G.order()} exceeds the sweep cap {cap}")
    T = _MaskTables(G)
    n, full = T.n, 1 << T.n
    for A, B in itertools.product(range(full), repeat=2):
        U, I = A | B, A & B
        for a, b in itertools.product(range(n), repeat=2):
            tA, tB = T.translate[a][A], T.translate[b][B]
            if (tA | tB) & ~U:
                continue
            for c in range(n):
                if (tA & tB) & ~T.translate[c][I]:
                    continue
                yield (
                    subset(G, T.decode(A)),
                    subset(G, T.decode(B)),
                    T.elements[a],
                    T.elements[b],
                    T.elements[c],
                )
