"""Grid/random search for tuples ``(A, B, a, b, c)`` of finite interval unions over
Q(sqrt2) that satisfy both inclusions but break an equality.

The grid: a coefficient set ``R`` of rationals with denominator ``<= D`` and
absolute value ``<= M``; scalars ``r + s*sqrt2`` with ``r, s ∈ R``; a set is
``1..k`` separated non-degenerate closed intervals with grid endpoints
(equivalently ``2j`` distinct grid scalars, paired up in increasing order).
Candidates are numbered by a mixed-radix index so that any index range can be
decoded independently; this makes parallel runs and resumption trivial.

A search that finds nothing only says there is no counterexample in the
searched family.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import math
import multiprocessing
import os
import random
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .errors import NotApplicableError, UsageError
from .finsets import SwellingVerdict
from .intervals import (
    IntervalSet,
    check_muranov_real,
    difference,
    intersection,
    measure,
    necessary_condition_filter,
    normalize,
    pieces_measure,
    translate_set,
    union,
)
from .numeric import QuadScalar
from .orbit import run_orbit

__all__ = [
    "SearchConfig",
    "Grid",
    "CandidateSpec",
    "generate_candidates",
    "filter_candidate",
    "verify_candidate",
    "near_miss_score",
    "run_search",
    "parse_config",
    "load_config",
    "FILTER_REASONS",
]

FILTER_REASONS = ("zero-translation", "rational-ratio", "measure-too-small", "coverage-deficit")


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "random"
    max_intervals: int = 1
    denominator_bound: int = 1
    magnitude_bound: int = 1
    seed: int = 0
    max_candidates: int = 10_000
    near_misses: int = 5
    include_zero: bool = False
    orbit_steps: int = 1000
    checkpoint: str = ""
    checkpoint_every: int = 100_000

    def __post_init__(self):
        if self.mode not in ("grid", "random"):
            raise UsageError("mode must be 'grid' or 'random'")
        if not 1 <= self.max_intervals <= 4:
            raise UsageError("max_intervals must be in 1..4")
        if not 1 <= self.denominator_bound <= 64:
            raise UsageError("denominator_bound must be in 1..64")
        if not 0 <= self.magnitude_bound <= 16:
            raise UsageError("magnitude_bound must be in 0..16")
        if self.max_candidates < 0 or self.near_misses < 0 or self.checkpoint_every < 1:
            raise UsageError("counts must be non-negative (checkpoint_every >= 1)")

    def echo(self) -> dict:
        return asdict(self)

    def canonical_text(self) -> str:
        """``key=value`` lines of everything that affects results."""
        items = sorted((k, v) for k, v in asdict(self).items() if k not in ("checkpoint", "checkpoint_every"))
        return "".join(f"{k}={_fmt_value(v)}\n" for k, v in items)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def _fmt_value(v) -> str:
    return str(v).lower() if isinstance(v, bool) else str(v)


_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def parse_config(text: str, **overrides) -> SearchConfig:
    """Parse ``key=value`` lines (``#`` comments, blank lines ignored)."""
    types = {f.name: f.type for f in fields(SearchConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in types:
            raise UsageError(f"config line {lineno}: unknown or malformed entry {raw!r}")
        values[key] = val
    values.update({k: str(v) for k, v in overrides.items() if v is not None})
    parsed = {}
    for key, val in values.items():
        kind = types[key]
        try:
            if kind == "int":
                parsed[key] = int(val)
            elif kind == "bool":
                parsed[key] = _BOOL[val.lower()]
            else:
                parsed[key] = val
        except (ValueError, KeyError):
            raise UsageError(f"bad value for {key}: {val!r}") from None
    return SearchConfig(**parsed)


def load_config(path) -> SearchConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


# -- grid -------------------------------------------------------------------------


def _unrank_combination(rank: int, n: int, r: int) -> list[int]:
    """Colex unranking of an ``r``-subset of ``range(n)`` (ascending output)."""
    out = []
    for i in range(r, 0, -1):
        lo, hi = i - 1, n - 1
        # largest c with comb(c, i) <= rank
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if math.comb(mid, i) <= rank:
                lo = mid
            else:
                hi = mid - 1
        out.append(lo)
        rank -= math.comb(lo, i)
        n = lo
    return out[::-1]


class Grid:
    """Index arithmetic over the candidate space of a :class:`SearchConfig`."""

    def __init__(self, config: SearchConfig):
        self.config = config
        D, M = config.denominator_bound, config.magnitude_bound
        coeffs = {Fraction(n, d) for d in range(1, D + 1) for n in range(-M * d, M * d + 1)}
        self.coefficients = sorted(coeffs)
        self.n_scalars = len(self.coefficients) ** 2
        k = config.max_intervals
        self.set_counts = [math.comb(self.n_scalars, 2 * j) for j in range(1, k + 1)]
        self.n_sets = sum(self.set_counts)
        self.size = self.n_sets**2 * self.n_scalars**3
        if self.size == 0:
            raise UsageError("empty grid: no non-degenerate interval fits the bounds")

    def scalar(self, i: int) -> QuadScalar:
        r, s = divmod(i, len(self.coefficients))
        return QuadScalar(self.coefficients[r], self.coefficients[s])

    def interval_set(self, i: int) -> IntervalSet:
        for j, count in enumerate(self.set_counts, 1):
            if i < count:
                idx = _unrank_combination(i, self.n_scalars, 2 * j)
                pts = sorted(self.scalar(x) for x in idx)
                return IntervalSet(tuple((pts[2 * t], pts[2 * t + 1]) for t in range(j)))
            i -= count
        raise IndexError("set index out of range")

    def coordinates(self, index: int) -> tuple:
        """``(A, B, a, b, c)`` indices; ``c`` varies fastest."""
        n = self.n_scalars
        index, c = divmod(index, n)
        index, b = divmod(index, n)
        index, a = divmod(index, n)
        A, B = divmod(index, self.n_sets)
        if A >= self.n_sets:
            raise IndexError("candidate index out of range")
        return A, B, a, b, c


@dataclass(frozen=True)
class CandidateSpec:
    A: IntervalSet
    B: IntervalSet
    a: QuadScalar
    b: QuadScalar
    c: QuadScalar
    index: int
    provenance: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "a": str(self.a),
            "b": str(self.b),
            "c": str(self.c),
            "index": self.index,
            "provenance": self.provenance,
        }


def decode_candidate(grid: Grid, index: int, provenance: dict | None = None) -> CandidateSpec:
    iA, iB, ia, ib, ic = grid.coordinates(index)
    prov = {"grid": [iA, iB, ia, ib, ic]}
    prov.update(provenance or {})
    return CandidateSpec(
        grid.interval_set(iA), grid.interval_set(iB), grid.scalar(ia), grid.scalar(ib), grid.scalar(ic), index, prov
    )


def _draws(config: SearchConfig, grid: Grid, start: int, stop: int) -> list[tuple[int, dict]]:
    """Candidate indices for draws ``start..stop-1`` with provenance."""
    if config.mode == "grid":
        stop = min(stop, grid.size)
        return [(i, {}) for i in range(start, stop)]
    rng = random.Random(config.seed)
    out = []
    for draw in range(stop):
        idx = rng.randrange(grid.size)
        if draw >= start:
            out.append((idx, {"seed": config.seed, "draw": draw}))
    return out


def generate_candidates(config: SearchConfig, start: int = 0, stop: int | None = None) -> Iterator[CandidateSpec]:
    """Deterministic candidate stream: lexicographic in grid mode, seeded draws in random mode."""
    grid = Grid(config)
    stop = config.max_candidates if stop is None else stop
    for idx, prov in _draws(config, grid, start, stop):
        yield decode_candidate(grid, idx, prov)


# -- filter / verify / score ------------------------------------------------------------


def filter_candidate(cand: CandidateSpec, include_zero: bool = False) -> tuple[bool, str | None]:
    """Necessary conditions for a counterexample: ``(keep, reason)``.

    A counterexample needs ``a, b, c`` non-zero with pairwise irrational
    ratios, ``A + bZ = R`` and ``B + aZ = R`` (so ``|A| >= |b|`` and
    ``|B| >= |a|`` in measure).
    """
    a, b, c = cand.a, cand.b, cand.c
    if a == 0 or b == 0 or c == 0:
        return (True, None) if include_zero else (False, "zero-translation")
    if (a / b).is_rational() or (a / c).is_rational() or (b / c).is_rational():
        return False, "rational-ratio"
    if measure(cand.A) < abs(b) or measure(cand.B) < abs(a):
        return False, "measure-too-small"
    try:
        nc = necessary_condition_filter(cand.A, cand.B, a, b)
    except NotApplicableError:  # pragma: no cover - ratios already checked
        return False, "rational-ratio"
    if not nc["passes"]:
        return False, "coverage-deficit"
    return True, None


def near_miss_score(cand: CandidateSpec, verdict: SwellingVerdict | None = None) -> QuadScalar:
    """Measure of the parts violating the two inclusions; ranking only."""
    aA, bB = translate_set(cand.a, cand.A), translate_set(cand.b, cand.B)
    lhs_u, rhs_u = union(aA, bB), union(cand.A, cand.B)
    lhs_i = intersection(aA, bB)
    rhs_i = translate_set(cand.c, intersection(cand.A, cand.B))
    return pieces_measure(difference(lhs_u, rhs_u)) + pieces_measure(difference(lhs_i, rhs_i))


@dataclass(frozen=True)
class Verification:
    verdict: SwellingVerdict
    counterexample: bool
    reverified: bool = False
    orbit_escaped: bool | None = None


def verify_candidate(cand: CandidateSpec, orbit_steps: int = 1000) -> Verification:
    verdict = check_muranov_real(cand.A, cand.B, cand.a, cand.b, cand.c)
    if not verdict.is_counterexample:
        return Verification(verdict, False)
    # a hit: recheck from freshly normalized data, twice, and run the orbit
    A2, B2 = normalize(list(cand.A.intervals)), normalize(list(cand.B.intervals))
    v2 = check_muranov_real(A2, B2, cand.a, cand.b, cand.c)
    v3 = check_muranov_real(A2, B2, QuadScalar(cand.a.rat, cand.a.irr), cand.b, cand.c)
    escaped = None
    if cand.a != 0 and cand.b != 0 and cand.A:
        escaped = run_orbit(A2, B2, cand.a, cand.b, None, orbit_steps).escaped
    confirmed = v2 == verdict and v3 == verdict and not escaped
    return Verification(verdict, confirmed, True, escaped)


# -- driver ----------------------------------------------------------------------------------


def _evaluate(args) -> dict:
    config, draws = args
    grid = Grid(config)
    filtered = {r: 0 for r in FILTER_REASONS}
    verified = 0
    hits, scored = [], []
    for idx, prov in draws:
        cand = decode_candidate(grid, idx, prov)
        keep, reason = filter_candidate(cand, config.include_zero)
        if not keep:
            filtered[reason] += 1
            continue
        verified += 1
        res = verify_candidate(cand, config.orbit_steps)
        if res.counterexample:
            hits.append({"candidate": cand.to_json(), "verdict": res.verdict.to_json()})
        elif not res.verdict.inclusions_hold:
            score = near_miss_score(cand, res.verdict)
            scored.append((float(score), str(score), prov.get("draw", idx), cand.to_json()))
    return {"filtered": filtered, "verified": verified, "hits": hits, "scored": scored}


@dataclass
class _State:
    processed: int = 0
    filtered: dict = field(default_factory=lambda: {r: 0 for r in FILTER_REASONS})
    verified: int = 0
    counterexamples: list = field(default_factory=list)
    near: list = field(default_factory=list)

    def merge(self, part: dict, keep: int):
        for r, n in part["filtered"].items():
            self.filtered[r] += n
        self.verified += part["verified"]
        self.counterexamples.extend(part["hits"])
        # exact score first, draw order breaks ties
        self.near = heapq.nsmallest(keep, self.near + [list(x) for x in part["scored"]], key=_near_key)


def _near_key(entry):
    _, exact, order, _ = entry
    return (QuadScalar.coerce(exact), order)


def _partition(draws: list, jobs: int) -> list[list]:
    jobs = max(1, min(jobs, len(draws) or 1))
    bounds = [len(draws) * i // jobs for i in range(jobs + 1)]
    return [draws[bounds[i] : bounds[i + 1]] for i in range(jobs)]


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("SWELLING_JOBS", "1")))
    except ValueError:
        raise UsageError("SWELLING_JOBS must be an integer") from None


def run_search(config: SearchConfig, jobs: int | None = None, manifest: dict | None = None) -> dict:
    """Run the pipeline and return the JSON-ready report."""
    jobs = default_jobs() if jobs is None else jobs
    grid = Grid(config)
    total = min(config.max_candidates, grid.size) if config.mode == "grid" else config.max_candidates
    state = _State()
    ckpt = Path(config.checkpoint) if config.checkpoint else None
    if ckpt and ckpt.exists():
        saved = json.loads(ckpt.read_text())
        if saved.get("config_hash") == config.config_hash:
            state = _State(**saved["state"])
    pool = multiprocessing.get_context("fork").Pool(jobs) if jobs > 1 else None
    try:
        while state.processed < total:
            stop = min(total, state.processed + config.checkpoint_every)
            draws = _draws(config, grid, state.processed, stop)
            chunks = [(config, chunk) for chunk in _partition(draws, jobs)]
            parts = pool.map(_evaluate, chunks) if pool else [_evaluate(c) for c in chunks]
            for part in parts:
                state.merge(part, config.near_misses)
            state.processed = stop
            if ckpt:
                ckpt.write_text(json.dumps({"config_hash": config.config_hash, "state": asdict(state)}, sort_keys=True))
    finally:
        if pool:
            pool.close()
            pool.join()

    n_cex = len(state.counterexamples)
    return {
        "manifest": manifest or {},
        "config": config.echo(),
        "config_hash": config.config_hash,
        "seed": config.seed,
        "grid_size": grid.size,
        "candidates_generated": state.processed,
        "filtered_out": dict(state.filtered),
        "fully_verified": state.verified,
        "counterexamples": state.counterexamples,
        "near_misses": [
            {"score": exact, "score_approx": approx, "candidate": cand} for approx, exact, _, cand in state.near
        ],
        "conclusion": (
            f"{n_cex} counterexample(s) found in the searched family; each re-verified"
            if n_cex
            else "no counterexample in the searched family"
        ),
    }
