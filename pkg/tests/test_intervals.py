import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import interval_sets, nonzero_scalars, scalars
from swelling.errors import NotApplicableError, PreconditionError, UsageError
from swelling.intervals import (
    IntervalSet,
    check_muranov_real,
    contains,
    difference,
    interval_example,
    interval_set,
    intersection,
    is_subset,
    measure,
    necessary_condition_filter,
    normalize,
    parse_interval_set,
    pieces_measure,
    quotient_project,
    reduce_mod,
    translate_set,
    union,
)
from swelling.numeric import SQRT2, QuadScalar, qs

H = Fraction(1, 2)


def raster_measure(A: IntervalSet, lo: float, hi: float, step: float = 1e-6) -> float:
    """Count cell midpoints of a uniform grid that fall in A."""
    xs = np.arange(lo + step / 2, hi, step)
    hit = np.zeros(xs.shape, dtype=bool)
    for a, b in A:
        hit |= (xs >= float(a)) & (xs <= float(b))
    return hit.sum() * step


def raster_quotient_measure(A: IntervalSet, m: float, step: float = 1e-6) -> float:
    xs = np.arange(step / 2, m, step)
    hit = np.zeros(xs.shape, dtype=bool)
    for a, b in A:
        a, b = float(a), float(b)
        for k in range(int(np.floor(a / m)) - 1, int(np.ceil(b / m)) + 2):
            hit |= (xs + k * m >= a) & (xs + k * m <= b)
    return hit.sum() * step


# -- canonical form -----------------------------------------------------------------


@pytest.mark.parametrize(
    "raw, expected",
    [
        ([(0, 1), (1, 2)], [(0, 2)]),
        ([(0, 3), (1, 2)], [(0, 3)]),
        ([(2, 3), (0, 1)], [(0, 1), (2, 3)]),
        ([(5, 5)], [(5, 5)]),
        ([], []),
    ],
)
def test_normalize(raw, expected):
    assert normalize(raw) == IntervalSet(tuple((qs(a), qs(b)) for a, b in expected))


def test_normalize_rejects_reversed():
    with pytest.raises(UsageError):
        normalize([(2, 1)])


def test_translate_and_measure():
    A = interval_set((0, 1))
    T = translate_set(SQRT2, A)
    assert T == interval_set((SQRT2, 1 + SQRT2))
    assert measure(T) == measure(A) == 1


def test_intersection_example():
    I = intersection(interval_set((0, 2)), interval_set((1, 3)))
    assert I == interval_set((1, 2)) and measure(I) == 1


def test_subset_witness_is_gap_midpoint():
    assert is_subset(interval_set((0, 3)), interval_set((0, 1), (2, 3))) == (False, qs(H * 3))


def test_subset_witness_prefers_closed_endpoint():
    ok, w = is_subset(interval_set((0, 4)), interval_set((0, 1)))
    assert not ok and w == 4


def test_touching_intersection_is_a_point():
    assert intersection(interval_set((0, 1)), interval_set((1, 2))) == interval_set((1, 1))


def test_parse_interval_set():
    A = parse_interval_set("[0,1]u[3/2,2+1*sqrt2]")
    assert A == interval_set((0, 1), (qs(H * 3), qs(2, 1)))
    assert parse_interval_set(str(A)) == A
    assert parse_interval_set("empty") == IntervalSet()
    for bad in ["[0,1", "[1,0]", "0,1", "[a,b]"]:
        with pytest.raises(UsageError):
            parse_interval_set(bad)


# -- the example family -------------------------------------------------------------


def test_example_integer_quadruple():
    ex = interval_example(0, 1, 2, 3)
    assert ex["A"] == interval_set((0, 2)) and ex["B"] == interval_set((1, 3))
    assert (ex["a"], ex["b"], ex["c"]) == (1, -1, 0)
    a, b = ex["a"], ex["b"]
    assert union(translate_set(a, ex["A"]), translate_set(b, ex["B"])) == interval_set((0, 3))
    assert intersection(translate_set(a, ex["A"]), translate_set(b, ex["B"])) == interval_set((1, 2))
    v = ex["verdict"]
    assert v.inclusions_hold and v.equalities_hold


def test_example_irrational_quadruple():
    ex = interval_example(0, SQRT2, 2, 2 + SQRT2)
    assert ex["a"] == SQRT2 and ex["b"] == -SQRT2
    assert ex["verdict"].equalities_hold


def test_example_mixed_spacing():
    ex = interval_example(0, 1, 1 + SQRT2, 3)
    assert ex["c"] == 1 - SQRT2
    assert ex["verdict"].equalities_hold
    # the sign-flipped c fails here because u+t != v+w
    assert ex["stated_c"] == SQRT2 - 1
    assert ex["stated_verdict"].union_equality_holds
    assert not ex["stated_verdict"].intersection_inclusion_holds


def test_stated_c_agrees_exactly_when_balanced():
    for u, v, w, t in [(0, 1, 2, 3), (0, SQRT2, 2, 2 + SQRT2), (-1, 0, 5, 6), (0, 1, 2, 4), (0, 2, 3, 4)]:
        ex = interval_example(u, v, w, t)
        balanced = qs(u) + t == qs(v) + w
        assert (ex["c"] == ex["stated_c"]) == balanced
        assert ex["stated_verdict"].equalities_hold == balanced


def test_example_needs_order():
    with pytest.raises(PreconditionError):
        interval_example(0, 2, 1, 3)


def test_random_rational_quadruples():
    rng = random.Random(4)
    for _ in range(1000):
        pts = sorted({Fraction(rng.randint(-500, 500), rng.randint(1, 30)) for _ in range(4)})
        if len(pts) < 4:
            continue
        ex = interval_example(*pts)
        u, v_, w, t = (qs(p) for p in pts)
        # intersection computed by hand, independent of the set routines
        assert intersection(translate_set(ex["a"], ex["A"]), translate_set(ex["b"], ex["B"])) == interval_set((u + t - w, u + t - v_))
        v = ex["verdict"]
        assert v.inclusions_hold and v.equalities_hold


def test_identity_tuple():
    A = interval_set((0, 1))
    v = check_muranov_real(A, A, 0, 0, 0)
    assert v.inclusions_hold and v.equalities_hold


def test_escape_witness():
    v = check_muranov_real(interval_set((0, 2)), interval_set((1, 3)), SQRT2, -1, 0)
    assert not v.union_inclusion_holds
    w = v.union_inclusion_witness
    assert w == 2 + SQRT2 and w > 3
    assert contains(translate_set(SQRT2, interval_set((0, 2))), w)


# -- quotient coverage --------------------------------------------------------------


def test_quotient_long_interval():
    q = quotient_project(interval_set((0, 10)), 1)
    assert q.full and q.deficit == 0


def test_quotient_short_interval():
    q = quotient_project(interval_set((0, H)), 2)
    assert q.covered == interval_set((0, H)) and q.deficit == qs(3 * H)


def test_quotient_wraparound_against_raster():
    A = interval_set((0, H), (SQRT2, SQRT2 + H))
    q = quotient_project(A, 1)
    assert q.covered == interval_set((0, H), (SQRT2 - 1, SQRT2 - H))
    assert q.deficit == qs(0, -1) + Fraction(3, 2)
    approx = raster_quotient_measure(A, 1.0)
    assert abs(float(measure(q.covered)) - approx) < 1e-5


def test_quotient_random_against_raster():
    rng = random.Random(8)
    for _ in range(5):
        pairs = []
        for _ in range(3):
            lo = QuadScalar(Fraction(rng.randint(-20, 20), 4), Fraction(rng.randint(-4, 4), 3))
            pairs.append((lo, lo + QuadScalar(Fraction(rng.randint(0, 6), 5), Fraction(rng.randint(0, 2), 7))))
        A = normalize(pairs)
        m = QuadScalar(Fraction(rng.randint(1, 4), 2), Fraction(rng.randint(0, 2), 3))
        q = quotient_project(A, m)
        assert abs(float(measure(q.covered)) - raster_quotient_measure(A, float(m))) < 1e-5


def test_filter_examples():
    ten = interval_set((0, 10))
    assert necessary_condition_filter(ten, ten, SQRT2, 1)["passes"]
    res = necessary_condition_filter(interval_set((0, H)), ten, SQRT2, 2)
    assert not res["passes"] and res["deficit_A_mod_b"] == qs(3 * H)
    with pytest.raises(NotApplicableError):
        necessary_condition_filter(ten, ten, 1, 2)
    with pytest.raises(NotApplicableError):
        necessary_condition_filter(ten, ten, 0, SQRT2)


# -- properties ---------------------------------------------------------------------


@given(interval_sets(), interval_sets(), interval_sets())
def test_boolean_laws(A, B, C):
    assert union(A, B) == union(B, A) and intersection(A, B) == intersection(B, A)
    assert intersection(A, union(B, C)) == union(intersection(A, B), intersection(A, C))
    assert union(A, intersection(B, C)) == intersection(union(A, B), union(A, C))
    assert union(A, A) == A == intersection(A, A)


@given(interval_sets(), interval_sets())
def test_canonical_output(A, B):
    for S in (union(A, B), intersection(A, B)):
        iv = S.intervals
        assert all(lo <= hi for lo, hi in iv)
        assert all(iv[i][1] < iv[i + 1][0] for i in range(len(iv) - 1))


@given(interval_sets(), interval_sets())
def test_inclusion_exclusion(A, B):
    assert measure(union(A, B)) + measure(intersection(A, B)) == measure(A) + measure(B)
    assert pieces_measure(difference(A, B)) == measure(A) - measure(intersection(A, B))


@given(interval_sets(), interval_sets(), scalars)
def test_translation_invariance(A, B, s):
    assert measure(translate_set(s, A)) == measure(A)
    assert is_subset(A, B)[0] == is_subset(translate_set(s, A), translate_set(s, B))[0]


@given(interval_sets(), interval_sets())
def test_subset_witness_sound(A, B):
    ok, w = is_subset(A, B)
    assert ok == (union(A, B) == B)
    if not ok:
        assert contains(A, w) and not contains(B, w)


@given(interval_sets(), interval_sets())
def test_difference_pieces(A, B):
    for p in difference(A, B):
        w = p.witness()
        assert contains(A, w) and not contains(B, w)
        mid = (p.lo + p.hi) / 2
        assert p.lo == p.hi or (contains(A, mid) and not contains(B, mid))


@given(interval_sets(), nonzero_scalars)
def test_quotient_periodic(A, b):
    assert quotient_project(translate_set(b, A), b) == quotient_project(A, b)
    assert quotient_project(translate_set(-2 * b, A), b) == quotient_project(A, b)


@given(interval_sets(), nonzero_scalars)
def test_full_coverage_needs_measure(A, b):
    q = quotient_project(A, b)
    assert q.deficit >= 0
    if q.full:
        assert measure(A) >= abs(b)
    if measure(A) < abs(b):
        assert not q.full


@given(scalars, nonzero_scalars)
def test_reduce_mod_range(x, m):
    r = reduce_mod(x, abs(m))
    assert 0 <= r < abs(m)
    assert ((x - r) / abs(m)).is_rational() and ((x - r) / abs(m)).rat.denominator == 1


@settings(max_examples=60)
@given(interval_sets(max_intervals=3))
def test_measure_against_raster(A):
    if not A:
        return
    lo, hi = float(A.lo) - 0.5, float(A.hi) + 0.5
    if hi - lo > 40:
        return
    assert abs(float(measure(A)) - raster_measure(A, lo, hi, 1e-5)) < 1e-4


@given(interval_sets(), interval_sets(), scalars, scalars, scalars)
def test_real_verdict_invariants(A, B, a, b, c):
    v = check_muranov_real(A, B, a, b, c)
    assert not v.union_equality_holds or v.union_inclusion_holds
    assert not v.intersection_equality_holds or v.intersection_inclusion_holds
    if not v.union_inclusion_holds:
        w = v.union_inclusion_witness
        assert contains(union(translate_set(a, A), translate_set(b, B)), w) and not contains(union(A, B), w)
    if v.union_witness is not None:
        assert contains(union(A, B), v.union_witness)
