from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import interval_sets, small_fractions
from swelling.errors import PreconditionError, UsageError
from swelling.intervals import check_muranov_real, contains, interval_example, interval_set, reduce_mod, union
from swelling.numeric import SQRT2, QuadScalar, qs
from swelling.orbit import circular_gaps, escape_certifies_failure, projected_gap_stats, run_orbit

A02, B13 = interval_set((0, 2)), interval_set((1, 3))


def test_periodic_example_does_not_escape():
    tr = run_orbit(A02, B13, 1, -1, 0, max_steps=50)
    assert [st.x for st in tr.steps[:7]] == [0, 1, 2, 3, 2, 3, 2]
    assert not tr.escaped
    assert escape_certifies_failure(tr) is None


def test_irrational_example_escapes_at_four():
    tr = run_orbit(A02, B13, SQRT2, -1, 0, max_steps=100)
    xs = [st.x for st in tr.steps]
    assert xs == [qs(0), SQRT2, 2 * SQRT2, 2 * SQRT2 - 1, 3 * SQRT2 - 1]
    assert [st.s for st in tr.steps] == [None, "a", "a", "b", "a"]
    assert tr.escape_index == 4
    cert = escape_certifies_failure(tr)
    assert cert.y == 3 * SQRT2 - 1 and cert.predecessor == 2 * SQRT2 - 1 and cert.step == "a"
    assert cert.validated


def test_pure_drift():
    A = interval_set((0, 5))
    tr = run_orbit(A, A, 1, 7, 0)
    assert tr.escape_index == 6 and tr.steps[-1].x == 6
    assert escape_certifies_failure(tr).validated


def test_default_start_and_errors():
    assert run_orbit(A02, B13, 1, -1, max_steps=3).x0 == 0
    with pytest.raises(PreconditionError):
        run_orbit(A02, B13, 1, -1, 5)
    with pytest.raises(UsageError):
        run_orbit(A02, B13, 0, -1, 0)


def test_points_in_both_sets_take_the_a_step():
    tr = run_orbit(A02, B13, SQRT2, -1, 1, max_steps=1)
    assert tr.steps[0].in_A and tr.steps[0].in_B and tr.steps[1].s == "a"


# -- rotation mechanics -------------------------------------------------------------


def rotation_trace(a, steps):
    big = interval_set((0, 10**6))
    return run_orbit(big, big, a, 1, 0, max_steps=steps)


def test_irrational_rotation_gaps_shrink():
    tr = rotation_trace(SQRT2 - 1, 2**10)
    g8, g10 = projected_gap_stats(tr, upto=2**8), projected_gap_stats(tr)
    assert g10.max_gap < g8.max_gap
    for g in (g8, g10):
        assert len(g.gap_lengths) <= 3
        assert sum(circular_gaps(list(g.points), g.modulus), QuadScalar(0)) == 1


def test_rational_rotation_stays_coarse():
    tr = rotation_trace(Fraction(1, 2), 2**8)
    g = projected_gap_stats(tr)
    assert g.distinct_points == 2 and g.max_gap == Fraction(1, 2)


def test_single_step_gaps():
    tr = run_orbit(A02, B13, SQRT2, -1, 0, max_steps=1)
    g = projected_gap_stats(tr)
    assert g.distinct_points == 2
    assert sum(circular_gaps(list(g.points), g.modulus), QuadScalar(0)) == g.modulus == 1


def test_projection_moves_only_on_a_steps():
    tr = run_orbit(A02, B13, SQRT2, -1, 0, max_steps=100)
    m = QuadScalar(1)
    for prev, cur in zip(tr.steps, tr.steps[1:]):
        d = reduce_mod(cur.x - prev.x, m)
        assert d == (reduce_mod(SQRT2, m) if cur.s == "a" else 0)


# -- properties ---------------------------------------------------------------------

coeffs = small_fractions(3, (1, 2, 3))
nonzero = st.builds(QuadScalar, coeffs, coeffs).filter(lambda x: x != 0)


@settings(max_examples=300)
@given(interval_sets(3), interval_sets(3), nonzero, nonzero)
def test_orbit_invariants(A, B, a, b):
    if not A:
        return
    tr = run_orbit(A, B, a, b, max_steps=200)
    for prev, cur in zip(tr.steps, tr.steps[1:]):
        assert cur.s == ("a" if contains(A, prev.x) else "b")
        assert cur.x == prev.x + (a if cur.s == "a" else b)
        assert cur.in_A == contains(A, cur.x) and cur.in_B == contains(B, cur.x)
    U = union(A, B)
    outside = [st.n for st in tr.steps if not contains(U, st.x)]
    assert tr.escape_index == (outside[0] if outside else None)
    verdict = check_muranov_real(A, B, a, b, 0)
    if verdict.union_inclusion_holds:
        assert not tr.escaped
    if tr.escaped:
        assert escape_certifies_failure(tr).validated


@given(st.lists(st.integers(-40, 40), min_size=4, max_size=4, unique=True), st.integers(0, 3))
def test_no_escape_on_example_family(pts, shift):
    u, v, w, t = sorted(Fraction(p, 3) + shift * SQRT2 for p in pts)
    ex = interval_example(u, v, w, t)
    assert not run_orbit(ex["A"], ex["B"], ex["a"], ex["b"], max_steps=2000).escaped


def test_membership_near_endpoint_uses_exact_sign():
    # 665857/470832 exceeds sqrt2 by about 1.6e-12, below the float tolerance
    p = Fraction(665857, 470832)
    A = interval_set((0, p))
    tr = run_orbit(A, interval_set((p + 1, p + 2)), SQRT2, 1, 0, max_steps=2)
    assert tr.steps[1].in_A and contains(A, SQRT2)
    tr = run_orbit(interval_set((0, SQRT2)), interval_set((5, 6)), p, 1, 0, max_steps=1)
    assert not tr.steps[1].in_A and tr.escaped
