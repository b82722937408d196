from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from swelling.groups import CyclicGroup, IntVectorGroup, Integers, QuadGroup, RationalGroup, S3
from swelling.intervals import normalize
from swelling.numeric import QuadScalar

settings.register_profile(
    "default", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def small_fractions(bound: int, dens=(1, 2, 3, 4, 5, 7, 12)):
    """Numerator in ±12·bound over a denominator from a short list; much cheaper than st.fractions."""
    return st.builds(lambda n, d: Fraction(n, d), st.integers(-bound * 12, bound * 12), st.sampled_from(dens))


fractions = small_fractions(50)
scalars = st.builds(QuadScalar, fractions, fractions)
nonzero_scalars = scalars.filter(lambda x: x != 0)


@st.composite
def interval_sets(draw, max_intervals=4):
    """Random canonical interval sets with small Q(sqrt2) endpoints."""
    coeff = small_fractions(6, (1, 2, 4))
    n = draw(st.integers(0, max_intervals))
    pairs = []
    for _ in range(n):
        x = QuadScalar(draw(coeff), draw(coeff))
        y = QuadScalar(draw(coeff), draw(coeff))
        pairs.append((min(x, y), max(x, y)))
    return normalize(pairs)


# (group, element strategy) pairs for property tests
CARRIERS = {
    "Zmod:6": (CyclicGroup(6), st.integers(0, 5)),
    "Zmod:7": (CyclicGroup(7), st.integers(0, 6)),
    "Z": (Integers(), st.integers(-30, 30)),
    "Zn:2": (IntVectorGroup(2), st.tuples(st.integers(-9, 9), st.integers(-9, 9))),
    "S3": (S3, st.sampled_from(S3.elements())),
    "Q": (RationalGroup(), small_fractions(10)),
    "QSqrt2": (QuadGroup(), st.builds(QuadScalar, small_fractions(5, (1, 2, 3, 6)), small_fractions(5, (1, 2, 3, 6)))),
}




def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
