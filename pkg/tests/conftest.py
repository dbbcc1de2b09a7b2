from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

primes = st.sampled_from([2, 3, 5])


@st.composite
def zp_rationals(draw, p=None, num=200, depth=4):
    """(p, Fraction) with denominator a power of p."""
    if p is None:
        p = draw(primes)
    k = draw(st.integers(-num, num))
    e = draw(st.integers(0, depth))
    return p, Fraction(k, p ** e)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
