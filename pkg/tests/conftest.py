import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from hilbertstar.functional import PolyFunctional, eta, make_monomial, x

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.builds(
    Fraction,
    st.integers(-6, 6),
    st.integers(1, 5),
)
nonzero_rationals = rationals.filter(bool)
slots = st.builds(lambda leg, i: (x if leg else eta)(i), st.booleans(), st.integers(1, 4))
monomials = st.dictionaries(slots, st.integers(1, 3), max_size=3).map(make_monomial)


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.dictionaries(monomials, rationals, max_size=max_terms))
    return PolyFunctional(terms)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
