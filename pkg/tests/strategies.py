"""Hypothesis strategies for exact series."""

from gmpy2 import mpq
from hypothesis import strategies as st

from kdonaldson.gaussian import GaussianRational
from kdonaldson.series import TruncatedSeries

small_q = st.builds(lambda n, d: mpq(n, d), st.integers(-9, 9), st.integers(1, 6))
gaussian = st.builds(GaussianRational, small_q, small_q)
nonzero_gaussian = gaussian.filter(lambda g: not g.is_zero())


@st.composite
def series(draw, L=3, width=3, const="any", cap=12):
    """Series through Lambda^L with p-exponents in [-width, width] for d > 0.

    ``const``: ``"unit"`` (Lambda^0 = 1), ``"zero"`` (no Lambda^0 part), or
    ``"any"`` (Lambda^0 = c + c' p with c != 0).
    """
    terms = {}
    for d in range(1, L + 1):
        keys = draw(st.lists(st.integers(-width, width), max_size=2 * width + 1, unique=True))
        for k in keys:
            terms[(d, k)] = draw(gaussian)
    if const == "unit":
        terms[(0, 0)] = GaussianRational(1)
    elif const == "any":
        terms[(0, 0)] = draw(nonzero_gaussian)
        terms[(0, 1)] = draw(gaussian)
    caps = [cap] + [cap - d for d in range(1, L + 1)]
    return TruncatedSeries.from_terms(terms, L, caps=caps)
