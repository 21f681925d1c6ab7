"""Hypothesis strategies for small exact objects."""
from fractions import Fraction

from hypothesis import strategies as st

from pdflat.poly import Poly, monomials

small_ints = st.integers(min_value=-9, max_value=9)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=5))


@st.composite
def forms(draw, n=None, d=None, max_n=3, max_d=4, coeffs=small_ints, max_terms=6):
    """A homogeneous polynomial (possibly zero) of small size."""
    n = n if n is not None else draw(st.integers(1, max_n))
    d = d if d is not None else draw(st.integers(0, max_d))
    mons = monomials(n, d)
    chosen = draw(st.lists(st.sampled_from(mons), max_size=max_terms, unique=True))
    return Poly(n, {m: draw(coeffs) for m in chosen})


@st.composite
def multi_index(draw, n, max_deg=3):
    return tuple(draw(st.integers(0, max_deg)) for _ in range(n))


@st.composite
def dense_grids(draw, max_rows=6, max_cols=6, entries=st.integers(-3, 3)):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(entries) for _ in range(c)] for _ in range(r)]
