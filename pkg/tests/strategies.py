from fractions import Fraction

from hypothesis import strategies as st

from classes.conlinear_class import OrderingCone, UpperSet
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal
from classes.instance_class import generate_random

ORTHANT2 = OrderingCone.orthant(2)
LINE = OrderingCone.orthant(1)

# normals of C⁻ for the orthant in R²
ORTHANT2_NORMALS = [(-1, 0), (0, -1), (-1, -1), (-1, -2), (-2, -1)]

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)

extreals = st.one_of(
    st.just(PLUS_INF),
    st.just(MINUS_INF),
    small_fractions.map(ExtReal.of),
)


@st.composite
def orthant_sets(draw, allow_special: bool = False):
    """Proper upper sets in R² over the orthant; optionally ∅ and Z."""
    if allow_special:
        kind = draw(st.sampled_from(["rows", "rows", "rows", "empty", "whole"]))
        if kind == "empty":
            return UpperSet.empty_set(ORTHANT2)
        if kind == "whole":
            return UpperSet.whole(ORTHANT2)
    picked = draw(st.lists(st.sampled_from(ORTHANT2_NORMALS), min_size=1, max_size=3, unique=True))
    rows = [(a, draw(st.integers(-3, 3))) for a in picked]
    return UpperSet.from_rows(ORTHANT2, rows)


halves = st.sampled_from([Fraction(k, 2) for k in range(-2, 3)])


@st.composite
def maps_with_directions(draw, m=None, count: int = 1):
    """Seeded random H-family map on n <= 2 with ``count`` directions; 0 is interior to every domain."""
    n = draw(st.integers(1, 2))
    dim = m or draw(st.integers(1, 3))
    f = generate_random(draw(st.integers(0, 10_000)), n, dim, draw(st.integers(1, 4)), draw(st.integers(1, 3)))
    dirs = [tuple(draw(halves) for _ in range(n)) for _ in range(count)]
    return (f, *dirs)
