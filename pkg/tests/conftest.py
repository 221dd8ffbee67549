from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from mzvalg.algebra import NCPoly

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def words(min_size=0, max_size=6):
    return st.text(alphabet="xy", min_size=min_size, max_size=max_size)


def h1_words(max_size=6):
    """Words ending in y, plus the unit."""
    return st.one_of(st.just(""), words(0, max_size - 1).map(lambda w: w + "y"))


def admissible_words(max_size=6):
    return words(0, max(max_size - 2, 0)).map(lambda w: "x" + w + "y")


def compositions(max_weight=8, min_size=0):
    return st.lists(st.integers(1, 4), min_size=min_size, max_size=max_weight).filter(
        lambda I: sum(I) <= max_weight).map(tuple)


fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)


def polys(word_strategy=None, max_terms=3):
    word_strategy = word_strategy or words(0, 4)
    return st.dictionaries(word_strategy, fractions, max_size=max_terms).map(NCPoly)


def rational_sequences(length=12):
    return st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20),
                    min_size=length, max_size=length)


__all__ = ["Fraction", "words", "h1_words", "admissible_words", "compositions", "fractions",
           "polys", "rational_sequences"]
