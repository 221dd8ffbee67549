import itertools

import pytest
from hypothesis import given

from mzvalg.words import (ParseError, DomainError, all_words, coarsenings, composition_of_word,
                          compositions, conjugate, format_composition, format_word, gradings,
                          height, is_admissible, is_lyndon, lyndon_words, parse_composition,
                          parse_word, refinements, refines, reverse, tau, word_less,
                          word_of_composition, z)

from .conftest import compositions as comps, words


def test_parse_word_expands_powers():
    assert parse_word("x^2y") == "xxy"
    assert parse_word("x y^3 x") == "xyyyx"
    assert parse_word("1") == ""


@pytest.mark.parametrize("text,offset", [("xz", 1), ("x^", 1), ("x^0y", 2), ("q", 0)])
def test_parse_word_reports_offset(text, offset):
    with pytest.raises(ParseError) as err:
        parse_word(text)
    assert err.value.offset == offset


def test_parse_composition():
    assert parse_composition("(4, 2,1)") == (4, 2, 1)
    assert parse_composition("()") == ()
    for bad in ["4,2", "(4,0)", "(a)", "(1,,2)"]:
        with pytest.raises(ParseError):
            parse_composition(bad)


@given(comps())
def test_composition_text_round_trip(I):
    assert parse_composition(format_composition(I)) == I


@given(words(0, 8))
def test_word_text_round_trip(w):
    assert parse_word(format_word(w)) == w


def test_gradings_examples():
    assert gradings("xxyxy") == (5, 2, 3, 2)
    assert height("yx") == 0
    assert z(3) == "xxy"


def test_word_composition_bijection():
    assert word_of_composition((3, 1, 2)) == "xxyyxy"
    assert composition_of_word("xxyyxy") == (3, 1, 2)
    with pytest.raises(DomainError):
        composition_of_word("xyx")
    for n in range(1, 8):
        for I in compositions(n):
            assert composition_of_word(word_of_composition(I)) == I


def test_tau_is_involution_and_swaps_gradings():
    for n in range(9):
        for w in all_words(n):
            assert tau(tau(w)) == w
            wt, length, colength, ht = gradings(w)
            assert gradings(tau(w)) == (wt, colength, length, ht)


def test_tau_preserves_admissibility():
    assert tau("xxy") == "xyy"
    for n in range(2, 8):
        for w in all_words(n):
            assert is_admissible(w) == is_admissible(tau(w))


def test_word_order_matches_rules():
    assert word_less("x", "y")
    assert word_less("xy", "xyx")  # proper prefix first
    assert not word_less("xy", "xy")
    for n in range(5):
        ws = list(all_words(n))
        for a, b in itertools.combinations(ws, 2):
            assert word_less(a, b) != word_less(b, a)


def test_lyndon_count_matches_brute_force():
    def brute(n):
        return sorted(w for w in ("".join(p) for p in itertools.product("xy", repeat=n))
                      if all(w < w[i:] for i in range(1, n)))

    for n in range(1, 9):
        assert lyndon_words(n) == brute(n)
    assert lyndon_words(3) == ["xxy", "xyy"]
    assert is_lyndon("x") and not is_lyndon("xyxy")


def test_composition_counts():
    for n in range(1, 11):
        assert len(list(compositions(n))) == 2 ** (n - 1)
    for I in compositions(6):
        assert len(coarsenings(I)) == 2 ** (len(I) - 1)


def test_conjugate_properties():
    assert conjugate((1, 2)) == (2, 1)
    assert conjugate((3,)) == (1, 1, 1)
    for n in range(1, 10):
        for I in compositions(n):
            J = conjugate(I)
            assert sum(J) == n
            assert len(I) + len(J) == n + 1
            assert conjugate(J) == I


def test_conjugate_reverses_refinement():
    for n in range(1, 8):
        cs = list(compositions(n))
        for I in cs:
            for J in cs:
                assert refines(I, J) == refines(conjugate(J), conjugate(I))


def test_reverse_preserves_refinement():
    for n in range(1, 7):
        for I in compositions(n):
            for J in coarsenings(I):
                assert refines(reverse(I), reverse(J))
            assert sorted(refinements(I)) == sorted(J for J in compositions(n) if refines(J, I))
