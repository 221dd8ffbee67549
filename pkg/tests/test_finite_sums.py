import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mzvalg.finite_sums import (A, A_float, A_modp, ModPValue, Nabla, RationalSeq, S, S_modp,
                                S_seq, Sigma, SigmaInv, chi_p, congruence_suite,
                                euler_alternating_binomial, fraction_mod, is_prime,
                                nabla_recursion_f, refine_expand, rho, set_partitions,
                                symmetric_sum_sides)
from mzvalg.qsym import E, as_words, convert_basis, phi_inv, psi, star
from mzvalg.words import compositions, conjugate

from .conftest import compositions as comps, h1_words, rational_sequences


def brute(I, n, strict):
    chains = (itertools.combinations(range(n, 0, -1), len(I)) if strict
              else itertools.combinations_with_replacement(range(n, 0, -1), len(I)))
    return sum((Fraction(1, math.prod(m ** i for m, i in zip(c, I))) for c in chains), Fraction(0))


@given(comps(6), st.integers(0, 7))
def test_against_enumeration(I, n):
    assert A(I, n) == brute(I, n, True)
    assert S(I, n) == brute(I, n, False)


def test_examples():
    assert A((1,), 3) == Fraction(11, 6)
    assert A((2, 1), 2) == Fraction(1, 4)
    assert A((1, 1, 1), 2) == 0
    assert S((), 5) == 1 and A((), 0) == 1
    assert A((2,), 0) == 0


def test_refinement_expansion_small():
    assert refine_expand((4, 2, 1), 6) == 0
    assert S((4, 2, 1), 6) == A((4, 2, 1), 6) + A((6, 1), 6) + A((4, 3), 6) + A((7,), 6)


def test_float_sums_match_exact():
    for I in [(2,), (2, 1), (3, 1, 2)]:
        arr = A_float(I, 30)
        assert np.allclose(arr, [float(A(I, n)) for n in range(1, 31)], rtol=1e-13, atol=0)


@given(h1_words(5), h1_words(5), st.integers(0, 8))
def test_rho_is_star_homomorphism(u, v, n):
    assert rho(star(u, v), n) == rho(u, n) * rho(v, n)


def test_rho_sends_E_to_S():
    # rho_n = ev . T . phi_n: the two reversals cancel, so E_I is read through
    # the direct identification M_J <-> w(J); through phi^-1 it lands on S of
    # the reversed composition
    for n_w in range(1, 6):
        for I in compositions(n_w):
            for n in range(0, 9, 4):
                assert rho(as_words(E(*I)), n) == S(I, n)
                assert rho(phi_inv(convert_basis(E(*I), "M")), n) == S(I[::-1], n)


@given(rational_sequences())
def test_operator_group(values):
    a = RationalSeq.from_list(values)
    for n in range(12):
        assert Nabla(Nabla(a))(n) == a(n)
        assert Sigma(Nabla(a))(n) == Nabla(SigmaInv(a))(n)
        assert Sigma(Nabla(Sigma(Nabla(a))))(n) == a(n)
        assert SigmaInv(Sigma(a))(n) == a(n)


def test_nabla_of_ones():
    ones = RationalSeq(lambda n: 1)
    assert Nabla(ones).take(6) == [1, 0, 0, 0, 0, 0]


def test_sigma_nabla_harmonic():
    assert Sigma(Nabla(S_seq((1,))))(4) == Fraction(-25, 12)


def test_sigma_nabla_conjugate_small():
    for w in range(1, 5):
        for I in compositions(w):
            f = Sigma(Nabla(S_seq(I)))
            assert all(f(n) == -S(conjugate(I), n) for n in range(9))


def test_nabla_recursion():
    for I in [(1, 2), (2, 1), (3,)]:
        lhs, f = Nabla(S_seq(I)), Nabla(nabla_recursion_f(I))
        for n in range(1, 11):
            assert lhs(n) == f(n) / n


def test_euler_formula():
    for n in range(1, 21):
        lhs, rhs = euler_alternating_binomial(n)
        assert lhs == rhs


def test_set_partitions_are_bell_numbers():
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    for k, b in enumerate(bell):
        parts = list(set_partitions(k))
        assert len(parts) == b
        for blocks in parts:
            assert sorted(i for blk in blocks for i in blk) == list(range(k))


def test_symmetric_sums():
    lhs, rhs = symmetric_sum_sides((2, 3), 5, "S")
    assert lhs == rhs == S((2,), 5) * S((3,), 5) + S((5,), 5)
    for variant in "AS":
        assert len(set(symmetric_sum_sides((1, 1, 2), 5, variant))) == 1


def test_modp_examples():
    assert str(S_modp((1,), 5)) == "0 mod 5"
    assert S_modp((2,), 7).residue == 0
    assert chi_p("xxyyy", 11) == chi_p(psi("xxyyy"), 11)
    assert A_modp((3, 1, 1), 11).residue == fraction_mod(A((3, 1, 1), 10), 11)


def test_modp_errors():
    with pytest.raises(ValueError):
        A_modp((1,), 9)
    with pytest.raises(ValueError):
        ModPValue(1, 4)
    with pytest.raises(ValueError):
        fraction_mod(Fraction(1, 7), 7)
    assert is_prime(97) and not is_prime(91)


def test_congruence_suite_small_range():
    checks = congruence_suite(4, 31)
    assert checks and all(c.passed for c in checks)
    names = {c.name for c in checks}
    assert names >= {"length_one", "repeated_A", "reversal_A", "conjugate_S", "hook", "psi",
                     "closing_311"}
