import math
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mzvalg.algebra import NCPoly
from mzvalg.numeric import (EULER_GAMMA, ApproxValue, CapExceeded, MZVConfig, PrecisionWarning,
                            bernoulli, check_duality, check_kernel, check_le_murakami,
                            check_sum_theorem, gamma_one_minus_t_coefficients, le_murakami_rhs_factor,
                            make_report, mzv, verify, zeta_hat_poly, zeta_poly)
from mzvalg.qsym import star
from mzvalg.shuffle import shuffle
from mzvalg.words import DomainError, admissible_words, gradings

PI = math.pi
ZETA3 = 1.2020569031595942854
ZETA5 = 1.0369277551433699263


def within(value: ApproxValue, exact: float) -> bool:
    return abs(value.value - exact) <= value.error_bound


@pytest.mark.parametrize("tol", [1e-4, 1e-5, 1e-7, 1e-8])
@pytest.mark.parametrize("I,exact", [
    ((2,), PI ** 2 / 6), ((4,), PI ** 4 / 90), ((6,), PI ** 6 / 945), ((2, 2), PI ** 4 / 120),
    ((3, 1), PI ** 4 / 360), ((2, 1), ZETA3), ((2, 1, 1), PI ** 4 / 90),
    ((2, 2, 2, 2), PI ** 8 / math.factorial(9)), ((3, 1, 3, 1), 2 * PI ** 8 / math.factorial(10)),
    # fits plateau together below N = 8192 here, so agreement alone is not enough
    ((2, 2, 2), PI ** 6 / math.factorial(7)),
    ((4, 2), ZETA3 ** 2 - 4 * PI ** 6 / 2835), ((3, 3), (ZETA3 ** 2 - PI ** 6 / 945) / 2),
    ((4, 1), 2 * ZETA5 - PI ** 2 / 6 * ZETA3), ((2, 3), 4.5 * ZETA5 - PI ** 2 / 3 * ZETA3),
    ((2, 1, 1, 1), ZETA5), ((2, 1, 1, 1, 1), PI ** 6 / 945),
])
def test_error_bounds_are_honest(I, exact, tol):
    v = mzv(I, tol)
    assert v.error_bound <= tol
    assert within(v, exact)


def test_examples():
    assert mzv((2,)).value == pytest.approx(1.6449340668, abs=1e-9)
    assert mzv((2, 2)).value == pytest.approx(0.8117424253, abs=1e-9)
    a, b = mzv((2, 1)), mzv((3,))
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound


def test_depth_two_from_power_sums():
    z2, z4, z22 = mzv((2,), 1e-9), mzv((4,), 1e-9), mzv((2, 2), 1e-9)
    rhs = (z2 * z2 - z4) * Fraction(1, 2)
    assert abs(z22.value - rhs.value) <= z22.error_bound + rhs.error_bound


def test_domain_errors():
    with pytest.raises(DomainError):
        mzv((1, 2))
    with pytest.raises(DomainError, match="'yxy'"):
        zeta_poly(NCPoly({"xy": 1, "yxy": 1}))
    with pytest.raises(ValueError):
        mzv((2,), 0)


def test_cap_gives_warning_and_honest_bound():
    cfg = MZVConfig(cap=2 ** 12)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        v = mzv((2, 1, 1, 1), 1e-14, cfg)
    assert v.warning and v.error_bound > 1e-14
    assert any(issubclass(w.category, PrecisionWarning) for w in caught)
    assert within(v, mzv((5,), 1e-9).value)


def test_zeta_poly():
    assert zeta_poly(NCPoly.one()).value == 1
    assert zeta_poly(NCPoly.one()).error_bound == 0
    v = zeta_poly(NCPoly({"xxxy": 1, "xxyy": -4}))
    assert abs(v.value) <= v.error_bound + 1e-5
    assert within(zeta_poly("xyxy"), PI ** 4 / 120)


def test_zeta_poly_linear():
    p, q = NCPoly({"xy": 2, "xxy": -1}), NCPoly({"xxy": 3, "xyy": Fraction(1, 2)})
    a, b, c = zeta_poly(p + q), zeta_poly(p), zeta_poly(q)
    assert abs(a.value - (b + c).value) <= a.error_bound + b.error_bound + c.error_bound


def test_zeta_hat():
    assert zeta_hat_poly("y").value == pytest.approx(EULER_GAMMA, abs=1e-15)
    yy = zeta_hat_poly("yy")
    expected = 0.5 * EULER_GAMMA ** 2 - 0.5 * PI ** 2 / 6
    assert abs(yy.value - expected) <= yy.error_bound
    assert zeta_hat_poly("xxy").value == zeta_poly("xxy").value


def test_bernoulli():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert all(bernoulli(n) == 0 for n in range(3, 20, 2))


def test_gamma_coefficients():
    g = gamma_one_minus_t_coefficients(2)
    assert g[1].value == pytest.approx(EULER_GAMMA, abs=1e-15)
    assert g[2].value == pytest.approx((EULER_GAMMA ** 2 + PI ** 2 / 6) / 2, abs=1e-8)


finite = st.floats(-10, 10, allow_nan=False)
bounds = st.floats(0, 1e-3)


@given(finite, bounds, finite, bounds, st.floats(-1, 1), st.floats(-1, 1))
def test_approx_arithmetic_propagates_bounds(a, ea, b, eb, sa, sb):
    x, y = ApproxValue(a, ea), ApproxValue(b, eb)
    ta, tb = a + sa * ea, b + sb * eb  # any true values inside the bounds
    for result, true in [(x + y, ta + tb), (x - y, ta - tb), (x * y, ta * tb)]:
        assert abs(result.value - true) <= result.error_bound + 1e-12


def test_homomorphism_spot_checks():
    rng = random.Random(7)
    pool = [w for n in range(2, 4) for w in admissible_words(n)]
    for _ in range(10):
        u, v = rng.choice(pool), rng.choice(pool)
        zu, zv = zeta_poly(u), zeta_poly(v)
        prod = zu * zv
        for p in (star(u, v), shuffle(u, v)):
            z = zeta_poly(p)
            assert abs(z.value - prod.value) <= z.error_bound + prod.error_bound + 1e-5


def test_reports():
    r = check_duality("xxy")
    assert r.passed and r.params == {"w": "xxy"}
    assert check_sum_theorem(3, 2).passed
    assert check_le_murakami(2, 1).passed
    assert check_kernel("yy", "xy").passed
    assert check_kernel("yy", "xy", regularization="shuffle").passed
    bad = make_report("fake", {}, mzv((3,)), mzv((2, 2)), 1e-5)
    assert not bad.passed
    assert bad.to_json()["passed"] is False


def test_le_murakami_factor_needs_power_of_two():
    # with the literal factor (2 - 2j) the n = 1 case is off by a factor of two
    n, k = 1, 1
    words = [w for w in admissible_words(2 * n) if gradings(w)[3] == k]
    lhs = zeta_poly(NCPoly({w: (-1) ** w.count("y") for w in words}))
    literal = sum(math.comb(2 * n + 1, 2 * j) * (2 - 2 * j) * bernoulli(2 * j) for j in range(n - k + 1))
    rhs_literal = zeta_poly("xy" * n) * Fraction(literal) * (-1) ** n
    assert not make_report("le_murakami", {}, lhs, rhs_literal, 1e-5).passed
    assert le_murakami_rhs_factor(1, 1) == 1


def test_verify_dispatch_and_caps():
    assert all(r.passed for r in verify("pi_power", max_k=2))
    assert len(verify("sum_theorem", n=4, k=2)) == 1
    with pytest.raises(CapExceeded):
        verify("duality", max_weight=20)
    with pytest.raises(KeyError):
        verify("nonsense")
