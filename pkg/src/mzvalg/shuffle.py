"""The shuffle product on Q<x,y>."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import NCPoly, bilinear, rank_over_rationals
from .words import Word, lyndon_multisets


@lru_cache(maxsize=None)
def _shuffle_words(u: Word, v: Word) -> dict[Word, Fraction]:
    # 1 sh w = w sh 1 = w;  au sh bv = a(u sh bv) + b(au sh v)
    if not u:
        return {v: Fraction(1)}
    if not v:
        return {u: Fraction(1)}
    out: dict[Word, Fraction] = {}
    for w, c in _shuffle_words(u[1:], v).items():
        key = u[0] + w
        out[key] = out.get(key, 0) + c
    for w, c in _shuffle_words(u, v[1:]).items():
        key = v[0] + w
        out[key] = out.get(key, 0) + c
    return out


def shuffle_words(u: Word, v: Word) -> dict[Word, Fraction]:
    return dict(_shuffle_words(u, v))


shuffle = bilinear(_shuffle_words)


def shuffle_power(p, n: int) -> NCPoly:
    out = NCPoly.one()
    for _ in range(n):
        out = shuffle(out, p)
    return out


def shuffle_right_recursion_check(w1: Word, a: str, w2: Word, b: str) -> bool:
    """Check w1a sh w2b = (w1 sh w2b)a + (w1a sh w2)b."""
    lhs = shuffle(w1 + a, w2 + b)
    rhs = shuffle(w1, w2 + b) * NCPoly.word(a) + shuffle(w1 + a, w2) * NCPoly.word(b)
    return lhs == rhs


def bbbl_convolution(n: int) -> NCPoly:
    """sum_{r=-n}^{n} (-1)^r (xy)^(n-r) sh (xy)^(n+r)  -  4^n (x^2y^2)^n.

    Identically zero.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    lhs = NCPoly.zero()
    for r in range(-n, n + 1):
        term = shuffle("xy" * (n - r), "xy" * (n + r))
        lhs = lhs + term.scale((-1) ** (r % 2))
    return lhs - NCPoly.word("xxyy" * n, 4 ** n)


def lyndon_monomials(degree: int, product=shuffle) -> list[NCPoly]:
    """Products (under ``product``) of multisets of Lyndon words of total weight ``degree``."""
    out = []
    for ms in lyndon_multisets(degree):
        p = NCPoly.one()
        for w in ms:
            p = product(p, w)
        out.append(p)
    return out


def lyndon_span_rank(degree: int, product=shuffle) -> int:
    return rank_over_rationals(lyndon_monomials(degree, product))
