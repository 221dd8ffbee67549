"""QSym acting on Q<x,y>: derivations D_n, sigma_t, Kaneko's partial_n, cyclic derivations."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import (NCPoly, TensorPoly, TruncSeries, Operator, antiauto_tau, as_poly,
                      as_series, conjugate_by_tau, derivation_from_images, exp_operator_series,
                      operator_commutator)
from .qsym import star, sym_generator
from .words import DomainError, Word, all_words, in_H1, z, z_factors


# --- the action u . w --------------------------------------------------------

@lru_cache(maxsize=None)
def _dot_words(u: Word, w: Word) -> NCPoly:
    # u.(a w') = sum over Delta(u) = u'(x)u'' of (u'.a)(u''.w'); u'.a survives
    # only for u' = 1, or u' = z_k (the first z-factor of u) with a = y.
    if not u:
        return NCPoly.word(w)
    if not w:
        return NCPoly.zero()
    a, rest = w[0], w[1:]
    out = NCPoly.word(a) * _dot_words(u, rest)
    if a == "y":
        k = u.index("y") + 1
        out = out + NCPoly.word("x" * k + "y") * _dot_words(u[k:], rest)
    return out


def dot(u, w) -> NCPoly:
    """The action of u in H^1 on w in Q<x,y>."""
    u, w = as_poly(u), as_poly(w)
    for v in u:
        if not in_H1(v):
            raise DomainError(f"acting element has word {v!r} not ending in y")
    out: dict[Word, Fraction] = {}
    for v, a in u.items():
        for t, b in w.items():
            for r, c in _dot_words(v, t).items():
                out[r] = out.get(r, 0) + a * b * c
    return NCPoly(out)


def dot_by_filter(u, w) -> NCPoly:
    """Terms of u * w with the y-degree of w (w must be homogeneous in y)."""
    u, w = as_poly(u), as_poly(w)
    out = NCPoly.zero()
    for t, b in w.items():
        ell = t.count("y")
        prod = star(u, t)
        out = out + NCPoly((r, c * b) for r, c in prod.items() if r.count("y") == ell)
    return out


def dot_by_coproduct(u, w) -> NCPoly:
    """Module-algebra rule applied to the last-letter split w = w1 a.

    Splits from the right, while ``dot`` peels letters from the left, so
    the two are independent evaluations of the same rule.
    """
    u, w = as_poly(u), as_poly(w)
    out = NCPoly.zero()
    for v, a in u.items():
        for t, b in w.items():
            out = out + _dot_right(v, t).scale(a * b)
    return out


@lru_cache(maxsize=None)
def _dot_right(u: Word, w: Word) -> NCPoly:
    if not u:
        return NCPoly.word(w)
    if not w:
        return NCPoly.zero()
    head, a = w[:-1], w[-1]
    factors = z_factors(u)
    out = NCPoly.zero()
    for j in range(len(factors) + 1):
        u1, u2 = "".join(factors[:j]), "".join(factors[j:])
        last = _dot_letter(u2, a)
        if last:
            out = out + _dot_right(u1, head) * last
    return out


def _dot_letter(u: Word, a: str) -> NCPoly:
    if not u:
        return NCPoly.word(a)
    if a == "y" and u.count("y") == 1:
        return NCPoly.word("x" * len(u) + "y")
    return NCPoly.zero()


# --- D_n and friends -----------------------------------------------------------

def D_n(w, n: int = 1) -> NCPoly:
    """D_n(w) = z_n . w."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return dot(z(n), w)


@lru_cache(maxsize=None)
def D_leibniz(n: int = 1) -> Operator:
    """D_n as the derivation x -> 0, y -> x^n y."""
    return derivation_from_images(NCPoly.zero(), NCPoly.word("x" * n + "y"))


def D_op(n: int = 1) -> Operator:
    return lambda p: D_n(p, n)


def Dbar_op(n: int = 1) -> Operator:
    return conjugate_by_tau(D_op(n))


def Dbar_n(w, n: int = 1) -> NCPoly:
    return Dbar_op(n)(w)


@lru_cache(maxsize=None)
def kaneko_op(n: int) -> Operator:
    """partial_n(x) = -partial_n(y) = x (x+y)^(n-1) y."""
    if n < 1:
        raise ValueError("n must be >= 1")
    image = NCPoly.word("x") * NCPoly({"x": 1, "y": 1}) ** (n - 1) * NCPoly.word("y")
    return derivation_from_images(image, -image)


def kaneko_partial(w, n: int) -> NCPoly:
    return kaneko_op(n)(w)


# --- sigma_t ---------------------------------------------------------------

def _act_series(kind: str, sign: int, s, K: int) -> TruncSeries:
    """(sum_n sign^n g_n t^n) . s  with g = h or e."""
    s = as_series(s, K)
    out = [NCPoly.zero()] * (s.order + 1)
    for n in range(s.order + 1):
        g = sym_generator(kind, n).scale(sign ** n)
        for k in range(n, s.order + 1):
            if s[k - n]:
                out[k] = out[k] + dot(g, s[k - n])
    return TruncSeries(out, s.order)


def sigma_t(w, K: int) -> TruncSeries:
    """H(t) . w, through t^K."""
    return _act_series("h", 1, w, K)


def sigma_t_inv(w, K: int) -> TruncSeries:
    """E(-t) . w, through t^K."""
    return _act_series("e", -1, w, K)


def sigma_bar_t(w, K: int) -> TruncSeries:
    s = as_series(w, K).map(antiauto_tau)
    return sigma_t(s, K).map(antiauto_tau)


def sigma_t_exponential(w, K: int) -> TruncSeries:
    """exp(sum_n t^n/n D_n) applied to w."""
    gens = [(Fraction(1, n), D_leibniz(n)) for n in range(1, K + 1)]
    return exp_operator_series(gens, K)(w)


def kaneko_exponential(w, K: int) -> TruncSeries:
    gens = [(Fraction(1, n), kaneko_op(n)) for n in range(1, K + 1)]
    return exp_operator_series(gens, K)(w)


def verify_thm42(test, K: int) -> TruncSeries:
    """sigma_bar_t sigma_t^-1 (test) - exp(sum t^n/n partial_n)(test); zero through t^K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    lhs = sigma_bar_t(sigma_t_inv(test, K), K)
    rhs = kaneko_exponential(test, K)
    return lhs - rhs


def partial_commutator_formula(n: int) -> Operator:
    """partial_2 and partial_3 written through D_n, Dbar_n and commutators."""
    D1, D2, D3 = D_leibniz(1), D_leibniz(2), D_leibniz(3)
    B1, B2, B3 = (conjugate_by_tau(D) for D in (D1, D2, D3))
    br = operator_commutator
    if n == 2:
        return lambda p: B2(p) - D2(p) - br(B1, D1)(p)
    if n == 3:
        q = Fraction(1, 4)
        tq = Fraction(3, 4)
        return lambda p: (B3(p) - D3(p)
                          - br(B1, D2)(p).scale(tq) - br(B2, D1)(p).scale(tq)
                          + br(br(B1, D1), D1)(p).scale(q)
                          - br(B1, br(B1, D1))(p).scale(q))
    raise ValueError("only n = 2, 3 have a closed form here")


def partial_commutator_check(n: int, max_weight: int = 6) -> dict[Word, NCPoly]:
    """Nonzero residuals of the closed form minus partial_n over words of weight <= max_weight."""
    formula = partial_commutator_formula(n)
    direct = kaneko_op(n)
    bad = {}
    for d in range(max_weight + 1):
        for w in all_words(d):
            r = formula(NCPoly.word(w)) - direct(NCPoly.word(w))
            if r:
                bad[w] = r
    return bad


# --- cyclic derivations ----------------------------------------------------

def hatC(w, n: int = 1) -> TensorPoly:
    """Bimodule derivation x -> 0, y -> y (x) x^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: dict = {}
    for t, c in as_poly(w).items():
        for i, a in enumerate(t):
            if a == "y":
                key = (t[:i] + "y", "x" * n + t[i + 1:])
                out[key] = out.get(key, 0) + c
    return TensorPoly(out)


def C(w, n: int = 1) -> NCPoly:
    return hatC(w, n).mu_tilde()


def C_op(n: int = 1) -> Operator:
    return lambda p: C(p, n)


def tauCtau(w, n: int = 1) -> NCPoly:
    return conjugate_by_tau(C_op(n))(w)


def cyclic_sum_identity(n: int) -> tuple[TruncSeries, TruncSeries]:
    """With u = x + t y, return
    (C(u^(n-1)) - (n-1) t x u^(n-2) y,  tau C tau (u^(n-1)) - (n-1) x u^(n-2) y).
    Both vanish.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    K = n - 1
    u = TruncSeries([NCPoly.word("x"), NCPoly.word("y")], K)
    x, y = NCPoly.word("x"), NCPoly.word("y")
    core = x * (u ** (n - 2)) * y
    first = (u ** (n - 1)).map(C_op()) - core.shift(1).scale(n - 1)
    second = (u ** (n - 1)).map(lambda p: tauCtau(p)) - core.scale(n - 1)
    return first, second


def word_dot_xy(n: int, m: int) -> NCPoly:
    """z_n . x y^m."""
    return dot(z(n), "x" + "y" * m)

