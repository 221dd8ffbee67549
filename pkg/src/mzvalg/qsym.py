"""Harmonic (stuffle) product, quasi-symmetric functions and their Hopf structure.

Words of H^1 (those ending in y) are written in the letters z_k = x^(k-1)y.
The isomorphism ``phi`` onto QSym reverses the z-sequence:
``phi(z_{i1}...z_{ik}) = M_(ik,...,i1)``.  Everywhere else in this module a
word and a composition are identified directly, without reversal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .algebra import (NCPoly, TensorPoly, algebra_hom, as_poly, bilinear,
                      format_rational, solve_rational)
from .words import (Composition, DomainError, ParseError, Word, block_splittings, coarsenings,
                    composition_of_word, compositions, format_composition,
                    in_H1, parse_composition, refinements, reverse, word_of_composition, z,
                    z_factors)


# --- the harmonic product on words -----------------------------------------

def _split_first_y(w: Word) -> tuple[int, Word]:
    """w = x^p y rest  ->  (p, rest)."""
    p = w.index("y")
    return p, w[p + 1:]


@lru_cache(maxsize=None)
def _star_words(u: Word, v: Word) -> dict[Word, Fraction]:
    if not u:
        return {v: Fraction(1)}
    if not v:
        return {u: Fraction(1)}
    # x^n * w = w * x^n = w x^n
    if "y" not in u:
        return {v + u: Fraction(1)}
    if "y" not in v:
        return {u + v: Fraction(1)}
    p, u1 = _split_first_y(u)
    q, v1 = _split_first_y(v)
    out: dict[Word, Fraction] = {}

    def put(prefix: Word, terms: Mapping[Word, Fraction]) -> None:
        for w, c in terms.items():
            key = prefix + w
            out[key] = out.get(key, 0) + c

    put("x" * p + "y", _star_words(u1, v))
    put("x" * q + "y", _star_words(u, v1))
    put("x" * (p + q + 1) + "y", _star_words(u1, v1))
    return {w: c for w, c in out.items() if c}


def star_words(u: Word, v: Word) -> dict[Word, Fraction]:
    return dict(_star_words(u, v))


star = bilinear(_star_words)


def star_power(p, n: int) -> NCPoly:
    out = NCPoly.one()
    for _ in range(n):
        out = star(out, p)
    return out


@lru_cache(maxsize=None)
def quasi_shuffle(I: Composition, J: Composition) -> dict[Composition, int]:
    """Quasi-shuffle of compositions: the M-basis product M_I M_J."""
    if not I:
        return {J: 1}
    if not J:
        return {I: 1}
    out: dict[Composition, int] = {}
    for head, left, right in ((I[0], I[1:], J), (J[0], I, J[1:]), (I[0] + J[0], I[1:], J[1:])):
        for K, c in quasi_shuffle(left, right).items():
            key = (head,) + K
            out[key] = out.get(key, 0) + c
    return out


# --- QSym elements ---------------------------------------------------------

BASES = ("M", "F", "E")


class QSymExpr:
    """A quasi-symmetric function as a linear combination in one of the bases M, F, E.

    Equality compares the underlying functions, so ``M(2) == F(2) - F(1,1)``.
    """

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: str, terms: Mapping[Composition, object] | Iterable = ()):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Composition, Fraction] = {}
        for I, c in items:
            c = Fraction(c)
            if c:
                I = tuple(I)
                acc[I] = acc.get(I, Fraction(0)) + c
        self.basis = basis
        self._terms = {I: c for I, c in acc.items() if c}

    @classmethod
    def single(cls, basis: str, I: Composition, coeff=1) -> "QSymExpr":
        return cls(basis, {tuple(I): coeff})

    @classmethod
    def one(cls, basis: str = "M") -> "QSymExpr":
        return cls(basis, {(): 1})

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[Composition, Fraction]:
        return dict(self._terms)

    def coeff(self, I: Composition) -> Fraction:
        return self._terms.get(tuple(I), Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, QSymExpr):
            return NotImplemented
        if self.basis == other.basis:
            return self._terms == other._terms
        return convert_basis(self, "M")._terms == convert_basis(other, "M")._terms

    __hash__ = None

    def _coerce(self, other: "QSymExpr") -> "QSymExpr":
        return other if other.basis == self.basis else convert_basis(other, self.basis)

    def __add__(self, other: "QSymExpr") -> "QSymExpr":
        other = self._coerce(other)
        out = dict(self._terms)
        for I, c in other._terms.items():
            out[I] = out.get(I, 0) + c
        return QSymExpr(self.basis, out)

    def __neg__(self):
        return QSymExpr(self.basis, {I: -c for I, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSymExpr":
        return QSymExpr(self.basis, {I: c * v for I, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, QSymExpr):
            return qsym_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = scale

    def support(self) -> list[Composition]:
        return sorted(self._terms, key=lambda I: (sum(I), len(I), I))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for I in self.support():
            c = self._terms[I]
            body = f"{format_rational(abs(c))}*{self.basis}{format_composition(I)}"
            parts.append(body if not parts and c > 0 else
                         ("-" + body if not parts else ("+ " if c > 0 else "- ") + body))
        return " ".join(parts)

    def __repr__(self):
        return f"QSymExpr({str(self)!r})"

    def to_json(self) -> dict:
        return {"basis": self.basis,
                "terms": [{"coeff": format_rational(self._terms[I]), "composition": list(I)}
                          for I in self.support()]}

    @classmethod
    def from_json(cls, data: dict) -> "QSymExpr":
        return cls(data["basis"], ((tuple(t["composition"]), Fraction(t["coeff"]))
                                   for t in data["terms"]))


def M(*parts: int) -> QSymExpr:
    return QSymExpr.single("M", parts)


def F(*parts: int) -> QSymExpr:
    return QSymExpr.single("F", parts)


def E(*parts: int) -> QSymExpr:
    return QSymExpr.single("E", parts)


_QSYM_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([MFE])\s*(\([^)]*\))\s*")


def parse_qsym(text: str) -> QSymExpr:
    """Parse ``"1/2*M(3,2) - F(1,1) + ..."``; all terms must share one basis."""
    pos, terms, basis = 0, {}, None
    while pos < len(text):
        m = _QSYM_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("expected a term like c*M(i1,...,ik)", text, pos)
        if basis is None:
            basis = m.group(3)
        elif m.group(3) != basis:
            raise ParseError("all terms must use the same basis", text, m.start(3))
        if pos > 0 and m.group(1) is None:
            raise ParseError("expected '+' or '-' between terms", text, pos)
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        I = parse_composition(m.group(4))
        terms[I] = terms.get(I, 0) + sign * c
        pos = m.end()
    if basis is None:
        raise ParseError("empty expression", text, 0)
    return QSymExpr(basis, terms)


# --- basis changes ---------------------------------------------------------

def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _to_M(basis: str, I: Composition) -> dict[Composition, int]:
    if basis == "M":
        return {I: 1}
    if basis == "F":
        return {J: 1 for J in refinements(I)}
    return {J: 1 for J in coarsenings(I)}


def _from_M(basis: str, I: Composition) -> dict[Composition, int]:
    # Moebius inversion on the Boolean lattice of partial-sum sets
    if basis == "M":
        return {I: 1}
    if basis == "F":
        return {J: _sign(len(J) - len(I)) for J in refinements(I)}
    return {J: _sign(len(I) - len(J)) for J in coarsenings(I)}


def convert_basis(e: QSymExpr, target: str) -> QSymExpr:
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if e.basis == target:
        return e
    in_M: dict[Composition, Fraction] = {}
    for I, c in e.items():
        for J, d in _to_M(e.basis, I).items():
            in_M[J] = in_M.get(J, 0) + c * d
    if target == "M":
        return QSymExpr("M", in_M)
    out: dict[Composition, Fraction] = {}
    for I, c in in_M.items():
        if not c:
            continue
        for J, d in _from_M(target, I).items():
            out[J] = out.get(J, 0) + c * d
    return QSymExpr(target, out)


def qsym_mul(e1: QSymExpr, e2: QSymExpr) -> QSymExpr:
    """Product; computed in M and returned in the basis of ``e1``."""
    a, b = convert_basis(e1, "M"), convert_basis(e2, "M")
    out: dict[Composition, Fraction] = {}
    for I, c in a.items():
        for J, d in b.items():
            cd = c * d
            for K, m in quasi_shuffle(I, J).items():
                out[K] = out.get(K, 0) + cd * m
    return convert_basis(QSymExpr("M", out), e1.basis)


def qsym_product(factors: Iterable[QSymExpr], basis: str = "M") -> QSymExpr:
    out = QSymExpr.one(basis)
    for f in factors:
        out = qsym_mul(out, f)
    return out


def counit(e: QSymExpr) -> Fraction:
    return convert_basis(e, "M").coeff(())


def T_reverse(e: QSymExpr) -> QSymExpr:
    m = convert_basis(e, "M")
    return QSymExpr("M", ((reverse(I), c) for I, c in m.items()))


# --- phi: H^1 -> QSym --------------------------------------------------------

def _check_H1(p: NCPoly) -> None:
    for w in p:
        if not in_H1(w):
            raise DomainError(f"word {w!r} does not end in y")


def phi(p) -> QSymExpr:
    p = as_poly(p)
    _check_H1(p)
    return QSymExpr("M", ((reverse(composition_of_word(w)), c) for w, c in p.items()))


def phi_inv(e: QSymExpr) -> NCPoly:
    m = convert_basis(e, "M")
    return NCPoly((word_of_composition(reverse(I)), c) for I, c in m.items())


def as_words(e: QSymExpr) -> NCPoly:
    """Direct identification M_I <-> w(I), no reversal."""
    m = convert_basis(e, "M")
    return NCPoly((word_of_composition(I), c) for I, c in m.items())


def from_words(p) -> QSymExpr:
    p = as_poly(p)
    _check_H1(p)
    return QSymExpr("M", ((composition_of_word(w), c) for w, c in p.items()))


def expand_in_variables(e: QSymExpr, n: int) -> dict[tuple[int, ...], Fraction]:
    """Expand in t_1..t_n; keys are exponent vectors of length n.

    M_(p1..pk) = sum over i1 < ... < ik of t_{i1}^p1 ... t_{ik}^pk.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    m = convert_basis(e, "M")
    out: dict[tuple[int, ...], Fraction] = {}
    for I, c in m.items():
        for idx in combinations(range(n), len(I)):
            expo = [0] * n
            for i, part in zip(idx, I):
                expo[i] = part
            key = tuple(expo)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def commutative_mul(a: Mapping[tuple[int, ...], Fraction],
                    b: Mapping[tuple[int, ...], Fraction]) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(i + j for i, j in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


# --- Hopf structure --------------------------------------------------------

def coproduct(p) -> TensorPoly:
    """Deconcatenation of z-factors on H^1."""
    p = as_poly(p)
    _check_H1(p)
    out: dict = {}
    for w, c in p.items():
        factors = z_factors(w)
        for j in range(len(factors) + 1):
            key = ("".join(factors[:j]), "".join(factors[j:]))
            out[key] = out.get(key, 0) + c
    return TensorPoly(out)


def _antipode_concatsplit_M(I: Composition) -> QSymExpr:
    out = QSymExpr("M")
    for blocks in block_splittings(I):
        term = qsym_product(M(*b) for b in blocks).scale(_sign(len(blocks)))
        out = out + term
    return out


def antipode(e: QSymExpr, formula: str = "dual") -> QSymExpr:
    """Antipode of QSym.

    ``concatsplit``: S(M_I) = sum over block splittings I = I1..Il of
    (-1)^l M_I1 ... M_Il  (result in M).
    ``dual``: S(M_I) = (-1)^len(I) E_(reversed I)  (result in E).
    """
    m = convert_basis(e, "M")
    if formula == "concatsplit":
        out = QSymExpr("M")
        for I, c in m.items():
            out = out + _antipode_concatsplit_M(I).scale(c)
        return out
    if formula == "dual":
        return QSymExpr("E", ((reverse(I), c * _sign(len(I))) for I, c in m.items()))
    raise ValueError(f"unknown antipode formula {formula!r}")


def hopf_antipode_residual(I: Composition, formula: str = "dual") -> NCPoly:
    """mu (S (x) id) Delta - eta epsilon, evaluated on phi^-1(M_I) in H^1.

    The product is the harmonic product on words; zero when S is an antipode.
    """
    u = phi_inv(M(*I))
    total = NCPoly.zero()
    for (a, b), c in coproduct(u).items():
        left = phi_inv(antipode(phi(a), formula))
        total = total + star(left, b).scale(c)
    return total - NCPoly.one().scale(1 if not I else 0)


_psi_word = algebra_hom(NCPoly({"x": 1, "y": 1}), NCPoly({"y": -1}))


def psi(p) -> NCPoly:
    """Automorphism x -> x + y, y -> -y of Q<x,y>."""
    return _psi_word(p)


def psi_qsym(e: QSymExpr) -> QSymExpr:
    """The involution induced by ``psi`` under M_I <-> w(I); result in M."""
    return from_words(psi(as_words(e)))


# --- symmetric functions ---------------------------------------------------

def sym_generator(kind: str, n: int) -> NCPoly:
    """phi^-1 of e_n, h_n or p_n as a word polynomial (reversal is harmless here)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if kind == "e":
        return NCPoly.word("y" * n)
    if kind == "p":
        if n == 0:
            raise ValueError("p_0 is not defined")
        return NCPoly.word(z(n))
    if kind == "h":
        return NCPoly({word_of_composition(I): 1 for I in compositions(n)})
    raise ValueError(f"unknown generator kind {kind!r}")


def sym_generator_qsym(kind: str, n: int) -> QSymExpr:
    return phi(sym_generator(kind, n))


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Integer partitions of n, parts weakly decreasing."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


@dataclass
class SymPowerExpr:
    """Polynomial in the power sums; keys are partitions (p_lambda = prod p_i)."""

    terms: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {tuple(k): Fraction(v) for k, v in self.terms.items() if v}

    def to_qsym(self) -> QSymExpr:
        out = QSymExpr("M")
        for lam, c in self.terms.items():
            out = out + qsym_product(M(i) for i in lam).scale(c)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam in sorted(self.terms, key=lambda l: (sum(l), [-i for i in l])):
            c = self.terms[lam]
            mono = "*".join(
                f"p{i}" if lam.count(i) == 1 else f"p{i}^{lam.count(i)}"
                for i in sorted(set(lam), reverse=True)) or "1"
            body = f"{format_rational(abs(c))}*{mono}"
            parts.append(body if not parts and c > 0 else
                         ("-" + body if not parts else ("+ " if c > 0 else "- ") + body))
        return " ".join(parts)


class NotSymmetricError(ValueError):
    def __init__(self, mono_a, coeff_a, mono_b, coeff_b):
        super().__init__(f"not symmetric: coefficient of {mono_a} is {coeff_a} "
                         f"but of {mono_b} is {coeff_b}")
        self.witness = ((mono_a, coeff_a), (mono_b, coeff_b))


def to_power_sums(e: QSymExpr) -> SymPowerExpr:
    m = convert_basis(e, "M")
    if not m:
        return SymPowerExpr()
    degree = max(sum(I) for I in m.terms)
    nvars = max(degree, max(len(I) for I in m.terms)) + 1
    poly = expand_in_variables(m, nvars)
    # adjacent transpositions generate the symmetric group
    for mono, c in poly.items():
        for i in range(nvars - 1):
            swapped = mono[:i] + (mono[i + 1], mono[i]) + mono[i + 2:]
            if poly.get(swapped, 0) != c:
                raise NotSymmetricError(mono, c, swapped, poly.get(swapped, Fraction(0)))
    result: dict[tuple[int, ...], Fraction] = {}
    for d in sorted({sum(I) for I in m.terms}):
        lams = partitions(d)
        columns = [qsym_product(M(i) for i in mu) for mu in lams]
        matrix = [[col.coeff(lam) for col in columns] for lam in lams]
        rhs = [m.coeff(lam) for lam in lams]
        sol = solve_rational(matrix, rhs)
        assert sol is not None, "power sums span the symmetric functions"
        for mu, c in zip(lams, sol):
            if c:
                result[mu] = c
    return SymPowerExpr(result)


# --- H^1 = H^0[y] ------------------------------------------------------------

def _leading_ys(w: Word) -> int:
    return len(w) - len(w.lstrip("y"))


def _product(kind: str):
    if kind == "star":
        return star
    if kind == "shuffle":
        from .shuffle import shuffle
        return shuffle
    raise ValueError(f"unknown product {kind!r}")


@lru_cache(maxsize=None)
def _decompose_word(w: Word, kind: str = "star") -> tuple[tuple[int, NCPoly], ...]:
    m = _leading_ys(w)
    if m == 0:
        return ((0, NCPoly.word(w)),)
    # y . y^(m-1)v = m y^m v + R, where R has fewer than m leading y's;
    # this holds for both the harmonic and the shuffle product
    rest = w[1:]
    prod = _product(kind)("y", rest)
    assert prod.coeff(w) == m
    remainder = prod - NCPoly.word(w, m)
    out: dict[int, NCPoly] = {}
    for j, c in _decompose_word(rest, kind):
        out[j + 1] = out.get(j + 1, NCPoly.zero()) + c
    for j, c in _decompose_poly(remainder, kind).items():
        out[j] = out.get(j, NCPoly.zero()) - c
    inv = Fraction(1, m)
    return tuple((j, c.scale(inv)) for j, c in sorted(out.items()) if c)


def _decompose_poly(p: NCPoly, kind: str = "star") -> dict[int, NCPoly]:
    out: dict[int, NCPoly] = {}
    for w, a in p.items():
        for j, c in _decompose_word(w, kind):
            out[j] = out.get(j, NCPoly.zero()) + c.scale(a)
    return {j: c for j, c in out.items() if c}


def decompose_H1_over_H0(p, product: str = "star") -> list[tuple[NCPoly, int]]:
    """Write p in H^1 as sum_j c_j . y^j (powers under ``product``) with every c_j admissible.

    ``product`` is "star" (the harmonic product) or "shuffle".
    """
    p = as_poly(p)
    _check_H1(p)
    return [(c, j) for j, c in sorted(_decompose_poly(p, product).items())]


def recompose(parts: Iterable[tuple[NCPoly, int]], product: str = "star") -> NCPoly:
    mul = _product(product)
    out = NCPoly.zero()
    for c, j in parts:
        power = NCPoly.one()
        for _ in range(j):
            power = mul(power, "y")
        out = out + mul(c, power)
    return out
