"""Exact-rational elements of Q<x,y>, tensors, truncated t-series, operators.

Everything here is exact: coefficients are ``fractions.Fraction``.
Operators on ``NCPoly`` are plain callables ``NCPoly -> NCPoly``; the
helpers below build them from their values on words.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .words import ParseError, Word, parse_word, tau as tau_word

Operator = Callable[["NCPoly"], "NCPoly"]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _graded_key(w: Word):
    # graded by weight; within a weight, words with more y's to the front
    # come first (descending lexicographic order).
    return (len(w), tuple(-ord(ch) for ch in w))


class NCPoly:
    """Finite Q-linear combination of words.

    Immutable by convention.  ``*`` between two polynomials is concatenation;
    with a number it scales.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | Iterable[tuple[Word, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Fraction] = {}
        for w, c in items:
            c = _frac(c)
            if c:
                acc[w] = acc.get(w, Fraction(0)) + c
        self._terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "NCPoly":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def word(cls, w: Word, coeff=1) -> "NCPoly":
        return cls({w: coeff})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({"": 1})

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, w: Word) -> Fraction:
        return self._terms.get(w, Fraction(0))

    def support(self) -> list[Word]:
        return sorted(self._terms, key=_graded_key)

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == NCPoly({"": other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = _frac(c)
        if not c:
            return NCPoly.zero()
        return NCPoly._raw({w: c * v for w, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return concat(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "NCPoly":
        out = NCPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def homogeneous_part(self, degree: int) -> "NCPoly":
        return NCPoly._raw({w: c for w, c in self._terms.items() if len(w) == degree})

    def map_words(self, f: Callable[[Word], Word]) -> "NCPoly":
        return NCPoly((f(w), c) for w, c in self._terms.items())

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"NCPoly({format_poly(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": format_rational(self._terms[w]), "word": w} for w in self.support()]

    @classmethod
    def from_json(cls, data: list[dict]) -> "NCPoly":
        return cls((item["word"], Fraction(item["coeff"])) for item in data)


def format_poly(p: NCPoly) -> str:
    """Canonical text: ``c1*w1 + c2*w2 - ...`` in graded order; ``0`` if empty."""
    parts = []
    for w in p.support():
        c = p.coeff(w)
        body = f"{format_rational(abs(c))}*{w or '1'}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


_RATIONAL = re.compile(r"\d+(?:/\d+)?")


def parse_poly(text: str) -> NCPoly:
    """Parse canonical text (or bare word grammar) back into an NCPoly.

    Accepts ``2*xyxy + 4*xxyy``, ``x^2y - 1/2*y``, ``3*1``, ``0``.
    """
    if text.strip() == "0":
        return NCPoly.zero()
    terms: dict[Word, Fraction] = {}
    # split on +/- while remembering where each chunk starts
    pieces = [(m.start(), m.group()) for m in re.finditer(r"[+-]?[^+-]+|[+-]", text)]
    if not pieces:
        raise ParseError("empty polynomial", text, 0)
    for k, (offset, piece) in enumerate(pieces):
        sign = 1
        body = piece.strip()
        if body[:1] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:].strip()
        elif k > 0:
            raise ParseError("expected '+' or '-' between terms", text, offset)
        if not body:
            raise ParseError("empty term", text, offset)
        coeff = Fraction(1)
        if "*" in body:
            c_text, _, w_text = body.partition("*")
            if not _RATIONAL.fullmatch(c_text.strip()):
                raise ParseError(f"bad coefficient {c_text.strip()!r}", text, offset)
            coeff = Fraction(c_text.strip())
            w_text = w_text.strip()
        elif _RATIONAL.fullmatch(body):
            coeff, w_text = Fraction(body), "1"
        else:
            w_text = body
        try:
            w = parse_word(w_text)
        except ParseError as exc:
            # the word is the stripped tail of this chunk
            start = offset + len(piece.rstrip()) - len(w_text)
            raise ParseError(f"bad word {w_text!r}", text, start + exc.offset) from None
        terms[w] = terms.get(w, Fraction(0)) + sign * coeff
    return NCPoly(terms)


def as_poly(p) -> NCPoly:
    if isinstance(p, NCPoly):
        return p
    if isinstance(p, str):
        return NCPoly.word(p)
    if isinstance(p, (int, Fraction)):
        return NCPoly({"": p})
    raise TypeError(f"cannot interpret {p!r} as a polynomial")


# --- products and linear maps ----------------------------------------------

def poly_add(p: NCPoly, q: NCPoly) -> NCPoly:
    return p + q


def poly_scale(c, p: NCPoly) -> NCPoly:
    return p.scale(c)


def concat(p: NCPoly, q: NCPoly) -> NCPoly:
    out: dict[Word, Fraction] = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            out[w] = out.get(w, 0) + a * b
    return NCPoly(out)


poly_concat = concat


def bilinear(word_product: Callable[[Word, Word], Mapping[Word, Fraction]]):
    """Extend a product on words to a bilinear product on polynomials."""

    def product(p, q) -> NCPoly:
        p, q = as_poly(p), as_poly(q)
        out: dict[Word, Fraction] = {}
        for u, a in p.items():
            for v, b in q.items():
                ab = a * b
                for w, c in word_product(u, v).items():
                    out[w] = out.get(w, 0) + ab * c
        return NCPoly(out)

    return product


def linear(word_map: Callable[[Word], NCPoly]) -> Operator:
    """Extend a map on words linearly to polynomials."""

    def op(p) -> NCPoly:
        p = as_poly(p)
        out: dict[Word, Fraction] = {}
        for w, c in p.items():
            for v, d in word_map(w).items():
                out[v] = out.get(v, 0) + c * d
        return NCPoly(out)

    return op


def algebra_hom(image_x: NCPoly, image_y: NCPoly) -> Operator:
    """The algebra endomorphism of Q<x,y> with x -> image_x, y -> image_y."""
    images = {"x": as_poly(image_x), "y": as_poly(image_y)}

    @lru_cache(maxsize=None)
    def on_word(w: Word) -> NCPoly:
        if not w:
            return NCPoly.one()
        if len(w) == 1:
            return images[w]
        half = len(w) // 2
        return on_word(w[:half]) * on_word(w[half:])

    return linear(on_word)


def derivation_from_images(dx: NCPoly, dy: NCPoly) -> Operator:
    """Leibniz extension of x -> dx, y -> dy."""
    images = {"x": as_poly(dx), "y": as_poly(dy)}

    @lru_cache(maxsize=None)
    def on_word(w: Word) -> NCPoly:
        out: dict[Word, Fraction] = {}
        for i, a in enumerate(w):
            left, right = w[:i], w[i + 1:]
            for v, c in images[a].items():
                key = left + v + right
                out[key] = out.get(key, 0) + c
        return NCPoly(out)

    return linear(on_word)


def antiauto_tau(p) -> NCPoly:
    return as_poly(p).map_words(tau_word)


def conjugate_by_tau(op: Operator) -> Operator:
    return lambda p: antiauto_tau(op(antiauto_tau(p)))


def operator_commutator(f: Operator, g: Operator) -> Operator:
    return lambda p: f(g(p)) - g(f(p))


def compose(*ops: Operator) -> Operator:
    def op(p):
        for f in reversed(ops):
            p = f(p)
        return p

    return op


# --- tensors ---------------------------------------------------------------

class TensorPoly:
    """Finite Q-linear combination of pairs of words, a (x) b."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Word, Word], object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[Word, Word], Fraction] = {}
        for key, c in items:
            c = _frac(c)
            if c:
                acc[key] = acc.get(key, Fraction(0)) + c
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def pure(cls, a: Word, b: Word, coeff=1) -> "TensorPoly":
        return cls({(a, b): coeff})

    def items(self):
        return self._terms.items()

    @property
    def terms(self):
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return TensorPoly(out)

    def __neg__(self):
        return TensorPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TensorPoly({k: c * v for k, v in self._terms.items()})

    def left_mul(self, p: NCPoly) -> "TensorPoly":
        """p . (a (x) b) = pa (x) b"""
        out: dict = {}
        for w, c in as_poly(p).items():
            for (a, b), d in self._terms.items():
                key = (w + a, b)
                out[key] = out.get(key, 0) + c * d
        return TensorPoly(out)

    def right_mul(self, p: NCPoly) -> "TensorPoly":
        """(a (x) b) . p = a (x) bp"""
        out: dict = {}
        for (a, b), d in self._terms.items():
            for w, c in as_poly(p).items():
                key = (a, b + w)
                out[key] = out.get(key, 0) + c * d
        return TensorPoly(out)

    def mu_tilde(self) -> NCPoly:
        """a (x) b -> ba"""
        return NCPoly(((b + a), c) for (a, b), c in self._terms.items())

    def __str__(self):
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda k: (_graded_key(k[0] + k[1]), _graded_key(k[0])))
        parts = []
        for a, b in keys:
            c = self._terms[(a, b)]
            body = f"{format_rational(abs(c))}*{a or '1'}@{b or '1'}"
            parts.append(body if not parts and c > 0 else
                         ("-" + body if not parts else ("+ " if c > 0 else "- ") + body))
        return " ".join(parts)

    __repr__ = __str__


# --- truncated power series in t -------------------------------------------

class TruncSeries:
    """Element of Q<x,y>[[t]] modulo t^(order+1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence[NCPoly], order: int | None = None):
        if order is None:
            order = len(coeffs) - 1
        cs = [as_poly(c) for c in coeffs[: order + 1]]
        cs += [NCPoly.zero()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, p, order: int) -> "TruncSeries":
        return cls([as_poly(p)], order)

    def __getitem__(self, k: int) -> NCPoly:
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        k = min(self.order, other.order)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(k + 1)], k)

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        return TruncSeries([p.scale(c) for p in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            k = min(self.order, other.order)
            out = [NCPoly.zero()] * (k + 1)
            for i in range(k + 1):
                if not self.coeffs[i]:
                    continue
                for j in range(k + 1 - i):
                    if other.coeffs[j]:
                        out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
            return TruncSeries(out, k)
        if isinstance(other, NCPoly):
            return TruncSeries([c * other for c in self.coeffs], self.order)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, NCPoly):
            return TruncSeries([other * c for c in self.coeffs], self.order)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "TruncSeries":
        out = TruncSeries.constant(NCPoly.one(), self.order)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int = 1) -> "TruncSeries":
        """Multiply by t^k."""
        return TruncSeries([NCPoly.zero()] * k + list(self.coeffs[: self.order + 1 - k]), self.order)

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs[: order + 1], order)

    def map(self, op: Operator) -> "TruncSeries":
        """Apply a t-linear operator coefficientwise."""
        return TruncSeries([op(c) for c in self.coeffs], self.order)

    def __str__(self):
        parts = [f"t^{k}: {c}" for k, c in enumerate(self.coeffs) if c]
        return "; ".join(parts) if parts else "0"

    __repr__ = __str__


def as_series(p, order: int) -> TruncSeries:
    return p if isinstance(p, TruncSeries) else TruncSeries.constant(p, order)


def apply_series_operator(generators: Sequence[Operator], s: TruncSeries) -> TruncSeries:
    """Apply X = sum_n t^n G_n, with generators[n-1] = G_n, to a series."""
    out = [NCPoly.zero()] * (s.order + 1)
    for n, g in enumerate(generators, start=1):
        for k in range(n, s.order + 1):
            src = s.coeffs[k - n]
            if src:
                out[k] = out[k] + g(src)
    return TruncSeries(out, s.order)


def exp_operator_series(generators: Sequence[tuple[object, Operator]], K: int):
    """Return the operator exp(sum_n c_n t^n G_n) on series truncated at t^K.

    ``generators[n-1] = (c_n, G_n)``; each G_n must raise word weight by
    exactly n, which makes the exponential a finite sum.
    """

    def checked(n: int, c, g: Operator) -> Operator:
        c = _frac(c)

        def op(p: NCPoly) -> NCPoly:
            out = NCPoly.zero()
            for w, a in p.items():
                image = g(NCPoly.word(w))
                for v in image:
                    if len(v) != len(w) + n:
                        raise ValueError(
                            f"generator {n} sends {w or '1'!r} to weight {len(v)}, "
                            f"expected {len(w) + n}")
                out = out + image.scale(a * c)
            return out

        return op

    gens = [checked(n, c, g) for n, (c, g) in enumerate(generators, start=1)]

    def apply(p) -> TruncSeries:
        s = as_series(p, K).truncate(K) if isinstance(p, TruncSeries) else as_series(p, K)
        total = s
        term = s
        for m in range(1, K + 1):
            term = apply_series_operator(gens, term).scale(Fraction(1, m))
            if term.is_zero():
                break
            total = total + term
        return total

    return apply


# --- exact linear algebra --------------------------------------------------

def _echelon(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_over_rationals(polys: Sequence[NCPoly]) -> int:
    """Exact rank of the span of ``polys``."""
    basis = sorted({w for p in polys for w in p}, key=_graded_key)
    if not basis:
        return 0
    index = {w: i for i, w in enumerate(basis)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(basis)
        for w, c in p.items():
            row[index[w]] = c
        rows.append(row)
    return len(_echelon(rows, len(basis))[1])


def solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``matrix @ sol = rhs`` exactly; ``None`` if inconsistent.

    Free variables are set to zero.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    rows, pivots = _echelon(aug, ncols)
    for i in range(len(pivots), nrows):
        if rows[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol
