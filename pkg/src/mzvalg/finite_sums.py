"""Finite multiple harmonic sums A_I(n), S_I(n), sequence operators, mod-p evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterator, Sequence

import numpy as np

from .algebra import as_poly
from .qsym import psi
from .words import (Composition, DomainError, all_words, coarsenings, composition_of_word,
                    compositions, conjugate)


# --- the shared dynamic program --------------------------------------------

def _nested_sums(I: Composition, n: int, strict: bool,
                 inv_power: Callable[[int, int], object], one, zero,
                 reduce: Callable = lambda v: v) -> list:
    """Values [X_I(0), X_I(1), ..., X_I(n)] of the nested sum.

    acc[j] holds the sum for the suffix I[j:] over indices <= m; the
    empty suffix contributes 1.  Strict nesting reads the inner sum at
    m - 1 (before this step's update), weak nesting at m (after it).
    """
    k = len(I)
    acc = [zero] * k + [one]
    values = [acc[0]]
    for m in range(1, n + 1):
        if strict:
            prev = list(acc)
            for j in range(k):
                acc[j] = reduce(acc[j] + inv_power(m, I[j]) * prev[j + 1])
        else:
            for j in range(k - 1, -1, -1):
                acc[j] = reduce(acc[j] + inv_power(m, I[j]) * acc[j + 1])
        values.append(acc[0])
    return values


def _inv_power_exact(m: int, s: int) -> Fraction:
    return Fraction(1, m ** s)


def A_values(I: Composition, n: int) -> list[Fraction]:
    return _nested_sums(tuple(I), n, True, _inv_power_exact, Fraction(1), Fraction(0))


def S_values(I: Composition, n: int) -> list[Fraction]:
    return _nested_sums(tuple(I), n, False, _inv_power_exact, Fraction(1), Fraction(0))


@lru_cache(maxsize=4096)
def A(I: Composition, n: int) -> Fraction:
    """sum over n >= n1 > n2 > ... > nk >= 1 of 1/(n1^i1 ... nk^ik)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return A_values(tuple(I), n)[n]


@lru_cache(maxsize=4096)
def S(I: Composition, n: int) -> Fraction:
    """Same sum with weak inequalities n >= n1 >= ... >= nk >= 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return S_values(tuple(I), n)[n]


def A_float(I: Composition, N: int) -> np.ndarray:
    """Array of A_I(m) for m = 1..N in double precision.

    The same recursion as ``A_values``, one cumulative sum per part.
    """
    m = np.arange(1, N + 1, dtype=np.float64)
    inner = np.ones(N)
    for s in reversed(I):
        term = m ** (-float(s)) * inner
        total = np.cumsum(term)
        inner = np.concatenate(([0.0], total[:-1]))
    return total if I else np.ones(N)


def refine_expand(I: Composition, n: int) -> Fraction:
    """S_I(n) minus the sum of A_J(n) over coarsenings J of I (identically zero)."""
    return S(tuple(I), n) - sum((A(J, n) for J in coarsenings(tuple(I))), Fraction(0))


# --- sequences ---------------------------------------------------------------

class RationalSeq:
    """Lazily evaluated, memoized sequence a(0), a(1), ... of rationals."""

    def __init__(self, generator: Callable[[int], Fraction], name: str = "seq"):
        self._generator = generator
        self._memo: dict[int, Fraction] = {}
        self.name = name

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        v = self._memo.get(n)
        if v is None:
            v = Fraction(self._generator(n))
            self._memo.setdefault(n, v)
        return v

    __getitem__ = __call__

    def take(self, n: int) -> list[Fraction]:
        return [self(i) for i in range(n)]

    @classmethod
    def from_list(cls, values: Sequence, name: str = "list") -> "RationalSeq":
        vals = [Fraction(v) for v in values]
        return cls(lambda n: vals[n] if n < len(vals) else Fraction(0), name)

    def __add__(self, other):
        return RationalSeq(lambda n: self(n) + other(n))

    def __sub__(self, other):
        return RationalSeq(lambda n: self(n) - other(n))

    def __neg__(self):
        return RationalSeq(lambda n: -self(n))

    def __mul__(self, c):
        return RationalSeq(lambda n: self(n) * c)


def A_seq(I: Composition) -> RationalSeq:
    I = tuple(I)
    return RationalSeq(lambda n: A(I, n), f"A{I}")


def S_seq(I: Composition) -> RationalSeq:
    I = tuple(I)
    return RationalSeq(lambda n: S(I, n), f"S{I}")


def Sigma(a: RationalSeq) -> RationalSeq:
    """Partial sums: (Sigma a)(n) = a(0) + ... + a(n)."""
    memo: list[Fraction] = []

    def gen(n: int) -> Fraction:
        while len(memo) <= n:
            memo.append((memo[-1] if memo else Fraction(0)) + a(len(memo)))
        return memo[n]

    return RationalSeq(gen, f"Sigma({a.name})")


def SigmaInv(a: RationalSeq) -> RationalSeq:
    """(Sigma^-1 a)(n) = a(n) - a(n-1), with a(-1) = 0."""
    return RationalSeq(lambda n: a(n) - (a(n - 1) if n > 0 else 0), f"SigmaInv({a.name})")


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    return tuple(math.comb(n, i) for i in range(n + 1))


def Nabla(a: RationalSeq) -> RationalSeq:
    """(Nabla a)(n) = sum_i binom(n, i) (-1)^i a(i)."""
    return RationalSeq(
        lambda n: sum((Fraction(c if i % 2 == 0 else -c) * a(i)
                       for i, c in enumerate(_pascal_row(n))), Fraction(0)),
        f"Nabla({a.name})")


def euler_alternating_binomial(n: int) -> tuple[Fraction, Fraction]:
    """(sum_k (-1)^k binom(n,k)/k,  -sum_k 1/k) for k = 1..n; the two agree."""
    lhs = sum((Fraction((-1) ** k * math.comb(n, k), k) for k in range(1, n + 1)), Fraction(0))
    rhs = -sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))
    return lhs, rhs


def nabla_recursion_f(I: Composition) -> RationalSeq:
    """f with Nabla S_I(n) = Nabla f(n) / n."""
    I = tuple(I)
    if I[0] == 1:
        return S_seq(I[1:])
    return SigmaInv(S_seq((I[0] - 1,) + I[1:]))


# --- symmetric sums over permutations ----------------------------------------

def set_partitions(k: int) -> Iterator[list[list[int]]]:
    """Set partitions of {0,...,k-1} via restricted growth strings."""
    if k > 8:
        raise ValueError("set partitions are capped at k <= 8")
    if k == 0:
        yield []
        return

    def grow(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == k:
            yield prefix
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    for rgs in grow([0], 0):
        blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for i, b in enumerate(rgs):
            blocks[b].append(i)
        yield blocks


def symmetric_sum_sides(I: Composition, n: int, variant: str = "S") -> tuple[Fraction, Fraction]:
    """Both sides of the permutation-sum formula for S (or A) in terms of S_(m)(n)."""
    I = tuple(I)
    k = len(I)
    if k > 8:
        raise ValueError("length capped at 8")
    fn = S if variant == "S" else A
    if variant not in ("S", "A"):
        raise ValueError("variant must be 'A' or 'S'")
    lhs = sum((fn(tuple(I[i] for i in perm), n) for perm in permutations(range(k))), Fraction(0))
    rhs = Fraction(0)
    for blocks in set_partitions(k):
        c = math.prod(math.factorial(len(b) - 1) for b in blocks)
        if variant == "A" and (k - len(blocks)) % 2:
            c = -c
        rhs += c * math.prod((S((sum(I[j] for j in b),), n) for b in blocks), start=Fraction(1))
    return lhs, rhs


# --- mod p -------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


@dataclass(frozen=True)
class ModPValue:
    residue: int
    modulus: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __add__(self, other: "ModPValue") -> "ModPValue":
        self._same(other)
        return ModPValue(self.residue + other.residue, self.modulus)

    def __neg__(self):
        return ModPValue(-self.residue, self.modulus)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "ModPValue":
        return ModPValue(self.residue * c, self.modulus)

    def _same(self, other):
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@lru_cache(maxsize=None)
def _mod_tables(p: int) -> tuple[int, ...]:
    return tuple([0] + [pow(m, -1, p) for m in range(1, p)])


def _modp_values(I: Composition, p: int, strict: bool) -> int:
    _check_prime(p)
    inv = _mod_tables(p)
    vals = _nested_sums(tuple(I), p - 1, strict, lambda m, s: pow(inv[m], s, p), 1, 0,
                        lambda v: v % p)
    return vals[p - 1]


def A_modp(I: Composition, p: int) -> ModPValue:
    """A_I(p-1) in Z/pZ, by the exact recursion run modulo p."""
    return ModPValue(_modp_values(I, p, True), p)


def S_modp(I: Composition, p: int) -> ModPValue:
    return ModPValue(_modp_values(I, p, False), p)


def fraction_mod(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ValueError(f"denominator of {c} is divisible by {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def chi_p(w, p: int) -> ModPValue:
    """Linear extension of word -> A_I(word)(p-1) mod p on H^1."""
    _check_prime(p)
    total = 0
    for v, c in as_poly(w).items():
        if v and v[-1] != "y":
            raise DomainError(f"word {v!r} does not end in y")
        total += fraction_mod(c, p) * A_modp(composition_of_word(v), p).residue
    return ModPValue(total, p)


def rho(w, n: int) -> Fraction:
    """Linear extension of word -> A_I(word)(n) on H^1."""
    total = Fraction(0)
    for v, c in as_poly(w).items():
        total += c * A(composition_of_word(v), n)
    return total


# --- the mod-p congruence suite ---------------------------------------------

@dataclass(frozen=True)
class CongruenceCheck:
    name: str
    params: dict
    lhs: ModPValue
    rhs: ModPValue

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"identity": self.name,
                "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
                "lhs": str(self.lhs), "rhs": str(self.rhs), "passed": self.passed}

    def line(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}({params}): {self.lhs} vs {self.rhs}"


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def _zero(p: int) -> ModPValue:
    return ModPValue(0, p)


def _all_compositions(max_weight: int) -> Iterator[Composition]:
    for n in range(1, max_weight + 1):
        yield from compositions(n)


def length_one_vanishing(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """S_(k)(p-1) = 0 mod p for primes p > k+1."""
    return [CongruenceCheck("length_one", {"k": k, "p": p}, S_modp((k,), p), _zero(p))
            for k in range(1, max_weight) for p in primes_up_to(max_prime) if p > k + 1]


def repeated_part_vanishing(max_weight: int = 8, max_prime: int = 97) -> list[CongruenceCheck]:
    """A_I(p-1) = S_I(p-1) = 0 mod p for I = (k,...,k) with r parts, p > rk+1."""
    out = []
    for k in range(1, max_weight + 1):
        for r in range(1, max_weight // k + 1):
            I = (k,) * r
            for p in primes_up_to(max_prime):
                if p > r * k + 1:
                    out.append(CongruenceCheck("repeated_A", {"I": I, "p": p}, A_modp(I, p), _zero(p)))
                    out.append(CongruenceCheck("repeated_S", {"I": I, "p": p}, S_modp(I, p), _zero(p)))
    return out


def reversal_congruence(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """A_I(p-1) = (-1)^|I| A_rev(I)(p-1), and the same for S."""
    out = []
    for I in _all_compositions(max_weight):
        sign = (-1) ** sum(I)
        J = I[::-1]
        for p in primes_up_to(max_prime):
            out.append(CongruenceCheck("reversal_A", {"I": I, "p": p},
                                       A_modp(I, p), A_modp(J, p).scale(sign)))
            out.append(CongruenceCheck("reversal_S", {"I": I, "p": p},
                                       S_modp(I, p), S_modp(J, p).scale(sign)))
    return out


def conjugate_congruence(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """S_I(p-1) = -S_conj(I)(p-1) mod p for every prime."""
    return [CongruenceCheck("conjugate_S", {"I": I, "p": p}, S_modp(I, p), -S_modp(conjugate(I), p))
            for I in _all_compositions(max_weight) for p in primes_up_to(max_prime)]


def hook_congruence(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """A_(n,1^k)(p-1) = A_(k+1,1^(n-1))(p-1) mod p for p > max(k+1, n), n + k <= max_weight + 1."""
    out = []
    for n in range(1, max_weight + 2):
        for k in range(0, max_weight + 2 - n):
            I, J = (n,) + (1,) * k, (k + 1,) + (1,) * (n - 1)
            for p in primes_up_to(max_prime):
                if p > max(k + 1, n):
                    out.append(CongruenceCheck("hook", {"n": n, "k": k, "p": p},
                                               A_modp(I, p), A_modp(J, p)))
    return out


def psi_congruence(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """chi_p(w) = chi_p(psi(w)) for every word of H^1 of weight <= max_weight."""
    out = []
    for n in range(1, max_weight + 1):
        for w in all_words(n):
            if w[-1] != "y":
                continue
            image = psi(w)
            for p in primes_up_to(max_prime):
                out.append(CongruenceCheck("psi", {"w": w, "p": p}, chi_p(w, p), chi_p(image, p)))
    return out


def closing_example(max_prime: int = 97) -> list[CongruenceCheck]:
    """2 A_(3,1,1)(p-1) = -A_(2,1,1,1)(p-1) - A_(1,2,1,1)(p-1) for p > 6."""
    out = []
    for p in primes_up_to(max_prime):
        if p > 6:
            lhs = A_modp((3, 1, 1), p).scale(2)
            rhs = -A_modp((2, 1, 1, 1), p) - A_modp((1, 2, 1, 1), p)
            out.append(CongruenceCheck("closing_311", {"p": p}, lhs, rhs))
    return out


def congruence_suite(max_weight: int = 6, max_prime: int = 97) -> list[CongruenceCheck]:
    """Every mod-p congruence over compositions/words of weight <= max_weight and primes <= max_prime."""
    if max_weight > 8:
        raise ValueError("max_weight is capped at 8")
    if max_prime > 1000:
        raise ValueError("max_prime is capped at 1000")
    return (length_one_vanishing(max_weight, max_prime)
            + repeated_part_vanishing(max(max_weight, 8), max_prime)
            + reversal_congruence(max_weight, max_prime)
            + conjugate_congruence(max_weight, max_prime)
            + hook_congruence(max_weight, max_prime)
            + psi_congruence(max_weight, max_prime)
            + closing_example(max_prime))
