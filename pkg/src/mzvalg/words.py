"""Words over {x, y} and compositions.

A word is a plain ``str`` over the letters ``'x'`` and ``'y'``; the empty
string is the unit word.  A composition is a ``tuple`` of positive ints.
Python's native string ordering already is the word order we need (x < y,
proper prefix before its extensions), so ``word_less`` is just ``<``.
"""

from __future__ import annotations

import re
from itertools import combinations, product
from typing import Iterator

Word = str
Composition = tuple[int, ...]

LETTERS = ("x", "y")


class ParseError(ValueError):
    """Malformed word or composition text."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class DomainError(ValueError):
    """An argument lies outside the subspace an operation is defined on."""


# --- parsing ---------------------------------------------------------------

def parse_word(text: str) -> Word:
    """Expand ``x^2y`` style text into the letter sequence ``xxy``.

    Grammar: ``factor := ('x'|'y') ['^' int>=1]``; whitespace is ignored.
    The literal ``1`` alone denotes the unit word.
    """
    if text.strip() == "1":
        return ""
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch not in LETTERS:
            raise ParseError(f"unexpected character {ch!r}, expected 'x' or 'y'", text, i)
        i += 1
        while i < n and text[i].isspace():
            i += 1
        power = 1
        if i < n and text[i] == "^":
            start = i
            i += 1
            while i < n and text[i].isspace():
                i += 1
            m = re.compile(r"-?\d+").match(text, i)
            if m is None:
                raise ParseError("expected an exponent after '^'", text, start)
            power = int(m.group())
            if power < 1:
                raise ParseError(f"exponent must be >= 1, got {power}", text, i)
            i = m.end()
        out.append(ch * power)
    return "".join(out)


def parse_composition(text: str) -> Composition:
    """Parse ``"(i1, i2, ..., ik)"``; ``"()"`` is the empty composition."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        offset = 0 if not s.startswith("(") else len(text.rstrip())
        raise ParseError("composition must look like (i1,...,ik)", text, offset)
    body = s[1:-1]
    if not body.strip():
        return ()
    parts = []
    base = text.index("(") + 1
    pos = 0
    for piece in body.split(","):
        stripped = piece.strip()
        if not re.fullmatch(r"-?\d+", stripped):
            raise ParseError(f"bad part {stripped!r}", text, base + pos)
        value = int(stripped)
        if value < 1:
            raise ParseError(f"parts must be >= 1, got {value}", text, base + pos)
        parts.append(value)
        pos += len(piece) + 1
    return tuple(parts)


def format_composition(I: Composition) -> str:
    return "(" + ",".join(map(str, I)) + ")"


def format_word(w: Word) -> str:
    return w if w else "1"


# --- word statistics -------------------------------------------------------

def gradings(w: Word) -> tuple[int, int, int, int]:
    """Return (weight, length, colength, height).

    Height counts occurrences of ``xy``; on admissible words this is the
    number of factors x^p y^q.
    """
    length = w.count("y")
    return len(w), length, len(w) - length, w.count("xy")


def weight(w: Word) -> int:
    return len(w)


def height(w: Word) -> int:
    return w.count("xy")


def is_admissible(w: Word) -> bool:
    return w == "" or (w[0] == "x" and w[-1] == "y")


def in_H1(w: Word) -> bool:
    return w == "" or w[-1] == "y"


def tau(w: Word) -> Word:
    """Reverse and swap x <-> y."""
    return w[::-1].translate(_SWAP)


_SWAP = str.maketrans("xy", "yx")


def z(k: int) -> Word:
    """The word x^(k-1) y."""
    if k < 1:
        raise ValueError(f"z_k needs k >= 1, got {k}")
    return "x" * (k - 1) + "y"


def word_of_composition(I: Composition) -> Word:
    return "".join(z(i) for i in I)


def composition_of_word(w: Word) -> Composition:
    if not in_H1(w):
        raise DomainError(f"word {w!r} does not end in y")
    return tuple(len(block) + 1 for block in w[:-1].split("y")) if w else ()


def z_factors(w: Word) -> list[Word]:
    """Split a word of H^1 into its z_k factors."""
    if not in_H1(w):
        raise DomainError(f"word {w!r} does not end in y")
    return [block + "y" for block in w[:-1].split("y")] if w else []


def all_words(n: int) -> Iterator[Word]:
    """All 2^n words of weight n, in increasing order."""
    for letters in product(LETTERS, repeat=n):
        yield "".join(letters)


def admissible_words(n: int) -> Iterator[Word]:
    return (w for w in all_words(n) if is_admissible(w) and w)


# --- ordering and Lyndon words ---------------------------------------------

def word_less(w1: Word, w2: Word) -> bool:
    return w1 < w2


def is_lyndon(w: Word) -> bool:
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


def lyndon_words(degree: int) -> list[Word]:
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return [w for w in all_words(degree) if is_lyndon(w)]


def lyndon_multisets(degree: int) -> list[tuple[Word, ...]]:
    """Multisets of Lyndon words of total weight ``degree`` (sorted tuples)."""
    pool = [w for d in range(1, degree + 1) for w in lyndon_words(d)]
    out: list[tuple[Word, ...]] = []

    def extend(start: int, remaining: int, acc: list[Word]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        for j in range(start, len(pool)):
            w = pool[j]
            if len(w) <= remaining:
                acc.append(w)
                extend(j, remaining - len(w), acc)
                acc.pop()

    extend(0, degree, [])
    return out


# --- compositions ----------------------------------------------------------

def compositions(n: int) -> Iterator[Composition]:
    """All compositions of weight n (2^(n-1) of them; one empty one for n=0)."""
    if n == 0:
        yield ()
        return
    for cuts in product((False, True), repeat=n - 1):
        parts, run = [], 1
        for cut in cuts:
            if cut:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def partial_sums(I: Composition) -> frozenset[int]:
    """Set {i1, i1+i2, ..., i1+...+i_(k-1)}."""
    out, s = set(), 0
    for part in I[:-1]:
        s += part
        out.add(s)
    return frozenset(out)


def from_partial_sums(cuts, total: int) -> Composition:
    if total == 0:
        return ()
    points = sorted(cuts) + [total]
    prev, parts = 0, []
    for p in points:
        parts.append(p - prev)
        prev = p
    return tuple(parts)


def refines(I: Composition, J: Composition) -> bool:
    """True when J is obtained from I by merging adjacent parts (I >= J)."""
    return sum(I) == sum(J) and partial_sums(J) <= partial_sums(I)


def coarsenings(I: Composition) -> list[Composition]:
    """All J with I >= J, including I itself."""
    if not I:
        return [()]
    cuts = sorted(partial_sums(I))
    total = sum(I)
    return [from_partial_sums(keep, total)
            for r in range(len(cuts), -1, -1)
            for keep in combinations(cuts, r)]


def refinements(I: Composition) -> list[Composition]:
    """All J with J >= I, including I itself."""
    if not I:
        return [()]
    total = sum(I)
    own = partial_sums(I)
    free = [c for c in range(1, total) if c not in own]
    return [from_partial_sums(own | set(extra), total)
            for r in range(len(free) + 1)
            for extra in combinations(free, r)]


def conjugate(I: Composition) -> Composition:
    total = sum(I)
    if total == 0:
        return ()
    return from_partial_sums(set(range(1, total)) - partial_sums(I), total)


def reverse(I: Composition) -> Composition:
    return tuple(reversed(I))


def deconcatenations(I: Composition) -> Iterator[tuple[Composition, Composition]]:
    for j in range(len(I) + 1):
        yield I[:j], I[j:]


def block_splittings(I: Composition) -> Iterator[tuple[Composition, ...]]:
    """Ways to cut I into consecutive nonempty blocks I1 + I2 + ... + Il."""
    k = len(I)
    if k == 0:
        yield ()
        return
    for cuts in product((False, True), repeat=k - 1):
        blocks, start = [], 0
        for pos, cut in enumerate(cuts, start=1):
            if cut:
                blocks.append(I[start:pos])
                start = pos
        blocks.append(I[start:])
        yield tuple(blocks)
