"""Words in the Baumslag-Solitar group BS(m,n) = <a, b | b^-1 a^m b = a^n>.

A group element is stored as a freely reduced sequence of syllables
(letter, exponent) with letter in {'a', 'b'} and nonzero arbitrary-precision
exponents.  The word problem is solved by Britton pinch reduction: the
subword b^-1 a^(km) b rewrites to a^(kn) and b a^(kn) b^-1 rewrites to
a^(km), and a freely reduced word with no such pinch represents the
identity only if it is the empty word.

Everything here is a pure function of immutable values; results never alias
their inputs.  All divisibility tests use m and |n|, so negative parameters
are supported throughout (only the relation's right-hand sides see the sign
of n).
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Iterable, Iterator


class ZeroParameter(ValueError):
    """Raised when a BS(m,n) parameter is zero."""


class WordSyntaxError(ValueError):
    """Raised by the word parser on malformed input."""


@dataclass(frozen=True)
class BSParams:
    """Parameters (m, n) of BS(m,n).  Both must be nonzero."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m == 0 or self.n == 0:
            raise ZeroParameter(f"BS parameters must be nonzero, got ({self.m}, {self.n})")

    @property
    def abs_n(self) -> int:
        return abs(self.n)

    @property
    def is_normalized(self) -> bool:
        """True when m > 0 and m >= |n|."""
        return self.m > 0 and self.m >= abs(self.n)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over {a, b}: no zero exponents, no two adjacent
    syllables with the same letter."""

    syllables: tuple[tuple[str, int], ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.syllables + other.syllables)

    def __invert__(self) -> "Word":
        return Word(tuple((letter, -exp) for letter, exp in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return (~self) ** (-k)
        result = identity_word()
        for _ in range(k):
            result = result * self
        return result

    def __len__(self) -> int:
        return len(self.syllables)

    def __str__(self) -> str:
        return word_to_text(self) or "1"

    @property
    def is_empty(self) -> bool:
        return not self.syllables

    def letters(self) -> Iterator[tuple[str, int]]:
        """Yield single letters (letter, +1 or -1), expanding exponents."""
        for letter, exp in self.syllables:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield letter, step


def identity_word() -> Word:
    return Word()


def a_power(k: int) -> Word:
    return Word((("a", k),)) if k else Word()


def b_power(k: int) -> Word:
    return Word((("b", k),)) if k else Word()


def free_reduce(raw: Iterable[tuple[str, int]]) -> Word:
    """Merge adjacent same-letter syllables and drop zero exponents."""
    out: list[tuple[str, int]] = []
    for letter, exp in raw:
        if letter not in ("a", "b"):
            raise ValueError(f"unknown letter {letter!r}")
        _push(out, letter, exp)
    return Word(tuple(out))


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return ~u


def _push(out: list[tuple[str, int]], letter: str, exp: int) -> None:
    if exp == 0:
        return
    if out and out[-1][0] == letter:
        merged = out[-1][1] + exp
        out.pop()
        if merged:
            out.append((letter, merged))
    else:
        out.append((letter, exp))


@dataclass(frozen=True)
class BrittonForm:
    """A pinch-free form a^s0 b^e1 a^s1 ... b^ek a^sk.

    ``a_exponents`` holds s_0..s_k and ``b_signs`` holds e_1..e_k (each +1 or
    -1).  Pinch-free forms are not unique, so equality of group elements is
    decided by :func:`words_equal`, never by comparing syllables.
    """

    a_exponents: tuple[int, ...]
    b_signs: tuple[int, ...]

    @property
    def b_count(self) -> int:
        return len(self.b_signs)

    @property
    def is_identity(self) -> bool:
        return not self.b_signs and self.a_exponents == (0,)

    def to_word(self) -> Word:
        raw: list[tuple[str, int]] = []
        for i, sign in enumerate(self.b_signs):
            raw.append(("a", self.a_exponents[i]))
            raw.append(("b", sign))
        raw.append(("a", self.a_exponents[-1]))
        return free_reduce(raw)


def pinch_free(w: Word, p: BSParams) -> Word:
    """Apply Britton pinches (innermost-leftmost first) until none remain.

    Each pinch b^-1 a^(km) b -> a^(kn) or b a^(kn) b^-1 -> a^(km) removes two
    b-letters, so the loop terminates.  The result represents the same group
    element as ``w``.
    """
    m, n, abs_n = p.m, p.n, p.abs_n
    out: list[tuple[str, int]] = []
    for letter, exp in w.syllables:
        _push(out, letter, exp)
        # Resolve pinches exposed at the top of the reduced prefix.
        while len(out) >= 3 and out[-1][0] == "b" and out[-2][0] == "a":
            t2 = out[-1][1]
            s = out[-2][1]
            t1 = out[-3][1]
            if t1 < 0 < t2 and s % m == 0:
                k = s // m
                del out[-3:]
                _push(out, "b", t1 + 1)
                _push(out, "a", k * n)
                _push(out, "b", t2 - 1)
            elif t2 < 0 < t1 and s % abs_n == 0:
                k = s // n
                del out[-3:]
                _push(out, "b", t1 - 1)
                _push(out, "a", k * m)
                _push(out, "b", t2 + 1)
            else:
                break
    return Word(tuple(out))


def britton_reduce(w: Word, p: BSParams) -> BrittonForm:
    """Pinch-free form of ``w``; solves the word problem via Britton's lemma."""
    reduced = pinch_free(w, p)
    a_exps = [0]
    signs: list[int] = []
    for letter, exp in reduced.syllables:
        if letter == "a":
            a_exps[-1] = exp
        else:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                signs.append(step)
                a_exps.append(0)
    return BrittonForm(tuple(a_exps), tuple(signs))


def is_identity(w: Word, p: BSParams) -> bool:
    return britton_reduce(w, p).is_identity


def words_equal(u: Word, v: Word, p: BSParams) -> bool:
    return is_identity(u * ~v, p)


def b_exponent_sum(w: Word) -> int:
    """The homomorphism BS(m,n) -> Z killing a (sum of b-exponents)."""
    return sum(exp for letter, exp in w.syllables if letter == "b")


@dataclass(frozen=True)
class ParamNormalization:
    """Record of the isomorphisms used to normalize (m, n).

    ``swapped`` applies BS(m,n) ~ BS(n,m), realized on words by negating every
    b-exponent (a -> a, b -> b^-1).  ``negated`` applies BS(m,n) ~ BS(-m,-n),
    which presents the same group on the same generators, so it is the
    identity on words.
    """

    original: BSParams
    params: BSParams
    swapped: bool
    negated: bool

    def to_normalized(self, w: Word) -> Word:
        return _negate_b(w) if self.swapped else w

    def from_normalized(self, w: Word) -> Word:
        return _negate_b(w) if self.swapped else w


def _negate_b(w: Word) -> Word:
    return Word(tuple((letter, -exp if letter == "b" else exp) for letter, exp in w.syllables))


def normalize_params(m: int, n: int) -> ParamNormalization:
    """Equivalent parameters with m > 0 and m >= |n|, plus the isomorphism record."""
    original = BSParams(m, n)
    swapped = abs(m) < abs(n)
    if swapped:
        m, n = n, m
    negated = m < 0
    if negated:
        m, n = -m, -n
    return ParamNormalization(original, BSParams(m, n), swapped, negated)


# --- text syntax ---------------------------------------------------------
#
# Words are written with `a`, `b`, `A` (= a^-1), `B` (= b^-1), optional
# `^<int>` powers, and juxtaposition; whitespace is ignored.

_LETTERS = {"a": ("a", 1), "b": ("b", 1), "A": ("a", -1), "B": ("b", -1)}


def parse_word(text: str) -> Word:
    """Parse word text such as ``"B a^2 b A^3"``; raises WordSyntaxError."""
    s = "".join(text.split())
    raw: list[tuple[str, int]] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch not in _LETTERS:
            raise WordSyntaxError(f"unexpected character {ch!r} at position {i} in {text!r}")
        letter, sign = _LETTERS[ch]
        i += 1
        power = 1
        if i < len(s) and s[i] == "^":
            i += 1
            j = i
            if j < len(s) and s[j] in "+-":
                j += 1
            while j < len(s) and s[j].isdigit():
                j += 1
            if j == i or not s[i:j].lstrip("+-"):
                raise WordSyntaxError(f"missing exponent after '^' in {text!r}")
            power = int(s[i:j])
            i = j
        raw.append((letter, sign * power))
    return free_reduce(raw)


def word_to_text(w: Word) -> str:
    """Render a word in the same syntax parse_word accepts (empty word -> '')."""
    parts = []
    for letter, exp in w.syllables:
        symbol = letter if exp > 0 else letter.upper()
        mag = abs(exp)
        parts.append(symbol if mag == 1 else f"{symbol}^{mag}")
    return " ".join(parts)


# --- random words --------------------------------------------------------


def _random_exponent(rng: Random, cap: int) -> int:
    # Geometric-ish magnitude, capped so downstream oracles stay fast.
    mag = 1
    while mag < cap and rng.random() < 0.45:
        mag += 1
    return mag if rng.random() < 0.5 else -mag


def random_word(length: int, seed: int, p: BSParams) -> Word:
    """Deterministic pseudorandom word with ``length`` raw syllables."""
    rng = Random(seed)
    cap = 3 * abs(p.m)
    raw: list[tuple[str, int]] = []
    for _ in range(length):
        letter = "a" if rng.random() < 0.5 else "b"
        exp = _random_exponent(rng, cap)
        # Multiples of m (and n) make pinches reachable.
        if letter == "a" and rng.random() < 0.25:
            exp = max(-cap, min(cap, exp * abs(p.m)))
        raw.append((letter, exp))
    return free_reduce(raw)


def random_ker_f_word(length: int, seed: int, p: BSParams) -> Word:
    """Random word post-composed with b^-t so its b-exponent sum is zero."""
    w = random_word(length, seed, p)
    return w * b_power(-b_exponent_sum(w))
