"""The affine representation of BS(m,n) into Z[1/mn] semidirect Z.

Elements of the target group are pairs (u, v) with u an exact rational whose
denominator only involves primes of m*n and v an integer.  Writing q = m/n,
the group law is

    (u, v) * (x, y) = (u + q^v * x, v + y),      (u, v)^-1 = (-q^-v * u, -v)

and the representation sends a to (1, 0) and b to (0, 1).  Conjugating the
image of a^k by an element with image (u, v) lands on (q^v * k, 0); this
identity is the backbone of the free-action certificates in the tree module.

No floating point is used anywhere: q is a signed Fraction, kept exact even
for negative n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .words import BSParams, Word

RationalLike = Fraction | int


@dataclass(frozen=True)
class GammaElement:
    """A pair (u, v): u exact rational, v integer.  Identity is (0, 0)."""

    u: Fraction
    v: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", Fraction(self.u))

    @property
    def is_identity(self) -> bool:
        return self.u == 0 and self.v == 0

    def as_dict(self) -> dict:
        return {"u": format_rational(self.u), "v": self.v}


GAMMA_IDENTITY = GammaElement(Fraction(0), 0)


@dataclass(frozen=True)
class CyclicSubgroup:
    """The cyclic subgroup generated by one element of Z[1/mn] semidirect Z."""

    generator: GammaElement


def _q(p: BSParams) -> Fraction:
    return Fraction(p.m, p.n)


def gamma_mul(g: GammaElement, h: GammaElement, p: BSParams) -> GammaElement:
    return GammaElement(g.u + _q(p) ** g.v * h.u, g.v + h.v)


def gamma_inv(g: GammaElement, p: BSParams) -> GammaElement:
    return GammaElement(-(_q(p) ** (-g.v)) * g.u, -g.v)


def gamma_pow(g: GammaElement, j: int, p: BSParams) -> GammaElement:
    """g^j by the closed form: second coordinate j*v, first a geometric sum."""
    if j < 0:
        return gamma_pow(gamma_inv(g, p), -j, p)
    qv = _q(p) ** g.v
    if qv == 1:
        return GammaElement(j * g.u, j * g.v)
    total = (qv**j - 1) / (qv - 1)
    return GammaElement(g.u * total, j * g.v)


def phi(w: Word, p: BSParams) -> GammaElement:
    """Image of a word under a -> (1,0), b -> (0,1); a homomorphism."""
    q = _q(p)
    u, v = Fraction(0), 0
    for letter, exp in w.syllables:
        if letter == "a":
            u += q**v * exp
        else:
            v += exp
    return GammaElement(u, v)


def conjugation_formula(g_image: GammaElement, k: int, p: BSParams) -> GammaElement:
    """(q^v * k, 0) where g_image = (u, v); equals phi(g a^k g^-1)."""
    return GammaElement(_q(p) ** g_image.v * k, 0)


def project_p(g: GammaElement) -> int:
    """Projection to the Z factor; composed with phi it gives the b-exponent sum."""
    return g.v


def cyclic_membership(c: CyclicSubgroup, g: GammaElement, p: BSParams) -> int | None:
    """The j with generator^j == g, or None.

    For a generator (x, y) with y != 0 the exponent is forced to v/y; with
    y == 0 and x != 0 it is forced to u/x at v == 0.  The identity generator
    only reaches the identity (j = 0 by convention).
    """
    gen = c.generator
    if gen.is_identity:
        return 0 if g.is_identity else None
    if gen.v != 0:
        if g.v % gen.v != 0:
            return None
        j = g.v // gen.v
        return j if gamma_pow(gen, j, p) == g else None
    if g.v != 0:
        return None
    ratio = g.u / gen.u
    if ratio.denominator != 1:
        return None
    j = int(ratio)
    return j if gamma_pow(gen, j, p) == g else None


def denominator_ok(g: GammaElement, p: BSParams) -> bool:
    """True when every prime factor of u's denominator divides m*n."""
    d = g.u.denominator
    base = abs(p.m * p.n)
    while d > 1:
        common = gcd(d, base)
        if common == 1:
            return False
        while d % common == 0:
            d //= common
    return True


def format_rational(x: RationalLike) -> str:
    """Lowest-terms text form, sign on the numerator, no '/1' for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)
