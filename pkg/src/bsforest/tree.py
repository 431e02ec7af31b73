"""The Bass-Serre tree of BS(m,n) with a canonical coset naming scheme.

Vertices are left cosets gH with H = <a>; edges are left cosets gN with
N = <a^m>, oriented from gH to gbH.  Every vertex at distance k from the
base vertex H has a unique address

    [(i_1, e_1), ..., (i_k, e_k)],   e_t in {+1, -1},

meaning the coset representative a^i1 b^e1 ... a^ik b^ek, subject to
0 <= i_t < m when e_t = +1, 0 <= i_t < |n| when e_t = -1, and i_t != 0
whenever e_t differs from e_{t-1} (no backtracking).  The address spells the
geodesic from the base, so distances and geodesics reduce to prefix
arithmetic, and the left action is computed letter by letter with carries
pushed deeper via a^(mk) b = b a^(nk) and a^(nk) b^-1 = b^-1 a^(mk).

The tree's combinatorics only see m and |n|; m must be positive (normalize
parameters first if needed).  The sign of n matters to the affine
representation and to complex orientations, never to addresses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .affine import CyclicSubgroup, conjugation_formula, cyclic_membership, format_rational, phi
from .words import BSParams, Word, free_reduce

Syllable = tuple[int, int]


class AddressSyntaxError(ValueError):
    """Raised when an address string or its canonicity constraints fail."""


class UnsupportedFormat(ValueError):
    """Raised by export_ball for formats other than dot/json."""


@dataclass(frozen=True)
class VertexAddress:
    """Canonical name of a tree vertex; the empty address is the base vertex H."""

    syllables: tuple[Syllable, ...] = ()

    def __str__(self) -> str:
        return address_to_text(self)

    @property
    def depth(self) -> int:
        return len(self.syllables)

    @property
    def level(self) -> int:
        """Sum of the b-signs along the address (equals D(base, self))."""
        return sum(e for _, e in self.syllables)

    def prefix(self, t: int) -> "VertexAddress":
        return VertexAddress(self.syllables[:t])

    def parent(self) -> "VertexAddress":
        return VertexAddress(self.syllables[:-1])

    def child(self, i: int, e: int) -> "VertexAddress":
        return VertexAddress(self.syllables + ((i, e),))


BASE = VertexAddress()


@dataclass(frozen=True)
class EdgeAddress:
    """The edge (repr(tail) * a^slot) N, oriented away from its tail vertex."""

    tail: VertexAddress
    slot: int


@dataclass(frozen=True)
class PathStep:
    edge: EdgeAddress
    forward: bool


@dataclass(frozen=True)
class OrientedPath:
    steps: tuple[PathStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def signed_step_sum(self) -> int:
        return sum(1 if s.forward else -1 for s in self.steps)


def _check_positive_m(p: BSParams) -> None:
    if p.m < 0:
        raise ValueError(f"tree addresses need m > 0; normalize ({p.m}, {p.n}) first")


def _modulus(e: int, p: BSParams) -> int:
    return p.m if e > 0 else p.abs_n


def validate_address(v: VertexAddress, p: BSParams) -> None:
    _check_positive_m(p)
    prev_e = None
    for i, e in v.syllables:
        if e not in (1, -1):
            raise AddressSyntaxError(f"bad sign {e} in address")
        if not 0 <= i < _modulus(e, p):
            raise AddressSyntaxError(f"slot {i} out of range for sign {e:+d}")
        if prev_e is not None and prev_e != e and i == 0:
            raise AddressSyntaxError("backtracking syllable (0 after a sign change)")
        prev_e = e


def _prepend_a(t: int, syllables: tuple[Syllable, ...], p: BSParams) -> tuple[Syllable, ...]:
    # a^t fixes the base; otherwise adjust the first slot and push the carry
    # deeper: a^(mk) b = b a^(nk), a^(|n|k) b^-1 = b^-1 a^(m*sign(n)*k).
    if t == 0 or not syllables:
        return syllables
    i, e = syllables[0]
    mod = _modulus(e, p)
    total = i + t
    new_i = total % mod
    carry = (total - new_i) // mod
    rest = syllables[1:]
    if carry:
        deeper = carry * p.n if e > 0 else carry * p.m * (1 if p.n > 0 else -1)
        rest = _prepend_a(deeper, rest, p)
    return ((new_i, e),) + rest


def _prepend_b(sign: int, syllables: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    if syllables and syllables[0] == (0, -sign):
        return syllables[1:]
    return ((0, sign),) + syllables


def act(w: Word, v: VertexAddress, p: BSParams) -> VertexAddress:
    """Left action of a word on a vertex; the result is again canonical."""
    _check_positive_m(p)
    syllables = v.syllables
    for letter, exp in reversed(w.syllables):
        if letter == "a":
            syllables = _prepend_a(exp, syllables, p)
        else:
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                syllables = _prepend_b(sign, syllables)
    return VertexAddress(syllables)


def vertex_from_word(g: Word, p: BSParams) -> VertexAddress:
    """The canonical address of the coset gH."""
    return act(g, BASE, p)


def representative(v: VertexAddress) -> Word:
    """The coset representative a^i1 b^e1 ... a^ik b^ek as a word."""
    raw: list[tuple[str, int]] = []
    for i, e in v.syllables:
        raw.append(("a", i))
        raw.append(("b", e))
    return free_reduce(raw)


def edge_endpoints(e: EdgeAddress, p: BSParams) -> tuple[VertexAddress, VertexAddress]:
    """(tail, head) of an edge; head is the tail shifted across one b."""
    _check_positive_m(p)
    if not 0 <= e.slot < p.m:
        raise AddressSyntaxError(f"edge slot {e.slot} out of range 0..{p.m - 1}")
    tail = e.tail
    if tail.syllables and tail.syllables[-1][1] == -1 and e.slot == 0:
        return tail, tail.parent()
    return tail, tail.child(e.slot, 1)


def out_edges(v: VertexAddress, p: BSParams) -> list[EdgeAddress]:
    _check_positive_m(p)
    return [EdgeAddress(v, slot) for slot in range(p.m)]


def in_edges(v: VertexAddress, p: BSParams) -> list[EdgeAddress]:
    """The |n| edges whose head is v."""
    _check_positive_m(p)
    edges = []
    if v.syllables and v.syllables[-1][1] == 1:
        edges.append(EdgeAddress(v.parent(), v.syllables[-1][0]))
        first = 1
    else:
        first = 0
    for s in range(first, p.abs_n):
        edges.append(EdgeAddress(v.child(s, -1), 0))
    return edges


def neighbors(v: VertexAddress, p: BSParams) -> list[VertexAddress]:
    """Heads of the out-edges then tails of the in-edges (m + |n| vertices)."""
    result = [edge_endpoints(e, p)[1] for e in out_edges(v, p)]
    result.extend(e.tail for e in in_edges(v, p))
    return result


def _address_sort_key(v: VertexAddress) -> tuple:
    return (v.depth, v.syllables)


def ball(radius: int, p: BSParams) -> list[VertexAddress]:
    """All vertices within the given distance of the base, sorted by
    (depth, syllables) for reproducible enumeration."""
    _check_positive_m(p)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    seen = {BASE}
    frontier = [BASE]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in neighbors(v, p):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen, key=_address_sort_key)


def ball_edges(radius: int, p: BSParams) -> list[EdgeAddress]:
    """Edges with both endpoints in the radius ball, in enumeration order."""
    vertices = set(ball(radius, p))
    edges = []
    for v in sorted(vertices, key=_address_sort_key):
        for e in out_edges(v, p):
            if edge_endpoints(e, p)[1] in vertices:
                edges.append(e)
    return edges


def _common_prefix_len(u: VertexAddress, v: VertexAddress) -> int:
    t = 0
    for x, y in zip(u.syllables, v.syllables):
        if x != y:
            break
        t += 1
    return t


def _step_between(parent: VertexAddress, child_syllable: Syllable, descending: bool) -> PathStep:
    i, e = child_syllable
    child = parent.child(i, e)
    if e == 1:
        edge = EdgeAddress(parent, i)
        return PathStep(edge, forward=descending)
    edge = EdgeAddress(child, 0)
    return PathStep(edge, forward=not descending)


def geodesic(u: VertexAddress, v: VertexAddress) -> OrientedPath:
    """The unique geodesic: up from u to the common prefix, then down to v."""
    lcp = _common_prefix_len(u, v)
    steps = []
    for t in range(u.depth, lcp, -1):
        steps.append(_step_between(u.prefix(t - 1), u.syllables[t - 1], descending=False))
    for t in range(lcp, v.depth):
        steps.append(_step_between(v.prefix(t), v.syllables[t], descending=True))
    return OrientedPath(tuple(steps))


def tree_distance(u: VertexAddress, v: VertexAddress) -> int:
    lcp = _common_prefix_len(u, v)
    return (u.depth - lcp) + (v.depth - lcp)


def signed_distance(u: VertexAddress, v: VertexAddress) -> int:
    """Distance counted with signs along the geodesic: +1 per step traversed
    with the tree orientation, -1 against.  Equals level(v) - level(u)."""
    return v.level - u.level


def path_endpoints(path: OrientedPath, p: BSParams) -> tuple[VertexAddress, VertexAddress] | None:
    """(start, end) of a path, or None for the empty path."""
    if not path.steps:
        return None
    starts = []
    for step in path.steps:
        tail, head = edge_endpoints(step.edge, p)
        starts.append((tail, head) if step.forward else (head, tail))
    return starts[0][0], starts[-1][1]


def stabilizer_generator(v: VertexAddress) -> Word:
    """g a g^-1 for the representative g of v; generates the full stabilizer."""
    g = representative(v)
    return g * Word((("a", 1),)) * ~g


@dataclass(frozen=True)
class FreeActionReport:
    """Bounded certificate that a cyclic subgroup meets no vertex stabilizer image."""

    generator_u: str
    generator_v: int
    radius: int
    k_max: int
    checks: int
    passed: bool
    witness_vertex: str | None = None
    witness_k: int | None = None

    def as_dict(self) -> dict:
        return {
            "generator": {"u": self.generator_u, "v": self.generator_v},
            "radius": self.radius,
            "k_max": self.k_max,
            "checks": self.checks,
            "pass": self.passed,
            "witness": None
            if self.witness_vertex is None
            else {"vertex": self.witness_vertex, "k": self.witness_k},
        }


def free_action_check(c: CyclicSubgroup, radius: int, k_max: int, p: BSParams) -> FreeActionReport:
    """Check phi(g a^k g^-1) misses the cyclic subgroup for every ball vertex
    representative g and every 0 < |k| <= k_max.

    Passing certifies freeness only on the sampled window; generators with a
    nonzero second coordinate must always pass.
    """
    checks = 0
    for v in ball(radius, p):
        g_image = phi(representative(v), p)
        for k in _alternating(k_max):
            checks += 1
            image = conjugation_formula(g_image, k, p)
            if cyclic_membership(c, image, p) is not None:
                return FreeActionReport(
                    format_rational(c.generator.u),
                    c.generator.v,
                    radius,
                    k_max,
                    checks,
                    False,
                    address_to_text(v),
                    k,
                )
    return FreeActionReport(
        format_rational(c.generator.u), c.generator.v, radius, k_max, checks, True
    )


def _alternating(k_max: int) -> Iterator[int]:
    for k in range(1, k_max + 1):
        yield k
        yield -k


# --- address text and ball export ---------------------------------------


def address_to_text(v: VertexAddress) -> str:
    """Comma-separated ``i:+`` / ``i:-`` tokens; the base vertex is ''."""
    return ",".join(f"{i}:{'+' if e > 0 else '-'}" for i, e in v.syllables)


def parse_address(text: str, p: BSParams) -> VertexAddress:
    s = text.strip()
    if not s:
        return BASE
    syllables = []
    for token in s.split(","):
        token = token.strip()
        head, sep, sign = token.partition(":")
        if not sep or sign not in ("+", "-") or not head.lstrip("-").isdigit():
            raise AddressSyntaxError(f"bad address token {token!r}")
        syllables.append((int(head), 1 if sign == "+" else -1))
    v = VertexAddress(tuple(syllables))
    validate_address(v, p)
    return v


def export_ball(radius: int, fmt: str, p: BSParams) -> str:
    """The radius ball as DOT or JSON text, orientation tail -> head."""
    if fmt not in ("dot", "json"):
        raise UnsupportedFormat(f"unsupported export format {fmt!r}")
    vertices = ball(radius, p)
    edges = ball_edges(radius, p)
    if fmt == "dot":
        lines = ["digraph T {"]
        for v in vertices:
            lines.append(f'  "{address_to_text(v)}";')
        for e in edges:
            tail, head = edge_endpoints(e, p)
            lines.append(f'  "{address_to_text(tail)}" -> "{address_to_text(head)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    payload = {
        "params": {"m": p.m, "n": p.n},
        "vertices": [address_to_text(v) for v in vertices],
        "edges": [
            {
                "tail": address_to_text(e.tail),
                "head": address_to_text(edge_endpoints(e, p)[1]),
                "slot": e.slot,
            }
            for e in edges
        ],
    }
    return json.dumps(payload, sort_keys=True) + "\n"
