"""Quotients of the tree by the kernel of the b-exponent homomorphism.

Two vertices lie in one orbit of the subgroup killed by the b-exponent sum
exactly when their levels agree; the witness repr(v) * repr(u)^-1 then has
b-exponent sum zero and carries u to v.  On a radius-R ball the quotient is
therefore a path: one circle vertex per level -R..R and one oriented edge
per level step, each carrying covering degrees (m, n).

This module also provides the generic pieces that make signed counts
well-defined on arbitrary oriented multigraphs: orientation parity of loops
and a spanning-tree potential with balance checking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random

from . import tree as _tree
from .tree import BASE, EdgeAddress, OrientedPath, PathStep, VertexAddress
from .words import BSParams, Word, b_exponent_sum


class InvalidPath(ValueError):
    """Raised when consecutive path steps do not share a vertex."""


class NotALoop(ValueError):
    """Raised when a step list does not close up in the graph."""


class UnbalancedLoop(ValueError):
    """Raised when a cycle has unequal with/against orientation counts."""

    def __init__(self, message: str, cycle: list[tuple[int, bool]]):
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class CircleVertex:
    id: int
    mark: int = 0


@dataclass(frozen=True)
class CircleEdge:
    id: int
    tail: int
    head: int
    tail_degree: int
    head_degree: int

    def __post_init__(self) -> None:
        if self.tail_degree == 0 or self.head_degree == 0:
            raise ValueError("covering degrees must be nonzero")


@dataclass(frozen=True)
class GraphOfCircles:
    """Oriented multigraph with per-edge covering degrees; loops and parallel
    edges are allowed."""

    vertices: tuple[CircleVertex, ...]
    edges: tuple[CircleEdge, ...]

    def vertex_ids(self) -> list[int]:
        return [v.id for v in self.vertices]

    def edge_by_id(self, edge_id: int) -> CircleEdge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"no edge with id {edge_id}")

    def incidence(self) -> dict[int, list[tuple[CircleEdge, bool]]]:
        """vertex id -> (edge, leaves-along-orientation) pairs."""
        table: dict[int, list[tuple[CircleEdge, bool]]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            table[e.tail].append((e, True))
            table[e.head].append((e, False))
        return table

    def to_json(self) -> str:
        payload = {
            "vertices": [{"id": v.id, "mark": v.mark} for v in self.vertices],
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "dt": e.tail_degree, "dh": e.head_degree}
                for e in self.edges
            ],
        }
        return json.dumps(payload, sort_keys=True) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph Y {"]
        for v in self.vertices:
            lines.append(f'  "{v.id}" [label="{v.id} (#{v.mark})"];')
        for e in self.edges:
            lines.append(f'  "{e.tail}" -> "{e.head}" [label="{e.tail_degree}:{e.head_degree}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_from_json(text: str) -> GraphOfCircles:
    payload = json.loads(text)
    vertices = tuple(CircleVertex(v["id"], v.get("mark", 0)) for v in payload["vertices"])
    edges = tuple(
        CircleEdge(e["id"], e["tail"], e["head"], e["dt"], e["dh"]) for e in payload["edges"]
    )
    return GraphOfCircles(vertices, edges)


def level(v: VertexAddress) -> int:
    """Signed count of b-steps from the base to v (the # function)."""
    return v.level


def same_ker_f_orbit(u: VertexAddress, v: VertexAddress, p: BSParams) -> Word | None:
    """A word with zero b-exponent sum carrying u to v, or None.

    Orbits of the kernel of the b-exponent map are exactly the level sets, so
    the witness exists precisely when the levels agree.
    """
    if level(u) != level(v):
        return None
    witness = _tree.representative(v) * ~_tree.representative(u)
    assert b_exponent_sum(witness) == 0
    return witness


def quotient_ball_ker_f(radius: int, p: BSParams) -> GraphOfCircles:
    """Quotient of the radius ball by the kernel-of-f action.

    Vertex orbits are level sets, edge orbits are tail-level sets; the result
    is a path with vertices marked -radius..radius and every edge carrying
    degrees (m, n).  Vertex and edge ids are the levels (tail level for edges).
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    vertex_levels = sorted({level(v) for v in _tree.ball(radius, p)})
    edge_levels = sorted(
        {level(_tree.edge_endpoints(e, p)[0]) for e in _tree.ball_edges(radius, p)}
    )
    vertices = tuple(CircleVertex(k, mark=k) for k in vertex_levels)
    edges = tuple(CircleEdge(k, k, k + 1, p.m, p.n) for k in edge_levels)
    return GraphOfCircles(vertices, edges)


def reduce_path(path: OrientedPath, p: BSParams) -> OrientedPath:
    """Cancel adjacent step/inverse-step pairs until none remain.

    Every cancellation preserves the endpoints and the signed step sum; in a
    tree the result is the geodesic between the endpoints.
    """
    _validate_chain(path, p)
    out: list[PathStep] = []
    for step in path.steps:
        if out and out[-1].edge == step.edge and out[-1].forward != step.forward:
            out.pop()
        else:
            out.append(step)
    return OrientedPath(tuple(out))


def _validate_chain(path: OrientedPath, p: BSParams) -> None:
    prev_end: VertexAddress | None = None
    for step in path.steps:
        tail, head = _tree.edge_endpoints(step.edge, p)
        start, end = (tail, head) if step.forward else (head, tail)
        if prev_end is not None and start != prev_end:
            raise InvalidPath(f"step starting at {start} does not continue from {prev_end}")
        prev_end = end


def random_walk(steps: int, seed: int, p: BSParams, start: VertexAddress = BASE) -> OrientedPath:
    """Deterministic random walk over incident edges, any direction."""
    from random import Random

    rng = Random(seed)
    here = start
    walk: list[PathStep] = []
    for _ in range(steps):
        options = [PathStep(e, True) for e in _tree.out_edges(here, p)]
        options.extend(PathStep(e, False) for e in _tree.in_edges(here, p))
        step = options[rng.randrange(len(options))]
        walk.append(step)
        tail, head = _tree.edge_endpoints(step.edge, p)
        here = head if step.forward else tail
    return OrientedPath(tuple(walk))


def loop_parity(
    loop: list[tuple[int, bool]], graph: GraphOfCircles
) -> tuple[int, int]:
    """(with-orientation, against-orientation) step counts of a closed loop.

    Steps are (edge id, forward) pairs; consecutive steps must chain and the
    loop must return to its starting vertex.
    """
    if not loop:
        return (0, 0)
    here = None
    plus = minus = 0
    first = None
    for edge_id, forward in loop:
        e = graph.edge_by_id(edge_id)
        start, end = (e.tail, e.head) if forward else (e.head, e.tail)
        if here is None:
            first = start
        elif start != here:
            raise NotALoop(f"step on edge {edge_id} starts at {start}, expected {here}")
        here = end
        if forward:
            plus += 1
        else:
            minus += 1
    if here != first:
        raise NotALoop(f"loop ends at {here}, started at {first}")
    return (plus, minus)


def is_balanced(loop: list[tuple[int, bool]], graph: GraphOfCircles) -> bool:
    plus, minus = loop_parity(loop, graph)
    return plus == minus


def _spanning_tree_marks(
    graph: GraphOfCircles, base: int
) -> tuple[dict[int, int], dict[int, list[tuple[int, bool]]]]:
    """BFS potential: mark(head) = mark(tail) + 1 along tree edges; also the
    tree path (as steps) from base to every vertex."""
    incidence = graph.incidence()
    if base not in incidence:
        raise KeyError(f"no vertex with id {base}")
    marks = {base: 0}
    paths: dict[int, list[tuple[int, bool]]] = {base: []}
    frontier = [base]
    while frontier:
        nxt = []
        for vid in frontier:
            for e, along in incidence[vid]:
                other = e.head if along else e.tail
                if other not in marks:
                    marks[other] = marks[vid] + (1 if along else -1)
                    paths[other] = paths[vid] + [(e.id, along)]
                    nxt.append(other)
        frontier = nxt
    missing = set(graph.vertex_ids()) - set(marks)
    if missing:
        raise ValueError(f"graph is not connected; unreachable vertices {sorted(missing)}")
    return marks, paths


def signed_count(graph: GraphOfCircles, base: int, v: int) -> int:
    """Path-independent signed edge count from base to v.

    Well-defined exactly when every loop is balanced; an offending cycle is
    reported through UnbalancedLoop otherwise.
    """
    marks, paths = _spanning_tree_marks(graph, base)
    for e in graph.edges:
        if marks[e.head] != marks[e.tail] + 1:
            back = [(eid, not along) for eid, along in reversed(paths[e.head])]
            cycle = paths[e.tail] + [(e.id, True)] + back
            raise UnbalancedLoop(
                f"edge {e.id} closes a loop with unequal orientation counts", cycle
            )
    if v not in marks:
        raise KeyError(f"no vertex with id {v}")
    return marks[v]
