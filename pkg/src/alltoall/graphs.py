"""Directed graphs on group cosets, plus a plain digraph container.

A coset graph has one vertex per left coset gH and an arc gH -> (g*d)H for
each generator d.  The arc label is the generator's position in the input
list, and labels stay attached through every later stage (word sets,
factorizations, schedules), so "generator index" means the same thing
everywhere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import groups
from .errors import ConnectivityError, CosetEdgeError, RegularityError, StructureError
from .groups import Element, GroupSpec


@dataclass(frozen=True)
class Digraph:
    """A finite digraph with parallel arcs allowed, arcs grouped by source.

    out[u] is the tuple of heads of u's out-arcs; the j-th entry is arc
    (u, j) when an arc needs a name.
    """

    out: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.out)
        for u, heads in enumerate(self.out):
            for v in heads:
                if not (0 <= v < n):
                    raise StructureError(f"arc ({u}, {v}) leaves the vertex range 0..{n - 1}")

    @property
    def vertex_count(self) -> int:
        return len(self.out)

    def successors(self, u: int) -> tuple[int, ...]:
        return self.out[u]

    def arcs(self) -> list[tuple[int, int, int]]:
        """All arcs as (src, dst, label) with label = position at the source."""
        return [(u, v, j) for u, heads in enumerate(self.out) for j, v in enumerate(heads)]

    def out_degrees(self) -> list[int]:
        return [len(heads) for heads in self.out]

    def in_degrees(self) -> list[int]:
        degs = [0] * self.vertex_count
        for heads in self.out:
            for v in heads:
                degs[v] += 1
        return degs


def regular_degree(g: Digraph) -> int:
    """Common in/out degree of a regular digraph; RegularityError otherwise."""
    outs = g.out_degrees()
    ins = g.in_degrees()
    d = outs[0] if outs else 0
    for u in range(g.vertex_count):
        if outs[u] != d or ins[u] != d:
            raise RegularityError(
                f"vertex {u} has out-degree {outs[u]} and in-degree {ins[u]}; expected {d} for a regular digraph"
            )
    return d


@dataclass(frozen=True)
class CosetGraph:
    """Vertices are canonical coset representatives; edges follow generators.

    vertices[0] is the coset of the identity.  edges[u][j] is the vertex
    reached from u along generator j.
    """

    spec: GroupSpec
    vertices: tuple[Element, ...]
    edges: tuple[tuple[int, ...], ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.spec.generators)

    @property
    def is_cayley(self) -> bool:
        return self.spec.has_trivial_subgroup

    def successors(self, u: int) -> tuple[int, ...]:
        return self.edges[u]


Graph = CosetGraph | Digraph


def validate_coset_condition(group, generators: Sequence[Element], subgroup: Sequence[Element]) -> bool:
    """True when the union of right translates dH equals the union hD.

    This set equality is exactly the condition for the coset adjacency to be
    independent of which representative names a coset.
    """
    gen_then_sub = {group.compose(d, h) for d in generators for h in subgroup}
    sub_then_gen = {group.compose(h, d) for h in subgroup for d in generators}
    return gen_then_sub == sub_then_gen


def build_cayley_coset_graph(spec: GroupSpec, cap: int = groups.DEFAULT_ELEMENT_CAP) -> CosetGraph:
    """Enumerate the group, check the coset condition, and lay out the graph.

    Vertex order is breadth-first from the identity coset with generators
    scanned in input order, so builds are reproducible.
    """
    group = spec.group
    if not validate_coset_condition(group, spec.generators, spec.subgroup):
        raise CosetEdgeError(
            "ill-defined edges: the generator set does not commute with the "
            "subgroup as a set, so coset adjacency depends on representatives"
        )
    table = groups.enumerate_group(spec, cap=cap)

    rep_cache: dict[Element, Element] = {}

    def rep_of(el: Element) -> Element:
        got = rep_cache.get(el)
        if got is None:
            got = groups.coset_canonicalize(group, el, spec.subgroup)
            for member in groups.coset_elements(group, el, spec.subgroup):
                rep_cache[member] = got
        return got

    start = rep_of(group.identity)
    vertices = [start]
    vertex_index = {start: 0}
    rows: dict[int, tuple[int, ...]] = {}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        row = []
        for gen in spec.generators:
            target = rep_of(group.compose(vertices[u], gen))
            t = vertex_index.get(target)
            if t is None:
                t = len(vertices)
                vertex_index[target] = t
                vertices.append(target)
                queue.append(t)
            row.append(t)
        rows[u] = tuple(row)

    coset_count = len(table) // len(spec.subgroup)
    if len(vertices) != coset_count:
        raise ConnectivityError(
            f"not connected: only {len(vertices)} of {coset_count} cosets are "
            f"reachable from the identity coset"
        )

    g = CosetGraph(
        spec=spec,
        vertices=tuple(vertices),
        edges=tuple(rows[u] for u in range(len(vertices))),
    )
    regular_degree(as_digraph(g))  # in-degree must match out-degree everywhere
    return g


def as_digraph(g: CosetGraph) -> Digraph:
    """Forget the group structure, keeping arcs in (vertex, generator) order."""
    return Digraph(out=g.edges)


def emit_adjacency(g: Graph) -> str:
    """Plain interchange dump: one 'src dst label' line per arc."""
    if isinstance(g, CosetGraph):
        rows = [(u, v, j) for u, heads in enumerate(g.edges) for j, v in enumerate(heads)]
    else:
        rows = g.arcs()
    return "\n".join(f"{u} {v} {j}" for u, v, j in rows) + "\n"


def digraph_from_arcs(n: int, arcs: Iterable[Sequence[int]]) -> Digraph:
    """Build a Digraph from explicit (src, dst) pairs, preserving input order."""
    if not isinstance(n, int) or n < 1:
        raise StructureError(f"vertex count must be a positive integer, got {n!r}")
    buckets: list[list[int]] = [[] for _ in range(n)]
    for arc in arcs:
        if len(arc) < 2:
            raise StructureError(f"arc {arc!r} needs a source and a target")
        u, v = int(arc[0]), int(arc[1])
        if not (0 <= u < n) or not (0 <= v < n):
            raise StructureError(f"arc ({u}, {v}) leaves the vertex range 0..{n - 1}")
        buckets[u].append(v)
    return Digraph(out=tuple(tuple(b) for b in buckets))
