"""Distance layers and the averaged lower bound on exchange time.

Every packet in a full exchange must cross at least dist(src, dst) arcs, and
only P*d arcs exist per time slot, so total work over capacity bounds the
schedule length from below.  On a vertex-symmetric graph the per-vertex
layer profile already determines that bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ConnectivityError, UnsupportedGraphError
from .graphs import CosetGraph, Graph


@dataclass(frozen=True)
class LayerProfile:
    """Layer sizes and the derived time bound for one graph.

    layer_sizes[k] is the number of vertices at distance exactly k from the
    base (so layer_sizes[0] == 1).  pair_counts[k] is the number of ordered
    vertex pairs at distance k, measured over all sources rather than
    inferred from symmetry, so it stays honest on raw digraphs.
    """

    vertex_count: int
    degree: int
    diameter: int
    layer_sizes: tuple[int, ...]
    pair_counts: tuple[int, ...]

    @property
    def avg_time_bound(self) -> int:
        return average_diameter_bound(self)


def _bfs_distances(g: Graph, base: int) -> list[int]:
    n = g.vertex_count
    dist = [-1] * n
    dist[base] = 0
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    if min(dist) < 0:
        missing = dist.count(-1)
        raise ConnectivityError(
            f"not connected: {missing} of {n} vertices are unreachable from vertex {base}"
        )
    return dist


def distances_from(g: Graph, base: int = 0) -> list[int]:
    """Shortest-path distance from `base` to every vertex (arcs have unit length)."""
    return _bfs_distances(g, base)


def layer_profile(g: Graph, base: int = 0) -> LayerProfile:
    """Measure layer sizes from `base` and pair counts from every source.

    For a coset graph the per-source profiles must all agree (the graph is
    vertex symmetric by construction); a disagreement means the build is
    broken, so it raises rather than returning a half-true profile.
    """
    n = g.vertex_count
    degree = len(g.successors(0))
    base_dist = _bfs_distances(g, base)
    sizes = [0] * (max(base_dist) + 1)
    for dv in base_dist:
        sizes[dv] += 1

    diameter = max(base_dist)
    pair_counts = [0] * (diameter + 1)
    for src in range(n):
        dist = base_dist if src == base else _bfs_distances(g, src)
        local = max(dist)
        if local > diameter:
            pair_counts.extend([0] * (local - diameter))
            diameter = local
        if isinstance(g, CosetGraph):
            per_source = [0] * (local + 1)
            for dv in dist:
                per_source[dv] += 1
            if per_source != sizes:
                raise UnsupportedGraphError(
                    f"coset graph is not vertex symmetric: profile from {src} is "
                    f"{per_source} but from {base} it is {sizes}"
                )
        for dv in dist:
            pair_counts[dv] += 1

    return LayerProfile(
        vertex_count=n,
        degree=degree,
        diameter=diameter,
        layer_sizes=tuple(sizes),
        pair_counts=tuple(pair_counts),
    )


def average_diameter_bound(profile: LayerProfile) -> int:
    """ceil(sum of k * layer_sizes[k] / degree): the per-vertex work bound.

    The base vertex must push one packet to each of the layer_sizes[k]
    vertices at distance k, each needing k arc crossings, and it owns only
    `degree` outgoing arcs per time slot.
    """
    total = sum(k * nk for k, nk in enumerate(profile.layer_sizes))
    return -(-total // profile.degree)


def global_time_bound(profile: LayerProfile) -> int:
    """ceil(total pair work / total arc capacity); never exceeds the average bound."""
    total = sum(k * nk for k, nk in enumerate(profile.pair_counts))
    return -(-total // (profile.vertex_count * profile.degree))


def ball(g: Graph, center: int, radius: int) -> frozenset[int]:
    """Vertices within `radius` arcs of `center` (center included)."""
    dist = _bfs_distances(g, center)
    return frozenset(v for v, dv in enumerate(dist) if dv <= radius)


def layer(g: Graph, center: int, radius: int) -> frozenset[int]:
    """Vertices at exactly `radius` arcs from `center`."""
    dist = _bfs_distances(g, center)
    return frozenset(v for v, dv in enumerate(dist) if dv == radius)
