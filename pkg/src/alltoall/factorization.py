"""Decomposing regular digraphs into vertex bijections, and spanning word lists.

A d-regular digraph always splits into d arc-disjoint 1-factors (spanning
subgraphs with in- and out-degree 1, i.e. vertex bijections): send each arc
(u, v) to the bipartite graph on tails and heads and peel off d perfect
matchings.  A spanning factorization additionally carries one word per
vertex over the factor alphabet such that walking the words from ANY base
hits every vertex exactly once -- the property that lets one timed word list
serve all sources of an all-to-all exchange simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InputError, StructureError, UnsupportedGraphError
from .graphs import CosetGraph, Digraph, as_digraph, regular_degree
from .layers import distances_from
from .words import WordSet, validate_word_set

DEFAULT_SEARCH_BUDGET = 1_000_000


@dataclass(frozen=True)
class OneFactorization:
    """d vertex bijections that partition a digraph's arc multiset.

    factors[j][u] is where factor j sends vertex u; factor_of[a] is the
    factor that claimed arc a, indexed as in Digraph.arcs().
    """

    factors: tuple[tuple[int, ...], ...]
    factor_of: tuple[int, ...]


def validate_one_factorization(g: Digraph, f: OneFactorization) -> None:
    """Check both defining properties; raise InputError on any violation."""
    n = g.vertex_count
    for j, succ in enumerate(f.factors):
        if len(succ) != n or sorted(succ) != list(range(n)):
            raise InputError(f"factor {j} is not a bijection on {n} vertices: {succ}")
    arcs = g.arcs()
    if len(f.factor_of) != len(arcs):
        raise InputError(f"factor_of labels {len(f.factor_of)} arcs, graph has {len(arcs)}")
    claimed: dict[int, list[int]] = {}
    for a, (u, v, _) in enumerate(arcs):
        j = f.factor_of[a]
        if not (0 <= j < len(f.factors)):
            raise InputError(f"arc {a} assigned to nonexistent factor {j}")
        if f.factors[j][u] != v:
            raise InputError(f"arc {a} = ({u}, {v}) assigned to factor {j}, which sends {u} to {f.factors[j][u]}")
        claimed.setdefault(u * len(f.factors) + j, []).append(a)
    for slot, owners in claimed.items():
        if len(owners) != 1:
            raise InputError(f"factor {slot % len(f.factors)} claims {len(owners)} arcs out of vertex {slot // len(f.factors)}")


def _perfect_matching(n: int, adj: list[list[tuple[int, int]]]) -> list[int] | None:
    """One perfect matching in the tails/heads bipartite graph.

    adj[u] lists (arc id, head) options for tail u.  Classic augmenting-path
    matching, tails and arcs scanned in index order, so the result is
    deterministic.  Returns the matched arc id per tail, or None.
    """
    match_head: dict[int, int] = {}  # head -> arc id
    match_tail: list[int] = [-1] * n

    def augment(u: int, seen: set[int]) -> bool:
        for arc_id, v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            owner = match_head.get(v)
            if owner is None or augment(owner_tail[v], seen):
                match_head[v] = arc_id
                owner_tail[v] = u
                match_tail[u] = arc_id
                return True
        return False

    owner_tail: dict[int, int] = {}
    for u in range(n):
        if not augment(u, set()):
            return None
    return match_tail


def one_factorize(g: Digraph) -> OneFactorization:
    """Split a d-regular digraph into d factors by repeated perfect matching.

    Each round matches every tail to a distinct head using only arcs not yet
    claimed; regularity guarantees a perfect matching exists at every round
    (the remaining bipartite graph stays regular).
    """
    d = regular_degree(g)
    n = g.vertex_count
    arcs = g.arcs()
    remaining: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a, (u, v, _) in enumerate(arcs):
        remaining[u].append((a, v))
    factor_of = [-1] * len(arcs)
    factors: list[tuple[int, ...]] = []
    for j in range(d):
        matched = _perfect_matching(n, remaining)
        if matched is None:
            raise InputError(
                "no perfect matching among remaining arcs; the input cannot "
                "have been regular"
            )
        succ = [0] * n
        for u, arc_id in enumerate(matched):
            succ[u] = arcs[arc_id][1]
            factor_of[arc_id] = j
            remaining[u] = [(a, v) for a, v in remaining[u] if a != arc_id]
        factors.append(tuple(succ))
    result = OneFactorization(factors=tuple(factors), factor_of=tuple(factor_of))
    validate_one_factorization(g, result)
    return result


# ---------------------------------------------------------------------------
# spanning factorizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpanningFactorization:
    """A 1-factorization plus one word per vertex (words[0] is empty).

    The defining property: from every base vertex, walking all n words gives
    n pairwise-distinct endpoints.
    """

    base: OneFactorization
    words: tuple[tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return len(self.base.factors)

    @property
    def vertex_count(self) -> int:
        return len(self.base.factors[0])


def walk_word(factors: Sequence[Sequence[int]], start: int, word: Sequence[int]) -> int:
    """Endpoint of following `word`'s factors in order from `start`."""
    v = start
    for j in word:
        v = factors[j][v]
    return v


def factorization_from_successors(factors: Sequence[Sequence[int]]) -> OneFactorization:
    """Rebuild a OneFactorization from stored successor arrays.

    Each array must be a bijection on the common vertex set.  The arc-claim
    table is laid out for factor_digraph's ordering (out-position = factor
    index), which is the layout replays use.
    """
    if not factors:
        raise StructureError("need at least one factor")
    n = len(factors[0])
    cleaned = []
    for j, succ in enumerate(factors):
        succ = tuple(int(v) for v in succ)
        if len(succ) != n or sorted(succ) != list(range(n)):
            raise StructureError(f"factor {j} is not a bijection on 0..{n - 1}")
        cleaned.append(succ)
    factor_of = tuple(j for _ in range(n) for j in range(len(cleaned)))
    return OneFactorization(factors=tuple(cleaned), factor_of=factor_of)


def factor_digraph(f: OneFactorization) -> Digraph:
    """The factorization's arc layout: out-position j at each vertex is factor j's arc.

    Same arc multiset as the factorized graph (the factors partition it),
    re-ordered so that factor indices work as out-arc positions; timed paths
    over factor words replay against this layout.
    """
    n = len(f.factors[0])
    return Digraph(out=tuple(tuple(succ[v] for succ in f.factors) for v in range(n)))


@dataclass(frozen=True)
class SpanningCheck:
    """verify_spanning outcome; witness is (base, i, j) for a collision."""

    ok: bool
    witness: tuple[int, int, int] | None
    reason: str


def verify_spanning(factors: Sequence[Sequence[int]], words: Sequence[Sequence[int]], n: int) -> SpanningCheck:
    """Walk every word from every base and look for endpoint collisions."""
    if len(words) != n:
        return SpanningCheck(
            ok=False,
            witness=None,
            reason=f"word list has {len(words)} words for {n} vertices; endpoints cannot cover the graph",
        )
    d = len(factors)
    for i, word in enumerate(words):
        for j in word:
            if not (0 <= j < d):
                return SpanningCheck(ok=False, witness=None, reason=f"word {i} uses factor {j}, out of range")
    for base in range(n):
        seen: dict[int, int] = {}
        for i, word in enumerate(words):
            end = walk_word(factors, base, word)
            if end in seen:
                return SpanningCheck(
                    ok=False,
                    witness=(base, seen[end], i),
                    reason=f"words {seen[end]} and {i} both end at {end} from base {base}",
                )
            seen[end] = i
    return SpanningCheck(ok=True, witness=None, reason="")


def spanning_factorization_from_cayley(g: CosetGraph, ws: WordSet) -> SpanningFactorization:
    """Generator classes as factors, the word set (plus empty word) as words.

    On a Cayley graph each generator's arcs form a bijection (right
    multiplication), and endpoints from base v are v*g_i, distinct because
    group elements are.  The verification guard stays on anyway.
    """
    if not g.is_cayley:
        raise UnsupportedGraphError(
            "generator classes are only bijections over a trivial subgroup; "
            "use the search for proper coset graphs"
        )
    validate_word_set(g, ws)
    dg = as_digraph(g)
    factors = tuple(tuple(g.edges[u][j] for u in range(g.vertex_count)) for j in range(g.degree))
    factor_of = tuple(j for _, _, j in dg.arcs())
    base = OneFactorization(factors=factors, factor_of=factor_of)
    validate_one_factorization(dg, base)
    words = tuple(tuple(ws.words[v]) if v else () for v in range(g.vertex_count))
    check = verify_spanning(factors, words, g.vertex_count)
    if not check.ok:
        raise AssertionError(f"Cayley spanning construction failed its own check: {check.reason}")
    return SpanningFactorization(base=base, words=words)


# ---------------------------------------------------------------------------
# search for spanning factorizations of general regular digraphs
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    """Outcome of search_spanning_factorization.

    found is None on failure; reason says why ("budget" or "exhausted");
    best_depth reports the deepest word prefix ever assigned, factorizations
    how many 1-factorizations were word-searched, nodes the total search
    nodes spent.
    """

    found: SpanningFactorization | None
    nodes: int
    factorizations: int
    best_depth: int
    reason: str


def _iter_factorizations(g: Digraph, d: int) -> Iterator[OneFactorization]:
    """All 1-factorizations, lazily, without repeating factor-order permutations.

    Factors are produced in increasing order of the arc they claim at vertex
    0, which picks exactly one representative from each permutation class.
    Matchings are enumerated by assigning tails in index order.
    """
    n = g.vertex_count
    arcs = g.arcs()
    by_tail: list[list[int]] = [[] for _ in range(n)]
    for a, (u, _, _) in enumerate(arcs):
        by_tail[u].append(a)
    arc_used = [False] * len(arcs)

    def matchings(u: int, head_used: list[bool], picked: list[int], min_first: int) -> Iterator[list[int]]:
        if u == n:
            yield list(picked)
            return
        for a in by_tail[u]:
            if arc_used[a] or (u == 0 and a <= min_first):
                continue
            head = arcs[a][1]
            if head_used[head]:
                continue
            head_used[head] = True
            picked.append(a)
            yield from matchings(u + 1, head_used, picked, min_first)
            picked.pop()
            head_used[head] = False

    def build(level: int, prev_first: int, chosen: list[list[int]]) -> Iterator[OneFactorization]:
        if level == d:
            factor_of = [-1] * len(arcs)
            factors = []
            for j, picked in enumerate(chosen):
                succ = [0] * n
                for a in picked:
                    u, v, _ = arcs[a]
                    succ[u] = v
                    factor_of[a] = j
                factors.append(tuple(succ))
            yield OneFactorization(factors=tuple(factors), factor_of=tuple(factor_of))
            return
        head_used = [False] * n
        for picked in matchings(0, head_used, [], prev_first):
            for a in picked:
                arc_used[a] = True
            chosen.append(picked)
            yield from build(level + 1, picked[0], chosen)
            chosen.pop()
            for a in picked:
                arc_used[a] = False

    yield from build(0, -1, [])


def _words_of_length(factors: Sequence[Sequence[int]], target: int, length: int, cache: dict) -> list[tuple[int, ...]]:
    """All factor words of exactly `length` ending at `target` from vertex 0."""
    key = (target, length)
    if key in cache:
        return cache[key]
    d = len(factors)
    results: list[tuple[int, ...]] = []

    def extend(v: int, word: tuple[int, ...]) -> None:
        if len(word) == length:
            if v == target:
                results.append(word)
            return
        for j in range(d):
            extend(factors[j][v], word + (j,))

    extend(0, ())
    cache[key] = results
    return results


def search_spanning_factorization(
    g: Digraph,
    budget: int = DEFAULT_SEARCH_BUDGET,
    max_slack: int = 2,
) -> SearchResult:
    """Backtracking search for a spanning factorization of a regular digraph.

    Outer loop: total extra word length (0, 1, ... max_slack), so short word
    lists are found before longer ones.  Middle loop: 1-factorizations,
    enumerated lazily.  Inner search: assign words vertex by vertex in
    (distance, index) order, keeping per-base endpoint sets and failing a
    candidate the moment any base sees a repeated endpoint.  The budget
    counts candidate-word attempts across everything; exhaustion reports
    failure rather than nonexistence.
    """
    d = regular_degree(g)
    n = g.vertex_count
    # the factors partition g's arcs, so distances over the factor alphabet
    # coincide with graph distances; one BFS serves every factorization
    dist = distances_from(g, 0)
    order = sorted(range(1, n), key=lambda v: (dist[v], v))
    nodes = 0
    factorizations = 0
    best_depth = 0
    out_of_budget = False

    for slack in range(max_slack + 1):
        for fact in _iter_factorizations(g, d):
            factorizations += 1
            cache: dict = {}
            ends: list[set[int]] = [{b} for b in range(n)]  # empty word's endpoint
            chosen: list[tuple[int, ...]] = [()] * n

            def assign(pos: int, slack_left: int) -> bool:
                nonlocal nodes, best_depth, out_of_budget
                if pos == len(order):
                    return True
                v = order[pos]
                for extra in range(slack_left + 1):
                    for word in _words_of_length(fact.factors, v, dist[v] + extra, cache):
                        if nodes >= budget:
                            out_of_budget = True
                            return False
                        nodes += 1
                        endpoints = [walk_word(fact.factors, b, word) for b in range(n)]
                        if any(endpoints[b] in ends[b] for b in range(n)):
                            continue
                        for b in range(n):
                            ends[b].add(endpoints[b])
                        chosen[v] = word
                        best_depth = max(best_depth, pos + 1)
                        if assign(pos + 1, slack_left - extra):
                            return True
                        for b in range(n):
                            ends[b].discard(endpoints[b])
                        if out_of_budget:
                            return False
                return False

            if assign(0, slack):
                words = tuple(chosen)
                check = verify_spanning(fact.factors, words, n)
                if not check.ok:
                    raise AssertionError(f"search produced an invalid factorization: {check.reason}")
                found = SpanningFactorization(base=fact, words=words)
                return SearchResult(
                    found=found, nodes=nodes, factorizations=factorizations,
                    best_depth=best_depth, reason="",
                )
            if out_of_budget:
                return SearchResult(
                    found=None, nodes=nodes, factorizations=factorizations,
                    best_depth=best_depth, reason="budget",
                )
    return SearchResult(
        found=None, nodes=nodes, factorizations=factorizations,
        best_depth=best_depth, reason="exhausted",
    )
