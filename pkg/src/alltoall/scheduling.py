"""Conflict-free time labelings for word collections.

A schedule assigns each letter of each word a time slot so that (a) times
increase strictly along every word and (b) no two letters naming the same
factor share a time slot.  Interpreting factors as machines and words as
jobs whose operations must run in order, this is a unit-time job shop;
everything here is phrased on plain word collections so Cayley word sets
and factorization word lists schedule through the same code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError, SearchBudgetError, UnsupportedGraphError
from .graphs import CosetGraph
from .layers import LayerProfile, average_diameter_bound, distances_from, global_time_bound, layer_profile

DEFAULT_SCHEDULE_BUDGET = 10_000_000

WordMap = Mapping[int, Sequence[int]]


@dataclass(frozen=True)
class Schedule:
    """times[key][i] is the slot of the i-th letter of word `key` (slots are 1-based)."""

    times: dict[int, tuple[int, ...]]

    @property
    def makespan(self) -> int:
        latest = 0
        for slots in self.times.values():
            if slots:
                latest = max(latest, slots[-1])
        return latest


def validate_schedule(word_map: WordMap, schedule: Schedule, degree: int) -> None:
    """Raise InputError unless `schedule` is a valid labeling of `word_map`."""
    if set(schedule.times) != {k for k, w in word_map.items() if len(w) > 0}:
        raise InputError("schedule must label exactly the non-empty words")
    used: set[tuple[int, int]] = set()
    for key, word in word_map.items():
        if not word:
            continue
        slots = schedule.times[key]
        if len(slots) != len(word):
            raise InputError(f"word {key} has {len(word)} letters but {len(slots)} time slots")
        prev = 0
        for j, t in zip(word, slots):
            if not (0 <= j < degree):
                raise InputError(f"word {key} uses factor {j}, out of range for degree {degree}")
            if t <= prev:
                raise InputError(f"times must increase along word {key}: got {slots}")
            if (j, t) in used:
                raise InputError(f"factor {j} is used twice at time {t}")
            used.add((j, t))
            prev = t


def factor_occurrences(word_map: WordMap, degree: int) -> list[int]:
    counts = [0] * degree
    for word in word_map.values():
        for j in word:
            if not (0 <= j < degree):
                raise InputError(f"factor index {j} out of range for degree {degree}")
            counts[j] += 1
    return counts


def greedy_schedule(word_map: WordMap, degree: int) -> Schedule:
    """Longest words first, each letter at the earliest legal slot.

    Deterministic: ties between equal-length words break on the key.  The
    result is always valid but not always the shortest possible.
    """
    order = sorted((k for k, w in word_map.items() if len(w) > 0), key=lambda k: (-len(word_map[k]), k))
    used: set[tuple[int, int]] = set()
    times: dict[int, tuple[int, ...]] = {}
    for key in order:
        slots = []
        t = 0
        for j in word_map[key]:
            t += 1
            while (j, t) in used:
                t += 1
            used.add((j, t))
            slots.append(t)
        times[key] = tuple(slots)
    schedule = Schedule(times=times)
    validate_schedule(word_map, schedule, degree)
    return schedule


@dataclass(frozen=True)
class MinScheduleResult:
    """Outcome of the exact makespan search.

    status is "optimal" (schedule proven shortest), "infeasible" (no valid
    labeling within t_max exists), or "budget" (undecided: the node budget
    ran out first).
    """

    status: str
    schedule: Schedule | None
    makespan: int | None
    nodes: int


def _feasible_at(jobs: list[tuple[int, tuple[int, ...]]], degree: int, horizon: int, budget: list[int]) -> dict[int, tuple[int, ...]] | None:
    """Find a labeling within `horizon` slots, or None; budget[0] counts down."""
    counts = [0] * degree
    for _, word in jobs:
        for j in word:
            counts[j] += 1
    free: list[set[int]] = [set(range(1, horizon + 1)) for _ in range(degree)]
    for j in range(degree):
        if counts[j] > horizon:
            return None
    assignment: dict[int, tuple[int, ...]] = {}

    remaining = list(counts)

    def place(idx: int) -> bool:
        if idx == len(jobs):
            return True
        key, word = jobs[idx]
        slots: list[int] = []

        def step(pos: int, after: int) -> bool:
            if budget[0] <= 0:
                return False
            if pos == len(word):
                assignment[key] = tuple(slots)
                if place(idx + 1):
                    return True
                del assignment[key]
                return False
            j = word[pos]
            # a machine can never catch up once demand exceeds its free slots
            if remaining[j] > len(free[j]):
                return False
            for t in sorted(free[j]):
                if t <= after:
                    continue
                # letters after pos still need horizon - t further slots
                if len(word) - pos - 1 > horizon - t:
                    break
                budget[0] -= 1
                free[j].discard(t)
                remaining[j] -= 1
                slots.append(t)
                if step(pos + 1, t):
                    return True
                slots.pop()
                remaining[j] += 1
                free[j].add(t)
                if budget[0] <= 0:
                    return False
            return False

        return step(0, 0)

    if place(0):
        return dict(assignment)
    return None


def exact_min_schedule(
    word_map: WordMap,
    degree: int,
    t_max: int | None = None,
    budget: int = DEFAULT_SCHEDULE_BUDGET,
) -> MinScheduleResult:
    """Search for the shortest valid labeling, horizon by horizon.

    Tries every makespan from the trivial lower bound (busiest factor count,
    but at least the longest word) up to t_max; the first feasible horizon
    is optimal.  Branch and bound inside each horizon; the budget is shared
    across horizons, and running out yields status "budget" rather than a
    wrong verdict.
    """
    jobs = sorted(((k, tuple(w)) for k, w in word_map.items() if len(w) > 0), key=lambda kw: (-len(kw[1]), kw[0]))
    if not jobs:
        return MinScheduleResult(status="optimal", schedule=Schedule(times={}), makespan=0, nodes=0)
    counts = factor_occurrences(word_map, degree)
    floor = max(max(counts), max(len(w) for _, w in jobs))
    if t_max is None:
        t_max = sum(len(w) for _, w in jobs)
    if t_max < floor:
        return MinScheduleResult(status="infeasible", schedule=None, makespan=None, nodes=0)
    budget_box = [budget]
    for horizon in range(floor, t_max + 1):
        assignment = _feasible_at(jobs, degree, horizon, budget_box)
        if assignment is not None:
            schedule = Schedule(times=assignment)
            validate_schedule(word_map, schedule, degree)
            return MinScheduleResult(
                status="optimal", schedule=schedule, makespan=schedule.makespan, nodes=budget - budget_box[0]
            )
        if budget_box[0] <= 0:
            return MinScheduleResult(status="budget", schedule=None, makespan=None, nodes=budget)
    return MinScheduleResult(status="infeasible", schedule=None, makespan=None, nodes=budget - budget_box[0])


# ---------------------------------------------------------------------------
# one- and two-letter word collections (the diameter-2 case)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JobShopInstance:
    """Unit-time jobs of length one or two on `machine_count` machines.

    singles[i] is the machine of a one-step job; pairs[i] the (first, second)
    machines of a two-step job.
    """

    machine_count: int
    singles: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for m in self.singles:
            if not (0 <= m < self.machine_count):
                raise InputError(f"single-step job on machine {m}, out of range")
        for a, b in self.pairs:
            if not (0 <= a < self.machine_count) or not (0 <= b < self.machine_count):
                raise InputError(f"two-step job ({a}, {b}) leaves the machine range")

    def as_word_map(self) -> dict[int, tuple[int, ...]]:
        jobs: dict[int, tuple[int, ...]] = {}
        for i, m in enumerate(self.singles):
            jobs[i] = (m,)
        offset = len(self.singles)
        for i, (a, b) in enumerate(self.pairs):
            jobs[offset + i] = (a, b)
        return jobs


def average_horizon(inst: JobShopInstance) -> int:
    """ceil((s1 + 2*s2) / d): total unit work averaged over the machines."""
    work = len(inst.singles) + 2 * len(inst.pairs)
    return max(1, -(-work // inst.machine_count))


def tight_schedule_feasible(inst: JobShopInstance) -> tuple[int, bool]:
    """Predict feasibility at the averaged horizon T without searching.

    Machine m needs: its total load within T; if any two-step job starts on
    m, a start slot no later than T-1; if any ends on m, an end slot no
    earlier than 2, i.e. at most T-1 of the T slots can hold ends.  These
    three per-machine conditions are also sufficient for length <= 2 jobs,
    which the exhaustive cross-check in the tests confirms.
    """
    horizon = average_horizon(inst)
    d = inst.machine_count
    load = [0] * d
    firsts = [0] * d
    seconds = [0] * d
    for m in inst.singles:
        load[m] += 1
    for a, b in inst.pairs:
        load[a] += 1
        load[b] += 1
        firsts[a] += 1
        seconds[b] += 1
    ok = True
    for m in range(d):
        if load[m] > horizon:
            ok = False
        if firsts[m] > 0 and firsts[m] > horizon - 1:
            ok = False
        if seconds[m] > 0 and seconds[m] > horizon - 1:
            ok = False
    return horizon, ok


@dataclass(frozen=True)
class TwoLayerCounts:
    """Per-factor first/second letter counts of a length <= 2 word collection."""

    first_of_pair: tuple[int, ...]
    second_of_pair: tuple[int, ...]

    @property
    def max_combined(self) -> int:
        return max(
            (a + b for a, b in zip(self.first_of_pair, self.second_of_pair)),
            default=0,
        )


def two_layer_counts(word_map: WordMap, degree: int) -> TwoLayerCounts:
    first = [0] * degree
    second = [0] * degree
    for key, word in word_map.items():
        if len(word) > 2:
            raise UnsupportedGraphError(f"word {key} has length {len(word)}; this analysis needs length <= 2")
        if len(word) == 2:
            first[word[0]] += 1
            second[word[1]] += 1
    return TwoLayerCounts(first_of_pair=tuple(first), second_of_pair=tuple(second))


def two_layer_time_bound(counts: TwoLayerCounts) -> int:
    """1 + max over factors of (first + second counts): a makespan guarantee.

    One slot pays for all the single-letter words (each factor carries at
    most one when the words come from distinct vertices); the busiest
    factor's pair letters each need their own slot after/around it.
    """
    return 1 + counts.max_combined


@dataclass(frozen=True)
class DiameterTwoResult:
    word_map: dict[int, tuple[int, ...]]
    schedule: Schedule
    makespan: int
    avg_time_bound: int
    counts: TwoLayerCounts
    guarantee: int

    @property
    def meets_lower_bound(self) -> bool:
        return self.makespan == self.avg_time_bound


def schedule_short_words(word_map: WordMap, degree: int, budget: int = DEFAULT_SCHEDULE_BUDGET) -> tuple[Schedule, int]:
    """Optimal schedule for a length <= 2 word collection, via exact search.

    Feasibility at the busiest-machine load L is decided by the same window
    conditions as tight_schedule_feasible; the optimum is always L or L+1,
    so the search here is shallow.
    """
    counts = two_layer_counts(word_map, degree)  # validates lengths
    result = exact_min_schedule(word_map, degree, budget=budget)
    if result.status == "budget":
        raise SearchBudgetError("schedule search ran out of budget on a short-word collection")
    assert result.schedule is not None and result.makespan is not None
    return result.schedule, result.makespan


def diameter_two_schedule(
    g: CosetGraph,
    layer2_words: Mapping[int, Sequence[int]] | None = None,
    budget: int = DEFAULT_SCHEDULE_BUDGET,
) -> DiameterTwoResult:
    """Best exchange schedule for a Cayley graph of diameter at most 2.

    Layer-1 vertices take their one-letter words (rejected if two generators
    collapse onto one vertex, since then some generator would have to carry
    two singles).  Layer-2 words are chosen, unless supplied, by exhaustive
    search minimizing the busiest factor's pair load; when that load stays
    below the averaged bound, the schedule meets the bound exactly.
    """
    if not g.is_cayley:
        raise UnsupportedGraphError("generator words need a trivial subgroup; schedule a factorization's word list instead")
    profile = layer_profile(g)
    if profile.diameter > 2:
        raise UnsupportedGraphError(f"graph has diameter {profile.diameter}; this routine handles diameter <= 2")
    word_map = _short_word_map(g, profile, layer2_words)
    schedule, makespan = schedule_short_words(word_map, g.degree, budget=budget)
    counts = two_layer_counts(word_map, g.degree)
    if makespan > two_layer_time_bound(counts):
        raise InputError(
            f"internal inconsistency: optimal makespan {makespan} exceeds the "
            f"guaranteed bound {two_layer_time_bound(counts)}"
        )
    return DiameterTwoResult(
        word_map=word_map,
        schedule=schedule,
        makespan=makespan,
        avg_time_bound=average_diameter_bound(profile),
        counts=counts,
        guarantee=two_layer_time_bound(counts),
    )


def _short_word_map(
    g: CosetGraph,
    profile: LayerProfile,
    layer2_words: Mapping[int, Sequence[int]] | None,
) -> dict[int, tuple[int, ...]]:
    dist = distances_from(g, 0)
    word_map: dict[int, tuple[int, ...]] = {}
    seen_singles: dict[int, int] = {}
    for j, v in enumerate(g.edges[0]):
        if v in seen_singles:
            raise UnsupportedGraphError(
                f"generators {seen_singles[v]} and {j} both reach vertex {v}; "
                f"with fewer layer-1 vertices than generators no single-slot "
                f"round exists and this analysis does not apply"
            )
        seen_singles[v] = j
        word_map[v] = (j,)

    two_layer = [v for v in range(g.vertex_count) if dist[v] == 2]
    if not two_layer:
        return word_map

    options: dict[int, list[tuple[int, int]]] = {}
    for v in two_layer:
        opts = []
        for j, mid in enumerate(g.edges[0]):
            for k, tgt in enumerate(g.edges[mid]):
                if tgt == v:
                    opts.append((j, k))
        options[v] = opts

    if layer2_words is not None:
        if set(layer2_words) != set(two_layer):
            raise InputError(f"layer-2 words must cover exactly the vertices {sorted(two_layer)}")
        for v, w in layer2_words.items():
            pair = tuple(w)
            if len(pair) != 2 or pair not in options[v]:
                raise InputError(f"word {w} does not walk from the base to vertex {v} in two steps")
            word_map[v] = pair
        return word_map

    chosen = _balance_pair_choices(two_layer, options, g.degree)
    word_map.update(chosen)
    return word_map


def _balance_pair_choices(
    vertices: list[int],
    options: dict[int, list[tuple[int, int]]],
    degree: int,
) -> dict[int, tuple[int, int]]:
    """Exhaustively pick one two-letter word per vertex minimizing max first+second load."""
    order = sorted(vertices, key=lambda v: (len(options[v]), v))
    first = [0] * degree
    second = [0] * degree
    best: dict[str, object] = {"value": None, "choice": None}
    chosen: dict[int, tuple[int, int]] = {}

    def loads_max() -> int:
        return max(first[m] + second[m] for m in range(degree))

    def dfs(pos: int) -> None:
        if best["value"] is not None and loads_max() >= best["value"]:
            return
        if pos == len(order):
            value = loads_max()
            if best["value"] is None or value < best["value"]:
                best["value"] = value
                best["choice"] = dict(chosen)
            return
        v = order[pos]
        for a, b in options[v]:
            first[a] += 1
            second[b] += 1
            chosen[v] = (a, b)
            dfs(pos + 1)
            del chosen[v]
            first[a] -= 1
            second[b] -= 1

    dfs(0)
    assert best["choice"] is not None
    return best["choice"]  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# schedule classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScheduleFlags:
    """How a word collection and its schedule relate to the graph's bounds.

    Four nested equalities along the chain
        global pair bound <= ceil(total count / d) <= max count <= makespan:
    balanced closes the middle gap (no factor above average), short closes
    the left gap (total work at the graph's floor), optimal closes both
    (max count down at the global bound), minimum closes the right gap
    (the schedule wastes no slot on its busiest factor).
    """

    balanced: bool
    short: bool
    optimal: bool
    minimum: bool


def classify(word_map: WordMap, schedule: Schedule, degree: int, profile: LayerProfile) -> ScheduleFlags:
    """Flags plus a consistency check of the bound chain they rely on.

    The chain global <= ceil(total/d) <= max count <= makespan must hold for
    any valid schedule of base-0 words; a violation means a bug upstream,
    so it raises.
    """
    validate_schedule(word_map, schedule, degree)
    counts = factor_occurrences(word_map, degree)
    total = sum(counts)
    max_count = max(counts) if counts else 0
    avg_count = -(-total // degree) if degree else 0
    global_bound = global_time_bound(profile)
    makespan = schedule.makespan
    if not (global_bound <= avg_count <= max_count <= makespan):
        raise InputError(
            f"bound chain violated: global={global_bound}, ceil(total/d)={avg_count}, "
            f"max={max_count}, makespan={makespan}"
        )
    return ScheduleFlags(
        balanced=max_count == avg_count,
        short=avg_count == global_bound,
        optimal=max_count == global_bound,
        minimum=makespan == max_count,
    )
