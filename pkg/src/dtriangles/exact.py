"""Exact packing and covering numbers for desk-scale directed multigraphs.

``exact_nu`` / ``exact_tau`` are branch-and-bound searches; ``naive_nu`` /
``naive_tau`` are exhaustive subset enumerations kept deliberately simple so
they can serve as independent ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph import ArcSlot, DirectedMultigraph, Triangle, enumerate_triangles, triangle_types

DEFAULT_BUDGET = 10_000_000
NAIVE_MAX_TRIANGLES = 15
NAIVE_MAX_SLOTS = 20


@dataclass
class ExactResult:
    value: int
    witness: list[Triangle] | set[ArcSlot] = field(default_factory=list)
    nodes_explored: int = 0
    capped: bool = False


class _Budget(Exception):
    pass


def exact_nu(g: DirectedMultigraph, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Maximum slot-disjoint triangle packing.

    Parallel copies are interchangeable, so the search branches on how many
    triangles of each cyclic vertex triple to pack (largest count first)
    rather than on individual slot triples.  Pruning uses the smallest of
    three upper bounds on what the unprocessed triples can still add.
    """
    types = triangle_types(g)
    sides_of = [((u, z), (z, w), (w, u)) for u, z, w in types]
    left = g.multiplicities()

    def bound(i: int) -> int:
        per_type = 0
        sides: set[tuple[int, int]] = set()
        for ss in sides_of[i:]:
            k = min(left[s] for s in ss)
            if k:
                per_type += k
                sides.update(ss)
        if not per_type:
            return 0
        out_cap: dict[int, int] = {}
        in_cap: dict[int, int] = {}
        for a, b in sides:
            out_cap[a] = out_cap.get(a, 0) + left[(a, b)]
            in_cap[b] = in_cap.get(b, 0) + left[(a, b)]
        vertex = sum(min(out_cap[x], in_cap.get(x, 0)) for x in out_cap) // 3
        total = sum(left[s] for s in sides) // 3
        return min(per_type, vertex, total)

    counts = [0] * len(types)
    best_counts = list(counts)
    best = 0
    for i, ss in enumerate(sides_of):
        # greedy incumbent
        k = min(left[s] for s in ss)
        best_counts[i] = k
        best += k
        for s in ss:
            left[s] -= k
    left = g.multiplicities()
    nodes = 0

    def dfs(i: int, current: int) -> None:
        nonlocal best, best_counts, nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if current > best:
            best, best_counts = current, list(counts)
        if i == len(types) or current + bound(i) <= best:
            return
        ss = sides_of[i]
        for k in range(min(left[s] for s in ss), -1, -1):
            counts[i] = k
            for s in ss:
                left[s] -= k
            dfs(i + 1, current + k)
            for s in ss:
                left[s] += k
        counts[i] = 0

    capped = False
    try:
        dfs(0, 0)
    except _Budget:
        capped = True
    return ExactResult(best, _realize(types, best_counts), nodes, capped)


def _realize(types: list[tuple[int, int, int]], counts: list[int]) -> list[Triangle]:
    """Turn per-triple counts into concrete triangles on the lowest free copies."""
    next_copy: dict[tuple[int, int], int] = {}
    out = []
    for (u, z, w), k in zip(types, counts):
        for _ in range(k):
            slots = []
            for pair in ((u, z), (z, w), (w, u)):
                c = next_copy.get(pair, 0)
                next_copy[pair] = c + 1
                slots.append(ArcSlot(*pair, c))
            out.append(Triangle(tuple(slots)))
    return out


def _greedy_packing(tris: list[Triangle], used: set[ArcSlot]) -> list[Triangle]:
    used = set(used)
    out = []
    for t in tris:
        if used.isdisjoint(t.slots):
            out.append(t)
            used.update(t.slots)
    return out


def exact_tau(g: DirectedMultigraph, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Minimum triangle arc cover.

    A triangle type ``u->z->w->u`` survives as long as all three sides keep
    a copy, so a cover amounts to a set of sides deleted outright, each
    costing its multiplicity.  Branching picks a live type and deletes one of
    its sides; earlier-tried sides are frozen in later branches so each cover
    is reached once.  A greedy slot-disjoint packing of what is left gives the
    lower bound.
    """
    mult = g.multiplicities()
    types = triangle_types(g)
    sides_of = [((u, z), (z, w), (w, u)) for u, z, w in types]

    best_sides = _greedy_cover(mult, sides_of)
    best_cost = sum(mult[s] for s in best_sides)
    nodes = 0
    removed: set[tuple[int, int]] = set()
    frozen: set[tuple[int, int]] = set()

    def packing_bound() -> int:
        left = {s: m for s, m in mult.items() if s not in removed}
        total = 0
        for sides in sides_of:
            k = min(left.get(s, 0) for s in sides)
            if k:
                total += k
                for s in sides:
                    left[s] -= k
        return total

    def dfs(cost: int) -> None:
        nonlocal best_cost, best_sides, nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        live = [sides for sides in sides_of if removed.isdisjoint(sides)]
        if not live:
            if cost < best_cost:
                best_cost, best_sides = cost, set(removed)
            return
        if cost + packing_bound() >= best_cost:
            return
        sides = min(live, key=lambda ss: sum(s not in frozen for s in ss))
        newly_frozen = []
        for s in sides:
            if s in frozen:
                continue
            removed.add(s)
            dfs(cost + mult[s])
            removed.discard(s)
            frozen.add(s)
            newly_frozen.append(s)
        frozen.difference_update(newly_frozen)

    capped = False
    try:
        dfs(0)
    except _Budget:
        capped = True
    witness = {ArcSlot(u, v, c) for u, v in best_sides for c in range(mult[(u, v)])}
    return ExactResult(best_cost, witness, nodes, capped)


def _greedy_cover(mult: dict[tuple[int, int], int], sides_of) -> set[tuple[int, int]]:
    chosen: set[tuple[int, int]] = set()
    for sides in sides_of:
        if chosen.isdisjoint(sides):
            chosen.add(min(sides, key=lambda s: (mult[s], s)))
    return chosen


def naive_nu(g: DirectedMultigraph) -> int:
    tris = enumerate_triangles(g)
    if len(tris) > NAIVE_MAX_TRIANGLES:
        raise ValueError(f"naive_nu guard: {len(tris)} triangles > {NAIVE_MAX_TRIANGLES}")
    index = {s: i for i, s in enumerate(g.slots())}
    masks = [sum(1 << index[s] for s in t.slots) for t in tris]
    best = 0
    for k in range(1, len(masks) + 1):
        found = False
        for combo in combinations(masks, k):
            acc = 0
            for m in combo:
                if acc & m:
                    break
                acc |= m
            else:
                found = True
                break
        if not found:
            break
        best = k
    return best


def naive_tau(g: DirectedMultigraph) -> int:
    slots = list(g.slots())
    if len(slots) > NAIVE_MAX_SLOTS:
        raise ValueError(f"naive_tau guard: {len(slots)} slots > {NAIVE_MAX_SLOTS}")
    index = {s: i for i, s in enumerate(slots)}
    masks = [sum(1 << index[s] for s in t.slots) for t in enumerate_triangles(g)]
    if not masks:
        return 0
    for k in range(1, len(slots) + 1):
        for combo in combinations(range(len(slots)), k):
            sel = sum(1 << i for i in combo)
            if all(m & sel for m in masks):
                return k
    raise AssertionError("deleting every slot must cover every triangle")
