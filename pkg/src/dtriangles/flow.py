"""Auxiliary source/sink network for a pivot vertex and its integer max-flow.

For a pivot ``v`` the network has a source, a sink, one "plus" node per
out-neighbour of ``v`` and one "minus" node per in-neighbour.  Directed
triangles through ``v`` correspond one-to-one with source-sink paths
``s -> u+ -> z- -> t`` counted with multiplicity.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import ArcSlot, DirectedMultigraph, GraphError, Triangle, _check_vertex

SOURCE = 0


@dataclass(frozen=True)
class AuxiliaryNetwork:
    graph: DirectedMultigraph
    pivot: int
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    capacity: dict[tuple[int, int], int] = field(compare=False)

    # node ids: source 0, plus copies 1..|W+|, minus copies next, sink last
    @property
    def source(self) -> int:
        return SOURCE

    @property
    def sink(self) -> int:
        return 1 + len(self.plus) + len(self.minus)

    @property
    def num_nodes(self) -> int:
        return self.sink + 1

    def plus_node(self, w: int) -> int:
        return 1 + self.plus.index(w)

    def minus_node(self, w: int) -> int:
        return 1 + len(self.plus) + self.minus.index(w)

    def label(self, node: int) -> str:
        if node == self.source:
            return "s"
        if node == self.sink:
            return "t"
        if node <= len(self.plus):
            return f"{self.plus[node - 1]}+"
        return f"{self.minus[node - 1 - len(self.plus)]}-"

    def original_arc(self, a: int, b: int) -> tuple[int, int]:
        """The arc of the graph whose multiplicity network arc ``a -> b`` copies."""
        v = self.pivot
        if a == self.source:
            return (v, self.plus[b - 1])
        if b == self.sink:
            return (self.minus[a - 1 - len(self.plus)], v)
        return (self.plus[a - 1], self.minus[b - 1 - len(self.plus)])

    def dump(self) -> str:
        """Text-format dump with s = 0 and t as the highest id."""
        lines = [f"dmg {self.num_nodes}"]
        for (a, b), c in sorted(self.capacity.items()):
            lines.append(f"{a} {b} {c}  # {self.label(a)} -> {self.label(b)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NetworkPath:
    """An s-t path: ``s -> u+ -> z- -> t`` with a chosen copy on each arc."""

    plus: int
    minus: int
    copies: tuple[int, int, int]


@dataclass(frozen=True)
class FlowResult:
    network: AuxiliaryNetwork
    value: int
    paths: tuple[NetworkPath, ...]
    # cut arc slots as (from node, to node, copy)
    cut: frozenset[tuple[int, int, int]]
    source_side: frozenset[int]


def build_auxiliary_network(g: DirectedMultigraph, v: int) -> AuxiliaryNetwork:
    _check_vertex(g.n, v)
    plus = g.out_neighbors(v)
    minus = g.in_neighbors(v)
    cap: dict[tuple[int, int], int] = {}
    p_idx = {w: 1 + i for i, w in enumerate(plus)}
    m_idx = {w: 1 + len(plus) + i for i, w in enumerate(minus)}
    sink = 1 + len(plus) + len(minus)
    for w in plus:
        cap[(SOURCE, p_idx[w])] = g.mult(v, w)
    for u in plus:
        for z in minus:
            # u == z would be a loop of g, never an arc
            m = g.mult(u, z)
            if m:
                cap[(p_idx[u], m_idx[z])] = m
    for w in minus:
        cap[(m_idx[w], sink)] = g.mult(w, v)
    return AuxiliaryNetwork(g, v, plus, minus, cap)


def max_disjoint_paths(net: AuxiliaryNetwork) -> FlowResult:
    """Shortest-augmenting-path max-flow, path decomposition and min cut."""
    size = net.num_nodes
    s, t = net.source, net.sink
    adj: list[list[int]] = [[] for _ in range(size)]
    for a, b in sorted(net.capacity):
        adj[a].append(b)
        adj[b].append(a)
    flow: dict[tuple[int, int], int] = {arc: 0 for arc in net.capacity}

    def residual(a: int, b: int) -> int:
        r = 0
        if (a, b) in flow:
            r += net.capacity[(a, b)] - flow[(a, b)]
        if (b, a) in flow:
            r += flow[(b, a)]
        return r

    value = 0
    while True:
        parent = _bfs(adj, s, residual)
        if t not in parent:
            break
        path = [t]
        while path[-1] != s:
            path.append(parent[path[-1]])
        path.reverse()
        delta = min(residual(a, b) for a, b in zip(path, path[1:]))
        for a, b in zip(path, path[1:]):
            # cancel opposing flow before pushing forward
            back = min(delta, flow.get((b, a), 0))
            if back:
                flow[(b, a)] -= back
            if delta - back:
                flow[(a, b)] += delta - back
        value += delta

    reach = frozenset(_bfs(adj, s, residual))
    cut = frozenset(
        (a, b, c)
        for (a, b), cap in net.capacity.items()
        if a in reach and b not in reach
        for c in range(cap)
    )
    paths = _decompose(net, flow)
    assert len(paths) == value == len(cut), (len(paths), value, len(cut))
    return FlowResult(net, value, paths, cut, reach)


def _bfs(adj: list[list[int]], s: int, residual) -> dict[int, int]:
    parent = {s: s}
    queue = deque([s])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b not in parent and residual(a, b) > 0:
                parent[b] = a
                queue.append(b)
    return parent


def _decompose(net: AuxiliaryNetwork, flow: dict[tuple[int, int], int]) -> tuple[NetworkPath, ...]:
    """Peel lexicographically least flow-carrying paths, taking lowest free copies."""
    s, t = net.source, net.sink
    remaining = dict(flow)
    used: dict[tuple[int, int], int] = {}
    paths: list[NetworkPath] = []
    while True:
        mid = next(
            (
                (a, b)
                for (a, b), f in sorted(remaining.items())
                if f > 0 and a != s and b != t
            ),
            None,
        )
        if mid is None:
            break
        a, b = mid
        arcs = ((s, a), (a, b), (b, t))
        copies = tuple(used.get(arc, 0) for arc in arcs)
        for arc in arcs:
            remaining[arc] -= 1
            used[arc] = used.get(arc, 0) + 1
        paths.append(NetworkPath(a, b, copies))  # type: ignore[arg-type]
    assert all(f == 0 for f in remaining.values())
    return tuple(paths)


def path_arc_slots(path: NetworkPath, net: AuxiliaryNetwork) -> tuple[tuple[int, int, int], ...]:
    a, b = path.plus, path.minus
    c0, c1, c2 = path.copies
    return ((net.source, a, c0), (a, b, c1), (b, net.sink, c2))


def disconnects(net: AuxiliaryNetwork, removed: frozenset[tuple[int, int, int]]) -> bool:
    """True if deleting the network arc slots ``removed`` leaves no s-t path."""
    left = dict(net.capacity)
    for a, b, c in removed:
        left[(a, b)] -= 1
    adj: list[list[int]] = [[] for _ in range(net.num_nodes)]
    for (a, b), c in left.items():
        if c > 0:
            adj[a].append(b)
    seen = {net.source}
    stack = [net.source]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return net.sink not in seen


def map_back(
    g: DirectedMultigraph, v: int, res: FlowResult
) -> tuple[list[Triangle], set[ArcSlot], set[ArcSlot]]:
    """Translate paths and cut back into (triangles, far arcs, cut arcs) of ``g``.

    The far arc of a triangle through ``v`` is its one arc not incident to ``v``.
    """
    net = res.network
    if net.pivot != v or net.graph != g:
        raise GraphError("flow result was not computed from this graph and pivot")
    triangles: list[Triangle] = []
    far: set[ArcSlot] = set()
    for path in res.paths:
        u = net.plus[path.plus - 1]
        z = net.minus[path.minus - 1 - len(net.plus)]
        c0, c1, c2 = path.copies
        far_slot = ArcSlot(u, z, c1)
        triangles.append(Triangle.from_slots(ArcSlot(v, u, c0), far_slot, ArcSlot(z, v, c2)))
        far.add(far_slot)
    cover = {ArcSlot(*net.original_arc(a, b), c) for a, b, c in res.cut}
    return triangles, far, cover
