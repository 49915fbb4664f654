"""Directed multigraphs with arc-slot identity and directed-triangle enumeration.

A graph is stored as a multiplicity map over ordered vertex pairs.  Individual
parallel copies are addressed as ``ArcSlot(tail, head, copy)``; slots are the
unit of disjointness and deletion everywhere else in the package.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

log = logging.getLogger(__name__)


class ArcSlot(NamedTuple):
    tail: int
    head: int
    copy: int = 0

    def pair(self) -> tuple[int, int]:
        return (self.tail, self.head)

    def __str__(self) -> str:
        return f"{self.tail} {self.head} {self.copy}"


class GraphError(ValueError):
    """Invalid graph operation (loop, out-of-range vertex, missing slot)."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line
        self.reason = reason


@dataclass(frozen=True, order=True)
class Triangle:
    """A directed 3-cycle u -> z -> w -> u given by three arc slots.

    ``slots`` is always stored in canonical rotation, starting at the
    smallest vertex id; build instances with :meth:`from_slots`.
    """

    slots: tuple[ArcSlot, ArcSlot, ArcSlot]

    @classmethod
    def from_slots(cls, a: ArcSlot, b: ArcSlot, c: ArcSlot) -> Triangle:
        a, b, c = ArcSlot(*a), ArcSlot(*b), ArcSlot(*c)
        if not (a.head == b.tail and b.head == c.tail and c.head == a.tail):
            raise GraphError(f"slots {a}, {b}, {c} do not chain into a cycle")
        if len({a.tail, b.tail, c.tail}) != 3:
            raise GraphError(f"slots {a}, {b}, {c} do not span three vertices")
        rot = [a, b, c]
        i = min(range(3), key=lambda k: rot[k].tail)
        return cls(tuple(rot[i:] + rot[:i]))  # type: ignore[arg-type]

    @property
    def vertices(self) -> tuple[int, int, int]:
        return tuple(s.tail for s in self.slots)  # type: ignore[return-value]

    def arc_not_at(self, v: int) -> ArcSlot:
        """The unique slot of this triangle not incident to ``v``."""
        for s in self.slots:
            if v not in (s.tail, s.head):
                return s
        raise GraphError(f"triangle {self} does not pass through {v}")

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.slots)


class DirectedMultigraph:
    """Loop-free directed multigraph on vertices ``0..n-1``.

    Values are immutable; every modifying operation returns a new graph.
    Digons (``u->v`` and ``v->u`` both present) are allowed.
    """

    __slots__ = ("_n", "_mult", "_out", "_in")

    def __init__(self, n: int, mult: Mapping[tuple[int, int], int] | None = None):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        clean: dict[tuple[int, int], int] = {}
        for (u, v), m in (mult or {}).items():
            _check_vertex(n, u)
            _check_vertex(n, v)
            if m < 0:
                raise GraphError(f"negative multiplicity {m} on {u}->{v}")
            if m == 0:
                continue
            if u == v:
                raise GraphError(f"loop {u}->{v} is not allowed")
            clean[(u, v)] = int(m)
        self._n = n
        self._mult = dict(sorted(clean.items()))
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for u, v in self._mult:
            out[u].append(v)
            inc[v].append(u)
        self._out = tuple(tuple(sorted(x)) for x in out)
        self._in = tuple(tuple(sorted(x)) for x in inc)

    @property
    def n(self) -> int:
        return self._n

    def mult(self, u: int, v: int) -> int:
        return self._mult.get((u, v), 0)

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(tail, head, multiplicity)`` in lexicographic order."""
        for (u, v), m in self._mult.items():
            yield u, v, m

    def multiplicities(self) -> dict[tuple[int, int], int]:
        return dict(self._mult)

    def slots(self) -> Iterator[ArcSlot]:
        for (u, v), m in self._mult.items():
            for c in range(m):
                yield ArcSlot(u, v, c)

    def num_slots(self) -> int:
        return sum(self._mult.values())

    def has_slot(self, slot: ArcSlot) -> bool:
        tail, head, copy = slot
        return 0 <= copy < self.mult(tail, head)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        _check_vertex(self._n, v)
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        _check_vertex(self._n, v)
        return self._in[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedMultigraph):
            return NotImplemented
        return self._n == other._n and self._mult == other._mult

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._mult.items())))

    def __repr__(self) -> str:
        return f"DirectedMultigraph(n={self._n}, arcs={self.num_slots()})"


def _check_vertex(n: int, v: int) -> None:
    if not 0 <= v < n:
        raise GraphError(f"vertex {v} out of range for graph on {n} vertices")


def add_arc(g: DirectedMultigraph, u: int, v: int, count: int = 1) -> DirectedMultigraph:
    if u == v:
        raise GraphError(f"loop {u}->{v} is not allowed")
    _check_vertex(g.n, u)
    _check_vertex(g.n, v)
    if count < 1:
        raise GraphError(f"count must be positive, got {count}")
    mult = g.multiplicities()
    mult[(u, v)] = mult.get((u, v), 0) + count
    return DirectedMultigraph(g.n, mult)


def slot_back_map(g: DirectedMultigraph, removed: Iterable[ArcSlot]) -> dict[ArcSlot, ArcSlot]:
    """Map each slot of ``remove_slots(g, removed)`` to the slot of ``g`` it came from.

    Surviving copies of a pair keep their relative order, so the lowest
    surviving old copy becomes copy 0.
    """
    gone: dict[tuple[int, int], set[int]] = {}
    for s in removed:
        s = ArcSlot(*s)
        if not g.has_slot(s):
            raise GraphError(f"slot ({s}) does not exist")
        gone.setdefault(s.pair(), set()).add(s.copy)
    back: dict[ArcSlot, ArcSlot] = {}
    for u, v, m in g.arcs():
        dead = gone.get((u, v), ())
        new = 0
        for c in range(m):
            if c not in dead:
                back[ArcSlot(u, v, new)] = ArcSlot(u, v, c)
                new += 1
    return back


def remove_slots(g: DirectedMultigraph, slots: Iterable[ArcSlot]) -> DirectedMultigraph:
    slots = sorted({ArcSlot(*s) for s in slots})
    mult = g.multiplicities()
    for s in slots:
        if not g.has_slot(s):
            raise GraphError(f"slot ({s}) does not exist")
        mult[s.pair()] -= 1
    return DirectedMultigraph(g.n, mult)


def delete_vertex(g: DirectedMultigraph, v: int) -> tuple[DirectedMultigraph, dict[int, int]]:
    """Remove ``v`` and its arcs; returns the new graph and the old->new id map."""
    _check_vertex(g.n, v)
    old_to_new = {u: (u if u < v else u - 1) for u in range(g.n) if u != v}
    mult = {
        (old_to_new[a], old_to_new[b]): m
        for a, b, m in g.arcs()
        if a != v and b != v
    }
    return DirectedMultigraph(g.n - 1, mult), old_to_new


def enumerate_triangles(g: DirectedMultigraph) -> list[Triangle]:
    """All directed triangles, one per slot triple, in lexicographic order."""
    out: list[Triangle] = []
    for u in range(g.n):
        for z in g.out_neighbors(u):
            if z < u:
                continue
            for w in g.out_neighbors(z):
                if w <= u:
                    continue
                if g.mult(w, u) == 0:
                    continue
                out.extend(_slot_products(g, u, z, w))
    out.sort()
    return out


def _slot_products(g: DirectedMultigraph, u: int, z: int, w: int) -> Iterator[Triangle]:
    # (u, z, w) already in canonical rotation with u minimal
    for a in range(g.mult(u, z)):
        for b in range(g.mult(z, w)):
            for c in range(g.mult(w, u)):
                yield Triangle((ArcSlot(u, z, a), ArcSlot(z, w, b), ArcSlot(w, u, c)))


def triangle_types(g: DirectedMultigraph) -> list[tuple[int, int, int]]:
    """Cyclic vertex triples ``(u, z, w)``, u minimal, carrying at least one triangle."""
    return [
        (u, z, w)
        for u in range(g.n)
        for z in g.out_neighbors(u)
        if z > u
        for w in g.out_neighbors(z)
        if w > u and g.mult(w, u) > 0
    ]


def triangles_through(g: DirectedMultigraph, v: int) -> list[Triangle]:
    _check_vertex(g.n, v)
    return [t for t in enumerate_triangles(g) if v in t.vertices]


def has_triangle(g: DirectedMultigraph) -> bool:
    return bool(triangle_types(g))


def strip_loops_and_normalize(
    arcs: Iterable[tuple[int, int] | tuple[int, int, int]], n: int | None = None
) -> tuple[DirectedMultigraph, int]:
    """Aggregate a raw arc list into a graph, dropping loops.

    Returns the graph and the number of loop entries dropped.  When ``n`` is
    omitted the vertex count is one more than the largest id seen.
    """
    mult: dict[tuple[int, int], int] = {}
    loops = 0
    top = -1
    for arc in arcs:
        u, v = arc[0], arc[1]
        m = arc[2] if len(arc) > 2 else 1
        if u < 0 or v < 0 or m < 0:
            raise GraphError(f"negative value in arc {arc}")
        top = max(top, u, v)
        if u == v:
            loops += 1
            continue
        if m:
            mult[(u, v)] = mult.get((u, v), 0) + m
    if loops:
        log.warning("dropped %d loop arc(s)", loops)
    return DirectedMultigraph(top + 1 if n is None else n, mult), loops


_HEADER = re.compile(r"dmg\s+(\d+)")


def parse_graph(text: str) -> tuple[DirectedMultigraph, int]:
    """Parse the ``dmg <n>`` text format; returns ``(graph, loops_dropped)``."""
    n: int | None = None
    raw: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if n is None and not raw and body.startswith("dmg"):
            m = _HEADER.fullmatch(body)
            if not m:
                raise GraphParseError(lineno, line, "malformed header")
            n = int(m.group(1))
            continue
        parts = body.split()
        if len(parts) not in (2, 3) or not all(p.isdigit() for p in parts):
            raise GraphParseError(lineno, line, "expected 'u v [mult]'")
        u, v = int(parts[0]), int(parts[1])
        k = int(parts[2]) if len(parts) == 3 else 1
        if n is not None and (u >= n or v >= n):
            raise GraphParseError(lineno, line, f"vertex id out of range for n={n}")
        raw.append((u, v, k))
    return strip_loops_and_normalize(raw, n)


def serialize_graph(g: DirectedMultigraph) -> str:
    lines = [f"dmg {g.n}"]
    for u, v, m in g.arcs():
        lines.append(f"{u} {v}" if m == 1 else f"{u} {v} {m}")
    return "\n".join(lines) + "\n"
