"""Constructive triangle cover / packing pairs with ``|cover| < 2 |packing|``.

:func:`cover_and_pack` works by induction on the vertex count.  At each level
it picks a pivot ``v``, solves the arc-disjoint path problem in the auxiliary
network of ``v`` to get ``p`` disjoint triangles through ``v`` together with
a ``p``-arc cut meeting every triangle through ``v``, and then either
recurses on ``g`` minus ``v`` and the far arcs of those triangles, or repairs
the packing locally.  Every level records which case fired as a
:class:`BranchTag` in the certificate trace.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .flow import build_auxiliary_network, map_back, max_disjoint_paths
from .graph import (
    ArcSlot,
    DirectedMultigraph,
    GraphError,
    Triangle,
    delete_vertex,
    enumerate_triangles,
    has_triangle,
    remove_slots,
    slot_back_map,
)


class BranchTag(enum.Enum):
    RECURSE_TRIANGLED = "RECURSE_TRIANGLED"
    COVER_SHORT = "COVER_SHORT"
    NO_T0 = "NO_T0"
    ADD_T0 = "ADD_T0"
    SWAP_AUGMENT = "SWAP_AUGMENT"
    DSTAR_TRIANGLE_FREE = "DSTAR_TRIANGLE_FREE"
    DSTAR_SINGLE_COVER = "DSTAR_SINGLE_COVER"


@dataclass(frozen=True)
class TraceEntry:
    depth: int
    pivot: int  # id in the top-level input
    p: int
    tag: BranchTag


@dataclass
class Certificate:
    cover: set[ArcSlot] = field(default_factory=set)
    packing: list[Triangle] = field(default_factory=list)
    trace: list[TraceEntry] = field(default_factory=list)

    def tag_histogram(self) -> Counter:
        return Counter(e.tag for e in self.trace)


class ProofInvariantError(AssertionError):
    """An invariant of the inductive construction failed; always a bug."""

    def __init__(self, message: str, trace: Iterable[TraceEntry] = ()):
        super().__init__(message)
        self.trace = list(trace)


@dataclass
class VerificationReport:
    cover_valid: bool
    packing_valid: bool
    ratio_strict: bool
    uncovered: Triangle | None = None
    overlap: tuple[Triangle, Triangle] | None = None
    structural_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cover_valid and self.packing_valid and self.ratio_strict

    def describe(self) -> str:
        lines = [
            f"cover_valid={self.cover_valid}",
            f"packing_valid={self.packing_valid}",
            f"ratio_strict={self.ratio_strict}",
        ]
        lines += [f"structural: {e}" for e in self.structural_errors]
        if self.uncovered is not None:
            lines.append(f"uncovered triangle: {self.uncovered}")
        if self.overlap is not None:
            a, b = self.overlap
            lines.append(f"overlapping triangles: {a} | {b}")
        return "\n".join(lines)


def verify_certificate(g: DirectedMultigraph, cert: Certificate) -> VerificationReport:
    errors: list[str] = []
    cover_ok = True
    for s in sorted(cert.cover):
        if not g.has_slot(s):
            errors.append(f"cover slot ({s}) does not exist")
            cover_ok = False
    triangles = enumerate_triangles(g)
    uncovered = None
    for t in triangles:
        if cert.cover.isdisjoint(t.slots):
            uncovered = t
            cover_ok = False
            break

    pack_ok = True
    known = set(triangles)
    for t in cert.packing:
        if t not in known:
            errors.append(f"packing triangle ({t}) is not a triangle of the graph")
            pack_ok = False
    overlap = None
    owner: dict[ArcSlot, Triangle] = {}
    for t in cert.packing:
        for s in t.slots:
            if s in owner:
                overlap = (owner[s], t)
                pack_ok = False
                break
            owner[s] = t
        if overlap:
            break

    if triangles:
        ratio_ok = len(cert.cover) < 2 * len(cert.packing)
    else:
        ratio_ok = True
    return VerificationReport(cover_ok, pack_ok, ratio_ok, uncovered, overlap, errors)


def max_packing_capped(
    g: DirectedMultigraph, mandatory_slots: set[ArcSlot], cap: int
) -> list[Triangle]:
    """Maximum disjoint packing when every triangle uses one of at most two given slots."""
    if not 0 <= cap <= 2 or len(mandatory_slots) > 2:
        raise ValueError("max_packing_capped handles at most two mandatory slots, cap <= 2")
    tris = enumerate_triangles(g)
    for t in tris:
        if mandatory_slots.isdisjoint(t.slots):
            raise ProofInvariantError(f"triangle {t} avoids every mandatory slot")
    if cap >= 2:
        for a, b in combinations(tris, 2):
            if set(a.slots).isdisjoint(b.slots):
                return [a, b]
    return tris[:1] if cap >= 1 else []


def cover_and_pack(g: DirectedMultigraph, check: bool = True) -> Certificate:
    """Build a certificate; with ``check`` the result is verified before returning."""
    cert = Certificate()
    cover, packing = _solve(g, list(range(g.n)), 0, cert.trace)
    cert.cover = cover
    cert.packing = sorted(packing)
    if check:
        report = verify_certificate(g, cert)
        if not report.ok:
            raise ProofInvariantError("certificate failed verification:\n" + report.describe(), cert.trace)
    return cert


def _require(cond: bool, message: str, trace: list[TraceEntry]) -> None:
    if not cond:
        raise ProofInvariantError(message, trace)


def pick_pivot(g: DirectedMultigraph) -> int:
    """Vertex on the most triangles, smallest id on ties."""
    count = [0] * g.n
    for t in enumerate_triangles(g):
        for x in t.vertices:
            count[x] += 1
    return max(range(g.n), key=lambda x: (count[x], -x))


def _minus(
    g: DirectedMultigraph, v: int, slots: Iterable[ArcSlot]
) -> tuple[DirectedMultigraph, dict[ArcSlot, ArcSlot], dict[int, int]]:
    """``g - slots - v`` with the slot back-map into ``g`` and the new->old vertex map."""
    slots = set(slots)
    h = remove_slots(g, slots)
    back = slot_back_map(g, slots)
    h, old_to_new = delete_vertex(h, v)
    new_to_old = {b: a for a, b in old_to_new.items()}
    full = {}
    for s in h.slots():
        a, b = new_to_old[s.tail], new_to_old[s.head]
        full[s] = back[ArcSlot(a, b, s.copy)]
    return h, full, new_to_old


def _lift(t: Triangle, back: dict[ArcSlot, ArcSlot]) -> Triangle:
    return Triangle.from_slots(*(back[s] for s in t.slots))


def _solve(
    g: DirectedMultigraph, labels: list[int], depth: int, trace: list[TraceEntry]
) -> tuple[set[ArcSlot], list[Triangle]]:
    """Cover and packing in ``g``'s own coordinates; trace pivots use ``labels``."""
    if not has_triangle(g):
        return set(), []

    v = pick_pivot(g)
    res = max_disjoint_paths(build_auxiliary_network(g, v))
    p = res.value
    packed, far, cut = map_back(g, v, res)
    cover = cut | far
    _require(p >= 1, "pivot lies on a triangle, so p >= 1", trace)
    _require(len(cover) <= 2 * p, "|cut + far arcs| <= 2p", trace)

    def record(tag: BranchTag) -> None:
        trace.append(TraceEntry(depth, labels[v], p, tag))

    rest, back, vmap = _minus(g, v, far)
    if has_triangle(rest):
        record(BranchTag.RECURSE_TRIANGLED)
        sub_cover, sub_pack = _solve(rest, [labels[vmap[x]] for x in range(rest.n)], depth + 1, trace)
        return cover | {back[s] for s in sub_cover}, packed + [_lift(t, back) for t in sub_pack]

    if len(cover) < 2 * p:
        record(BranchTag.COVER_SHORT)
        return cover, packed

    spare = next((t for t in enumerate_triangles(g) if far.isdisjoint(t.slots)), None)
    if spare is None:
        # the far arcs alone already meet every triangle
        record(BranchTag.NO_T0)
        return set(far), packed

    _require(v in spare.vertices, "a triangle avoiding the far arcs passes through the pivot", trace)
    spare_far = spare.arc_not_at(v)
    clashing = [t for t in packed if not set(t.slots).isdisjoint(spare.slots)]
    if not clashing:
        record(BranchTag.ADD_T0)
        return cover, packed + [spare]

    _require(len(clashing) in (1, 2), "spare triangle meets one or two packed triangles", trace)
    clash_far = {t.arc_not_at(v) for t in clashing}
    kept_far = far - clash_far
    reduced, back, vmap = _minus(g, v, kept_far)
    if not has_triangle(reduced):
        record(BranchTag.DSTAR_TRIANGLE_FREE)
        return cut | kept_far, packed

    fwd = {old: new for new, old in back.items()}
    mandatory = {fwd[s] for s in clash_far}
    repacked = [_lift(t, back) for t in max_packing_capped(reduced, mandatory, len(clashing))]
    if len(repacked) == len(clashing):
        record(BranchTag.SWAP_AUGMENT)
        # clashing far arcs share a head or tail with spare_far, so no
        # triangle can hold both
        _require(all(spare_far not in t.slots for t in repacked), "repacked triangles avoid spare_far", trace)
        packing = [t for t in packed if t not in clashing] + [spare] + repacked
        used: set[ArcSlot] = set()
        for t in packing:
            _require(used.isdisjoint(t.slots), "augmented packing is slot-disjoint", trace)
            used.update(t.slots)
        return cover, packing

    _require(len(repacked) == 1 and len(clashing) == 2, "one repacked triangle against two clashes", trace)
    record(BranchTag.DSTAR_SINGLE_COVER)
    sub_cover, sub_pack = _solve(reduced, [labels[vmap[x]] for x in range(reduced.n)], depth + 1, trace)
    _require(len(sub_cover) == 1 and len(sub_pack) == 1, "reduced graph has a one-arc cover", trace)
    single = back[next(iter(sub_cover))]
    return cut | kept_far | {single}, packed


# -- certificate document ------------------------------------------------------

CERT_MAGIC = "dtriangles-certificate 1"


def format_certificate(g: DirectedMultigraph, cert: Certificate) -> str:
    lines = [CERT_MAGIC, f"n {g.n}", f"arcs {g.num_slots()}", f"cover {len(cert.cover)}"]
    lines += [f"slot {s}" for s in sorted(cert.cover)]
    lines.append(f"packing {len(cert.packing)}")
    lines += [f"triangle {t}" for t in sorted(cert.packing)]
    lines.append(f"trace {len(cert.trace)}")
    lines += [f"level {e.depth} pivot {e.pivot} p {e.p} tag {e.tag.value}" for e in cert.trace]
    return "\n".join(lines) + "\n"


class CertificateParseError(ValueError):
    pass


def parse_certificate(text: str) -> Certificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CERT_MAGIC:
        raise CertificateParseError("missing certificate header")
    cert = Certificate()
    for lineno, line in enumerate(lines[1:], 2):
        key, *rest = line.split()
        try:
            vals = [int(x) for x in rest] if key in ("slot", "triangle") else rest
            if key == "slot":
                if len(vals) != 3:
                    raise ValueError("slot needs 3 integers")
                cert.cover.add(ArcSlot(*vals))
            elif key == "triangle":
                if len(vals) != 9:
                    raise ValueError("triangle needs 9 integers")
                cert.packing.append(
                    Triangle.from_slots(ArcSlot(*vals[0:3]), ArcSlot(*vals[3:6]), ArcSlot(*vals[6:9]))
                )
            elif key == "level":
                d = dict(zip(rest[1::2], rest[2::2]))
                cert.trace.append(
                    TraceEntry(int(rest[0]), int(d["pivot"]), int(d["p"]), BranchTag(d["tag"]))
                )
            elif key not in ("n", "arcs", "cover", "packing", "trace"):
                raise ValueError(f"unknown key {key!r}")
        except (ValueError, KeyError, GraphError) as exc:
            raise CertificateParseError(f"line {lineno}: {exc}") from exc
    return cert
