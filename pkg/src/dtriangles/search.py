"""Instance generators and the extremal tau/nu ratio scan."""
from __future__ import annotations

import json
import random
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from pathlib import Path
from typing import Iterator

from .coverpack import ProofInvariantError, cover_and_pack, verify_certificate
from .exact import DEFAULT_BUDGET, exact_nu, exact_tau
from .graph import DirectedMultigraph, serialize_graph

CONJECTURED_RATIO = Fraction(3, 2)
MAX_TOURNAMENT_N = 7

FAMILIES = ("rotational", "all_tournaments", "random_tournament", "random_multigraph")


def rotational_tournament(k: int) -> DirectedMultigraph:
    """Vertices ``0..2k`` with arcs ``i -> i+j (mod 2k+1)`` for ``j = 1..k``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    n = 2 * k + 1
    return DirectedMultigraph(n, {(i, (i + j) % n): 1 for i in range(n) for j in range(1, k + 1)})


def tournament_from_mask(n: int, mask: int) -> DirectedMultigraph:
    """Bit ``b`` of ``mask`` orients the ``b``-th lexicographic pair (i<j) as ``j -> i``."""
    mult = {}
    for b, (i, j) in enumerate(combinations(range(n), 2)):
        mult[(j, i) if mask >> b & 1 else (i, j)] = 1
    return DirectedMultigraph(n, mult)


def all_tournaments(n: int) -> Iterator[DirectedMultigraph]:
    if not 0 <= n <= MAX_TOURNAMENT_N:
        raise ValueError(f"all_tournaments supports 0 <= n <= {MAX_TOURNAMENT_N}, got {n}")
    for mask in range(1 << (n * (n - 1) // 2)):
        yield tournament_from_mask(n, mask)


def random_tournament(n: int, seed: int | str) -> DirectedMultigraph:
    rng = random.Random(seed)
    return tournament_from_mask(n, rng.getrandbits(n * (n - 1) // 2) if n > 1 else 0)


def random_multigraph(n: int, arc_prob: float, max_mult: int, seed: int | str) -> DirectedMultigraph:
    if not 0.0 <= arc_prob <= 1.0:
        raise ValueError(f"arc probability must lie in [0, 1], got {arc_prob}")
    if max_mult < 1:
        raise ValueError(f"max multiplicity must be >= 1, got {max_mult}")
    rng = random.Random(seed)
    mult = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < arc_prob:
                mult[(u, v)] = rng.randint(1, max_mult)
    return DirectedMultigraph(n, mult)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int = 5
    kmax: int = 3
    arc_prob: float = 0.5
    max_mult: int = 2
    seed: int = 0
    limit: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def instances(self) -> Iterator[DirectedMultigraph]:
        if self.family == "rotational":
            stream: Iterator[DirectedMultigraph] = (
                rotational_tournament(k) for k in range(1, self.kmax + 1)
            )
        elif self.family == "all_tournaments":
            stream = all_tournaments(self.n)
        elif self.family == "random_tournament":
            stream = (random_tournament(self.n, f"{self.seed}-{i}") for i in _count(self.limit))
        else:
            stream = (
                random_multigraph(self.n, self.arc_prob, self.max_mult, f"{self.seed}-{i}")
                for i in _count(self.limit)
            )
        return islice(stream, self.limit) if self.limit is not None else stream


def _count(limit: int | None) -> Iterator[int]:
    if limit is None:
        raise ValueError("random families need an instance limit")
    return iter(range(limit))


@dataclass
class InstanceRecord:
    index: int
    graph: str
    nu: int | None
    tau: int | None
    cover: int | None = None
    packing: int | None = None
    skipped: bool = False
    problems: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> Fraction | None:
        if self.skipped or not self.nu:
            return None
        return Fraction(self.tau, self.nu)


def _by_index(rec: InstanceRecord) -> int:
    return rec.index


@dataclass
class SearchReport:
    instances_scanned: int = 0
    skipped: int = 0
    max_ratio: Fraction | None = None
    argmax_index: int | None = None
    argmax_instance: str | None = None
    theorem_violations: list[InstanceRecord] = field(default_factory=list)
    conjecture_exceeders: list[InstanceRecord] = field(default_factory=list)
    records: list[InstanceRecord] = field(default_factory=list)

    def add(self, rec: InstanceRecord) -> None:
        """Fold one record in; the result does not depend on arrival order."""
        self.instances_scanned += 1
        insort(self.records, rec, key=_by_index)
        if rec.skipped:
            self.skipped += 1
        if rec.problems:
            insort(self.theorem_violations, rec, key=_by_index)
        ratio = rec.ratio
        if ratio is None:
            return
        if ratio > CONJECTURED_RATIO:
            insort(self.conjecture_exceeders, rec, key=_by_index)
        if (
            self.max_ratio is None
            or ratio > self.max_ratio
            or (ratio == self.max_ratio and rec.index < self.argmax_index)
        ):
            self.max_ratio = ratio
            self.argmax_index = rec.index
            self.argmax_instance = rec.graph

    def summary(self) -> dict:
        return {
            "instances_scanned": self.instances_scanned,
            "skipped": self.skipped,
            "max_ratio": None if self.max_ratio is None else str(self.max_ratio),
            "argmax_index": self.argmax_index,
            "argmax_instance": self.argmax_instance,
            "theorem_violations": [
                {"index": r.index, "problems": r.problems, "graph": r.graph}
                for r in self.theorem_violations
            ],
            "conjecture_exceeders": [
                {"index": r.index, "tau": r.tau, "nu": r.nu, "graph": r.graph}
                for r in self.conjecture_exceeders
            ],
        }

    def format_text(self, table: bool = False) -> str:
        lines = [
            f"instances_scanned {self.instances_scanned}",
            f"skipped {self.skipped}",
            f"max_ratio {self.max_ratio if self.max_ratio is not None else 'none'}",
            f"argmax_index {self.argmax_index if self.argmax_index is not None else 'none'}",
            f"theorem_violations {len(self.theorem_violations)}",
            f"conjecture_exceeders {len(self.conjecture_exceeders)}",
        ]
        if table:
            lines.append("index n tau nu ratio cover packing")
            for r in self.records:
                n = r.graph.split("\n", 1)[0].split()[1]
                ratio = "-" if r.ratio is None else str(r.ratio)
                lines.append(f"{r.index} {n} {r.tau} {r.nu} {ratio} {r.cover} {r.packing}")
        for r in self.theorem_violations:
            lines.append(f"violation {r.index}: {'; '.join(r.problems)}")
        return "\n".join(lines) + "\n"

    def write(self, out_dir: Path, table: bool = False) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(self.format_text(table))
        (out_dir / "summary.json").write_text(json.dumps(self.summary(), indent=2) + "\n")
        for r in self.conjecture_exceeders:
            (out_dir / f"exceeder_{r.index}.dmg").write_text(r.graph)


def evaluate_instance(index: int, g: DirectedMultigraph, budget: int = DEFAULT_BUDGET) -> InstanceRecord:
    """Exact tau/nu plus an end-to-end certificate check for one instance."""
    text = serialize_graph(g)
    nu = exact_nu(g, budget)
    tau = exact_tau(g, budget)
    if nu.capped or tau.capped:
        return InstanceRecord(index, text, None, None, skipped=True)
    rec = InstanceRecord(index, text, nu.value, tau.value)
    if nu.value >= 1 and not tau.value < 2 * nu.value:
        rec.problems.append(f"tau={tau.value} is not below 2*nu={2 * nu.value}")
    try:
        cert = cover_and_pack(g, check=False)
    except ProofInvariantError as exc:
        rec.problems.append(f"construction invariant failed: {exc}")
        return rec
    rec.cover, rec.packing = len(cert.cover), len(cert.packing)
    report = verify_certificate(g, cert)
    if not report.ok:
        rec.problems.append("certificate rejected: " + report.describe().replace("\n", ", "))
    if not (tau.value <= rec.cover and rec.packing <= nu.value):
        rec.problems.append(
            f"certificate outside exact sandwich: cover={rec.cover} tau={tau.value} "
            f"packing={rec.packing} nu={nu.value}"
        )
    return rec


def _evaluate_star(args):
    return evaluate_instance(*args)


def ratio_scan(spec: GeneratorSpec, budget: int = DEFAULT_BUDGET, workers: int = 1) -> SearchReport:
    report = SearchReport()
    jobs = ((i, g, budget) for i, g in enumerate(spec.instances()))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            for rec in pool.map(_evaluate_star, jobs, chunksize=64):
                report.add(rec)
    else:
        for rec in map(_evaluate_star, jobs):
            report.add(rec)
    return report
