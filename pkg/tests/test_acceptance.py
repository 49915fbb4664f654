"""Exit criteria for the package, one test per criterion.

Every criterion is zero-tolerance.  Each test records a one-line verdict
that is printed in the pytest terminal summary.
"""
from __future__ import annotations

import time
from collections import Counter
from fractions import Fraction

import pytest

from dtriangles.coverpack import BranchTag, cover_and_pack, verify_certificate
from dtriangles.exact import exact_nu, exact_tau, naive_nu, naive_tau
from dtriangles.flow import (
    build_auxiliary_network,
    disconnects,
    max_disjoint_paths,
    path_arc_slots,
)
from dtriangles.graph import enumerate_triangles, parse_graph
from dtriangles.search import GeneratorSpec, all_tournaments, random_multigraph, ratio_scan

from .conftest import ACCEPTANCE_RESULTS
from .oracles import BRANCH_FIXTURES, brute_max_packing, slot_triangles, t5

RANDOM_INSTANCES = 2000
ARC_PROBS = (0.3, 0.5, 0.7, 0.9)


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (ok, detail)
    assert ok, detail


@pytest.fixture(scope="module")
def suite():
    """Criterion-2 corpus: seeded random multigraphs plus every tournament on n <= 5."""
    graphs = [
        random_multigraph(3 + i % 6, ARC_PROBS[(i // 6) % 4], 2, seed=f"acceptance-{i}")
        for i in range(RANDOM_INSTANCES)
    ]
    for n in range(1, 6):
        graphs.extend(all_tournaments(n))
    rows = []
    for g in graphs:
        cert = cover_and_pack(g, check=False)
        rows.append((g, cert, verify_certificate(g, cert)))
    return rows


def test_criterion_1_t5_fixture():
    start = time.perf_counter()
    g = t5()
    nu, tau = exact_nu(g).value, exact_tau(g).value
    cert = cover_and_pack(g)
    verified = verify_certificate(g, cert).ok
    elapsed = time.perf_counter() - start
    ok = (nu, tau, len(cert.cover), len(cert.packing)) == (2, 3, 3, 2) and verified and elapsed < 1.0
    record(
        1,
        ok,
        f"T5 nu={nu} tau={tau} cover={len(cert.cover)} packing={len(cert.packing)} "
        f"verified={verified} in {elapsed:.3f}s",
    )


def test_criterion_2_certificate_property_suite(suite):
    tournaments = sum(1 for g, _, _ in suite[RANDOM_INSTANCES:] if g.n == 5)
    failures = []
    triangled = 0
    for i, (g, cert, report) in enumerate(suite):
        has = bool(enumerate_triangles(g))
        triangled += has
        if not report.ok or (has and not len(cert.cover) < 2 * len(cert.packing)):
            failures.append(i)
    ok = not failures and len(suite) - RANDOM_INSTANCES >= 1024 and tournaments == 1024
    record(
        2,
        ok,
        f"{len(suite)} certificates ({RANDOM_INSTANCES} random, {tournaments} five-vertex "
        f"tournaments), {triangled} with triangles, failures={failures[:5]}",
    )


def test_criterion_3_oracle_sandwich(suite):
    checked = 0
    bad = []
    for i, (g, cert, _) in enumerate(suite):
        if g.n > 6:
            continue
        nu, tau = exact_nu(g), exact_tau(g)
        assert not nu.capped and not tau.capped
        checked += 1
        if not (len(cert.packing) <= nu.value and tau.value <= len(cert.cover)):
            bad.append(i)
        if nu.value >= 1 and not tau.value < 2 * nu.value:
            bad.append(i)
    record(3, not bad and checked > 0, f"{checked} instances with n <= 6 sandwiched, violations={bad[:5]}")


def test_criterion_4_oracle_agreement():
    checked = 0
    triangled = 0
    mismatches = []
    i = 0
    while triangled < 500:
        g = random_multigraph(3 + i % 3, (0.4, 0.55, 0.7)[i % 3], 2, seed=f"naive-{i}")
        i += 1
        if len(enumerate_triangles(g)) > 15 or g.num_slots() > 20:
            continue
        pair = (exact_nu(g).value, exact_tau(g).value)
        if pair != (naive_nu(g), naive_tau(g)):
            mismatches.append(i - 1)
        checked += 1
        triangled += pair[0] > 0
    record(
        4,
        not mismatches,
        f"{checked} instances ({triangled} with triangles) agree, mismatches={mismatches[:5]}",
    )


def test_criterion_5_menger_duality():
    pairs = 0
    bad = []
    i = 0
    while pairs < 1000:
        g = random_multigraph(3 + i % 4, (0.4, 0.6, 0.8)[i % 3], 2, seed=f"menger-{i}")
        i += 1
        for v in range(g.n):
            tris = slot_triangles(g, through=v)
            if len(tris) > 16:
                continue
            net = build_auxiliary_network(g, v)
            res = max_disjoint_paths(net)
            used = [s for p in res.paths for s in path_arc_slots(p, net)]
            ok = (
                len(res.paths) == len(res.cut) == res.value
                and len(used) == len(set(used))
                and disconnects(net, res.cut)
                and res.value == brute_max_packing(tris)
            )
            if not ok:
                bad.append((i - 1, v))
            pairs += 1
    record(5, not bad, f"{pairs} (graph, pivot) pairs, failures={bad[:5]}")


def test_criterion_6_conjecture_scan():
    start = time.perf_counter()
    report = ratio_scan(GeneratorSpec("all_tournaments", n=5))
    elapsed = time.perf_counter() - start
    ok = (
        report.instances_scanned == 1024
        and report.skipped == 0
        and report.max_ratio == Fraction(3, 2)
        and not report.conjecture_exceeders
        and not report.theorem_violations
        and elapsed < 60
    )
    record(
        6,
        ok,
        f"1024 tournaments: max_ratio={report.max_ratio} exceeders={len(report.conjecture_exceeders)} "
        f"violations={len(report.theorem_violations)} in {elapsed:.1f}s",
    )


def test_criterion_7_branch_coverage(suite):
    hist: Counter = Counter()
    for _, cert, _ in suite:
        hist.update(cert.tag_histogram())
    for text in BRANCH_FIXTURES.values():
        g, _ = parse_graph(text)
        hist.update(cover_and_pack(g).tag_histogram())
    hist.update(cover_and_pack(t5()).tag_histogram())
    missing = [t.value for t in BranchTag if hist[t] == 0]
    counts = " ".join(f"{t.value}={hist[t]}" for t in BranchTag)
    record(7, not missing, f"{counts}; never fired: {missing or 'none'}")
