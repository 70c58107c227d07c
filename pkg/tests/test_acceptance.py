"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary.
"""

import json
import time

import pytest

from pfiltration import cli, criteria, freequot, zoo
from pfiltration.checks import ZASSENHAUS_CAPS, Analysis
from pfiltration.core import (PGroup, commutator_subgroup, join, min_generators,
                              power_subgroup)
from pfiltration.series import frattini2, lower_p_central

RESULTS = {}


def report(n, ok, detail=""):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    out = []
    for line in cli.read_corpus(cli.default_corpus_path()):
        spec = cli.parse_spec(line)
        out.append((spec.text(), Analysis(cli.build_group(spec))))
    return out


def depth_range(*series):
    """Depths 1 .. first depth at which every series is trivial."""
    n = 1
    while not all(S.term(n).is_trivial() for S in series):
        n += 1
    return range(1, n + 1)


def test_criterion_01_zassenhaus_dual_definitions(corpus):
    checked, bad = 0, []
    for name, A in corpus:
        if A.G.order > ZASSENHAUS_CAPS[A.G.p]:
            continue
        checked += 1
        R, L = A.D, A.D_lazard
        if any(R.term(n) != L.term(n) for n in depth_range(R, L)):
            bad.append(name)
    report(1, checked > 0 and not bad, f"{checked} groups within the size caps, mismatches {bad}")


def _case_products(A):
    G, p = A.G, A.G.p
    g = A.gamma.term
    whole = G.whole()
    if p == 2:
        tail = [power_subgroup(g(2), 2), power_subgroup(whole, 4)]
        depths = (3, 4)
    elif p == 3:
        tail = [power_subgroup(g(2), 3), power_subgroup(whole, 9)]
        depths = (4, 5)
    else:
        tail = [power_subgroup(whole, p)]
        depths = (3, 4)
    return {n: join(g(n), *tail) for n in depths}


def test_criterion_02_case_identities(corpus):
    bad = []
    for name, A in corpus:
        for n, prod in _case_products(A).items():
            if A.D.term(n) != prod:
                bad.append((name, n))
    report(2, not bad, f"{len(corpus)} groups, mismatches {bad}")


def test_criterion_03_unconditional_inclusions(corpus):
    bad = []
    for name, A in corpus:
        G, p = A.G, A.G.p
        P, D = A.P, A.D
        P3 = P.term(3)
        if not (A.phi2 <= P3 and A.gamma.term(3) <= P3 and A.phi2 <= D.term(4)):
            bad.append((name, "Phi2/gamma3"))
        for S, label in ((P, "P"), (D, "D")):
            top = max(depth_range(S))
            for i in range(1, top + 1):
                for j in range(i, top + 1):
                    if not commutator_subgroup(S.term(i), S.term(j)) <= S.term(i + j):
                        bad.append((name, label, i, j))
        for i in range(1, max(depth_range(D)) + 1):
            if not power_subgroup(D.term(i), p) <= D.term(i * p):
                bad.append((name, "D^p", i))
    report(3, not bad, f"{len(corpus)} groups, violations {bad}")


def test_criterion_04_equality_matches_centrality(corpus):
    bad, failing = [], 0
    for name, A in corpus:
        eq = criteria.thmA_equality(A.G)
        central = criteria.centrality_criterion(A.G)
        failing += not eq
        if eq != central:
            bad.append(name)
    report(4, not bad and failing > 0,
           f"{len(corpus)} groups ({failing} with Phi2 != P3), disagreements {bad}")


def test_criterion_05_powerful_groups(corpus):
    bad, powerful = [], 0
    for name, A in corpus:
        if not criteria.is_powerful(A.G):
            continue
        powerful += 1
        G = A.G
        if frattini2(G) != lower_p_central(G).term(3):
            bad.append((name, "Phi2 != P3"))
        for n in depth_range(A.P):
            if A.P.term(n) != power_subgroup(G.whole(), G.p ** (n - 1)):
                bad.append((name, n))
    report(5, powerful > 0 and not bad, f"{powerful} powerful groups, failures {bad}")


def test_criterion_06_free_group_separation():
    E = freequot.build_free_mod_phi2(2, 2)
    P3 = criteria.p3(E)
    F3 = freequot.build_free_mod_p3(2, 2)
    C = freequot.build_free_mod_phi2(2, 1)
    facts = {
        "|F/Phi2| = 128": E.order == 128,
        "Phi2 trivial": frattini2(E).is_trivial(),
        "|P3| = 4": P3.order == 4,
        "criterion false": not criteria.centrality_criterion(E),
        "|F/P3| = 32": F3.order == 32,
        "rank 1 cyclic of order 4": C.order == 4 and max(C.element_orders()) == 4,
        "rank 1 criterion true": criteria.centrality_criterion(C),
    }
    report(6, all(facts.values()), ", ".join(k for k, v in facts.items() if not v) or "all facts hold")


@pytest.mark.stress
def test_criterion_06_stress_free_quotient_rank2_p3():
    t0 = time.perf_counter()
    E = freequot.build_free_mod_phi2(3, 2)
    verdict = criteria.centrality_criterion(E)
    elapsed = time.perf_counter() - t0
    ok = E.order == 3 ** 12 and not verdict and elapsed < 300
    print(f"criterion  6 (stress): {'PASS' if ok else 'FAIL'}  order {E.order}, {elapsed:.1f} s")
    assert ok


def test_criterion_07_metabelian_grid():
    grid = zoo.metabelian_grid()
    bad = []
    for p, k, d, m in grid:
        spec = zoo.GroupSpec.make("metabelian", p=p, k=k, d=d, m=m)
        G = zoo.build(spec)
        if not (criteria.verify_presentation_relations(G, spec) and criteria.is_powerful(G)
                and criteria.thmA_equality(G)):
            bad.append(spec.text())
    report(7, not bad, f"{len(grid)} grid groups, failures {bad}")


def test_criterion_08_rank_equals_d(corpus):
    bad, seen = [], {}
    for name, A in corpus:
        G = A.G
        if G.order > 256 or not criteria.is_powerful(G):
            continue
        r, d = criteria.rank_bruteforce(G), min_generators(G)
        seen[name] = r
        if r != d:
            bad.append((name, r, d))
    ok = not bad and seen.get("metabelian:p=3,k=1,d=1,m=2") == 2
    report(8, ok, f"{len(seen)} powerful groups of order <= 256, mismatches {bad}")


def test_criterion_09_dihedral_gap():
    D = zoo.dihedral(8)
    ok = criteria.thmA_equality(D) and not criteria.is_powerful(D)
    report(9, ok, "dihedral:n=8 has Phi2 = P3 without being powerful")


def _corrupt(spec, cap=None):
    G = zoo.build(spec)
    if spec.family != "cyclic":
        return G
    table = G.table.copy()
    table[1, 2], table[1, 3] = table[1, 3], table[1, 2]
    return PGroup(G.p, G.elements, lambda a, b: table[a, b], 0, G.generators, table=table)


def test_criterion_10_cli_suite(tmp_path, monkeypatch, capsys):
    t0 = time.perf_counter()
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    first = cli.main(["suite", "--report", str(a)])
    second = cli.main(["suite", "--report", str(b)])
    same = a.read_bytes() == b.read_bytes()
    records = [json.loads(x) for x in a.read_text().splitlines()]
    clean = first == second == 0 and same and all(r["status"] != "fail" for r in records)

    bad_corpus, bad_report = tmp_path / "bad.txt", tmp_path / "bad.jsonl"
    bad_corpus.write_text("dihedral:n=8\ncyclic:p=2,n=2\n")
    monkeypatch.setattr(cli, "build_group", _corrupt)
    code = cli.main(["suite", "--corpus", str(bad_corpus), "--report", str(bad_report)])
    fails = [json.loads(x) for x in bad_report.read_text().splitlines()]
    fails = [r for r in fails if r["status"] == "fail"]
    negative = code != 0 and len(fails) == 1 and len(fails[0]["detail"]["witness"]) == 3
    capsys.readouterr()
    elapsed = time.perf_counter() - t0
    report(10, clean and negative,
           f"{len(records)} records, deterministic={same}, negative control exit {code}, {elapsed:.1f} s")


@pytest.mark.stress
def test_stress_free_quotient_rank3_p2():
    E = freequot.build_free_mod_phi2(2, 3)
    assert E.order == 2 ** 20
    assert not criteria.thmA_equality(E)
