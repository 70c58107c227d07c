import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfiltration import cli, zoo
from pfiltration.core import PGroup
from pfiltration.errors import InvalidSpec, ParseError


def corrupted_build(spec, cap=None):
    """Builds normally except ``cyclic:p=2,n=2``, whose table breaks associativity."""
    G = zoo.build(spec)
    if spec.text() != "cyclic:p=2,n=2":
        return G
    table = G.table.copy()
    table[1, 2], table[1, 3] = table[1, 3], table[1, 2]
    return PGroup(2, G.elements, lambda a, b: table[a, b], 0, G.generators, table=table)


# -- parsing ---------------------------------------------------------------------

def test_parse_examples():
    s = cli.parse_spec("metabelian:p=3,k=1,d=2,m=2")
    assert s.family == "metabelian" and s["d"] == 2
    assert cli.parse_spec(" free_mod_phi2 : p = 2 , d = 2 ").text() == "free_mod_phi2:p=2,d=2"
    d = cli.parse_spec("direct(heisenberg:p=3;cyclic:p=3,n=1)")
    assert [f.family for f in d.factors] == ["heisenberg", "cyclic"]


@pytest.mark.parametrize("text,pos", [
    ("metabelian:p=3,k=1,d=2", None),
    ("bogus:p=2", 0),
    ("cyclic:p=2,q=1", 11),
    ("cyclic:p=2,n=x", 13),
    ("cyclic:p=2,n=1)", 14),
    ("direct(cyclic:p=2,n=1)", 21),
    ("cyclic:p=2,p=3,n=1", 11),
])
def test_parse_errors(text, pos):
    with pytest.raises((ParseError, InvalidSpec)) as info:
        cli.parse_spec(text)
    if pos is not None:
        assert isinstance(info.value, ParseError)
        assert info.value.position == pos


def test_parse_rejects_bad_metabelian():
    with pytest.raises(InvalidSpec):
        cli.parse_spec("metabelian:p=2,k=1,d=1,m=2")


@given(st.sampled_from(["metabelian:p=5,k=1,d=2,m=3", "direct(dihedral:n=8;elab:p=2,d=3)",
                        "free_mod_p3:p=3,d=2", "extraspecial:p=5,n=2", "cyclic:p=7,n=0"]))
def test_text_roundtrip(text):
    spec = cli.parse_spec(text)
    assert cli.parse_spec(spec.text()) == spec


# -- analyze / explain -----------------------------------------------------------

def test_analyze_metabelian():
    rep = cli.analyze(cli.parse_spec("metabelian:p=3,k=1,d=1,m=2"))
    assert rep.order == [3, 4]
    assert rep.criteria["is_powerful"]
    assert rep.criteria["phi2_equals_p3"]


def test_analyze_free_quotient():
    rep = cli.analyze(cli.parse_spec("free_mod_phi2:p=2,d=2"), rank=False)
    assert rep.order == [2, 7]
    assert not rep.criteria["phi2_equals_p3"]
    assert rep.criteria["witnesses"]["non_central"]


def test_analyze_elementary_abelian():
    rep = cli.analyze(cli.parse_spec("elab:p=5,d=3"))
    for orders in rep.series.values():
        assert orders[1] == [5, 0]


def test_jsonl_roundtrip_and_determinism():
    spec = cli.parse_spec("dihedral:n=16")
    a, b = cli.analyze(spec, rank=True), cli.analyze(spec, rank=True)
    assert a.canonical() == b.canonical()
    back = cli.AnalysisReport.from_json(a.to_json())
    assert back.canonical() == a.canonical()
    assert json.loads(a.to_json())["report"]["criteria"]["rank_bruteforce"] == 2


def test_explain_examples():
    text = cli.explain(cli.parse_spec("free_mod_phi2:p=2,d=2"))
    assert "criterion FAILS" in text and "coset of" in text
    assert "criterion HOLDS" in cli.explain(cli.parse_spec("metabelian:p=3,k=1,d=2,m=2"))
    assert "trivial" in cli.explain(cli.parse_spec("cyclic:p=2,n=1"))


# -- main and exit codes ---------------------------------------------------------

def test_main_analyze_text(capsys):
    assert cli.main(["analyze", "heisenberg:p=3", "--series", "lcs"]) == 0
    out = capsys.readouterr().out
    assert "lower_central" in out and "3^3 3^1 3^0" in out


def test_main_analyze_jsonl(capsys):
    assert cli.main(["analyze", "quaternion:n=8", "--format", "jsonl", "--rank"]) == 0
    line = capsys.readouterr().out.strip()
    assert json.loads(line)["report"]["order"] == [2, 3]


def test_main_bad_spec(capsys):
    assert cli.main(["analyze", "cyclic:p=4,n=1"]) == 2
    assert cli.main(["explain", "nonsense"]) == 2


def test_main_build_cap(capsys):
    assert cli.main(["analyze", "cyclic:p=2,n=8", "--cap", "16"]) == 2


def test_main_analysis_cap(capsys):
    assert cli.main(["analyze", "elab:p=2,d=9", "--rank"]) == 3


def test_zoo_list(capsys):
    assert cli.main(["zoo", "list"]) == 0
    out = capsys.readouterr().out
    for fam in zoo.FAMILIES:
        assert fam in out


def test_suite_bundled_corpus_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    corpus = tmp_path / "c.txt"
    corpus.write_text("# header\ndihedral:n=8\nmetabelian:p=3,k=1,d=1,m=2  # powerful\n\n")
    assert cli.main(["suite", "--corpus", str(corpus), "--report", str(a)]) == 0
    assert cli.main(["suite", "--corpus", str(corpus), "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    records = [json.loads(x) for x in a.read_text().splitlines()]
    assert {r["group"] for r in records} == {"dihedral:n=8", "metabelian:p=3,k=1,d=1,m=2"}


def test_suite_empty_corpus(tmp_path, capsys):
    corpus, report = tmp_path / "empty.txt", tmp_path / "r.jsonl"
    corpus.write_text("")
    assert cli.main(["suite", "--corpus", str(corpus), "--report", str(report)]) == 0
    assert report.read_text() == ""


def test_suite_missing_corpus(tmp_path, capsys):
    assert cli.main(["suite", "--corpus", str(tmp_path / "nope"), "--report",
                     str(tmp_path / "r")]) == 4


def test_suite_bad_line_fails(tmp_path, capsys):
    corpus, report = tmp_path / "c.txt", tmp_path / "r.jsonl"
    corpus.write_text("cyclic:p=2,n=1\nquaternion:n=12\n")
    assert cli.main(["suite", "--corpus", str(corpus), "--report", str(report)]) == 1
    assert "quaternion:n=12 build" in capsys.readouterr().out


def test_suite_corrupted_multiplication(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, "build_group", corrupted_build)
    corpus, report = tmp_path / "c.txt", tmp_path / "r.jsonl"
    corpus.write_text("cyclic:p=2,n=1\ncyclic:p=2,n=2\n")
    assert cli.main(["suite", "--corpus", str(corpus), "--report", str(report)]) == 1
    records = [json.loads(x) for x in report.read_text().splitlines()]
    bad = [r for r in records if r["status"] == "fail"]
    assert len(bad) == 1
    assert bad[0]["detail"]["axiom"] == "associativity"
    a, b, c = bad[0]["detail"]["witness"]
    T = corrupted_build(cli.parse_spec("cyclic:p=2,n=2")).table
    assert T[T[a, b], c] != T[a, T[b, c]]
    assert "FAIL cyclic:p=2,n=2 group_axioms" in capsys.readouterr().out
