"""Command-line front end.

    pfiltration analyze <spec> [--series ...] [--format text|jsonl] [--rank]
    pfiltration explain <spec>
    pfiltration suite --corpus FILE --report FILE
    pfiltration zoo list

Spec grammar: ``family:key=value,key=value`` or ``direct(specA;specB)``;
whitespace is ignored.  Exit codes: 0 ok, 1 suite failures, 2 bad spec or
build failure, 3 analysis cap exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

from . import criteria, zoo
from .checks import run_checks
from .core import DEFAULT_CAP, p_valuation
from .errors import CapExceeded, ParseError, PGroupError
from .series import (SERIES, frattini, frattini2, lower_p_central,
                     zassenhaus_recursive)

SERIES_FLAGS = {
    "lcs": ("lower_central",),
    "pcs": ("lower_p_central",),
    "frattini": ("frattini",),
    "zassenhaus": ("zassenhaus_recursive", "zassenhaus_lazard"),
}
SERIES_FLAGS["all"] = tuple(k for v in SERIES_FLAGS.values() for k in v)


# -- spec parsing ------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def word(self, what):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected {what}", start)
        return self.text[start:self.pos], start

    def spec(self):
        family, at = self.word("family name")
        if family == "direct":
            self.expect("(")
            a = self.spec()
            self.expect(";")
            b = self.spec()
            self.expect(")")
            return zoo.GroupSpec("direct", (), (a, b))
        if family not in zoo.FAMILIES:
            raise ParseError(f"unknown family {family!r}", at)
        self.expect(":")
        params = {}
        while True:
            key, at = self.word("key")
            if key not in zoo.FAMILIES[family]:
                raise ParseError(f"unknown key {key!r} for {family}", at)
            if key in params:
                raise ParseError(f"duplicate key {key!r}", at)
            self.expect("=")
            self.skip()
            sign = 1
            if self.peek() == "-":
                sign = -1
                self.pos += 1
            value, at = self.word("integer")
            if not value.isdigit():
                raise ParseError(f"not an integer: {value!r}", at)
            params[key] = sign * int(value)
            if self.peek() != ",":
                break
            self.pos += 1
        return zoo.GroupSpec(family, tuple(sorted(params.items())))


def parse_spec(text: str) -> zoo.GroupSpec:
    """Parse and validate a spec string; raises ParseError or InvalidSpec."""
    parser = _Parser(text)
    spec = parser.spec()
    if parser.peek():
        raise ParseError("trailing input", parser.pos)
    spec.validate()
    return spec


# -- reports -----------------------------------------------------------------

def padic(n: int, p: int):
    """Order ``n = p^e`` as the pair ``[p, e]``."""
    return [p, p_valuation(n, p)]


@dataclass
class AnalysisReport:
    spec: str
    p: int
    order: list
    d: int
    series: dict
    criteria: dict
    timings: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        return {"spec": self.spec, "p": self.p, "order": self.order, "d": self.d,
                "series": self.series, "criteria": self.criteria}

    def to_json(self) -> str:
        return json.dumps({"report": self.canonical(), "timings_ms": self.timings},
                          sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "AnalysisReport":
        obj = json.loads(line)
        return cls(timings=obj.get("timings_ms", {}), **obj["report"])


def _ms(t0):
    return int(round((time.perf_counter() - t0) * 1000))


def build_group(spec, cap=DEFAULT_CAP):
    return zoo.build(spec, cap=cap)


def analyze(spec, kinds=SERIES_FLAGS["all"], max_depth=32, rank=False,
            cap=DEFAULT_CAP, rank_cap=criteria.DEFAULT_RANK_CAP, group=None):
    """Build the group (unless given) and run the requested series and criteria."""
    timings = {}
    t0 = time.perf_counter()
    G = group if group is not None else build_group(spec, cap)
    timings["build"] = _ms(t0)
    p = G.p
    series = {}
    for kind in kinds:
        t0 = time.perf_counter()
        S = SERIES[kind](G, max_depth)
        series[kind] = [padic(n, p) for n in S.orders]
        timings[kind] = _ms(t0)
    t0 = time.perf_counter()
    report = criteria.criteria_report(G, rank=rank, rank_cap=rank_cap)
    timings["criteria"] = _ms(t0)
    crit = report.as_dict()
    crit["witnesses"] = {k: ([G.element(x) for x in v] if isinstance(v, list) else G.element(v))
                         for k, v in sorted(crit["witnesses"].items())}
    crit["witnesses"] = json.loads(json.dumps(crit["witnesses"]))
    return AnalysisReport(spec.text(), p, padic(G.order, p), report.d, series, crit, timings)


def render_text(rep: AnalysisReport) -> str:
    lines = [f"group     {rep.spec}", f"order     {rep.p}^{rep.order[1]}", f"d(G)      {rep.d}"]
    for kind, orders in rep.series.items():
        lines.append(f"{kind:<22}" + " ".join(f"{p}^{e}" for p, e in orders))
    c = rep.criteria
    lines.append(f"powerful            {c['is_powerful']}")
    lines.append(f"Phi2 == P3          {c['phi2_equals_p3']}")
    lines.append(f"centrality          {c['centrality_holds']}")
    if c.get("rank_bruteforce") is not None:
        lines.append(f"rank (brute force)  {c['rank_bruteforce']}")
    for k, v in c["witnesses"].items():
        lines.append(f"witness {k}: {v}")
    return "\n".join(lines)


def explain(spec, cap=DEFAULT_CAP, group=None) -> str:
    """Prose summary of the series orders and the centrality verdict."""
    G = group if group is not None else build_group(spec, cap)
    p = G.p
    fmt = lambda n: f"{p}^{p_valuation(n, p)}"
    Phi, Phi2 = frattini(G), frattini2(G)
    P = lower_p_central(G)
    D = zassenhaus_recursive(G)
    out = [f"{spec.text()} is a group of order {fmt(G.order)} with d(G) = "
           f"{p_valuation(G.order // Phi.order, p)}."]
    out.append(f"Phi(G) has order {fmt(Phi.order)}, Phi_2(G) has order {fmt(Phi2.order)} "
               f"and P_3(G) has order {fmt(P.term(3).order)}.")
    out.append("Zassenhaus orders: " + ", ".join(fmt(n) for n in D.orders) + ".")
    if G.order == 1 or Phi.is_trivial():
        out.append("Every subgroup below G in these series is trivial.")
    witness = criteria.centrality_witness(G)
    if witness is None:
        out.append("Phi(G)/Phi_2(G) is central in G/Phi_2(G): criterion HOLDS, "
                   "and Phi_2(G) = P_3(G).")
    else:
        phi, g = witness
        out.append(f"criterion FAILS: the coset of {G.element(phi)} in Phi(G)/Phi_2(G) does not "
                   f"commute with the generator {G.element(g)} in G/Phi_2(G), so "
                   f"[G, Phi(G)] escapes Phi_2(G) and P_3(G) is strictly larger than Phi_2(G).")
    return "\n".join(out)


# -- suite -------------------------------------------------------------------

def read_corpus(path):
    lines = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    return lines


def default_corpus_path():
    return str(resources.files("pfiltration") / "data" / "default_corpus.txt")


def suite_records(lines, max_depth=32, cap=DEFAULT_CAP, rank_cap=criteria.DEFAULT_RANK_CAP):
    """One record per (group, check), in corpus order."""
    records = []
    for line in lines:
        try:
            spec = parse_spec(line)
            G = build_group(spec, cap)
        except PGroupError as exc:
            records.append({"group": line, "check": "build", "status": "fail",
                            "detail": {"error": str(exc)}})
            continue
        for result in run_checks(G, spec.text(), spec, max_depth, rank_cap):
            records.append(result.record())
    return records


def suite(corpus_file, report_path, max_depth=32, cap=DEFAULT_CAP,
          rank_cap=criteria.DEFAULT_RANK_CAP, out=None) -> int:
    out = out or sys.stdout
    try:
        lines = read_corpus(corpus_file)
    except OSError as exc:
        print(f"cannot read corpus: {exc}", file=sys.stderr)
        return 4
    records = suite_records(lines, max_depth, cap, rank_cap)
    try:
        with open(report_path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 4
    failed = [r for r in records if r["status"] == "fail"]
    counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "skip")}
    print(f"{len(lines)} groups, {len(records)} checks: "
          f"{counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip", file=out)
    for r in failed:
        print(f"FAIL {r['group']} {r['check']} {json.dumps(r['detail'], sort_keys=True)}", file=out)
    return 1 if failed else 0


# -- entry point -------------------------------------------------------------

def _parser():
    ap = argparse.ArgumentParser(prog="pfiltration", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-depth", type=int, default=32)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        p.add_argument("--rank-cap", type=int, default=criteria.DEFAULT_RANK_CAP)

    a = sub.add_parser("analyze", help="series orders and criteria for one group")
    a.add_argument("spec")
    a.add_argument("--series", choices=sorted(SERIES_FLAGS), default="all")
    a.add_argument("--format", choices=("text", "jsonl"), default="text")
    a.add_argument("--rank", action="store_true", help="brute-force rank (small groups)")
    common(a)

    e = sub.add_parser("explain", help="prose verdict of the centrality criterion")
    e.add_argument("spec")
    common(e)

    s = sub.add_parser("suite", help="run every invariant over a corpus file")
    s.add_argument("--corpus", default=None, help="one spec per line (default: bundled corpus)")
    s.add_argument("--report", required=True, help="JSON lines output")
    common(s)

    z = sub.add_parser("zoo", help="list the group families")
    z.add_argument("action", choices=("list",))
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "zoo":
        for fam, keys in zoo.FAMILIES.items():
            keys = ",".join(f"{k}=.." for k in keys) if keys else "(A;B)"
            print(f"{fam:<14} {keys:<22} {zoo.DESCRIPTIONS[fam]}")
        return 0
    if args.command == "suite":
        corpus = args.corpus or default_corpus_path()
        return suite(corpus, args.report, args.max_depth, args.cap, args.rank_cap)
    try:
        spec = parse_spec(args.spec)
        G = build_group(spec, args.cap)
    except PGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "analyze":
            rep = analyze(spec, SERIES_FLAGS[args.series], args.max_depth, args.rank,
                          args.cap, args.rank_cap, group=G)
            print(rep.to_json() if args.format == "jsonl" else render_text(rep))
        else:
            print(explain(spec, args.cap, group=G))
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
