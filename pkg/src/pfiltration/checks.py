"""Invariant checks run by ``pfiltration suite`` over a corpus of groups.

Each check returns a :class:`CheckResult` whose status is ``pass``, ``fail``
or ``skip``; failures carry a witness that can be re-checked by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import criteria
from .core import (PGroup, axiom_violation, commutator_subgroup, join,
                   min_generators, power_subgroup)
from .series import (frattini, frattini2, lower_central, lower_p_central,
                     zassenhaus_lazard, zassenhaus_recursive)

# dual-definition comparison is run up to these orders
ZASSENHAUS_CAPS = {2: 2 ** 10, 3: 3 ** 7, 5: 5 ** 4}
DECLARED_FAMILIES = ("elab", "metabelian", "free_mod_phi2", "free_mod_p3")


@dataclass
class CheckResult:
    group: str
    check: str
    status: str
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def record(self) -> dict:
        return {"group": self.group, "check": self.check,
                "status": self.status, "detail": self.detail}


def _outside(A, B):
    """Smallest member of ``A`` not in ``B`` (parent index), or None."""
    out = A.members[~B.mask[A.members]]
    return int(out[0]) if len(out) else None


def _subset(name, A, B, **where):
    w = _outside(A, B)
    if w is None:
        return None
    return {"inclusion": name, "element": w, **where}


class Analysis:
    """Lazily computed series of one group, shared across checks."""

    def __init__(self, G: PGroup, max_depth: int = 32):
        self.G = G
        self.max_depth = max_depth
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def gamma(self):
        return self._get("gamma", lambda: lower_central(self.G, self.max_depth))

    @property
    def P(self):
        return self._get("P", lambda: lower_p_central(self.G, self.max_depth))

    @property
    def D(self):
        return self._get("D", lambda: zassenhaus_recursive(self.G, self.max_depth))

    @property
    def D_lazard(self):
        return self._get("DL", lambda: zassenhaus_lazard(self.G, self.max_depth))

    @property
    def phi(self):
        return self._get("phi", lambda: frattini(self.G))

    @property
    def phi2(self):
        return self._get("phi2", lambda: frattini2(self.G))

    @property
    def powerful(self):
        return self._get("powerful", lambda: criteria.is_powerful(self.G))

    def power(self, n):
        return self._get(("pow", n), lambda: power_subgroup(self.G.whole(), n))


def check_axioms(A: Analysis):
    bad = axiom_violation(A.G)
    if bad is None:
        return "pass", {"order": A.G.order}
    name, witness = bad
    return "fail", {"axiom": name, "witness": list(witness)}


def check_frattini_terms(A: Analysis):
    """``P_2 = D_2 = Phi``."""
    if A.P.term(2) != A.phi:
        return "fail", {"identity": "P2 = Phi"}
    if A.D.term(2) != A.phi:
        return "fail", {"identity": "D2 = Phi"}
    return "pass", {}


def check_zassenhaus_dual(A: Analysis):
    G = A.G
    cap = ZASSENHAUS_CAPS.get(G.p)
    if cap is not None and G.order > cap:
        return "skip", {"reason": f"order above {cap}"}
    R, L = A.D, A.D_lazard
    depth = max(len(R), len(L))
    for n in range(1, depth + 1):
        if not (R.known(n) and L.known(n)):
            break
        if R.term(n) != L.term(n):
            return "fail", {"depth": n, "recursive": R.term(n).order, "lazard": L.term(n).order}
    return "pass", {"orders": list(R.orders)}


def _pairs(series, max_depth):
    last = len(series)
    for i in range(1, last + 1):
        for j in range(i, last + 1):
            if i + j <= max_depth and series.known(i + j):
                yield i, j


def check_p_central_commutators(A: Analysis):
    P = A.P
    for i, j in _pairs(P, A.max_depth):
        w = _subset("[Pi,Pj] <= P(i+j)", commutator_subgroup(P.term(i), P.term(j)),
                    P.term(i + j), i=i, j=j)
        if w:
            return "fail", w
    return "pass", {}


def check_zassenhaus_commutators(A: Analysis):
    D = A.D
    for i, j in _pairs(D, A.max_depth):
        w = _subset("[Di,Dj] <= D(i+j)", commutator_subgroup(D.term(i), D.term(j)),
                    D.term(i + j), i=i, j=j)
        if w:
            return "fail", w
    return "pass", {}


def check_zassenhaus_powers(A: Analysis):
    D, p = A.D, A.G.p
    for i in range(1, len(D) + 1):
        if i * p > A.max_depth or not D.known(i * p):
            break
        w = _subset("Di^p <= D(ip)", power_subgroup(D.term(i), p), D.term(i * p), i=i)
        if w:
            return "fail", w
    return "pass", {}


def check_unconditional(A: Analysis):
    """``Phi_2 <= P_3``, ``gamma_3 <= P_3``, ``Phi_2 <= D_4``."""
    P3 = A.P.term(3)
    for name, X, Y in (("Phi2 <= P3", A.phi2, P3),
                       ("gamma3 <= P3", A.gamma.term(3), P3),
                       ("Phi2 <= D4", A.phi2, A.D.term(4))):
        w = _subset(name, X, Y)
        if w:
            return "fail", w
    return "pass", {}


def lazard_case_products(A: Analysis):
    """Closed-form products for two Zassenhaus terms, ``{depth: subgroup}``.

    p = 2: depths 3, 4 with ``gamma_2^2 G^4``; p = 3: depths 4, 5 with
    ``gamma_2^3 G^9``; p > 3: depths 3, 4 with ``G^p``.
    """
    G, p = A.G, A.G.p
    g = A.gamma.term
    if p == 2:
        tail = join(power_subgroup(g(2), 2), A.power(4))
        return {3: join(g(3), tail), 4: join(g(4), tail)}
    if p == 3:
        tail = join(power_subgroup(g(2), 3), A.power(9))
        return {4: join(g(4), tail), 5: join(g(5), tail)}
    tail = A.power(p)
    return {3: join(g(3), tail), 4: join(g(4), tail)}


def check_lazard_cases(A: Analysis):
    for n, product in lazard_case_products(A).items():
        if A.D.term(n) != product:
            return "fail", {"depth": n, "D": A.D.term(n).order, "product": product.order}
    return "pass", {"depths": sorted(lazard_case_products(A))}


def check_criterion_equivalence(A: Analysis):
    G = A.G
    eq = criteria.thmA_equality(G)
    central = criteria.centrality_criterion(G)
    by_comm = criteria.centrality_by_commutators(G)
    detail = {"phi2_equals_p3": eq, "centrality": central, "commutator_form": by_comm}
    if not (eq == central == by_comm):
        return "fail", detail
    if not central:
        detail["witness"] = list(criteria.centrality_witness(G))
    return "pass", detail


def check_powerful_definitions(A: Analysis):
    """Commutator-containment and quotient-abelian forms of powerfulness agree."""
    by_quotient = criteria.is_powerful_by_quotient(A.G)
    if by_quotient != A.powerful:
        return "fail", {"containment": A.powerful, "quotient": by_quotient}
    return "pass", {"powerful": A.powerful}


def check_powerful_equality(A: Analysis):
    if not A.powerful:
        return "skip", {"reason": "not powerful"}
    w = criteria.thmA_witness(A.G)
    if w is not None:
        return "fail", {"element": w}
    return "pass", {}


def check_powerful_pn(A: Analysis):
    if not A.powerful:
        return "skip", {"reason": "not powerful"}
    G = A.G
    for n in range(1, len(A.P) + 1):
        if A.P.term(n) != A.power(G.p ** (n - 1)):
            return "fail", {"depth": n}
    return "pass", {"depths": len(A.P)}


def check_powerful_rank(A: Analysis, rank_cap: int = criteria.DEFAULT_RANK_CAP):
    if not A.powerful:
        return "skip", {"reason": "not powerful"}
    if A.G.order > rank_cap:
        return "skip", {"reason": f"order above {rank_cap}"}
    r = criteria.rank_bruteforce(A.G, rank_cap)
    d = min_generators(A.G)
    return ("pass" if r == d else "fail"), {"rank": r, "d": d}


CHECKS = (
    ("group_axioms", check_axioms),
    ("frattini_terms", check_frattini_terms),
    ("zassenhaus_dual", check_zassenhaus_dual),
    ("p_central_commutators", check_p_central_commutators),
    ("zassenhaus_commutators", check_zassenhaus_commutators),
    ("zassenhaus_powers", check_zassenhaus_powers),
    ("unconditional_inclusions", check_unconditional),
    ("lazard_cases", check_lazard_cases),
    ("criterion_equivalence", check_criterion_equivalence),
    ("powerful_definitions", check_powerful_definitions),
    ("powerful_equality", check_powerful_equality),
    ("powerful_pn", check_powerful_pn),
    ("powerful_rank", check_powerful_rank),
)


def run_checks(G: PGroup, label: str, spec=None, max_depth: int = 32,
               rank_cap: int = criteria.DEFAULT_RANK_CAP):
    """Run every check on ``G``; stops after a failed axiom check."""
    A = Analysis(G, max_depth)
    results = []
    for name, fn in CHECKS:
        if name == "powerful_rank":
            status, detail = fn(A, rank_cap)
        else:
            status, detail = fn(A)
        results.append(CheckResult(label, name, status, detail))
        if name == "group_axioms" and status == "fail":
            return results
    if spec is not None:
        results.extend(spec_checks(G, spec, label))
    return results


def spec_checks(G: PGroup, spec, label: str):
    out = []
    if spec.family == "metabelian":
        ok = criteria.verify_presentation_relations(G, spec)
        out.append(CheckResult(label, "presentation_relations", "pass" if ok else "fail", {}))
    if spec.family in DECLARED_FAMILIES:
        d = min_generators(G)
        want = spec.declared_generators()
        out.append(CheckResult(label, "declared_generators", "pass" if d == want else "fail",
                               {"d": d, "declared": want}))
    if G.order != spec.order():
        out.append(CheckResult(label, "closed_form_order", "fail",
                               {"order": G.order, "expected": spec.order()}))
    else:
        out.append(CheckResult(label, "closed_form_order", "pass", {"order": G.order}))
    return out
