"""Finite-level predicates: powerfulness, Phi_2 = P_3, and the centrality test.

The centrality criterion and the equality ``Phi_2(G) = P_3(G)`` are computed
along unrelated routes (quotient and centre versus two subgroup series), so
comparing them is a real check rather than a restatement.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (PGroup, SubgroupSet, center, closure, commutator_subgroup,
                   min_generators, p_valuation, power_subgroup, quotient)
from .errors import NotPowerful, OrderCapExceeded, SpecMismatch
from .series import frattini, frattini2, lower_p_central, subgroup_frattini

DEFAULT_RANK_CAP = 256


@dataclass
class CriteriaReport:
    is_powerful: bool
    phi2_equals_p3: bool
    centrality_holds: bool
    d: int
    rank_bruteforce: int | None = None
    witnesses: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def powerful_power(p: int) -> int:
    return 4 if p == 2 else p


def powerful_witness(G: PGroup):
    """Element of ``[G, G]`` outside ``G^p`` (``G^4`` for p = 2), or None."""
    whole = G.whole()
    derived = commutator_subgroup(whole, whole)
    powers = power_subgroup(whole, powerful_power(G.p))
    outside = derived.members[~powers.mask[derived.members]]
    return int(outside[0]) if len(outside) else None


def is_powerful(G: PGroup) -> bool:
    return powerful_witness(G) is None


def is_powerful_by_quotient(G: PGroup) -> bool:
    """Whether ``G/G^p`` (``G/G^4`` for p = 2) is abelian, via the quotient group."""
    Q = quotient(G, power_subgroup(G.whole(), powerful_power(G.p))).image
    gens = np.asarray(Q.generators, dtype=np.int64)
    if not len(gens):
        return True
    return bool((Q.mul(gens[:, None], gens[None, :]) == Q.mul(gens[None, :], gens[:, None])).all())


def p3(G: PGroup) -> SubgroupSet:
    return lower_p_central(G, max_depth=3).term(3)


def thmA_witness(G: PGroup):
    """Element of ``P_3(G)`` outside ``Phi_2(G)``, or None when they coincide.

    ``Phi_2 <= P_3`` always holds, so a missing witness means equality.
    """
    P3 = p3(G)
    F2 = frattini2(G)
    if P3 == F2:
        return None
    outside = P3.members[~F2.mask[P3.members]]
    if len(outside):
        return int(outside[0])
    outside = F2.members[~P3.mask[F2.members]]
    return int(outside[0])


def thmA_equality(G: PGroup) -> bool:
    """``Phi_2(G) == P_3(G)`` as sets."""
    return frattini2(G) == p3(G)


def centrality_witness(G: PGroup):
    """A pair ``(phi, g)`` of ``G``-indices whose images in ``G/Phi_2`` do not commute.

    ``phi`` lies in ``Phi(G)``; returns None when ``Phi/Phi_2`` is central.
    """
    Phi = frattini(G)
    qm = quotient(G, subgroup_frattini(Phi))
    Q = qm.image
    image = np.unique(qm.projection[Phi.members])
    Z = center(Q)
    bad = image[~Z.mask[image]]
    if not len(bad):
        return None
    coset = int(bad[0])
    phi = int(Phi.members[qm.projection[Phi.members] == coset][0])
    for g in G.generators:
        a, b = int(qm.projection[phi]), int(qm.projection[g])
        if Q.mul(a, b) != Q.mul(b, a):
            return phi, int(g)
    raise AssertionError("non-central coset commutes with every generator")


def centrality_criterion(G: PGroup) -> bool:
    """Whether ``Phi(G)/Phi_2(G)`` lies in the centre of ``G/Phi_2(G)``."""
    return centrality_witness(G) is None


def centrality_by_commutators(G: PGroup) -> bool:
    """``[G, Phi(G)] <= Phi_2(G)``, the commutator form of the centrality test."""
    Phi = frattini(G)
    return commutator_subgroup(G.whole(), Phi) <= subgroup_frattini(Phi)


def powerful_pn_check(G: PGroup) -> bool:
    """``P_n(G) == G^(p^(n-1))`` for every n up to the first trivial term."""
    if not is_powerful(G):
        raise NotPowerful(G.name or repr(G))
    P = lower_p_central(G)
    whole = G.whole()
    for n, Pn in enumerate(P.terms, start=1):
        if Pn != power_subgroup(whole, G.p ** (n - 1)):
            return False
    return True


def subgroup_lattice(G: PGroup, order_cap: int = DEFAULT_RANK_CAP):
    """Every subgroup of ``G`` as a sorted tuple of member indices.

    Starts from the cyclic subgroups and joins each known subgroup with each
    cyclic subgroup until nothing new appears; every subgroup is a join of
    cyclic ones, so this reaches the whole lattice.
    """
    if G.order > order_cap:
        raise OrderCapExceeded(G.order, order_cap)
    table = G.table.tolist()
    n = G.order

    def close(members, gens):
        members = set(members)
        frontier = list(members)
        while frontier:
            nxt = []
            for a in frontier:
                row = table[a]
                for g in gens:
                    b = row[g]
                    if b not in members:
                        members.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(members)

    cyclic = {}
    for x in range(n):
        C = close({G.identity}, [x])
        cyclic.setdefault(C, x)
    found = {C: [x] for C, x in cyclic.items()}
    frontier = list(found)
    cyc = list(cyclic.items())
    while frontier:
        nxt = []
        for S in frontier:
            gens = found[S]
            for C, x in cyc:
                if x in S:
                    continue
                J = close(S, gens + [x])
                if J not in found:
                    found[J] = gens + [x]
                    nxt.append(J)
        frontier = nxt
    return sorted((tuple(sorted(S)), tuple(g)) for S, g in found.items())


def rank_bruteforce(G: PGroup, order_cap: int = DEFAULT_RANK_CAP) -> int:
    """``max d(H)`` over every subgroup ``H`` of ``G``."""
    best = 0
    for members, gens in subgroup_lattice(G, order_cap):
        H = SubgroupSet(G, np.asarray(members), gens)
        dH = p_valuation(H.order // subgroup_frattini(H).order, G.p)
        best = max(best, dH)
    return best


def verify_presentation_relations(G: PGroup, spec) -> bool:
    """``sigma tau_i sigma^-1 == tau_i^(1+p^k)`` and ``[tau_i, tau_j] == 1`` on the generators."""
    if spec.family != "metabelian":
        raise SpecMismatch(f"{spec.family} has no metabelian presentation")
    p, k, d, m = spec["p"], spec["k"], spec["d"], spec["m"]
    if G.order != p ** (m * (d + 1)) or len(G.generators) != d + 1:
        raise SpecMismatch("group does not match the metabelian spec")
    sigma, taus = G.generators[0], G.generators[1:]
    sigma_inv = int(G.inv[sigma])
    for t in taus:
        if G.mul(G.mul(sigma, t), sigma_inv) != G.power(t, 1 + p ** k):
            return False
        for u in taus:
            if G.commutator(t, u) != G.identity:
                return False
    return True


def criteria_report(G: PGroup, rank: bool = False,
                    rank_cap: int = DEFAULT_RANK_CAP) -> CriteriaReport:
    witnesses = {}
    pw = powerful_witness(G)
    if pw is not None:
        witnesses["not_powerful"] = pw
    tw = thmA_witness(G)
    if tw is not None:
        witnesses["p3_not_in_phi2"] = tw
    cw = centrality_witness(G)
    if cw is not None:
        witnesses["non_central"] = list(cw)
    report = CriteriaReport(
        is_powerful=pw is None,
        phi2_equals_p3=tw is None,
        centrality_holds=cw is None,
        d=min_generators(G),
        witnesses=witnesses,
    )
    if rank:
        report.rank_bruteforce = rank_bruteforce(G, rank_cap)
    return report
