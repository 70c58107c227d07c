"""Descending series of a finite p-group.

Frattini series, lower central series, lower p-central series and the
Zassenhaus filtration.  The Zassenhaus filtration has two independent
implementations: the recursion through ``D_ceil(n/p)`` and commutators of
earlier terms, and Lazard's closed form as a product of powers of lower
central terms.  They must agree term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (PGroup, SubgroupSet, commutator_subgroup, join,
                   power_subgroup)

DEFAULT_MAX_DEPTH = 32

KINDS = ("lower_central", "lower_p_central", "frattini",
         "zassenhaus_recursive", "zassenhaus_lazard")


@dataclass(frozen=True)
class SeriesReport:
    """Terms ``terms[0], terms[1], ...`` are the series at depth 1, 2, ...

    ``stabilized_at`` is the depth of the first trivial (or repeated) term,
    or ``None`` when ``max_depth`` cut the computation short.
    """

    kind: str
    terms: tuple[SubgroupSet, ...]
    stabilized_at: int | None

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(T.order for T in self.terms)

    def __len__(self):
        return len(self.terms)

    def term(self, n: int) -> SubgroupSet:
        """Depth-``n`` term (1-based); constant after stabilisation."""
        if n < 1:
            raise IndexError("series depth starts at 1")
        if n <= len(self.terms):
            return self.terms[n - 1]
        if self.stabilized_at is None:
            raise IndexError(f"{self.kind} was truncated at depth {len(self.terms)}")
        return self.terms[-1]

    def known(self, n: int) -> bool:
        return n <= len(self.terms) or self.stabilized_at is not None


def _ceil_div(a, b):
    return -(-a // b)


def subgroup_frattini(H: SubgroupSet) -> SubgroupSet:
    """Frattini subgroup of ``H`` regarded as a group in its own right."""
    return join(power_subgroup(H, H.parent.p), commutator_subgroup(H, H))


def frattini(G: PGroup) -> SubgroupSet:
    """``Phi(G) = G^p [G, G]``."""
    return subgroup_frattini(G.whole())


def frattini2(G: PGroup) -> SubgroupSet:
    """``Phi(Phi(G))`` as a subgroup of ``G``."""
    return subgroup_frattini(frattini(G))


def exponent(G: PGroup) -> int:
    return int(G.element_orders().max())


def _iterate(kind, G, step, max_depth, stop_on_repeat=True):
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    terms = [G.whole()]
    if G.order == 1:
        return SeriesReport(kind, tuple(terms), 1)
    for n in range(2, max_depth + 1):
        T = step(n, terms)
        terms.append(T)
        if T.is_trivial() or (stop_on_repeat and T == terms[-2]):
            return SeriesReport(kind, tuple(terms), n)
    return SeriesReport(kind, tuple(terms), None)


def lower_central(G: PGroup, max_depth: int = DEFAULT_MAX_DEPTH) -> SeriesReport:
    """``gamma_1 = G``, ``gamma_{i+1} = [G, gamma_i]``."""
    whole = G.whole()
    return _iterate("lower_central", G,
                    lambda n, t: commutator_subgroup(whole, t[-1]), max_depth)


def lower_p_central(G: PGroup, max_depth: int = DEFAULT_MAX_DEPTH) -> SeriesReport:
    """``P_1 = G``, ``P_{n+1} = P_n^p [G, P_n]``."""
    whole = G.whole()

    def step(n, terms):
        P = terms[-1]
        return join(power_subgroup(P, G.p), commutator_subgroup(whole, P))

    return _iterate("lower_p_central", G, step, max_depth)


def frattini_series(G: PGroup, max_depth: int = DEFAULT_MAX_DEPTH) -> SeriesReport:
    """``G, Phi(G), Phi(Phi(G)), ...``."""
    return _iterate("frattini", G, lambda n, t: subgroup_frattini(t[-1]), max_depth)


class _Memo:
    """Caches subgroup operations by member set; Zassenhaus terms repeat a lot."""

    def __init__(self):
        self.comm = {}
        self.pow = {}

    def commutator(self, A, B):
        key = (A.key, B.key) if A.key <= B.key else (B.key, A.key)
        if key not in self.comm:
            self.comm[key] = commutator_subgroup(A, B)
        return self.comm[key]

    def power(self, A, n):
        key = (A.key, n)
        if key not in self.pow:
            self.pow[key] = power_subgroup(A, n)
        return self.pow[key]


def zassenhaus_recursive(G: PGroup, max_depth: int = DEFAULT_MAX_DEPTH) -> SeriesReport:
    """``D_n = D_ceil(n/p)^p * prod_{i+j=n} [D_i, D_j]``.

    Runs until the first trivial term: unlike the central series, a repeated
    term does not mean the filtration has stopped descending.
    """
    p = G.p
    memo = _Memo()

    def step(n, terms):
        D = lambda i: terms[i - 1]
        parts = [memo.power(D(_ceil_div(n, p)), p)]
        for i in range(1, n // 2 + 1):
            parts.append(memo.commutator(D(i), D(n - i)))
        return join(*parts)

    return _iterate("zassenhaus_recursive", G, step, max_depth, stop_on_repeat=False)


def lazard_factors(G: PGroup, gamma: SeriesReport | None = None):
    """All ``(i, h, gamma_i(G)^(p^h))`` with ``gamma_i`` nontrivial and ``p^h <= exp(G)``."""
    if gamma is None:
        gamma = lower_central(G)
    if gamma.stabilized_at is None:
        raise ValueError("lower central series did not reach the trivial group")
    e = exponent(G)
    memo = _Memo()
    out = []
    for i, Gi in enumerate(gamma.terms, start=1):
        if Gi.is_trivial():
            break
        q, h = 1, 0
        while q <= e:
            out.append((i, h, memo.power(Gi, q)))
            q *= G.p
            h += 1
    return out


def zassenhaus_lazard(G: PGroup, max_depth: int = DEFAULT_MAX_DEPTH) -> SeriesReport:
    """``D_n = prod_{i p^h >= n} gamma_i(G)^(p^h)``.

    ``i`` ranges up to the nilpotency class and ``p^h`` up to the exponent of
    ``G``; every omitted factor is trivial.
    """
    factors = lazard_factors(G)
    p = G.p

    def step(n, terms):
        chosen = [F for i, h, F in factors if i * p ** h >= n]
        return join(*chosen) if chosen else G.trivial()

    return _iterate("zassenhaus_lazard", G, step, max_depth, stop_on_repeat=False)


SERIES = {
    "lower_central": lower_central,
    "lower_p_central": lower_p_central,
    "frattini": frattini_series,
    "zassenhaus_recursive": zassenhaus_recursive,
    "zassenhaus_lazard": zassenhaus_lazard,
}


def nilpotency_class(G: PGroup) -> int:
    gamma = lower_central(G)
    return len(gamma.terms) - 1
