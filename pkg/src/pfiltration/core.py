"""Concrete finite p-groups with enumerated, index-labelled elements.

A :class:`PGroup` stores one payload row per element (bounded integers,
reduced residues) and a vectorised multiplication on element *indices*.
Groups up to :data:`TABLE_LIMIT` elements carry a full Cayley table; larger
ones multiply through the payload arithmetic of their family.

Subgroups are :class:`SubgroupSet` objects: a sorted array of member indices
plus a (small) generating set.  Every subgroup-valued operation here returns a
closed set, built by breadth-first closure under right multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceeded, NotNormal, NotPPower, ParentMismatch

DEFAULT_CAP = 1 << 21
TABLE_LIMIT = 4096
# above this many (h1, h2) pairs commutator_subgroup switches to generators
FULL_PAIRS_LIMIT = 1 << 22
DENSE_CODE_LIMIT = 1 << 25


def p_valuation(n: int, p: int) -> int | None:
    """Return e with n == p**e, or None if n is not a power of p."""
    e = 0
    while n > 1 and n % p == 0:
        n //= p
        e += 1
    return e if n == 1 else None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class _Codec:
    """Mixed-radix codes for payload rows and the code -> index lookup."""

    def __init__(self, moduli):
        self.moduli = np.asarray(moduli, dtype=np.int64)
        space = 1
        for m in moduli:
            space *= int(m)
        self.space = space
        if space >= 1 << 62:
            raise ValueError("payload space too large to encode")
        weights = np.ones(len(moduli), dtype=np.int64)
        for i in range(len(moduli) - 2, -1, -1):
            weights[i] = weights[i + 1] * self.moduli[i + 1]
        self.weights = weights
        self.dense = space <= DENSE_CODE_LIMIT

    def encode(self, rows):
        return rows @ self.weights

    def index_table(self, codes):
        if self.dense:
            pos = np.full(self.space, -1, dtype=np.int64)
            pos[codes] = np.arange(len(codes))
            return pos
        order = np.argsort(codes, kind="stable")
        return codes[order], order

    def lookup(self, table, codes):
        if self.dense:
            return table[codes]
        sorted_codes, order = table
        return order[np.searchsorted(sorted_codes, codes)]


class PGroup:
    """A finite p-group on element indices ``0 .. order-1``.

    ``mul`` is a vectorised callable on two equal-length index arrays.  The
    payload rows in ``elements`` are used for display, canonical ordering and
    family-specific checks only; group arithmetic goes through ``mul``.
    """

    def __init__(self, p, elements, mul, identity, generators, name="",
                 table=None, inverses=None):
        self.p = int(p)
        self.elements = np.asarray(elements, dtype=np.int64)
        if self.elements.ndim == 1:
            self.elements = self.elements[:, None]
        self.order = len(self.elements)
        if p_valuation(self.order, self.p) is None:
            raise NotPPower(f"order {self.order} is not a power of {self.p}")
        self.identity = int(identity)
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self._raw_mul = mul
        self.table = table
        if self.table is None and self.order <= TABLE_LIMIT:
            self.table = self._build_table()
        if inverses is not None:
            self.inv = np.asarray(inverses, dtype=np.int64)
        else:
            self.inv = self._inverses()

    @classmethod
    def from_table(cls, p, table, identity=0, generators=None, name=""):
        table = np.asarray(table, dtype=np.int64)
        n = len(table)
        if generators is None:
            generators = range(n)

        def mul(a, b):
            return table[a, b]

        return cls(p, np.arange(n)[:, None], mul, identity, generators,
                   name=name, table=table)

    def _build_table(self):
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        block = max(1, (1 << 20) // max(n, 1))
        cols = np.arange(n)
        for start in range(0, n, block):
            rows = np.arange(start, min(n, start + block))
            a = np.repeat(rows, n)
            b = np.tile(cols, len(rows))
            table[start:start + len(rows)] = self._raw_mul(a, b).reshape(len(rows), n)
        return table

    def _inverses(self):
        if self.table is not None:
            hits = np.argwhere(self.table == self.identity)
            inv = np.full(self.order, -1, dtype=np.int64)
            inv[hits[:, 0]] = hits[:, 1]
            return inv
        # a**(order-1) is the inverse of a in a group of that order
        return self.power(np.arange(self.order), self.order - 1)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"PGroup({self.name or '?'}, p={self.p}, order={self.order})"

    @property
    def log_order(self) -> int:
        return p_valuation(self.order, self.p)

    def element(self, i) -> tuple:
        return tuple(int(x) for x in self.elements[int(i)])

    def mul(self, a, b):
        """Product of index arrays (broadcasting); plain ints in, int out."""
        if self.table is not None:
            out = self.table[a, b]
        else:
            a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64),
                                       np.asarray(b, dtype=np.int64))
            out = np.asarray(self._raw_mul(a.ravel(), b.ravel())).reshape(a.shape)
        if np.ndim(out) == 0:
            return int(out)
        return out

    def power(self, a, n: int):
        """``a**n`` for an index array ``a`` and an integer ``n >= 0``."""
        a = np.asarray(a, dtype=np.int64)
        result = np.full(a.shape, self.identity, dtype=np.int64)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        if np.ndim(result) == 0:
            return int(result)
        return result

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``, vectorised."""
        return self.mul(self.mul(self.inv[a], self.inv[b]), self.mul(a, b))

    def conjugate(self, n, g):
        """``g^-1 n g``."""
        return self.mul(self.mul(self.inv[g], n), g)

    def element_orders(self):
        orders = np.ones(self.order, dtype=np.int64)
        x = np.arange(self.order)
        live = x != self.identity
        q = 1
        while live.any():
            q *= self.p
            orders[live] = q
            x = self.power(x, self.p)
            live = x != self.identity
        return orders

    def whole(self) -> "SubgroupSet":
        return SubgroupSet(self, np.arange(self.order), self.generators)

    def trivial(self) -> "SubgroupSet":
        return SubgroupSet(self, np.array([self.identity]), ())


class SubgroupSet:
    """A subgroup of ``parent``: sorted member indices plus generators.

    Construct through :func:`closure` and friends; the constructor trusts its
    inputs.  Equality is set equality of members within the same parent.
    """

    def __init__(self, parent: PGroup, members, generators):
        self.parent = parent
        members = np.asarray(members, dtype=np.int64)
        members.setflags(write=False)
        self.members = members
        self.generators = tuple(int(g) for g in generators)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        m.setflags(write=False)
        return m

    @cached_property
    def key(self) -> bytes:
        return self.members.tobytes()

    def __contains__(self, i):
        return bool(self.mask[int(i)])

    def contains_all(self, idx) -> bool:
        return bool(self.mask[np.asarray(idx, dtype=np.int64)].all())

    def __eq__(self, other):
        if not isinstance(other, SubgroupSet):
            return NotImplemented
        return self.parent is other.parent and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: "SubgroupSet") -> bool:
        _same_parent(self, other)
        return other.contains_all(self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order

    def __repr__(self):
        return f"SubgroupSet(order={self.order}, of {self.parent!r})"


def _same_parent(*subgroups):
    parent = subgroups[0].parent
    for H in subgroups[1:]:
        if H.parent is not parent:
            raise ParentMismatch("subgroups live in different groups")
    return parent


@dataclass(frozen=True)
class QuotientMap:
    source: PGroup
    kernel: SubgroupSet
    image: PGroup
    projection: np.ndarray


# -- enumeration -------------------------------------------------------------

def enumerate_group(generators: Sequence[Sequence[int]], mul: Callable,
                    p: int, moduli: Sequence[int], inv: Callable | None = None,
                    identity: Sequence[int] | None = None,
                    cap: int = DEFAULT_CAP, name: str = "") -> PGroup:
    """Breadth-first closure of payload ``generators`` under ``mul``.

    ``mul`` and the optional ``inv`` act on ``(N, L)`` payload arrays.  Index 0
    is the identity; later indices follow first discovery, scanning the
    frontier in index order and the generators in the given order.
    """
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    if cap < 1:
        raise ValueError("cap must be positive")
    moduli = np.asarray(moduli, dtype=np.int64)
    gens = np.asarray(generators, dtype=np.int64).reshape(len(generators), -1) % moduli
    if identity is None:
        identity = np.zeros(len(moduli), dtype=np.int64)
    codec = _Codec(moduli)
    ident = np.asarray(identity, dtype=np.int64).reshape(1, -1)

    if codec.dense:
        seen = np.zeros(codec.space, dtype=bool)
        def is_seen(codes):
            return seen[codes]
        def mark(codes):
            seen[codes] = True
    else:
        seen_codes = [np.empty(0, dtype=np.int64)]
        def is_seen(codes):
            return np.isin(codes, seen_codes[0])
        def mark(codes):
            seen_codes[0] = np.union1d(seen_codes[0], codes)

    chunks = [ident]
    mark(codec.encode(ident))
    frontier = ident
    total = 1
    k = len(gens)
    while len(frontier):
        left = np.repeat(frontier, k, axis=0)
        right = np.tile(gens, (len(frontier), 1))
        prods = np.asarray(mul(left, right), dtype=np.int64) % moduli
        codes = codec.encode(prods)
        uniq, first = np.unique(codes, return_index=True)
        fresh = ~is_seen(uniq)
        first = np.sort(first[fresh])
        if total + len(first) > cap:
            raise CapExceeded(cap)
        frontier = prods[first]
        mark(codes[first])
        total += len(first)
        chunks.append(frontier)

    elements = np.concatenate(chunks)
    codes = codec.encode(elements)
    table = codec.index_table(codes)

    def index_mul(a, b):
        return codec.lookup(table, codec.encode(np.asarray(mul(elements[a], elements[b])) % moduli))

    inverses = None
    if inv is not None:
        inverses = codec.lookup(table, codec.encode(np.asarray(inv(elements)) % moduli))
    gen_idx = codec.lookup(table, codec.encode(gens))
    return PGroup(p, elements, index_mul, 0, gen_idx, name=name, inverses=inverses)


# -- subgroups ---------------------------------------------------------------

def _extend(H: SubgroupSet, new) -> SubgroupSet:
    """Subgroup generated by ``H`` and the indices ``new``."""
    G = H.parent
    new = [int(g) for g in new if not H.mask[int(g)]]
    if not new:
        return H
    gens = np.array(H.generators + tuple(new), dtype=np.int64)
    mask = H.mask.copy()
    frontier = H.members
    while len(frontier):
        prods = G.mul(frontier[:, None], gens[None, :]).ravel()
        prods = np.unique(prods[~mask[prods]])
        mask[prods] = True
        frontier = prods
    return SubgroupSet(G, np.flatnonzero(mask), gens)


def _as_indices(seed):
    if isinstance(seed, np.ndarray):
        return seed.astype(np.int64, copy=False).ravel()
    return np.fromiter((int(s) for s in seed), dtype=np.int64)


def closure(parent: PGroup, seed) -> SubgroupSet:
    """Smallest subgroup containing the indices in ``seed``.

    Seeds are scanned in increasing index order; each one not yet covered
    extends the current subgroup and is recorded as a generator.
    """
    seeds = np.unique(_as_indices(seed))
    H = parent.trivial()
    seeds = seeds[~H.mask[seeds]]
    while len(seeds):
        H = _extend(H, [seeds[0]])
        seeds = seeds[~H.mask[seeds]]
    return H


def join(*subgroups: SubgroupSet) -> SubgroupSet:
    """``closure`` of the union of the given subgroups."""
    parent = _same_parent(*subgroups)
    ordered = sorted(subgroups, key=lambda H: -H.order)
    J = ordered[0]
    for H in ordered[1:]:
        if not J.contains_all(H.generators):
            J = _extend(J, H.generators)
    return J if len(subgroups) else parent.trivial()


def normal_closure(parent: PGroup, seed, ambient_generators) -> SubgroupSet:
    """Smallest subgroup containing ``seed`` and normalised by the ambient generators."""
    N = closure(parent, seed)
    ambient = np.asarray(ambient_generators, dtype=np.int64)
    while True:
        if not N.generators or not len(ambient):
            return N
        gens = np.asarray(N.generators)
        conj = parent.conjugate(gens[:, None], ambient[None, :]).ravel()
        missing = conj[~N.mask[conj]]
        if not len(missing):
            return N
        N = _extend(N, np.unique(missing))


def commutator_subgroup(H1: SubgroupSet, H2: SubgroupSet, method: str = "auto") -> SubgroupSet:
    """``[H1, H2]``, the subgroup generated by all ``[h1, h2]``.

    ``method="full"`` forms the commutator of every member pair.
    ``method="generators"`` takes the normal closure, inside ``<H1, H2>``, of
    the commutators of generator pairs, which is the same subgroup.  ``"auto"``
    uses the full product set up to :data:`FULL_PAIRS_LIMIT` pairs.
    """
    G = _same_parent(H1, H2)
    if method == "auto":
        method = "full" if H1.order * H2.order <= FULL_PAIRS_LIMIT else "generators"
    if method == "full":
        hit = np.zeros(G.order, dtype=bool)
        b = H2.members
        block = max(1, (1 << 20) // max(len(b), 1))
        for start in range(0, len(H1.members), block):
            a = H1.members[start:start + block]
            hit[G.commutator(a[:, None], b[None, :]).ravel()] = True
        return closure(G, np.flatnonzero(hit))
    if method == "generators":
        g1 = np.asarray(H1.generators, dtype=np.int64)
        g2 = np.asarray(H2.generators, dtype=np.int64)
        if not len(g1) or not len(g2):
            return G.trivial()
        seed = G.commutator(g1[:, None], g2[None, :]).ravel()
        return normal_closure(G, seed, H1.generators + H2.generators)
    raise ValueError(f"unknown method {method!r}")


def power_subgroup(H: SubgroupSet, n: int) -> SubgroupSet:
    """Subgroup generated by ``h**n`` for every member ``h`` of ``H``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return H
    G = H.parent
    return closure(G, G.power(H.members, n))


def is_normal(N: SubgroupSet, exhaustive: bool = False) -> bool:
    """True iff ``g^-1 n g`` lies in ``N`` for every ``g`` and ``n``.

    By default only generators of ``N`` and of the parent are conjugated,
    which decides the same question.
    """
    G = N.parent
    if exhaustive:
        for n in N.members:
            if not N.contains_all(G.conjugate(n, np.arange(G.order))):
                return False
        return True
    if not N.generators or not G.generators:
        return True
    conj = G.conjugate(np.asarray(N.generators)[:, None], np.asarray(G.generators)[None, :])
    return N.contains_all(conj.ravel())


def center(G: PGroup, exhaustive: bool = False) -> SubgroupSet:
    """``{z : zg = gz for all g}``; by default tested against generators only."""
    everything = np.arange(G.order)
    mask = np.ones(G.order, dtype=bool)
    for g in (everything if exhaustive else G.generators):
        mask &= G.mul(everything, g) == G.mul(g, everything)
    return closure(G, np.flatnonzero(mask))


def quotient(G: PGroup, N: SubgroupSet) -> QuotientMap:
    """``G/N`` with cosets labelled in order of their smallest member index."""
    if N.parent is not G:
        raise ParentMismatch("kernel is not a subgroup of G")
    if not is_normal(N):
        raise NotNormal("kernel is not normal")
    n = G.order
    everything = np.arange(n)
    if N.order <= 16:
        key = everything.copy()
        for m in N.members:
            np.minimum(key, G.mul(everything, m), out=key)
        reps, proj = np.unique(key, return_inverse=True)
    else:
        proj = np.full(n, -1, dtype=np.int64)
        reps = []
        i = 0
        while i < n:
            if proj[i] < 0:
                proj[G.mul(i, N.members)] = len(reps)
                reps.append(i)
            i += 1
        reps = np.asarray(reps, dtype=np.int64)
    proj = np.asarray(proj, dtype=np.int64)

    def image_mul(a, b):
        return proj[G.mul(reps[a], reps[b])]

    seen = []
    for g in G.generators:
        q = int(proj[g])
        if q != proj[G.identity] and q not in seen:
            seen.append(q)
    image = PGroup(G.p, np.arange(len(reps))[:, None], image_mul,
                   int(proj[G.identity]), seen,
                   name=f"{G.name}/N" if G.name else "", inverses=proj[G.inv[reps]])
    return QuotientMap(G, N, image, proj)


def as_group(H: SubgroupSet, name: str = "") -> PGroup:
    """``H`` as a standalone group; local index ``i`` is ``H.members[i]``."""
    G = H.parent
    local = np.full(G.order, -1, dtype=np.int64)
    local[H.members] = np.arange(H.order)
    members = H.members

    def mul(a, b):
        return local[G.mul(members[a], members[b])]

    gens = [int(local[g]) for g in H.generators]
    return PGroup(G.p, G.elements[members], mul, int(local[G.identity]), gens,
                  name=name, inverses=local[G.inv[members]])


def min_generators(G: PGroup) -> int:
    """d(G) = log_p [G : Phi(G)]."""
    from .series import frattini

    return p_valuation(G.order // frattini(G).order, G.p)


# -- sanity checks -----------------------------------------------------------

def axiom_violation(G: PGroup, exhaustive_limit: int = 1 << 8,
                    samples: int = 10_000, seed: int = 0):
    """First failing group axiom as ``(name, witness)``, or ``None``.

    Associativity is checked on every triple when ``order <= exhaustive_limit``
    and on ``samples`` random triples otherwise.
    """
    n = G.order
    e = G.identity
    everything = np.arange(n)
    rng = np.random.default_rng(seed)
    if n <= exhaustive_limit:
        pairs_a = np.repeat(everything, n)
        pairs_b = np.tile(everything, n)
    else:
        pairs_a = rng.integers(0, n, samples)
        pairs_b = rng.integers(0, n, samples)
    prod = G.mul(pairs_a, pairs_b)
    bad = np.flatnonzero((prod < 0) | (prod >= n))
    if len(bad):
        return "closure", (int(pairs_a[bad[0]]), int(pairs_b[bad[0]]))
    if (G.inv < 0).any():
        return "inverse", (int(np.flatnonzero(G.inv < 0)[0]),)
    for name, lhs, rhs in (("left identity", G.mul(e, everything), everything),
                           ("right identity", G.mul(everything, e), everything),
                           ("inverse", G.mul(everything, G.inv), np.full(n, e))):
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            return name, (int(bad[0]),)
    if n <= exhaustive_limit:
        for a in range(n):
            ab = G.mul(a, everything)
            left = G.mul(ab[:, None], everything[None, :])
            right = G.mul(a, G.mul(everything[:, None], everything[None, :]))
            bad = np.argwhere(left != right)
            if len(bad):
                return "associativity", (a, int(bad[0][0]), int(bad[0][1]))
    else:
        a, b, c = (rng.integers(0, n, samples) for _ in range(3))
        bad = np.flatnonzero(G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)))
        if len(bad):
            i = bad[0]
            return "associativity", (int(a[i]), int(b[i]), int(c[i]))
    if closure(G, G.generators).order != n:
        return "generation", tuple(G.generators)
    return None
