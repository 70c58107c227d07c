"""Finite quotients F/Phi_2(F) and F/P_3(F) of the free group F of rank d.

``K = Phi(F)`` is the kernel of ``F -> Q = (Z/p)^d``.  With the Schreier
transversal ``t_q = x_1^q_1 ... x_d^q_d`` the nontrivial Schreier generators
``t_q x_j t_{q+e_j}^-1`` form a free basis of ``K``, so ``V = K/Phi(K)`` is
``GF(p)^r`` with ``r = 1 + p^d (d - 1)``.  An element ``(q, v)`` of
``E = F/Phi(K)`` stands for ``t_q * v`` and

    (q, v)(q', v') = (q + q', A(q') v + c(q, q') + v')

where ``A(q)`` is conjugation by ``t_q`` on ``V`` and
``c(q, q') = [t_{q+q'}^-1 t_q t_q']``.

Words are sequences of nonzero ints: ``+j`` is ``x_j`` and ``-j`` its inverse
(generators numbered from 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gfp
from .core import DEFAULT_CAP, PGroup, SubgroupSet, closure, enumerate_group
from .errors import CapExceeded, ConsistencyFailure, NotInKernel


def free_reduce(word):
    out = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return out


def invert(word):
    return [-a for a in reversed(word)]


@dataclass(frozen=True, eq=False)
class ExtensionData:
    p: int
    d: int
    cosets: tuple[tuple[int, ...], ...]        # Q in lexicographic order
    schreier_basis: tuple[tuple[int, int], ...]  # (coset index, generator) pairs
    basis_index: dict                           # (coset index, generator) -> basis slot
    action: np.ndarray        # (p^d, r, r): A(q) on column vectors
    generator_action: np.ndarray  # (d, r, r): A(e_j)
    cocycle: np.ndarray       # (p^d, p^d, r)

    @property
    def r(self) -> int:
        return len(self.schreier_basis)

    def coset_code(self, q) -> int:
        code = 0
        for x in q:
            code = code * self.p + (x % self.p)
        return code

    def transversal(self, q):
        return [j + 1 for j in range(self.d) for _ in range(q[j] % self.p)]

    def schreier_word(self, i):
        """Word of the i-th basis element ``t_q x_j t_{q+e_j}^-1``."""
        c, j = self.schreier_basis[i]
        q = self.cosets[c]
        q2 = list(q)
        q2[j - 1] = (q2[j - 1] + 1) % self.p
        return self.transversal(q) + [j] + invert(self.transversal(q2))


def schreier_rewrite(word, ext: ExtensionData):
    """Class in ``V = K/Phi(K)`` of a word lying in ``K``."""
    p, d = ext.p, ext.d
    v = np.zeros(ext.r, dtype=np.int64)
    q = [0] * d
    for a in word:
        j = abs(a)
        if a > 0:
            slot = ext.basis_index.get((ext.coset_code(q), j))
            if slot is not None:
                v[slot] += 1
            q[j - 1] = (q[j - 1] + 1) % p
        else:
            q[j - 1] = (q[j - 1] - 1) % p
            slot = ext.basis_index.get((ext.coset_code(q), j))
            if slot is not None:
                v[slot] -= 1
    if any(q):
        raise NotInKernel(f"word maps to {tuple(q)} in (Z/{p})^{d}")
    return v % p


def schreier_index_count(p, d):
    """Number of nontrivial Schreier generators, found by free reduction of ``t_q x_j``."""
    count = 0
    for q in itertools.product(range(p), repeat=d):
        for j in range(1, d + 1):
            q2 = list(q)
            q2[j - 1] = (q2[j - 1] + 1) % p
            t = [i + 1 for i in range(d) for _ in range(q[i])]
            t2 = [i + 1 for i in range(d) for _ in range(q2[i])]
            if free_reduce(t + [j]) != t2:
                count += 1
    return count


def extension_data(p: int, d: int) -> ExtensionData:
    """Schreier basis, action matrices and cocycle for ``F_d / Phi_2(F_d)``."""
    cosets = tuple(itertools.product(range(p), repeat=d))
    basis = []
    for c, q in enumerate(cosets):
        for j in range(1, d + 1):
            # t_q x_j is itself a transversal word iff q_j < p-1 and q_i = 0 past j
            if q[j - 1] < p - 1 and not any(q[j:]):
                continue
            basis.append((c, j))
    index = {key: i for i, key in enumerate(basis)}
    n = len(cosets)
    r = len(basis)
    ext = ExtensionData(p, d, cosets, tuple(basis), index,
                        np.zeros((n, r, r), dtype=np.int64),
                        np.zeros((d, r, r), dtype=np.int64),
                        np.zeros((n, n, r), dtype=np.int64))
    words = [ext.schreier_word(i) for i in range(r)]
    for c, q in enumerate(cosets):
        t = ext.transversal(q)
        for i, w in enumerate(words):
            ext.action[c, :, i] = schreier_rewrite(invert(t) + w + t, ext)
    for j in range(1, d + 1):
        for i, w in enumerate(words):
            ext.generator_action[j - 1, :, i] = schreier_rewrite([-j] + w + [j], ext)
    for c, q in enumerate(cosets):
        for c2, q2 in enumerate(cosets):
            qs = tuple((a + b) % p for a, b in zip(q, q2))
            word = invert(ext.transversal(qs)) + ext.transversal(q) + ext.transversal(q2)
            ext.cocycle[c, c2] = schreier_rewrite(word, ext)
    return ext


def cocycle_violation(ext: ExtensionData):
    """First triple breaking ``A(q'') c(q,q') + c(q+q',q'') = c(q,q'+q'') + c(q',q'')``."""
    p = ext.p
    n = len(ext.cosets)
    add = np.array([[ext.coset_code(tuple((a + b) % p for a, b in zip(q, q2)))
                     for q2 in ext.cosets] for q in ext.cosets])
    for a, b, c in itertools.product(range(n), repeat=3):
        lhs = ext.action[c] @ ext.cocycle[a, b] + ext.cocycle[add[a, b], c]
        rhs = ext.cocycle[a, add[b, c]] + ext.cocycle[b, c]
        if ((lhs - rhs) % p).any():
            return a, b, c
    return None


def _extension_group(p, d, action, cocycle, cap, name):
    r = action.shape[1]
    weights = p ** np.arange(d - 1, -1, -1, dtype=np.int64)

    def mul(x, y):
        q, v = x[:, :d], x[:, d:]
        q2, v2 = y[:, :d], y[:, d:]
        c1 = q @ weights
        c2 = q2 @ weights
        moved = np.einsum("nij,nj->ni", action[c2], v)
        return np.hstack([(q + q2) % p, (moved + cocycle[c1, c2] + v2) % p])

    gens = [[int(i == j) for j in range(d)] + [0] * r for i in range(d)]
    return enumerate_group(gens, mul, p, [p] * (d + r), cap=cap, name=name)


def _check_cap(p, d, log_order, cap):
    if p ** log_order > cap:
        raise CapExceeded(cap)


def build_free_mod_phi2(p: int, d: int, cap: int = DEFAULT_CAP, verify: bool = True,
                        ext: ExtensionData | None = None) -> PGroup:
    """``F_d / Phi_2(F_d)``, of order ``p^(d + r)``."""
    r = 1 + p ** d * (d - 1)
    _check_cap(p, d, d + r, cap)
    if ext is None:
        ext = extension_data(p, d)
    if ext.r != r:
        raise ConsistencyFailure(f"found {ext.r} Schreier generators, expected {r}")
    E = _extension_group(p, d, ext.action, ext.cocycle, cap, f"free_mod_phi2:p={p},d={d}")
    if verify:
        _verify_phi2(E, p, d, r)
    return E


def _verify_phi2(E, p, d, r):
    from .series import frattini, frattini2

    if E.order != p ** (d + r):
        raise ConsistencyFailure(f"order {E.order} != {p}^{d + r}")
    Phi = frattini(E)
    kernel = np.flatnonzero(~E.elements[:, :d].any(axis=1))
    if not np.array_equal(Phi.members, kernel):
        raise ConsistencyFailure("Frattini subgroup is not {(0, v)}")
    if E.order // Phi.order != p ** d:
        raise ConsistencyFailure("d(E) != d")
    if not frattini2(E).is_trivial():
        raise ConsistencyFailure("Phi_2 of F/Phi_2 is not trivial")


def commutator_image(ext: ExtensionData):
    """RREF basis of ``W = span{A(e_j) v - v}``, the image of ``[F, Phi(F)]`` in ``V``."""
    r = ext.r
    blocks = [(A - np.eye(r, dtype=np.int64)).T for A in ext.generator_action]
    rows = np.vstack(blocks) if blocks else np.zeros((0, r), dtype=np.int64)
    basis, _ = gfp.row_space(rows, ext.p)
    return basis


def build_free_mod_p3(p: int, d: int, cap: int = DEFAULT_CAP, verify: bool = True,
                      ext: ExtensionData | None = None) -> PGroup:
    """``F_d / P_3(F_d)``: ``F_d / Phi_2`` with ``V`` replaced by ``V / W``."""
    log_order = 2 * d + d * (d - 1) // 2
    _check_cap(p, d, log_order, cap)
    if ext is None:
        ext = extension_data(p, d)
    W = commutator_image(ext)
    proj, lift = gfp.quotient_map(W, ext.r, p)
    action = np.einsum("ij,njk,kl->nil", proj, ext.action, lift) % p
    cocycle = np.einsum("ij,abj->abi", proj, ext.cocycle) % p
    if ext.r - len(W) + d != log_order:
        raise ConsistencyFailure(f"dim V/W = {ext.r - len(W)}, expected {log_order - d}")
    G = _extension_group(p, d, action, cocycle, cap, f"free_mod_p3:p={p},d={d}")
    if verify and G.order != p ** log_order:
        raise ConsistencyFailure(f"order {G.order} != {p}^{log_order}")
    return G


def vector_subgroup(E: PGroup, d: int, rows) -> SubgroupSet:
    """``{(0, v) : v in span(rows)}`` inside an extension group ``E``."""
    rows = np.asarray(rows, dtype=np.int64)
    payload = np.zeros((len(rows), E.elements.shape[1]), dtype=np.int64)
    payload[:, d:] = rows
    lookup = {tuple(row): i for i, row in enumerate(E.elements.tolist())}
    return closure(E, [lookup[tuple(x)] for x in payload.tolist()])


def separation_report(p: int, d: int, cap: int = DEFAULT_CAP):
    """Criteria on ``F_d/Phi_2``: for ``d >= 2`` both sides of the criterion fail."""
    from .criteria import criteria_report

    E = build_free_mod_phi2(p, d, cap=cap, verify=False)
    return criteria_report(E)
