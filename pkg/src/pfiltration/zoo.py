"""Deterministic constructors for the test corpus.

Every family is a payload law (moduli plus a vectorised product on payload
rows) handed to :func:`pfiltration.core.enumerate_group`.  The identity
payload is the zero row in every family, so index 0 is always the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_CAP, PGroup, enumerate_group, is_prime, p_valuation
from .errors import InvalidSpec, PrimeMismatch

# family -> required integer keys
FAMILIES = {
    "metabelian": ("p", "k", "d", "m"),
    "heisenberg": ("p",),
    "extraspecial": ("p", "n"),
    "dihedral": ("n",),
    "quaternion": ("n",),
    "semidihedral": ("n",),
    "cyclic": ("p", "n"),
    "elab": ("p", "d"),
    "direct": (),
    "free_mod_phi2": ("p", "d"),
    "free_mod_p3": ("p", "d"),
}

DESCRIPTIONS = {
    "metabelian": "<sigma, tau_1..tau_d | sigma tau_i sigma^-1 = tau_i^(1+p^k)> truncated mod p^m; "
                  "k>=1 (k>=2 if p=2), m>=k+1, d>=0",
    "heisenberg": "upper unitriangular 3x3 matrices over Z/p, p odd",
    "extraspecial": "extraspecial group of order p^(1+2n) and exponent p, p odd",
    "dihedral": "dihedral group of order n = 2^a >= 8",
    "quaternion": "generalised quaternion group of order n = 2^a >= 8",
    "semidihedral": "semidihedral group of order n = 2^a >= 16",
    "cyclic": "cyclic group of order p^n",
    "elab": "elementary abelian group of rank d",
    "direct": "direct(A;B): direct product of two specs with the same prime",
    "free_mod_phi2": "F_d / Phi_2(F_d), free group of rank d modulo its second Frattini term",
    "free_mod_p3": "F_d / P_3(F_d), free group of rank d modulo its third p-central term",
}


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple[tuple[str, int], ...] = ()
    factors: tuple["GroupSpec", ...] = field(default=())

    @classmethod
    def make(cls, family, factors=(), **params):
        spec = cls(family, tuple(sorted(params.items())), tuple(factors))
        spec.validate()
        return spec

    def __getitem__(self, key):
        return dict(self.params)[key]

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    @property
    def p(self) -> int:
        if self.family == "direct":
            return self.factors[0].p
        if self.family in ("dihedral", "quaternion", "semidihedral"):
            return 2
        return self["p"]

    def text(self) -> str:
        """Canonical spec string; ``parse_spec(spec.text()) == spec``."""
        if self.family == "direct":
            return "direct(%s;%s)" % tuple(f.text() for f in self.factors)
        keys = FAMILIES[self.family]
        return self.family + ":" + ",".join(f"{k}={self[k]}" for k in keys)

    __str__ = text

    def validate(self):
        fam = self.family
        if fam not in FAMILIES:
            raise InvalidSpec(f"unknown family {fam!r}")
        given = {k for k, _ in self.params}
        wanted = set(FAMILIES[fam])
        if given - wanted:
            raise InvalidSpec(f"{fam}: unknown keys {sorted(given - wanted)}")
        if wanted - given:
            raise InvalidSpec(f"{fam}: missing keys {sorted(wanted - given)}")
        if fam == "direct":
            if len(self.factors) != 2:
                raise InvalidSpec("direct takes exactly two factors")
            for f in self.factors:
                f.validate()
            if self.factors[0].p != self.factors[1].p:
                raise PrimeMismatch("direct factors have different primes")
            return
        if self.factors:
            raise InvalidSpec(f"{fam} takes no factors")
        if "p" in given and not is_prime(self["p"]):
            raise InvalidSpec(f"p={self['p']} is not prime")
        if fam == "metabelian":
            p, k, d, m = self["p"], self["k"], self["d"], self["m"]
            if k < 1:
                raise InvalidSpec("metabelian requires k>=1")
            if p == 2 and k < 2:
                raise InvalidSpec("p=2 requires k>=2")
            if m < k + 1:
                raise InvalidSpec("metabelian requires m>=k+1")
            if d < 0:
                raise InvalidSpec("metabelian requires d>=0")
        elif fam in ("heisenberg", "extraspecial"):
            if self["p"] == 2:
                raise InvalidSpec(f"{fam} requires p odd")
            if fam == "extraspecial" and self["n"] < 1:
                raise InvalidSpec("extraspecial requires n>=1")
        elif fam in ("dihedral", "quaternion", "semidihedral"):
            n = self["n"]
            low = 16 if fam == "semidihedral" else 8
            if n < low or p_valuation(n, 2) is None:
                raise InvalidSpec(f"{fam} requires n a power of 2 with n>={low}")
        elif fam in ("cyclic", "elab"):
            key = "n" if fam == "cyclic" else "d"
            if self[key] < 0:
                raise InvalidSpec(f"{fam} requires {key}>=0")
        elif fam in ("free_mod_phi2", "free_mod_p3"):
            if self["d"] < 1:
                raise InvalidSpec(f"{fam} requires d>=1")

    def order(self) -> int:
        """Closed-form order of the group this spec describes."""
        fam = self.family
        if fam == "direct":
            return self.factors[0].order() * self.factors[1].order()
        if fam == "metabelian":
            return self["p"] ** (self["m"] * (self["d"] + 1))
        if fam == "heisenberg":
            return self["p"] ** 3
        if fam == "extraspecial":
            return self["p"] ** (1 + 2 * self["n"])
        if fam in ("dihedral", "quaternion", "semidihedral"):
            return self["n"]
        if fam == "cyclic":
            return self["p"] ** self["n"]
        if fam == "elab":
            return self["p"] ** self["d"]
        p, d = self["p"], self["d"]
        if fam == "free_mod_phi2":
            return p ** (d + 1 + p ** d * (d - 1))
        return p ** (2 * d + d * (d - 1) // 2)

    def declared_generators(self) -> int:
        """Number of generators the constructor hands to enumeration."""
        fam = self.family
        if fam == "direct":
            return sum(f.declared_generators() for f in self.factors)
        if fam == "metabelian":
            return self["d"] + 1
        if fam == "heisenberg":
            return 2
        if fam == "extraspecial":
            return 2 * self["n"]
        if fam in ("dihedral", "quaternion", "semidihedral"):
            return 2
        if fam == "cyclic":
            return 1
        return self["d"]


# -- payload laws ------------------------------------------------------------

def metabelian(p: int, k: int, d: int, m: int, cap: int = DEFAULT_CAP) -> PGroup:
    """Elements ``(s, v)`` standing for ``sigma^s tau^v`` with ``sigma tau sigma^-1 = tau^(1+p^k)``.

    ``(s, v)(t, w) = (s + t, lam^-t v + w)`` modulo ``p^m`` with ``lam = 1 + p^k``.
    """
    GroupSpec.make("metabelian", p=p, k=k, d=d, m=m)
    q = p ** m
    lam = 1 + p ** k
    lam_inv = pow(lam, -1, q)
    # lam has multiplicative order dividing p^m, so exponents live mod q
    lam_pow = np.array([pow(lam, e, q) for e in range(q)], dtype=np.int64)
    lam_inv_pow = np.array([pow(lam_inv, e, q) for e in range(q)], dtype=np.int64)

    def mul(a, b):
        s, v = a[:, :1], a[:, 1:]
        t, w = b[:, :1], b[:, 1:]
        return np.hstack([(s + t) % q, (lam_inv_pow[t] * v + w) % q])

    def inv(a):
        s, v = a[:, :1], a[:, 1:]
        return np.hstack([(-s) % q, (-lam_pow[s] * v) % q])

    gens = [[1] + [0] * d] + [[0] + [int(i == j) for j in range(d)] for i in range(d)]
    return enumerate_group(gens, mul, p, [q] * (d + 1), inv=inv, cap=cap,
                           name=f"metabelian:p={p},k={k},d={d},m={m}")


def extraspecial(p: int, n: int = 1, cap: int = DEFAULT_CAP) -> PGroup:
    """Exponent-p extraspecial group on ``(a, b, c)`` with ``a, b`` in ``(Z/p)^n``.

    ``(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a.b')``; for ``n = 1``
    this is the unitriangular matrix product.
    """
    GroupSpec.make("extraspecial", p=p, n=n)

    def mul(x, y):
        a, b, c = x[:, :n], x[:, n:2 * n], x[:, 2 * n:]
        a2, b2, c2 = y[:, :n], y[:, n:2 * n], y[:, 2 * n:]
        dot = (a * b2).sum(axis=1, keepdims=True)
        return np.hstack([(a + a2) % p, (b + b2) % p, (c + c2 + dot) % p])

    def inv(x):
        a, b, c = x[:, :n], x[:, n:2 * n], x[:, 2 * n:]
        dot = (a * b).sum(axis=1, keepdims=True)
        return np.hstack([(-a) % p, (-b) % p, (-c + dot) % p])

    gens = []
    for i in range(n):
        gens.append([int(j == i) for j in range(n)] + [0] * n + [0])
        gens.append([0] * n + [int(j == i) for j in range(n)] + [0])
    name = f"heisenberg:p={p}" if n == 1 else f"extraspecial:p={p},n={n}"
    return enumerate_group(gens, mul, p, [p] * (2 * n + 1), inv=inv, cap=cap, name=name)


def heisenberg(p: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("heisenberg", p=p)
    return extraspecial(p, 1, cap=cap)


def _rotation_reflection(n, twist, square, name, cap):
    """Pairs ``(a, e)`` for ``r^a s^e`` with ``s r s^-1 = r^twist`` and ``s^2 = r^square``."""
    half = n // 2
    twist_pow = np.array([1, twist % half], dtype=np.int64)

    def mul(x, y):
        a, e = x[:, 0], x[:, 1]
        b, f = y[:, 0], y[:, 1]
        rot = a + twist_pow[e] * b + square * (e & f)
        return np.stack([rot % half, (e + f) % 2], axis=1)

    return enumerate_group([[1, 0], [0, 1]], mul, 2, [half, 2], cap=cap, name=name)


def dihedral(n: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("dihedral", n=n)
    return _rotation_reflection(n, -1, 0, f"dihedral:n={n}", cap)


def quaternion(n: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("quaternion", n=n)
    return _rotation_reflection(n, -1, n // 4, f"quaternion:n={n}", cap)


def semidihedral(n: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("semidihedral", n=n)
    return _rotation_reflection(n, n // 4 - 1, 0, f"semidihedral:n={n}", cap)


def cyclic(p: int, n: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("cyclic", p=p, n=n)
    q = p ** n

    def mul(a, b):
        return (a + b) % q

    return enumerate_group([[1 % q]], mul, p, [q], cap=cap, name=f"cyclic:p={p},n={n}")


def elab(p: int, d: int, cap: int = DEFAULT_CAP) -> PGroup:
    GroupSpec.make("elab", p=p, d=d)
    width = max(d, 1)

    def mul(a, b):
        return (a + b) % p

    gens = [[int(i == j) for j in range(width)] for i in range(d)] or [[0]]
    return enumerate_group(gens, mul, p, [p] * width, cap=cap, name=f"elab:p={p},d={d}")


def direct(A: PGroup, B: PGroup, cap: int = DEFAULT_CAP, name: str = "") -> PGroup:
    """Direct product on index pairs ``(a, b)``; generators of A then of B."""
    if A.p != B.p:
        raise PrimeMismatch(f"cannot multiply a {A.p}-group by a {B.p}-group")

    def mul(x, y):
        return np.stack([A.mul(x[:, 0], y[:, 0]), B.mul(x[:, 1], y[:, 1])], axis=1)

    def inv(x):
        return np.stack([A.inv[x[:, 0]], B.inv[x[:, 1]]], axis=1)

    gens = [[g, B.identity] for g in A.generators] + [[A.identity, g] for g in B.generators]
    if not gens:
        gens = [[A.identity, B.identity]]
    return enumerate_group(gens, mul, A.p, [A.order, B.order], inv=inv,
                           identity=[A.identity, B.identity], cap=cap,
                           name=name or f"direct({A.name};{B.name})")


def build(spec: GroupSpec, cap: int = DEFAULT_CAP) -> PGroup:
    """Construct the group described by ``spec``."""
    spec.validate()
    fam = spec.family
    if fam == "direct":
        A, B = (build(f, cap=cap) for f in spec.factors)
        return direct(A, B, cap=cap, name=spec.text())
    params = dict(spec.params)
    if fam in ("free_mod_phi2", "free_mod_p3"):
        from . import freequot

        maker = freequot.build_free_mod_phi2 if fam == "free_mod_phi2" else freequot.build_free_mod_p3
        return maker(params["p"], params["d"], cap=cap)
    maker = {
        "metabelian": metabelian,
        "heisenberg": heisenberg,
        "extraspecial": extraspecial,
        "dihedral": dihedral,
        "quaternion": quaternion,
        "semidihedral": semidihedral,
        "cyclic": cyclic,
        "elab": elab,
    }[fam]
    return maker(cap=cap, **params)


def metabelian_grid(primes=(2, 3, 5), max_d=2, max_m=3, max_order=1 << 21):
    """Valid ``(p, k, d, m)`` with ``d <= max_d``, ``m <= max_m`` and bounded order."""
    out = []
    for p in primes:
        for m in range(2, max_m + 1):
            for k in range(1, m):
                if p == 2 and k < 2:
                    continue
                for d in range(max_d + 1):
                    if p ** (m * (d + 1)) <= max_order:
                        out.append((p, k, d, m))
    return out
