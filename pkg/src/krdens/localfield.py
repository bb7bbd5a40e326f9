"""Residue rings of the unramified quadratic extension of Z_p, and mu_p(T).

An element ``a + b*delta`` of ``o/p^k`` is stored as the residue pair
``(a, b)`` with ``delta**2 = eps`` for a fixed quadratic non-residue ``eps``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import require


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def smallest_nonresidue(p: int) -> int:
    for e in range(2, p):
        if legendre(e, p) == -1:
            return e
    raise ValueError(f"no quadratic non-residue modulo {p}")


def check_odd_prime(p: int) -> None:
    require(isinstance(p, int) and is_prime(p), f"p={p} must be prime")
    require(p != 2, "p must be odd; p = 2 is excluded throughout")


@dataclass(frozen=True)
class InertLocalRing:
    """The ring ``o_{k,p} / p^k`` for an inert odd prime ``p``."""

    p: int
    k: int = 1
    eps: int | None = None

    def __post_init__(self):
        check_odd_prime(self.p)
        require(self.k >= 1, f"precision k={self.k} must be >= 1")
        if self.eps is None:
            object.__setattr__(self, "eps", smallest_nonresidue(self.p))
        require(1 <= self.eps < self.p, f"eps={self.eps} must lie in [1, p)")
        require(legendre(self.eps, self.p) == -1, f"eps={self.eps} is a square modulo {self.p}")
        # For odd p a non-residue mod p stays one mod p^k (Hensel), so no lift is needed.
        assert pow(self.eps, self.q * (self.p - 1) // (2 * self.p), self.q) != 1

    @property
    def q(self) -> int:
        return self.p ** self.k

    def elem(self, a: int, b: int = 0) -> "ResidueRingElem":
        return ResidueRingElem(a % self.q, b % self.q)

    @property
    def delta(self) -> "ResidueRingElem":
        return self.elem(0, 1)

    def add(self, x: "ResidueRingElem", y: "ResidueRingElem") -> "ResidueRingElem":
        return self.elem(x.a + y.a, x.b + y.b)

    def mul(self, x: "ResidueRingElem", y: "ResidueRingElem") -> "ResidueRingElem":
        return self.elem(x.a * y.a + self.eps * x.b * y.b, x.a * y.b + x.b * y.a)

    def conj(self, x: "ResidueRingElem") -> "ResidueRingElem":
        return self.elem(x.a, -x.b)

    def norm(self, x: "ResidueRingElem") -> int:
        return (x.a * x.a - self.eps * x.b * x.b) % self.q

    def is_unit(self, x: "ResidueRingElem") -> bool:
        return (x.a % self.p, x.b % self.p) != (0, 0)

    def elements(self):
        q = self.q
        for b in range(q):
            for a in range(q):
                yield ResidueRingElem(a, b)


@dataclass(frozen=True)
class ResidueRingElem:
    a: int
    b: int = 0


def ring_ops(ring: InertLocalRing, x: ResidueRingElem, y: ResidueRingElem | None, kind: str):
    """Dispatch for ``add``, ``mul``, ``conj`` and ``norm`` (``y`` unused by the last two)."""
    if kind == "add":
        return ring.add(x, y)
    if kind == "mul":
        return ring.mul(x, y)
    if kind == "conj":
        return ring.conj(x)
    if kind == "norm":
        return ring.norm(x)
    raise ValueError(f"unknown ring operation {kind!r}")


@dataclass(frozen=True)
class LocalHermitianSpec:
    """``S = diag(p^e_1, ..., p^e_m)``."""

    diag_exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "diag_exponents", tuple(int(e) for e in self.diag_exponents))
        require(len(self.diag_exponents) >= 1, "S must have at least one diagonal entry")
        require(all(e >= 0 for e in self.diag_exponents), "S exponents must be non-negative")

    @property
    def m(self) -> int:
        return len(self.diag_exponents)


def mu(a: int, b: int, p: int) -> Fraction:
    """``(a+b)/2 - p(p^b - 1)/(p - 1)``, the common local value for ``T ~ diag(p^a, p^b)``."""
    check_odd_prime(p)
    require(a >= b >= 0, f"need a >= b >= 0, got a={a}, b={b}")
    require((a + b) % 2 == 0, "a+b must be even (ord_p det T even)")
    return Fraction((a + b) // 2 - p * (p ** b - 1) // (p - 1))
