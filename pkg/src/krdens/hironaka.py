"""Hermitian representation densities at an inert odd prime.

Two independent routes are provided and are expected to agree:

* :func:`alpha_general` evaluates Hironaka's formula for a single pair
  ``(S_xi, T_lambda)`` as an exact rational;
* :func:`F_poly_nonsplit` / :func:`F_poly_nagaoka` / :func:`F_poly_closed`
  give ``F(S, T; X)`` as a polynomial, with ``alpha(S_r, T) = F((-p)^-r)``.

Densities are normalised as the limit of ``p^{-kn(2m-n)} * #solutions mod p^k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .errors import require
from .exact import Polynomial, X, rpow
from .localfield import check_odd_prime, mu


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """Non-increasing tuple of non-negative integers (zeros are significant)."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        require(all(x >= 0 for x in parts), f"partition {parts} has a negative part")
        require(all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1)),
                f"partition {parts} is not non-increasing")
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def tilde(self) -> "Partition":
        return Partition(tuple(x + 1 for x in self.parts))

    def conj(self, i: int) -> int:
        """``#{j : a_j >= i}``."""
        return sum(1 for x in self.parts if x >= i)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def n(self) -> int:
        return sum(i * x for i, x in enumerate(self.parts))

    def __le__(self, other: "Partition") -> bool:
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))


def as_partition(value) -> Partition:
    if isinstance(value, Partition):
        return value
    return Partition(tuple(value))


@dataclass(frozen=True)
class DensityTarget:
    """``T = diag(p^a, p^b)`` with ``a >= b >= 0``."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        check_odd_prime(self.p)
        require(self.a >= self.b >= 0, f"need a >= b >= 0, got a={self.a}, b={self.b}")

    @property
    def even(self) -> bool:
        return (self.a + self.b) % 2 == 0

    def require_even(self, where: str) -> None:
        require(self.even, f"a+b must be even for {where} (got a={self.a}, b={self.b})")


# ---------------------------------------------------------------------------
# Hironaka's formula


@lru_cache(maxsize=None)
def _qfact(u: int, p: int) -> Fraction:
    out = Fraction(1)
    for i in range(1, u + 1):
        out *= 1 - rpow(-p, -i)
    return out


def bracket(u: int, v: int, p: int) -> Fraction:
    """Gaussian-binomial-type symbol in ``(-p)^{-1}``; zero outside ``0 <= v <= u``."""
    if v < 0 or v > u or u < 0:
        return Fraction(0)
    if v == 0 or v == u:
        return Fraction(1)
    return _qfact(u, p) / (_qfact(v, p) * _qfact(u - v, p))


def _exp_half(i: int, big_l: int) -> int:
    num = i * (2 * big_l + 1 - i)
    assert num % 2 == 0, "half-integer exponent in I_j"
    return num // 2


def I_j(mu_: Partition, lam: Partition, p: int, j: int) -> Fraction:
    """The j-th factor of Hironaka's product (with the tilde in the exponent)."""
    mu_, lam = as_partition(mu_), as_partition(lam)
    require(j >= 1, "j must be >= 1")
    lt = lam.tilde()
    L1 = lt.conj(j + 1)
    L0 = lt.conj(j)
    m1 = mu_.conj(j + 1)
    m0 = mu_.conj(j)
    total = Fraction(0)
    for i in range(m1, min(L1, m0) + 1):
        total += (rpow(-p, _exp_half(i, L1))
                  * bracket(L1 - m1, L1 - i, p)
                  * bracket(L0 - i, L0 - m0, p))
    return total


def _product_I(mu_: Partition, lam: Partition, p: int) -> Fraction:
    top = max(lam.parts, default=0) + 1
    out = Fraction(1)
    for j in range(1, top + 1):
        out *= I_j(mu_, lam, p, j)
        if out == 0:
            return out
    return out


def _partitions_below(bound: Sequence[int]):
    """Non-increasing tuples ``mu`` with ``0 <= mu_i <= bound_i``."""
    n = len(bound)

    def rec(i, cap):
        if i == n:
            yield ()
            return
        for v in range(min(cap, bound[i]) + 1):
            for rest in rec(i + 1, v):
                yield (v,) + rest

    cap = max(bound, default=0)
    yield from rec(0, cap)


def alpha_general(xi, lam, p: int) -> Fraction:
    """``alpha(S_xi, T_lam)`` for ``S_xi ~ diag(p^xi_i)`` of size m >= n = len(lam)."""
    xi, lam = as_partition(xi), as_partition(lam)
    check_odd_prime(p)
    m, n = len(xi), len(lam)
    require(m >= n, f"need len(xi) = {m} >= len(lambda) = {n}")
    # factors past j = lam_1 + 1 must be trivial
    some_mu = lam.tilde()
    assert I_j(some_mu, lam, p, max(lam.parts, default=0) + 2) == 1
    total = Fraction(0)
    top = max(max(xi.parts, default=0), max(lam.parts, default=0)) + 2
    for parts in _partitions_below(lam.tilde().parts):
        mp = Partition(parts)
        pairing = sum(xi.conj(i) * mp.conj(i) for i in range(1, top + 1))
        expo = -mp.n + (n - m - 1) * mp.size + pairing
        term = (-1) ** mp.size * rpow(-p, expo)
        if term == 0:
            continue
        total += term * _product_I(mp, lam, p)
    return total


# ---------------------------------------------------------------------------
# F-polynomials, S = diag(p, 1) and S = Id_2


def F_poly_nonsplit(target: DensityTarget) -> Polynomial:
    """``F(diag(p,1), diag(p^a,p^b); X)`` by summing Hironaka's terms as a polynomial in X."""
    target.require_even("F_poly_nonsplit")
    return _F_poly_hironaka(target.a, target.b, target.p, nonsplit=True)


@lru_cache(maxsize=None)
def _F_poly_hironaka(a: int, b: int, p: int, nonsplit: bool) -> Polynomial:
    lam = Partition((a, b))
    coeffs: dict[int, Fraction] = {}
    for c in range(a + 2):
        for d in range(min(c, b + 1) + 1):
            shift = (int(c > 0) + int(d > 0)) if nonsplit else 0
            scalar = (-1) ** d * rpow(p, -2 * d - c) * rpow(-p, shift)
            prod_i = _product_I(Partition((c, d)), lam, p)
            if prod_i:
                coeffs[c + d] = coeffs.get(c + d, Fraction(0)) + scalar * prod_i
    top = max(coeffs, default=-1)
    return Polynomial(coeffs.get(i, 0) for i in range(top + 1))


def F_poly_hironaka_selfdual(target: DensityTarget) -> Polynomial:
    """``F(Id_2, T; X)`` from the same specialisation with ``xi = 0``."""
    return _F_poly_hironaka(target.a, target.b, target.p, nonsplit=False)


def F_eps(eps: int, p: int) -> Polynomial:
    base = (1 - X) * (X + p) * Fraction(1, p)
    return base * (X * X - (p * p - p) * X + 1) ** eps


def F_poly_closed(target: DensityTarget) -> Polynomial:
    """Closed form for ``S = diag(p,1)``; every quotient is an asserted exact division."""
    target.require_even("closed form")
    a, b, p = target.a, target.b, target.p
    eps = b % 2
    pX = p * X
    X2m1 = X * X - 1
    term1 = pX * (1 - p) * (pX ** b - pX ** eps).div_exact(pX - 1)
    term2 = X * X * (p - Fraction(1, p) * X) * (X ** (2 * b) - X ** (2 * eps)).div_exact(X2m1)
    lead = -(p ** (b + 1)) * (X - 1) + p * X ** (b + 1) - Fraction(1, p) * X ** (b + 2)
    term3 = lead * (X ** (a + 1) - X ** (b + 1)).div_exact(X2m1)
    braces = term1 + term2 + term3
    return F_eps(eps, p) + ((X - 1) * (X + p) * braces).div_exact(X - p)


def F_poly_nagaoka(target: DensityTarget) -> Polynomial:
    """Nagaoka's formula for ``F(Id_2, T; X)``; no parity restriction."""
    a, b, p = target.a, target.b, target.p
    pre = (1 + Fraction(1, p) * X) * (1 - Fraction(1, p * p) * X)
    inner = Polynomial()
    for ell in range(b + 1):
        alt = Polynomial([(-1) ** k for k in range(a + b - 2 * ell + 1)])
        inner = inner + (p * X) ** ell * alt
    return pre * inner


def recursion_delta_A(target: DensityTarget) -> Polynomial:
    """``F(a+2, b) - F(a, b)`` in closed form."""
    target.require_even("recursion_delta_A")
    a, b, p = target.a, target.b, target.p
    bracket_ = -(p ** (b + 1)) * (X - 1) + p * X ** (b + 1) - Fraction(1, p) * X ** (b + 2)
    assert bracket_(p) == 0
    return (X ** (a + 1) * (X + p) * (X - 1) * bracket_).div_exact(X - p)


def recursion_delta_B(b: int, p: int) -> Polynomial:
    """``F(b+2, b+2) - F(b+2, b)`` in closed form."""
    check_odd_prime(p)
    require(b >= 0, "b must be >= 0")
    bracket_ = (((1 + p - p * p) * X - p) * p ** (b + 1)
                + (p * p - X) * Fraction(1, p) * X ** (b + 3))
    assert bracket_(p) == 0
    return (X ** (b + 1) * (X + p) * (X - 1) * bracket_).div_exact(X - p)


def x_at(p: int, r: int) -> Fraction:
    """The evaluation point ``(-p)^{-r}``."""
    return rpow(-p, -r)


def xi_nonsplit(r: int) -> Partition:
    return Partition((1,) + (0,) * (r + 1))


def xi_selfdual(r: int) -> Partition:
    return Partition((0,) * (r + 2))


def alpha_prime(target: DensityTarget) -> Fraction:
    """``-dF/dX`` at ``X = 1`` for ``S = diag(p,1)``."""
    target.require_even("closed form")
    return -F_poly_nonsplit(target).derivative()(1)


def alpha_selfdual(target: DensityTarget) -> Fraction:
    """``alpha(Id_2, T)``, i.e. Nagaoka's polynomial at ``X = 1``."""
    return F_poly_nagaoka(target)(1)


def mu_from_densities(target: DensityTarget) -> Fraction:
    """``p/(p+1)^2 * (alpha'(diag(p,1), T) + p^2/(1-p^2) * alpha(Id_2, T))``."""
    target.require_even("mu_from_densities")
    p = target.p
    combo = alpha_prime(target) + Fraction(p * p, 1 - p * p) * alpha_selfdual(target)
    return Fraction(p, (p + 1) ** 2) * combo


def mu_geometric(target: DensityTarget) -> Fraction:
    return mu(target.a, target.b, target.p)
