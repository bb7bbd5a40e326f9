"""Global bookkeeping over an imaginary quadratic field ``k = Q(sqrt(disc))``.

Elements of ``k`` are written ``x + y*omega`` with ``omega = (disc + sqrt(disc))/2``,
so ``o_k = Z + Z*omega``. A Hermitian 2x2 matrix ``((t1, a), (a', t2))`` has
``a = h(x1, x2)`` where ``h(u, v) = sum_ij u_i H_ij conj(v_j)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import PreconditionError, require
from .localfield import is_prime, legendre, mu

INF = "inf"
Place = Union[int, str]


# ---------------------------------------------------------------------------
# integers


def factorize(n: int) -> dict:
    """Trial division; inputs here stay far below 10**12."""
    n = abs(int(n))
    require(n != 0, "cannot factor 0")
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def ord_p(n, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    n = Fraction(n)
    require(n != 0, "ord_p(0) is infinite")
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker(disc: int, p: int) -> int:
    """Kronecker symbol ``(disc | p)`` for a prime ``p``."""
    if p == 2:
        if disc % 2 == 0:
            return 0
        return 1 if disc % 8 in (1, 7) else -1
    return legendre(disc, p)


# ---------------------------------------------------------------------------
# the field


@dataclass(frozen=True)
class QuadField:
    disc: int

    def __post_init__(self):
        require(is_fundamental(self.disc), f"{self.disc} is not a negative fundamental discriminant")

    @property
    def omega_norm(self) -> int:
        return (self.disc * self.disc - self.disc) // 4

    def elem(self, x, y=0) -> "FieldElem":
        return FieldElem(self, Fraction(x), Fraction(y))

    def from_gaussian(self, re: int, im: int) -> "FieldElem":
        """``re + im*i`` for ``disc = -4`` (where ``i = omega + 2``)."""
        require(self.disc == -4, "Gaussian coordinates need disc = -4")
        return self.elem(re + 2 * im, im)


def is_fundamental(disc: int) -> bool:
    if disc >= 0:
        return False
    if disc % 4 == 1:
        return is_squarefree(-disc)
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (2, 3) and is_squarefree(-m)
    return False


@dataclass(frozen=True)
class FieldElem:
    field: QuadField
    x: Fraction
    y: Fraction = Fraction(0)

    def _wrap(self, x, y) -> "FieldElem":
        return FieldElem(self.field, Fraction(x), Fraction(y))

    def __add__(self, o: "FieldElem") -> "FieldElem":
        return self._wrap(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "FieldElem") -> "FieldElem":
        return self._wrap(self.x - o.x, self.y - o.y)

    def __neg__(self) -> "FieldElem":
        return self._wrap(-self.x, -self.y)

    def __mul__(self, o) -> "FieldElem":
        if isinstance(o, (int, Fraction)):
            return self._wrap(self.x * o, self.y * o)
        c = self.field.omega_norm
        return self._wrap(self.x * o.x - c * self.y * o.y,
                          self.x * o.y + self.y * o.x + self.field.disc * self.y * o.y)

    __rmul__ = __mul__

    def conj(self) -> "FieldElem":
        return self._wrap(self.x + self.field.disc * self.y, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x + self.field.disc * self.x * self.y + self.field.omega_norm * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x + self.field.disc * self.y

    @property
    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0


@dataclass(frozen=True)
class GlobalHermitianMatrix:
    t1: int
    t2: int
    a: FieldElem

    @classmethod
    def parse(cls, field: QuadField, text: str) -> "GlobalHermitianMatrix":
        """``"t1,t2,ax,ay"`` with the off-diagonal entry ``ax + ay*omega``."""
        parts = [s.strip() for s in text.split(",")]
        require(len(parts) == 4, f"expected 't1,t2,ax,ay', got {text!r}")
        t1, t2, ax, ay = (int(s) for s in parts)
        return cls(t1, t2, field.elem(ax, ay))

    def to_str(self) -> str:
        return f"{self.t1},{self.t2},{self.a.x},{self.a.y}"

    @property
    def field(self) -> QuadField:
        return self.a.field

    @property
    def det(self) -> int:
        d = self.t1 * self.t2 - self.a.norm()
        assert d.denominator == 1
        return int(d)

    @property
    def positive_definite(self) -> bool:
        return self.t1 > 0 and self.det > 0

    def entries(self):
        f = self.field
        return [[f.elem(self.t1), self.a], [self.a.conj(), f.elem(self.t2)]]


@dataclass(frozen=True)
class LevelStructure:
    d: int
    field: QuadField

    def __post_init__(self):
        require(self.d >= 1 and is_squarefree(self.d), f"level d={self.d} must be a positive squarefree integer")
        for ell in factorize(self.d) if self.d > 1 else {}:
            require(classify_prime(self.field, ell) == "inert",
                    f"prime {ell} | d is not inert in Q(sqrt({self.field.disc}))")

    @property
    def primes(self) -> list:
        return sorted(factorize(self.d)) if self.d > 1 else []


# ---------------------------------------------------------------------------
# primes, Hilbert symbols, invariants


def classify_prime(field: QuadField, ell: int) -> str:
    require(is_prime(ell), f"{ell} is not prime")
    if field.disc % ell == 0:
        return "ramified"
    return "split" if kronecker(field.disc, ell) == 1 else "inert"


def _square_class(r) -> int:
    r = Fraction(r)
    require(r != 0, "Hilbert symbol needs nonzero arguments")
    return r.numerator * r.denominator


def _split_p(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, place: Place) -> int:
    """``(a, b)_v`` over Q for ``v`` a prime or ``"inf"``."""
    a, b = _square_class(a), _square_class(b)
    if place == INF or place is None:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    require(is_prime(p), f"place {p} is not prime")
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omg(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    return sign * legendre(u, p) ** beta * legendre(v, p) ** alpha


def relevant_places(*nums) -> list:
    """``inf`` together with every prime dividing ``2 * prod(nums)``."""
    primes = {2}
    for n in nums:
        r = Fraction(n)
        for part in (r.numerator, r.denominator):
            if abs(part) > 1:
                primes.update(factorize(part))
    return [INF] + sorted(primes)


def hilbert_product(a, b) -> int:
    out = 1
    for v in relevant_places(a, b):
        out *= hilbert_symbol(a, b, v)
    return out


def inv_V(detV, field: QuadField, place: Place) -> int:
    return hilbert_symbol(detV, field.disc, place)


def diff_set(field: QuadField, level: LevelStructure, T: GlobalHermitianMatrix) -> list:
    """Inert primes where ``V_T`` differs from the target local spaces, by valuation parity."""
    det = T.det
    if det == 0:
        raise PreconditionError("degenerate T: det T = 0")
    require(T.positive_definite, "T must be positive definite")
    out = set()
    for ell, e in factorize(det).items():
        if e % 2 == 1 and level.d % ell != 0 and classify_prime(field, ell) == "inert":
            out.add(ell)
    for ell in level.primes:
        if ord_p(det, ell) % 2 == 0:
            out.add(ell)
    return sorted(out)


def diff_set_via_invariants(field: QuadField, level: LevelStructure, T: GlobalHermitianMatrix) -> list:
    """The same set from Hilbert symbols: target invariant -1 at ``ell | d``, +1 elsewhere."""
    det = T.det
    candidates = set(level.primes) | set(factorize(det))
    out = []
    for ell in sorted(candidates):
        if classify_prime(field, ell) != "inert":
            continue
        target = -1 if level.d % ell == 0 else 1
        if inv_V(det, field, ell) != target:
            out.append(ell)
    return out


def localize(field: QuadField, T: GlobalHermitianMatrix, p: int) -> tuple[int, int]:
    """``(a, b)`` with ``T ~ diag(p^a, p^b)`` over ``o_{k,p}`` at an odd inert ``p``."""
    require(p != 2, "p must be odd")
    require(classify_prime(field, p) == "inert", f"p={p} is not inert in Q(sqrt({field.disc}))")
    det = T.det
    if det == 0:
        raise PreconditionError("degenerate T: det T = 0")
    vals = []
    for t in (T.t1, T.t2):
        if t != 0:
            vals.append(ord_p(t, p))
    if not T.a.is_zero:
        v2 = ord_p(T.a.norm(), p)
        assert v2 % 2 == 0, "odd norm valuation at an inert prime"
        vals.append(v2 // 2)
    b = min(vals)
    a = ord_p(det, p) - b
    return a, b


# ---------------------------------------------------------------------------
# class numbers


def reduced_forms(disc: int) -> list:
    """Reduced primitive positive definite forms ``(a, b, c)`` with ``b^2 - 4ac = disc``."""
    require(disc < 0 and disc % 4 in (0, 1), f"bad discriminant {disc}")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number(field_or_disc) -> tuple[int, int]:
    disc = field_or_disc.disc if isinstance(field_or_disc, QuadField) else int(field_or_disc)
    require(is_fundamental(disc), f"{disc} is not a negative fundamental discriminant")
    units = {-4: 4, -3: 6}.get(disc, 2)
    return len(reduced_forms(disc)), units


def degree_constant(field: QuadField) -> Fraction:
    """``2 h(k) / |o_k^x|``."""
    h, w = class_number(field)
    return Fraction(2 * h, w)


# ---------------------------------------------------------------------------
# Whittaker normalisation


def whittaker_exponent(n: int, r: int) -> Fraction:
    """``e = n(3n + 4r - 1)/4``."""
    return Fraction(n * (3 * n + 4 * r - 1), 4)


def whittaker_shell(n: int, r: int, p: int, S_exps, alpha, field: QuadField | None = None) -> Fraction:
    """``|N(det S)|_p^{n/2} * alpha``; the root of unity ``gamma^n`` is left symbolic.

    Uses the normalised absolute value ``|p|_p = 1/p``. With ``p`` prime to the
    discriminant the ``|Delta|_p^e`` factor is 1.
    """
    require(r >= 0, "r must be >= 0")
    if field is not None and field.disc % p == 0:
        raise PreconditionError("ramified normalization out of scope: p divides the discriminant")
    # N(det S) = p^(2 sum e_i)
    return Fraction(alpha) * Fraction(1, p ** (n * sum(S_exps)))


def whittaker_derivative_factor(a: int, b: int, p: int) -> Fraction:
    """Rational coefficient of ``gamma_p(V+)^2 * log p`` in the local derivative."""
    return Fraction((p + 1) ** 2, p ** 3) * mu(a, b, p)


# ---------------------------------------------------------------------------
# lattice representation counts


def _hermitian(H, u, v) -> FieldElem:
    f = H[0][0].field
    acc = f.elem(0)
    for i in range(2):
        for j in range(2):
            acc = acc + u[i] * H[i][j] * v[j].conj()
    return acc


def _coords_to_vector(field: QuadField, z) -> tuple:
    return (field.elem(z[0], z[1]), field.elem(z[2], z[3]))


def trace_form_gram(field: QuadField, gramL: GlobalHermitianMatrix) -> list:
    """4x4 Gram matrix of ``z -> h(u, u)`` in the Z-basis ``(1, omega)`` of each coordinate."""
    H = gramL.entries()

    def Q(z):
        val = _hermitian(H, _coords_to_vector(field, z), _coords_to_vector(field, z))
        assert val.y == 0
        return val.x

    basis = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    G = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        G[i][i] = Q(basis[i])
        for j in range(i + 1, 4):
            s = tuple(basis[i][t] + basis[j][t] for t in range(4))
            G[i][j] = G[j][i] = (Q(s) - Q(basis[i]) - Q(basis[j])) / 2
    return G


def _inverse(G) -> list:
    n = len(G)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def vectors_of_norm(field: QuadField, gramL: GlobalHermitianMatrix, t: int) -> list:
    """All ``u`` in ``o_k^2`` with ``h(u, u) = t``, by exhaustive search in a bounding box."""
    if t <= 0:
        return [] if t < 0 else [(field.elem(0), field.elem(0))]
    G = trace_form_gram(field, gramL)
    Ginv = _inverse(G)
    # |z_i|^2 <= t * (G^-1)_ii for any z with z^T G z <= t
    bounds = [math.isqrt(math.floor(t * Ginv[i][i])) + 1 for i in range(4)]
    out = []
    for z in itertools.product(*(range(-b, b + 1) for b in bounds)):
        val = sum(G[i][j] * z[i] * z[j] for i in range(4) for j in range(4))
        if val == t:
            out.append(_coords_to_vector(field, z))
    return out


def count_lattice_reps(field: QuadField, gramL: GlobalHermitianMatrix, T: GlobalHermitianMatrix) -> int:
    """``#{(x1, x2) in L^2 : h(x_i, x_j) = T_ij}`` for ``L = o_k^2`` with Gram matrix ``gramL``."""
    require(gramL.positive_definite, "Gram matrix of L must be positive definite")
    require(T.positive_definite, "T must be positive definite")
    H = gramL.entries()
    first = vectors_of_norm(field, gramL, T.t1)
    second = first if T.t2 == T.t1 else vectors_of_norm(field, gramL, T.t2)
    count = 0
    for x1 in first:
        for x2 in second:
            if _hermitian(H, x1, x2) == T.a:
                count += 1
    return count


def localize_mu(field: QuadField, T: GlobalHermitianMatrix, p: int):
    """``mu_p`` of the localisation, or ``None`` when ``ord_p det T`` is odd."""
    a, b = localize(field, T, p)
    return mu(a, b, p) if (a + b) % 2 == 0 else None


def primes_up_to(n: int) -> Iterable[int]:
    return (q for q in range(2, n + 1) if is_prime(q))
