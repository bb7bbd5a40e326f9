"""Exact rationals and dense univariate polynomials over Q.

Rationals are :class:`fractions.Fraction`, which already keeps lowest terms
with a positive denominator. :class:`Polynomial` stores coefficients lowest
degree first with no trailing zeros, so structural equality is value equality.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InexactDivisionError

Rational = Fraction
Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rational_to_str(x: Fraction) -> str:
    """``"num/den"``, or ``"num"`` when the denominator is 1."""
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def rpow(base: Scalar, exponent: int) -> Fraction:
    """Exact power allowing negative exponents, e.g. ``rpow(-3, -2) == 1/9``."""
    base = as_rational(base)
    if exponent < 0 and base == 0:
        raise ZeroDivisionError("0 to a negative power")
    return base ** exponent


class Polynomial:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    # construction helpers

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "Polynomial":
        if degree < 0:
            raise ValueError("negative degree")
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    # basic protocol

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Polynomial({[rational_to_str(c) for c in self._c]})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for i, c in enumerate(self._c):
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                cs = rational_to_str(c)
                terms.append(f"({cs})*{mono}" if mono and "/" in cs else f"{cs}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    # arithmetic

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        n = max(len(self._c), len(other._c))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._c)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if not self._c or not other._c:
            return Polynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative polynomial power")
        result, base = Polynomial.constant(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dlead = other._c[-1]
        dd = other.degree
        if len(rem) <= dd:
            return Polynomial(), Polynomial(rem)
        quot = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i] / dlead
            if q == 0:
                continue
            quot[i - dd] = q
            for j, b in enumerate(other._c):
                rem[i - dd + j] -= q * b
        return Polynomial(quot), Polynomial(rem[:dd])

    def div_exact(self, other) -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InexactDivisionError(f"inexact division: remainder {r} dividing {self} by {other}")
        return q

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        x = as_rational(x)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self._c) if i)

    # serialization

    def to_json_list(self) -> list:
        return [rational_to_str(c) for c in self._c]

    @classmethod
    def from_json_list(cls, items: Sequence[str]) -> "Polynomial":
        return cls(rational_from_str(s) for s in items)

    def to_json(self) -> str:
        return json.dumps(self.to_json_list())

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls.from_json_list(json.loads(text))


X = Polynomial.x()


def poly_arith(lhs: Polynomial, rhs: Polynomial, kind: str) -> Polynomial:
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "div_exact":
        return lhs.div_exact(rhs)
    raise ValueError(f"unknown polynomial operation {kind!r}")


def poly_eval(poly: Polynomial, x: Scalar) -> Fraction:
    return poly(x)


def poly_derivative(poly: Polynomial) -> Polynomial:
    return poly.derivative()
