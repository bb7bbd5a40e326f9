from fractions import Fraction

import pytest

from krdens import hironaka as hz
from krdens.errors import PreconditionError
from krdens.exact import Polynomial
from krdens.localfield import mu


def test_partition_helpers():
    lam = hz.Partition((3, 1))
    assert lam.tilde() == hz.Partition((4, 2))
    assert lam.conj(1) == 2 and lam.conj(2) == 1 and lam.conj(4) == 0
    assert hz.Partition((2, 1)) <= hz.Partition((3, 1))
    assert not hz.Partition((2, 2)) <= hz.Partition((3, 1))


def test_bracket_out_of_range_is_zero():
    assert hz.bracket(2, 3, 5) == 0
    assert hz.bracket(2, -1, 5) == 0
    assert hz.bracket(3, 0, 5) == 1


@pytest.mark.parametrize("xi,lam,p,expected", [
    ((1, 0), (1, 0), 3, Fraction(16, 3)),
    ((0, 0), (0, 0), 3, Fraction(32, 27)),
])
def test_known_densities(xi, lam, p, expected):
    # both values also reproduced by the brute-force oracle
    assert hz.alpha_general(xi, lam, p) == expected


@pytest.mark.parametrize("p", [3, 5])
def test_unimodular_polynomials(p):
    t = hz.DensityTarget(0, 0, p)
    X = Polynomial.x()
    assert hz.F_poly_nagaoka(t) == (1 + X * Fraction(1, p)) * (1 - X * Fraction(1, p * p))
    assert hz.F_poly_nonsplit(t) == (1 - X) * (1 + X * Fraction(1, p))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alpha_at_one_vanishes(p):
    # S = diag(p, 1) never represents an element of the opposite space
    for a in range(6):
        for b in range(a + 1):
            if (a + b) % 2 == 0:
                assert hz.F_poly_nonsplit(hz.DensityTarget(a, b, p))(1) == 0


def test_closed_form_matches_sum():
    for p in (3, 5):
        for a in range(7):
            for b in range(a + 1):
                if (a + b) % 2 == 0:
                    t = hz.DensityTarget(a, b, p)
                    assert hz.F_poly_nonsplit(t) == hz.F_poly_closed(t)


def test_odd_parity_rejected():
    with pytest.raises(PreconditionError):
        hz.F_poly_nonsplit(hz.DensityTarget(1, 0, 3))
    with pytest.raises(PreconditionError):
        hz.F_poly_closed(hz.DensityTarget(2, 1, 3))


def test_nagaoka_accepts_odd_parity():
    t = hz.DensityTarget(1, 0, 3)
    F = hz.F_poly_nagaoka(t)
    for r in range(4):
        assert F(hz.x_at(3, r)) == hz.alpha_general(hz.xi_selfdual(r), (1, 0), 3)


@pytest.mark.parametrize("a,b,p", [(2, 2, 5), (4, 2, 5), (2, 0, 3), (3, 1, 7), (6, 6, 3)])
def test_central_identity(a, b, p):
    t = hz.DensityTarget(a, b, p)
    assert hz.mu_from_densities(t) == mu(a, b, p) == hz.mu_geometric(t)


def test_recursions_match_differences():
    p = 5
    t = hz.DensityTarget(3, 1, p)
    assert hz.recursion_delta_A(t) == hz.F_poly_nonsplit(hz.DensityTarget(5, 1, p)) - hz.F_poly_nonsplit(t)
    assert hz.recursion_delta_B(1, p) == (hz.F_poly_nonsplit(hz.DensityTarget(3, 3, p))
                                          - hz.F_poly_nonsplit(hz.DensityTarget(3, 1, p)))


def test_alpha_prime_is_minus_derivative_at_one():
    t = hz.DensityTarget(1, 1, 3)
    assert hz.alpha_prime(t) == -hz.F_poly_nonsplit(t).derivative()(1)
    assert hz.alpha_prime(t) == Fraction(-16, 3)
