import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from krdens import globalfield as gf, hironaka as hz
from krdens.errors import PreconditionError
from krdens.localfield import mu

nonzero = st.integers(-60, 60).filter(bool)
K = gf.QuadField(-4)


def herm(text, field=K):
    return gf.GlobalHermitianMatrix.parse(field, text)


def test_field_arithmetic():
    F = gf.QuadField(-23)
    x, y = F.elem(2, 1), F.elem(-1, 3)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * x.conj()).is_rational()
    assert x + x.conj() == F.elem(x.trace())
    i = K.from_gaussian(0, 1)
    assert i * i == K.elem(-1)


def test_prime_classification():
    assert [gf.classify_prime(K, q) for q in (2, 3, 5, 7)] == ["ramified", "inert", "split", "inert"]


@given(nonzero, nonzero)
def test_hilbert_symmetry_and_product_formula(a, b):
    for v in gf.relevant_places(a, b):
        assert gf.hilbert_symbol(a, b, v) == gf.hilbert_symbol(b, a, v)
    assert gf.hilbert_product(a, b) == 1


@given(nonzero, nonzero, nonzero)
def test_hilbert_bimultiplicative(a, b, c):
    for v in gf.relevant_places(a, b, c):
        assert gf.hilbert_symbol(a * b, c, v) == gf.hilbert_symbol(a, c, v) * gf.hilbert_symbol(b, c, v)


def test_hilbert_values():
    assert [gf.hilbert_symbol(-1, -1, v) for v in (2, 3, gf.INF)] == [-1, 1, -1]
    assert gf.hilbert_symbol(3, 5, 5) == -1
    assert gf.hilbert_symbol(2, 3, 3) == -1


def test_seeded_product_formula_is_reproducible():
    rng = random.Random(0)
    pairs = [(rng.randint(1, 40), -rng.randint(1, 40)) for _ in range(50)]
    assert all(gf.hilbert_product(a, b) == 1 for a, b in pairs)


@pytest.mark.parametrize("level,T,expected", [
    (1, "1,3,0,0", [3]),
    (3, "1,3,0,0", []),
    (3, "1,1,0,0", [3]),
    (1, "1,1,0,0", []),
    (1, "3,3,0,0", []),
    (21, "1,1,0,0", [3, 7]),
])
def test_diff_two_ways(level, T, expected):
    L = gf.LevelStructure(level, K)
    t = herm(T)
    assert gf.diff_set(K, L, t) == gf.diff_set_via_invariants(K, L, t) == expected


def test_diff_preconditions():
    with pytest.raises(PreconditionError, match="degenerate"):
        gf.diff_set(K, gf.LevelStructure(1, K), herm("1,1,1,0"))
    with pytest.raises(PreconditionError):
        gf.LevelStructure(5, K)
    with pytest.raises(PreconditionError):
        gf.LevelStructure(9, K)


@pytest.mark.parametrize("disc,h,w", [(-3, 1, 6), (-4, 1, 4), (-15, 2, 2), (-23, 3, 2), (-47, 5, 2)])
def test_class_numbers(disc, h, w):
    assert gf.class_number(disc) == (h, w)


def test_class_number_rejects_nonfundamental():
    with pytest.raises(PreconditionError):
        gf.class_number(-12)


def test_localize():
    assert gf.localize(K, herm("9,3,0,0"), 3) == (2, 1)
    assert gf.localize(K, herm("3,3,0,0"), 3) == (1, 1)
    with pytest.raises(PreconditionError):
        gf.localize(K, herm("1,1,0,0"), 5)


def test_whittaker_shell():
    alpha = hz.alpha_general((1, 0), (1, 0), 3)
    assert gf.whittaker_shell(2, 0, 3, (1, 0), alpha) == Fraction(16, 27)
    assert gf.whittaker_exponent(2, 0) == Fraction(5, 2)
    with pytest.raises(PreconditionError, match="ramified"):
        gf.whittaker_shell(2, 0, 3, (0, 0), 1, field=gf.QuadField(-3))


@pytest.mark.parametrize("a,b,p", [(0, 0, 3), (2, 0, 3), (1, 1, 5), (4, 2, 7)])
def test_derivative_normalisation_is_consistent(a, b, p):
    t = hz.DensityTarget(a, b, p)
    lhs = hz.alpha_prime(t) / p ** 2 + hz.alpha_selfdual(t) / (1 - p * p)
    assert lhs == gf.whittaker_derivative_factor(a, b, p) == Fraction((p + 1) ** 2, p ** 3) * mu(a, b, p)


def test_reps_of_identity():
    assert gf.count_lattice_reps(K, herm("1,1,0,0"), herm("1,1,0,0")) == 32
    assert gf.count_lattice_reps(K, herm("1,1,0,0"), herm("1,2,1,0")) == 32


def test_reps_invariant_under_change_of_basis():
    # [[1,1],[1,2]] = g* g for g = [[1,1],[0,1]], the same lattice in a new basis
    T = herm("2,3,1,1")
    assert gf.count_lattice_reps(K, herm("1,2,1,0"), T) == gf.count_lattice_reps(K, herm("1,1,0,0"), T) == 32


def test_degree_constant():
    assert gf.degree_constant(K) == Fraction(1, 2)
    assert gf.degree_constant(gf.QuadField(-23)) == 3
