from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from krdens.errors import PreconditionError
from krdens.localfield import InertLocalRing, legendre, mu, smallest_nonresidue


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_default_eps_is_a_nonresidue(p):
    eps = smallest_nonresidue(p)
    assert legendre(eps, p) == -1
    assert InertLocalRing(p).eps == eps


def test_rejects_residue_eps_and_even_prime():
    with pytest.raises(PreconditionError):
        InertLocalRing(5, 1, 4)
    with pytest.raises(PreconditionError):
        InertLocalRing(2)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 3), st.data())
def test_norm_is_multiplicative(p, k, data):
    ring = InertLocalRing(p, k)
    q = ring.q
    x = ring.elem(data.draw(st.integers(0, q - 1)), data.draw(st.integers(0, q - 1)))
    y = ring.elem(data.draw(st.integers(0, q - 1)), data.draw(st.integers(0, q - 1)))
    assert ring.norm(ring.mul(x, y)) == ring.norm(x) * ring.norm(y) % q
    assert ring.conj(ring.conj(x)) == x


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])
def test_unit_count_and_norm_fibres(p, k):
    ring = InertLocalRing(p, k)
    q = ring.q
    fibres = {}
    units = 0
    for x in ring.elements():
        if ring.is_unit(x):
            units += 1
            n = ring.norm(x)
            fibres[n] = fibres.get(n, 0) + 1
    assert units == q * q - q * q // (p * p)
    # norm is onto the units of Z/p^k with fibres of size p^(k-1)(p+1)
    assert len(fibres) == q - q // p
    assert set(fibres.values()) == {p ** (k - 1) * (p + 1)}


def test_mu_values():
    assert mu(2, 0, 3) == 1
    assert mu(2, 2, 5) == -28
    assert mu(4, 2, 5) == -27
    assert mu(0, 0, 7) == 0


def test_mu_preconditions():
    with pytest.raises(PreconditionError):
        mu(1, 0, 3)
    with pytest.raises(PreconditionError):
        mu(0, 2, 3)


@given(st.sampled_from([3, 5, 7]), st.integers(0, 8), st.integers(0, 8))
def test_mu_steps(p, a, b):
    if b > a or (a + b) % 2:
        return
    assert mu(a + 2, b, p) - mu(a, b, p) == 1
    assert mu(a + 2, b + 2, p) - mu(a + 2, b, p) == 1 - p ** (b + 1) * (p + 1)
