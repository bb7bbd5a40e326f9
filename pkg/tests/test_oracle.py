from fractions import Fraction

import pytest

from krdens import hironaka as hz, oracle
from krdens.errors import BudgetExceededError, PreconditionError
from krdens.localfield import InertLocalRing, LocalHermitianSpec


def test_identity_density_stabilises():
    r = oracle.stabilized_density(oracle.diag_job(3, 1, (0, 0), (0, 0)))
    assert r.stabilized and r.status == "stabilized"
    assert r.value == Fraction(32, 27) == hz.alpha_general((0, 0), (0, 0), 3)


def test_rank_one_density_is_constant_in_k():
    vals = [oracle.density_estimate(oracle.diag_job(3, k, (0,), (0,))) for k in (1, 2, 3)]
    assert vals == [Fraction(4, 3)] * 3


def test_low_precision_is_reported_undetermined():
    # at k=1 the target diag(p,1) is still seen as diag(0,1)
    r = oracle.stabilized_density(oracle.diag_job(3, 1, (1, 0), (1, 0)))
    assert not r.stabilized and r.status == "undetermined"


@pytest.mark.parametrize("eps", [2, 3])
def test_independent_of_nonresidue(eps):
    job = oracle.diag_job(5, 1, (0, 0), (0, 0), eps=eps)
    assert oracle.density_estimate(job) == hz.alpha_general((0, 0), (0, 0), 5)


def test_unimodular_change_of_target():
    # g = [[1, 1], [0, 1]] turns Id_2 into [[1, 1], [1, 2]]
    ring = InertLocalRing(3, 1)
    S = LocalHermitianSpec((0, 0))
    plain = oracle.OracleJob(ring, S, [[1, 0], [0, 1]])
    moved = oracle.OracleJob(ring, S, [[1, 1], [1, 2]])
    assert oracle.count_solutions(plain) == oracle.count_solutions(moved) == 96


def test_worker_count_does_not_change_result():
    job = oracle.diag_job(3, 1, (1, 0), (0, 0))
    assert oracle.count_solutions(job, workers=1) == oracle.count_solutions(job, workers=2)


def test_budget():
    job = oracle.diag_job(3, 3, (0, 0), (0, 0))
    with pytest.raises(BudgetExceededError, match="instance too large"):
        oracle.count_solutions(job)


def test_target_validation():
    ring = InertLocalRing(3, 1)
    with pytest.raises(PreconditionError):
        oracle.OracleJob(ring, LocalHermitianSpec((0,)), [[1, 0], [0, 1]])
    with pytest.raises(PreconditionError):
        oracle.OracleJob(ring, LocalHermitianSpec((0, 0)), [[1, (0, 1)], [(0, 1), 1]])
