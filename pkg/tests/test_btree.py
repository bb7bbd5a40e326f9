import pytest

from krdens import btree
from krdens.errors import PreconditionError
from krdens.localfield import mu


def test_multiplicities():
    assert [btree.multiplicity(4, d) for d in range(6)] == [2, 2, 1, 1, 0, 0]
    assert [btree.multiplicity(3, d) for d in range(5)] == [2, 1, 1, 0, 0]


def test_ball_of_radius_two():
    tree = btree.build_tree(btree.TreeConfig(3, 2, 2, 0, 0))
    assert len(tree) == 53
    assert sum(1 for d in tree.dist1 if d <= 2) == 1 + 4 + 12
    assert tree.n_edges == len(tree) - 1


@pytest.mark.parametrize("p", [3, 5])
def test_self_intersection_of_a_ball(p):
    # <Z(b), Z(b)> with e = 0 is the diagonal case (m, m)
    for m in range(4):
        cfg = btree.TreeConfig(p, m, m, 0, 0)
        assert btree.intersect_bruteforce(cfg) == btree.intersect_closed(cfg) == mu(m, m, p)


@pytest.mark.parametrize("p", [3, 5])
def test_bruteforce_matches_closed_form(p):
    for cfg in btree.admissible_configs(p, 4):
        assert btree.intersect_bruteforce(cfg) == btree.intersect_closed(cfg)


def test_overlap_ball():
    assert btree.overlap_ball(btree.TreeConfig(3, 2, 4, 2)) == (2, 0)
    assert btree.overlap_ball(btree.TreeConfig(3, 3, 3, 2)) == (2, 1)
    with pytest.raises(PreconditionError, match="empty overlap"):
        btree.overlap_ball(btree.TreeConfig(3, 1, 1, 4))


def test_disjoint_balls():
    cfg = btree.TreeConfig(3, 1, 1, 4)
    assert btree.diag_invariants(cfg) == btree.NOT_INTEGRAL
    assert btree.intersect_bruteforce(cfg) == btree.intersect_closed(cfg) == 0


def test_zero_divisor():
    cfg = btree.TreeConfig(3, -1, 2, 1)
    assert btree.intersect_bruteforce(cfg) == 0


def test_config_validation():
    with pytest.raises(PreconditionError):
        btree.TreeConfig(3, 2, 1, 1)
    with pytest.raises(PreconditionError):
        btree.TreeConfig(3, 1, 1, 1)
    with pytest.raises(PreconditionError):
        btree.TreeConfig(3, 1, 1, 0)


def test_dot_output(tmp_path):
    cfg = btree.TreeConfig(3, 1, 1, 2)
    tree = btree.build_tree(cfg)
    dot = tree.to_dot(cfg)
    assert dot.startswith("graph truncated_tree {")
    assert dot.count(" -- ") == tree.n_edges
    assert dot.count("shape=box") == 3
