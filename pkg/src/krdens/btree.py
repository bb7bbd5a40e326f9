"""Local Kudla-Rapoport divisors on the Bruhat-Tits tree of SL_2(Q_p).

The tree is materialised explicitly: a spine ``v_0 .. v_d`` joining the two
central lattices, plus every off-spine branch as far as it can matter. Vertex
distances to both centres are tracked during construction and re-derived by
breadth-first search as a consistency check. The brute-force pairing expands
``<Z(b1), Z(b2)>`` bilinearly over this finite graph; the closed forms are the
case formulas of the local degree theorem.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError, require
from .localfield import check_odd_prime, mu


@dataclass(frozen=True)
class TreeConfig:
    """Two local divisors: ``m_i = ord_p(b_i, b_i)``, ``d`` the distance of their centres.

    ``e = ord_p(beta_2, beta_1')`` is the horizontal-horizontal value and is
    given exactly when the centres coincide (``d == 0``). A negative ``m1``
    stands for the zero divisor.
    """

    p: int
    m1: int
    m2: int
    d: int
    e: Optional[int] = None

    def __post_init__(self):
        check_odd_prime(self.p)
        require(self.m1 <= self.m2, f"need m1 <= m2, got {self.m1} > {self.m2}")
        require(self.d >= 0, "distance d must be >= 0")
        if self.d == 0:
            require(self.e is not None, "e = ord_p(beta_2, beta_1') is required when d = 0")
            require(self.e >= 0, "e must be >= 0 (linearly independent vectors)")
        else:
            require(self.e is None, "e is only meaningful when the central lattices coincide (d = 0)")
        if self.m1 >= 0:
            require((self.m1 + self.m2 - self.d) % 2 == 0,
                    "m1 + m2 must be congruent to d mod 2")

    @property
    def zero_divisor(self) -> bool:
        return self.m1 < 0

    @property
    def disjoint(self) -> bool:
        return self.zero_divisor or self.d > self.m1 + self.m2

    @property
    def nested(self) -> bool:
        """Ball around ``Lambda_1`` contained in the ball around ``Lambda_2``."""
        return not self.zero_divisor and self.d <= self.m2 - self.m1


def multiplicity(m: int, dist: int) -> int:
    """Multiplicity of the component at distance ``dist`` from the centre."""
    if m < 0 or dist > m:
        return 0
    if (m - dist) % 2 == 0:
        return (m - dist) // 2
    return (m - dist + 1) // 2


def pairing_PP(dist: int, p: int) -> int:
    if dist == 0:
        return -(p + 1)
    if dist == 1:
        return 1
    return 0


def pairing_P_Z(dist_to_center: int, m: int, p: int) -> int:
    """``<P_Lambda, Z(b)>`` for a vertex at the given distance from the centre of ``Z(b)``."""
    if m < 0 or dist_to_center > m:
        return 0
    return 1 if (dist_to_center - m) % 2 == 0 else -p


@dataclass
class TruncatedTree:
    p: int
    adjacency: list = field(default_factory=list)
    dist1: list = field(default_factory=list)
    dist2: list = field(default_factory=list)
    spine: list = field(default_factory=list)

    def add_vertex(self, d1: int, d2: int) -> int:
        self.adjacency.append([])
        self.dist1.append(d1)
        self.dist2.append(d2)
        return len(self.adjacency) - 1

    def add_edge(self, u: int, v: int) -> None:
        self.adjacency[u].append(v)
        self.adjacency[v].append(u)

    def __len__(self) -> int:
        return len(self.adjacency)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def bfs(self, source: int) -> list:
        dist = [-1] * len(self)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def to_dot(self, config: TreeConfig | None = None) -> str:
        lines = ["graph truncated_tree {"]
        for v in range(len(self)):
            label = f"{v}\\nd1={self.dist1[v]} d2={self.dist2[v]}"
            if config is not None:
                label += (f"\\nm1={multiplicity(config.m1, self.dist1[v])}"
                          f" m2={multiplicity(config.m2, self.dist2[v])}")
            shape = "box" if v in self.spine else "ellipse"
            lines.append(f'  {v} [label="{label}", shape={shape}];')
        for u in range(len(self)):
            for v in self.adjacency[u]:
                if u < v:
                    lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _needed(config: TreeConfig, d1: int, d2: int) -> bool:
    # closed balls plus one layer, so every ball vertex has all of its neighbours
    return d1 <= config.m1 + 1 or d2 <= config.m2 + 1


def build_tree(config: TreeConfig) -> TruncatedTree:
    """The finite subtree of vertices within ``m_i + 1`` of either centre, plus the spine."""
    p, d = config.p, config.d
    tree = TruncatedTree(p)
    for i in range(d + 1):
        v = tree.add_vertex(i, d - i)
        tree.spine.append(v)
        if i:
            tree.add_edge(tree.spine[i - 1], v)
    frontier = deque()
    for i, s in enumerate(tree.spine):
        branches = p + 1 - (0 if d == 0 else (1 if i in (0, d) else 2))
        for _ in range(branches):
            if _needed(config, i + 1, d - i + 1):
                frontier.append((s, i + 1, d - i + 1))
    while frontier:
        parent, d1, d2 = frontier.popleft()
        v = tree.add_vertex(d1, d2)
        tree.add_edge(parent, v)
        if _needed(config, d1 + 1, d2 + 1):
            frontier.extend((v, d1 + 1, d2 + 1) for _ in range(p))
    assert tree.bfs(tree.spine[0]) == tree.dist1
    assert tree.bfs(tree.spine[-1]) == tree.dist2
    return tree


def _divisor_ok(m: int) -> bool:
    return m >= 0


def pairing_P_Z_explicit(tree: TruncatedTree, config: TreeConfig, v: int) -> int:
    """``<P_v, Z(b2)>`` summed over the explicit neighbourhood of ``v``."""
    m2 = config.m2
    if not _divisor_ok(m2):
        return 0
    total = 1 if v == tree.spine[-1] else 0
    total += multiplicity(m2, tree.dist2[v]) * pairing_PP(0, tree.p)
    nbrs = tree.adjacency[v]
    for w in nbrs:
        total += multiplicity(m2, tree.dist2[w]) * pairing_PP(1, tree.p)
    if len(nbrs) < tree.p + 1:
        # truncated neighbours are outside B(b2) and carry no multiplicity
        assert tree.dist2[v] + 1 > m2
    return total


def intersect_bruteforce(config: TreeConfig, tree: TruncatedTree | None = None) -> int:
    """``<Z(b1), Z(b2)>`` by full bilinear expansion over the explicit tree."""
    if config.zero_divisor:
        return 0
    tree = tree or build_tree(config)
    hh = config.e if config.d == 0 else 0
    # <Z1^h, P_L> = 1 exactly at the centre of Z(b1)
    h_v = multiplicity(config.m2, tree.dist2[tree.spine[0]])
    vertical = 0
    for v in range(len(tree)):
        m1v = multiplicity(config.m1, tree.dist1[v])
        if m1v:
            vertical += m1v * pairing_P_Z_explicit(tree, config, v)
    return hh + h_v + vertical


def _ball_term(p: int, m: int) -> int:
    return p * (p ** m - 1) // (p - 1)


def intersect_closed(config: TreeConfig) -> int:
    """Closed-form case formulas for the local intersection number."""
    if config.disjoint:
        return 0
    m1, m2, d, p = config.m1, config.m2, config.d, config.p
    if config.nested:
        hh = config.e if d == 0 else 0
        return (m1 + m2 - d) // 2 - _ball_term(p, m1) + hh
    r = (m1 + m2 - d) // 2
    return r - _ball_term(p, r)


def overlap_ball(config: TreeConfig) -> tuple[int, int]:
    """Radius ``r`` of ``B(b1) ∩ B(b2)`` and the spine index of its centre."""
    if config.disjoint:
        raise PreconditionError("empty overlap: the balls B(b1), B(b2) are disjoint")
    r = min((config.m1 + config.m2 - config.d) // 2, config.m1)
    return r, config.m1 - r


NOT_INTEGRAL = "not integral"


def diag_invariants(config: TreeConfig):
    """``(a, b)`` with ``T ~ diag(p^a, p^b)``, or ``"not integral"`` for disjoint balls."""
    if config.disjoint:
        return NOT_INTEGRAL
    m1, m2, d = config.m1, config.m2, config.d
    if d == 0:
        return (m2 + 2 * config.e, m1)
    if config.nested:
        return (m2 - d, m1)
    r = (m1 + m2 - d) // 2
    return (r, r)


def mu_of_config(config: TreeConfig) -> Optional[Fraction]:
    inv = diag_invariants(config)
    if inv == NOT_INTEGRAL:
        return None
    return mu(inv[0], inv[1], config.p)


def admissible_configs(p: int, max_m: int, extra_d: int = 2, es=(0, 1, 2)):
    """Every parity-admissible config with ``0 <= m1 <= m2 <= max_m``, ``d <= m1+m2+extra_d``."""
    for m2 in range(max_m + 1):
        for m1 in range(m2 + 1):
            for d in range((m1 + m2) % 2, m1 + m2 + extra_d + 1, 2):
                if d == 0:
                    for e in es:
                        yield TreeConfig(p, m1, m2, 0, e)
                else:
                    yield TreeConfig(p, m1, m2, d)
