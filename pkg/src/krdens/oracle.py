"""Brute-force representation counts over ``o_{k,p} / p^k``.

A matrix ``x`` in ``M_{m,n}`` is enumerated column by column; each column is a
vector in ``(o/p^k)^m`` indexed as a mixed-radix integer, digit ``a + b*q`` per
coordinate (``q = p^k``), first coordinate least significant. The Gram matrix
entry ``T_ij = sum_l p^{e_l} * conj(x_li) * x_lj`` is evaluated with numpy over
whole blocks of second columns at once.

For ``n = 2`` the outer column is range-partitioned across worker processes;
partial counts are summed in partition order, so the result does not depend on
the worker count.
"""
from __future__ import annotations

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError, require
from .localfield import InertLocalRing, LocalHermitianSpec, ResidueRingElem

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 8


def _as_elem(ring: InertLocalRing, value) -> ResidueRingElem:
    if isinstance(value, ResidueRingElem):
        return ring.elem(value.a, value.b)
    if isinstance(value, int):
        return ring.elem(value, 0)
    a, b = value
    return ring.elem(a, b)


@dataclass(frozen=True)
class OracleJob:
    """Count ``x`` with ``t(x') S x = T`` mod ``p^k``.

    ``T`` is given as an n x n nested sequence (n in {1, 2}) whose entries are
    ints or ``(a, b)`` pairs meaning ``a + b*delta``. It must be Hermitian
    modulo ``p^k``.
    """

    ring: InertLocalRing
    S: LocalHermitianSpec
    T: tuple
    budget: int = DEFAULT_BUDGET
    raw_T: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.raw_T is None:
            object.__setattr__(self, "raw_T", tuple(tuple(row) for row in self.T))
        S = self.S if isinstance(self.S, LocalHermitianSpec) else LocalHermitianSpec(tuple(self.S))
        object.__setattr__(self, "S", S)
        rows = tuple(tuple(_as_elem(self.ring, v) for v in row) for row in self.T)
        n = len(rows)
        require(n in (1, 2), f"target size n={n} must be 1 or 2")
        require(all(len(r) == n for r in rows), "T must be square")
        for i in range(n):
            require(rows[i][i].b == 0, f"T[{i}][{i}] must be self-conjugate (a rational residue)")
            for j in range(n):
                require(rows[j][i] == self.ring.conj(rows[i][j]), "T must be conjugate-symmetric")
        require(S.m >= n, f"need m = {S.m} >= n = {n}")
        object.__setattr__(self, "T", rows)

    @property
    def n(self) -> int:
        return len(self.T)

    @property
    def m(self) -> int:
        return self.S.m

    @property
    def size(self) -> int:
        """Number of matrices a naive enumeration visits, ``p^{2kmn}``."""
        return self.ring.p ** (2 * self.ring.k * self.m * self.n)

    def at_precision(self, k: int) -> "OracleJob":
        """The same job at precision ``k`` (target entries reinterpreted mod ``p^k``)."""
        ring = InertLocalRing(self.ring.p, k, self.ring.eps)
        return OracleJob(ring, self.S, self.raw_T, self.budget)

    def check_budget(self) -> None:
        if self.size > self.budget:
            raise BudgetExceededError(self.size, self.budget)


def _column_table(p: int, k: int, eps: int, exps: Sequence[int]):
    """Real/imaginary parts of every column vector, and each column's norm ``h(v, v)``."""
    q = p ** k
    m = len(exps)
    count = q ** (2 * m)
    idx = np.arange(count, dtype=np.int64)
    re = np.empty((count, m), dtype=np.int64)
    im = np.empty((count, m), dtype=np.int64)
    for l in range(m):
        digit = (idx // (q * q) ** l) % (q * q)
        re[:, l] = digit % q
        im[:, l] = digit // q
    weights = np.array([pow(p, e, q) for e in exps], dtype=np.int64)
    norms = ((re * re - eps * im * im) % q * weights).sum(axis=1) % q
    return re, im, weights, norms


@dataclass
class _Block:
    p: int
    k: int
    eps: int
    exps: tuple
    t11: int
    t22: int
    t12: tuple
    start: int
    stop: int


def _count_block(block: _Block) -> int:
    q = block.p ** block.k
    re, im, w, norms = _column_table(block.p, block.k, block.eps, block.exps)
    second = np.flatnonzero(norms == block.t22)
    re2, im2 = re[second], im[second]
    c_re, c_im = block.t12
    total = 0
    for i in range(block.start, block.stop):
        if norms[i] != block.t11:
            continue
        a1, b1 = re[i], im[i]
        # conj(a1 + b1 d) * (a2 + b2 d) = (a1 a2 - eps b1 b2) + (a1 b2 - b1 a2) d
        cr = ((a1 * w) * re2 - block.eps * (b1 * w) * im2).sum(axis=1) % q
        ci = ((a1 * w) * im2 - (b1 * w) * re2).sum(axis=1) % q
        total += int(np.count_nonzero((cr == c_re) & (ci == c_im)))
    return total


def count_solutions(job: OracleJob, workers: int = 1, progress: bool = False) -> int:
    """Exact number of ``x`` in ``M_{m,n}(o/p^k)`` with ``t(x') S x == T``."""
    job.check_budget()
    ring = job.ring
    p, k, eps, q = ring.p, ring.k, ring.eps, ring.q
    exps = job.S.diag_exponents
    if job.n == 1:
        _, _, _, norms = _column_table(p, k, eps, exps)
        return int(np.count_nonzero(norms == job.T[0][0].a))

    n_cols = q ** (2 * job.m)
    t12 = job.T[0][1]
    parts = max(1, workers) * 4
    bounds = [n_cols * i // parts for i in range(parts + 1)]
    blocks = [_Block(p, k, eps, exps, job.T[0][0].a, job.T[1][1].a, (t12.a, t12.b), lo, hi)
              for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if workers <= 1:
        partials = []
        for i, b in enumerate(blocks):
            partials.append(_count_block(b))
            if progress:
                print(f"oracle: block {i + 1}/{len(blocks)}", file=sys.stderr)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_count_block, blocks))
    return sum(partials)


def normalisation(job: OracleJob) -> Fraction:
    p, k, m, n = job.ring.p, job.ring.k, job.m, job.n
    return Fraction(1, p ** (k * n * (2 * m - n)))


def density_estimate(job: OracleJob, workers: int = 1, progress: bool = False) -> Fraction:
    """``p^{-kn(2m-n)} * count_solutions(job)``."""
    return count_solutions(job, workers, progress) * normalisation(job)


@dataclass(frozen=True)
class StabilizedDensity:
    value: Fraction
    previous: Fraction
    k: int
    stabilized: bool

    @property
    def status(self) -> str:
        return "stabilized" if self.stabilized else "undetermined"


def stabilized_density(job: OracleJob, workers: int = 1, progress: bool = False) -> StabilizedDensity:
    """Estimates at ``job``'s precision k and at k+1; reports whether they agree.

    Agreement is only evidence that the limit has been reached; disagreement
    says nothing about the limit.
    """
    nxt = job.at_precision(job.ring.k + 1)
    job.check_budget()
    nxt.check_budget()
    lo = density_estimate(job, workers, progress)
    hi = density_estimate(nxt, workers, progress)
    log.debug("density at k=%d: %s, k=%d: %s", job.ring.k, lo, nxt.ring.k, hi)
    return StabilizedDensity(hi, lo, nxt.ring.k, lo == hi)


def diag_job(p: int, k: int, S: Sequence[int], T_exps: Sequence[int], eps: int | None = None,
             budget: int = DEFAULT_BUDGET) -> OracleJob:
    """Job with ``S = diag(p^S_i)`` and diagonal ``T = diag(p^T_i)``."""
    ring = InertLocalRing(p, k, eps)
    n = len(T_exps)
    T = [[(p ** T_exps[i] if i == j else 0, 0) for j in range(n)] for i in range(n)]
    return OracleJob(ring, LocalHermitianSpec(tuple(S)), T, budget)
