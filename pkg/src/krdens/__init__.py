"""Exact local Hermitian representation densities and Kudla-Rapoport intersection numbers."""
from .errors import BudgetExceededError, InexactDivisionError, PreconditionError
from .exact import Polynomial, X
from .localfield import InertLocalRing, LocalHermitianSpec, ResidueRingElem, mu
from .hironaka import (DensityTarget, Partition, alpha_general, alpha_prime, F_poly_closed,
                       F_poly_nagaoka, F_poly_nonsplit, mu_from_densities)
from .btree import TreeConfig, intersect_bruteforce, intersect_closed

__version__ = "0.1.0"
