"""
Product-basis Hamiltonian - H = sum_i h_i + g sum_{i<j} delta(x_i - x_j)
for N distinguishable particles in the lowest M trap orbitals (basis size M^N)
"""

import itertools
import math
from functools import cached_property
from typing import Optional

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg

from config.settings import ED_CUTOFF_MARGIN, ED_DEFAULT_CUTOFF, ED_DIMENSION_GUARD, ED_EXTRA_LEVELS
from coupling.levels import LevelIndex, ground_level
from coupling.quadrature import composite_rule, refine_panels
from errors import DimensionGuardError, DomainError
from trap.basis import SingleParticleBasis, TrapSpec, eigenbasis
from wells.permutation import Permutation

logger = structlog.get_logger(__name__)


def overlap4(basis: SingleParticleBasis, a: int, b: int, c: int, d: int) -> float:
    """Integral of phi_a phi_b phi_c phi_d over the line"""
    indices = [a, b, c, d]
    for n in indices:
        basis._check_index(n)
    low, high = basis.support(indices)

    def rule_value(panels):
        x, w = composite_rule(low, high, panels)
        phi = basis.values(x, indices)
        return np.dot(w, np.prod(phi, axis=0))

    value, _ = refine_panels(rule_value, rtol=basis.quadrature_rtol, what=f"overlap ({a},{b},{c},{d})")
    return float(value)


def overlap_tensor(basis: SingleParticleBasis, cutoff: int) -> np.ndarray:
    """U[a, b, c, d] = overlap4 for all orbitals below cutoff; one shared quadrature rule"""
    if cutoff > basis.n_max + 1:
        raise DomainError(f"cutoff {cutoff} exceeds the {basis.n_max + 1} available orbitals")
    indices = list(range(cutoff))
    low, high = basis.support(indices)

    def rule_value(panels):
        x, w = composite_rule(low, high, panels)
        phi = basis.values(x, indices)
        return np.einsum("q,aq,bq,cq,dq->abcd", w, phi, phi, phi, phi, optimize=True)

    tensor, error = refine_panels(rule_value, rtol=basis.quadrature_rtol, what=f"overlap tensor M={cutoff}")
    logger.debug("overlap_tensor", trap=basis.kind, cutoff=cutoff, error=error)
    return tensor


class EDConfig(BaseModel):
    """One exact-diagonalization job"""

    model_config = ConfigDict(frozen=True)

    trap: TrapSpec
    n_particles: int = Field(ge=2, le=3)
    g: float = Field(ge=0, allow_inf_nan=False)
    cutoff: int = Field(default=ED_DEFAULT_CUTOFF, ge=2)
    target_level: Optional[LevelIndex] = None
    eigen_count: Optional[int] = Field(default=None, ge=1)

    @property
    def level(self) -> LevelIndex:
        return self.target_level or ground_level(self.n_particles)

    @property
    def dimension(self) -> int:
        return self.cutoff**self.n_particles

    def check_limits(self, cutoff: Optional[int] = None):
        cutoff = cutoff or self.cutoff
        level = self.level
        if level.n_particles != self.n_particles:
            raise DomainError(f"level {level} has {level.n_particles} particles, config has N={self.n_particles}")
        if cutoff < level.highest + ED_CUTOFF_MARGIN:
            raise DomainError(f"cutoff M={cutoff} must be at least {level.highest + ED_CUTOFF_MARGIN} for level {level}")
        if cutoff**self.n_particles > ED_DIMENSION_GUARD:
            raise DimensionGuardError(f"basis size {cutoff}^{self.n_particles} exceeds the dense guard {ED_DIMENSION_GUARD}")

    def default_count(self) -> int:
        return min(self.eigen_count or 2 * math.factorial(self.n_particles) + ED_EXTRA_LEVELS, self.dimension)


class ProductBasisHamiltonian:
    """Kinetic diagonal and summed pair-contact matrix for one (trap, N, M)

    The g-independent pieces are built once; matrix(g) only adds them.
    State |a_1 .. a_N> puts particle q in orbital a_q, flattened row-major.
    """

    def __init__(self, basis: SingleParticleBasis, n_particles: int, cutoff: int):
        if cutoff > basis.n_max + 1:
            raise DomainError(f"cutoff {cutoff} exceeds the {basis.n_max + 1} available orbitals")
        if cutoff**n_particles > ED_DIMENSION_GUARD:
            raise DimensionGuardError(f"basis size {cutoff}^{n_particles} exceeds the dense guard {ED_DIMENSION_GUARD}")
        self.basis = basis
        self.n_particles = n_particles
        self.cutoff = cutoff
        self.dimension = cutoff**n_particles
        self.shape = (cutoff,) * n_particles

    @classmethod
    def for_trap(cls, trap: TrapSpec, n_particles: int, cutoff: int) -> "ProductBasisHamiltonian":
        return cls(eigenbasis(trap, cutoff - 1), n_particles, cutoff)

    @cached_property
    def digits(self) -> np.ndarray:
        """(N, M^N) orbital index of each particle in each product state"""
        return np.array(np.unravel_index(np.arange(self.dimension), self.shape))

    @cached_property
    def kinetic_diagonal(self) -> np.ndarray:
        energies = self.basis.energies[: self.cutoff]
        return np.sum(energies[self.digits], axis=0)

    @cached_property
    def contact_matrix(self) -> np.ndarray:
        """sum over pairs i<j of the delta(x_i - x_j) matrix"""
        m, n = self.cutoff, self.n_particles
        pair = overlap_tensor(self.basis, m).reshape(m * m, m * m)
        rest = m ** (n - 2)
        lifted = np.kron(pair, np.eye(rest)).reshape(self.shape * 2)

        total = np.zeros((self.dimension, self.dimension))
        for i, j in itertools.combinations(range(n), 2):
            order = [i, j] + [q for q in range(n) if q not in (i, j)]
            axes = [order.index(q) for q in range(n)]
            total += lifted.transpose(axes + [n + a for a in axes]).reshape(self.dimension, self.dimension)
        logger.debug("contact_matrix_built", n_particles=n, cutoff=m, dimension=self.dimension)
        return total

    def assemble(self) -> "ProductBasisHamiltonian":
        """Build the g-independent pieces now rather than on first use"""
        contact = self.contact_matrix
        logger.debug("hamiltonian_assembled", dimension=self.dimension, contact_max=float(np.max(contact)), kinetic_max=float(np.max(self.kinetic_diagonal)))
        return self

    def matrix(self, g: float) -> np.ndarray:
        if not math.isfinite(g):
            raise DomainError(f"g must be finite, got {g}")
        return np.diag(self.kinetic_diagonal) + g * self.contact_matrix

    def permutation_images(self, p: Permutation) -> np.ndarray:
        """Index map of relabeling particles by p: particle p(q) takes the orbital of particle q"""
        if p.degree != self.n_particles:
            raise DomainError(f"permutation {p} does not act on {self.n_particles} particles")
        moved = np.empty_like(self.digits)
        for q in range(self.n_particles):
            moved[p(q + 1) - 1] = self.digits[q]
        return np.ravel_multi_index(tuple(moved), self.shape)

    def permutation_operator(self, p: Permutation) -> np.ndarray:
        images = self.permutation_images(p)
        operator = np.zeros((self.dimension, self.dimension))
        operator[images, np.arange(self.dimension)] = 1.0
        return operator

    def reflection_diagonal(self) -> Optional[np.ndarray]:
        """Mirror image about the trap center on the product basis; None for an asymmetric trap"""
        parities = self.basis.reflection_parities()
        if parities is None:
            return None
        return np.prod(np.asarray(parities)[: self.cutoff][self.digits], axis=0)

    def unperturbed_energies(self) -> np.ndarray:
        return np.sort(self.kinetic_diagonal)

    def lowest(self, g: float, count: int, vectors: bool = False):
        """Lowest `count` eigenvalues (and eigenvectors as columns if requested)"""
        count = min(count, self.dimension)
        result = linalg.eigh(self.matrix(g), subset_by_index=[0, count - 1], eigvals_only=not vectors)
        logger.debug("ed_diagonalized", n_particles=self.n_particles, cutoff=self.cutoff, g=g, count=count)
        return result


def ed_spectrum(config: EDConfig) -> np.ndarray:
    """Ascending lowest eigenvalues of the truncated Hamiltonian"""
    config.check_limits()
    hamiltonian = ProductBasisHamiltonian.for_trap(config.trap, config.n_particles, config.cutoff)
    eigenvalues = hamiltonian.lowest(config.g, config.default_count())
    logger.info("ed_spectrum", trap=config.trap.kind, n_particles=config.n_particles, cutoff=config.cutoff, g=config.g, ground=float(eigenvalues[0]))
    return eigenvalues
