"""
Coupling Coefficients - first-order tunneling rates t[k] of one multiplet

t[k] = (1/g) * integral over the class-k boundary of |d Phi / d x|^2, where the
boundary puts the particles at ordered positions k and k+1 at the same point
and the derivative is taken in the left one. With Phi of unit domain norm this
is the N!/g prefactor applied to the globally normalized determinant.
"""

import math
from typing import List, Optional

import numpy as np
import structlog
from pydantic import BaseModel

from concurrency import run_bounded
from config.settings import DEFAULT_THREADS
from coupling.levels import LevelIndex
from coupling.quadrature import integrate_ordered
from coupling.slater import SlaterWavefunction
from errors import DomainError
from trap.basis import SingleParticleBasis
from wells.orderings import Ordering

logger = structlog.get_logger(__name__)

MAX_COEFFICIENT_PARTICLES = 4
BOUNDARY_CONVENTION = (
    "t[k] integrates |dPhi/dx|^2 over the surface where the particles at ordered positions k and k+1 coincide; "
    "bond k joins wells that differ by exchanging those two positions"
)


class MonteCarloCheck(BaseModel):
    bond: int
    samples: int
    seed: int
    value: float
    standard_error: float
    quadrature_value: float
    deviation_in_errors: float


class CouplingCoefficients(BaseModel):
    level: LevelIndex
    trap_kind: str
    g: float
    energy: float
    values: List[float]
    errors: List[float]
    convention: str = BOUNDARY_CONVENTION
    monte_carlo: Optional[MonteCarloCheck] = None

    def is_palindromic(self, n_errors: float = 5.0) -> bool:
        pairs = zip(zip(self.values, self.errors), reversed(list(zip(self.values, self.errors))))
        return all(abs(a - b) <= n_errors * (ea + eb) + 1e-12 * max(a, b) for (a, ea), (b, eb) in pairs)

    def to_rows(self) -> List[dict]:
        return [{"bond": k, "value": v, "error": e} for k, (v, e) in enumerate(zip(self.values, self.errors), start=1)]


def check_request(level: LevelIndex, k: int):
    n = level.n_particles
    if not 2 <= n <= MAX_COEFFICIENT_PARTICLES:
        raise DomainError(f"coupling coefficients are available for 2 to {MAX_COEFFICIENT_PARTICLES} particles, got N={n}")
    if not 1 <= k <= n - 1:
        raise DomainError(f"bond {k} out of range 1..{n - 1}")


def boundary_points(y: np.ndarray, k: int, ordering: Ordering) -> np.ndarray:
    """Lift ordered free coordinates y (P, N-1) to configurations on the bond-k boundary

    The particle at ordered position p sits at y_p for p <= k and at y_{p-1} for p > k.
    """
    n = ordering.size
    positions = np.concatenate([y[:, :k], y[:, k - 1 : n - 1]], axis=1)
    points = np.empty_like(positions)
    for p, label in enumerate(ordering.seq):
        points[:, label - 1] = positions[:, p]
    return points


def boundary_integrand(wavefunction: SlaterWavefunction, k: int, ordering: Ordering, side: str = "left"):
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    particle = ordering.seq[k - 1] if side == "left" else ordering.seq[k]

    def integrand(y):
        return wavefunction.derivative(boundary_points(y, k, ordering), particle) ** 2

    return integrand


def boundary_integral(
    level: LevelIndex,
    basis: SingleParticleBasis,
    k: int,
    ordering: Optional[Ordering] = None,
    side: str = "left",
    rtol: Optional[float] = None,
):
    """Raw boundary integral for any well of the class; returns (value, error)"""
    check_request(level, k)
    n = level.n_particles
    ordering = ordering or Ordering(tuple(range(1, n + 1)))
    if ordering.size != n:
        raise DomainError(f"ordering {ordering} does not match N={n}")

    wavefunction = SlaterWavefunction(level, basis)
    a, b = basis.support(level.quanta)
    value, error = integrate_ordered(
        boundary_integrand(wavefunction, k, ordering, side), a, b, n - 1, rtol=rtol or basis.quadrature_rtol
    )
    logger.debug("boundary_integral", level=str(level), bond=k, ordering=str(ordering), side=side, value=value, error=error)
    return value, error


def _check_g(g: float):
    if not (g > 0 and math.isfinite(g)):
        raise DomainError(f"interaction strength must be positive and finite, got g={g}")


def bond_coefficient(level: LevelIndex, basis: SingleParticleBasis, k: int, g: float, rtol: Optional[float] = None) -> float:
    """t[k] at interaction strength g (hbar = m = 1)"""
    _check_g(g)
    value, _ = boundary_integral(level, basis, k, rtol=rtol)
    return value / g


def all_bond_coefficients(
    level: LevelIndex,
    basis: SingleParticleBasis,
    g: float,
    threads: int = DEFAULT_THREADS,
    rtol: Optional[float] = None,
) -> CouplingCoefficients:
    """Every t[k] with its quadrature error; bond classes run as independent jobs"""
    _check_g(g)
    n = level.n_particles
    check_request(level, 1)

    jobs = [lambda k=k: boundary_integral(level, basis, k, rtol=rtol) for k in range(1, n)]
    integrals = run_bounded(jobs, threads)

    coefficients = CouplingCoefficients(
        level=level,
        trap_kind=basis.kind,
        g=g,
        energy=level.energy(basis),
        values=[value / g for value, _ in integrals],
        errors=[error / g for _, error in integrals],
    )
    logger.info("coefficients_computed", level=str(level), trap=basis.kind, g=g, values=coefficients.values)
    return coefficients


def coefficient_basis_size(level: LevelIndex) -> int:
    """Smallest n_max that holds the level"""
    return max(level.highest, 1)
