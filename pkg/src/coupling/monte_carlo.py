"""
Monte Carlo estimate of a bond boundary integral
Uniform points in the support cube are sorted, which samples the ordered
region uniformly; its volume is (b - a)^d / d!
"""

import math

import numpy as np
import structlog

from config.settings import DEFAULT_SEED, MONTE_CARLO_CHUNK, MONTE_CARLO_SAMPLES
from coupling.coefficients import MonteCarloCheck, check_request, boundary_integrand, boundary_integral
from coupling.levels import LevelIndex
from coupling.slater import SlaterWavefunction
from errors import DomainError
from trap.basis import SingleParticleBasis
from wells.orderings import Ordering

logger = structlog.get_logger(__name__)


def monte_carlo_bond_integral(
    level: LevelIndex,
    basis: SingleParticleBasis,
    k: int,
    samples: int = MONTE_CARLO_SAMPLES,
    seed: int = DEFAULT_SEED,
    chunk: int = MONTE_CARLO_CHUNK,
):
    """Returns (estimate, standard error) of the same integral the quadrature computes"""
    check_request(level, k)
    if samples < 2:
        raise DomainError("need at least two Monte Carlo samples")

    n = level.n_particles
    dim = n - 1
    a, b = basis.support(level.quanta)
    volume = (b - a) ** dim / math.factorial(dim)
    integrand = boundary_integrand(SlaterWavefunction(level, basis), k, Ordering(tuple(range(1, n + 1))))

    rng = np.random.default_rng(seed)
    sums = []
    squares = []
    remaining = samples
    while remaining > 0:
        size = min(chunk, remaining)
        y = np.sort(rng.uniform(a, b, size=(size, dim)), axis=1)
        values = integrand(y)
        sums.append(float(np.sum(values)))
        squares.append(float(np.sum(values * values)))
        remaining -= size

    mean = math.fsum(sums) / samples
    variance = max(math.fsum(squares) / samples - mean * mean, 0.0) * samples / (samples - 1)
    estimate = volume * mean
    standard_error = volume * math.sqrt(variance / samples)
    logger.debug("monte_carlo_done", level=str(level), bond=k, samples=samples, estimate=estimate, error=standard_error)
    return estimate, standard_error


def monte_carlo_check(
    level: LevelIndex,
    basis: SingleParticleBasis,
    k: int,
    g: float,
    samples: int = MONTE_CARLO_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> MonteCarloCheck:
    """Compare t[k] from quadrature with the Monte Carlo estimate, both divided by g"""
    quadrature, quadrature_error = boundary_integral(level, basis, k)
    estimate, standard_error = monte_carlo_bond_integral(level, basis, k, samples, seed)
    combined = math.hypot(standard_error, quadrature_error)
    return MonteCarloCheck(
        bond=k,
        samples=samples,
        seed=seed,
        value=estimate / g,
        standard_error=standard_error / g,
        quadrature_value=quadrature / g,
        deviation_in_errors=abs(estimate - quadrature) / combined if combined > 0 else 0.0,
    )
