"""
Two particles in a harmonic trap with a contact interaction (hbar = m = omega = 1)
The relative motion is solvable: even states obey
    g = -2 sqrt(2) Gamma(3/4 - E/2) / Gamma(1/4 - E/2)
with exactly one root in each interval (2j + 1/2, 2j + 3/2) for g > 0.
"""

import math
from typing import List

import numpy as np
from scipy.optimize import brentq
from scipy.special import rgamma

from errors import ConvergenceError, DomainError

SQRT8 = 2.0 * math.sqrt(2.0)


def _quantization(energy: float, g: float) -> float:
    """g / Gamma(3/4 - E/2) + 2 sqrt(2) / Gamma(1/4 - E/2); zero on the spectrum"""
    return g * rgamma(0.75 - energy / 2) + SQRT8 * rgamma(0.25 - energy / 2)


def relative_motion_energies(g: float, count: int = 1) -> List[float]:
    """Lowest `count` even-parity relative energies"""
    if not (g >= 0 and math.isfinite(g)):
        raise DomainError(f"g must be finite and nonnegative, got {g}")
    if count < 1:
        raise DomainError("count must be positive")
    if g == 0:
        return [2 * j + 0.5 for j in range(count)]

    energies = []
    for j in range(count):
        low, high = 2 * j + 0.5, 2 * j + 1.5
        try:
            energies.append(float(brentq(_quantization, low, high, args=(g,), xtol=1e-14, rtol=1e-14)))
        except ValueError as e:
            raise ConvergenceError(f"no root bracketed in ({low}, {high}) at g={g}: {e}") from None
    return energies


def odd_relative_energies(count: int = 1) -> List[float]:
    """Odd relative states never feel the contact interaction"""
    return [2 * j + 1.5 for j in range(count)]


def two_body_energies(g: float, count: int) -> List[float]:
    """Lowest `count` total energies: relative energy plus center of mass n + 1/2"""
    if count < 1:
        raise DomainError("count must be positive")
    relative = relative_motion_energies(g, count) + odd_relative_energies(count)
    totals = sorted(e + n + 0.5 for e in relative for n in range(count))
    return totals[:count]


def two_body_exact_splitting(g: float) -> float:
    """Gap of the ground two-particle multiplet: odd state 3/2 minus even ground state"""
    return 1.5 - relative_motion_energies(g, 1)[0]


def quantization_residual(energy: float, g: float) -> float:
    """Quantization function at E relative to the size of its two terms"""
    value = _quantization(energy, g)
    scale = abs(g * rgamma(0.75 - energy / 2)) + abs(SQRT8 * rgamma(0.25 - energy / 2))
    return float(abs(value) / scale) if scale > 0 else float(np.inf)
