"""
Slater determinant - Phi(x_1..x_N) = det[phi_{n_i}(x_j)]
Its norm over the whole space is N!, so over any single ordering domain it is 1
"""

import numpy as np

from coupling.levels import LevelIndex
from coupling.quadrature import integrate_ordered
from errors import DomainError
from trap.basis import SingleParticleBasis


class SlaterWavefunction:
    def __init__(self, level: LevelIndex, basis: SingleParticleBasis):
        if level.highest > basis.n_max:
            raise DomainError(f"level {level} needs orbital {level.highest}, basis stops at {basis.n_max}")
        self.level = level
        self.basis = basis
        self.n_particles = level.n_particles

    def _points(self, x):
        points = np.asarray(x, dtype=float)
        single = points.ndim == 1
        points = np.atleast_2d(points)
        if points.shape[1] != self.n_particles:
            raise DomainError(f"expected {self.n_particles} coordinates per point, got {points.shape[1]}")
        return points, single

    def orbital_matrices(self, points: np.ndarray) -> np.ndarray:
        """[p, i, j] = phi_{n_i}(x_{p, j})"""
        return np.moveaxis(self.basis.values(points, self.level.quanta), 0, 1)

    def __call__(self, x):
        points, single = self._points(x)
        values = np.linalg.det(self.orbital_matrices(points))
        return float(values[0]) if single else values

    def derivative(self, x, particle: int):
        """d Phi / d x_particle (particle is 1-based): the determinant with that column differentiated"""
        if not 1 <= particle <= self.n_particles:
            raise DomainError(f"particle {particle} out of range 1..{self.n_particles}")
        points, single = self._points(x)
        matrices = self.orbital_matrices(points)
        column = points[:, particle - 1]
        matrices[:, :, particle - 1] = self.basis.derivatives(column, self.level.quanta).T
        values = np.linalg.det(matrices)
        return float(values[0]) if single else values

    def domain_norm(self, rtol: float = None):
        """Integral of |Phi|^2 over x_1 < ... < x_N; returns (value, error)"""
        a, b = self.basis.support(self.level.quanta)
        rtol = rtol or self.basis.quadrature_rtol
        return integrate_ordered(lambda y: self(y) ** 2, a, b, self.n_particles, rtol=rtol)


def slater_eval(level: LevelIndex, basis: SingleParticleBasis, x):
    """det[phi_{n_i}(x_j)] at one point (length-N sequence) or a batch of shape (P, N)"""
    return SlaterWavefunction(level, basis)(x)
