"""
Trap Basis - single-particle eigenstates for harmonic, box and grid-sampled traps
Trap documents are JSON, discriminated by "kind"
"""

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator
from scipy.interpolate import CubicSpline
from scipy.linalg import eig_banded as eigh_banded

from config.settings import (
    FD_DERIVATIVE_STEP,
    GRID_QUADRATURE_RTOL,
    POINTS_PER_HALF_WAVELENGTH,
    QUADRATURE_RTOL,
    WAVEFUNCTION_CUTOFF,
)
from errors import DomainError, ResolutionError
from trap.hermite import harmonic_half_width, hermite_derivatives, hermite_functions

logger = structlog.get_logger(__name__)


class HarmonicTrap(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["harmonic"] = "harmonic"


class BoxTrap(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kind: Literal["box"] = "box"
    length: float = Field(gt=0, alias="L")


class CustomTrap(BaseModel):
    """Potential sampled on a uniform grid; hard walls at both grid ends"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kind: Literal["custom"] = "custom"
    x: List[float]
    values: List[float] = Field(alias="V")

    @field_validator("x")
    @classmethod
    def _uniform_grid(cls, x):
        if len(x) < 3:
            raise ValueError("custom grid needs at least 3 points")
        steps = np.diff(np.asarray(x, dtype=float))
        if np.any(steps <= 0):
            raise ValueError("custom grid must be strictly increasing")
        slack = 1e-12 * steps.mean() + 4 * np.finfo(float).eps * np.max(np.abs(x))
        if np.max(np.abs(steps - steps.mean())) > slack:
            raise ValueError("custom grid spacing must be uniform")
        return x

    @model_validator(mode="after")
    def _matching_lengths(self):
        if len(self.values) != len(self.x):
            raise ValueError(f"{len(self.x)} grid points but {len(self.values)} potential values")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("potential values must be finite")
        return self

    @classmethod
    def sample(cls, potential, a: float, b: float, points: int) -> "CustomTrap":
        x = np.linspace(a, b, points)
        return cls(x=x.tolist(), values=np.asarray(potential(x), dtype=float).tolist())


TrapSpec = Annotated[Union[HarmonicTrap, BoxTrap, CustomTrap], Field(discriminator="kind")]
_trap_adapter = TypeAdapter(TrapSpec)


def parse_trap(text: str) -> TrapSpec:
    return _trap_adapter.validate_json(text)


def load_trap(path) -> TrapSpec:
    path = Path(path)
    if not path.exists():
        raise DomainError(f"trap file not found: {path}")
    return parse_trap(path.read_text(encoding="utf-8"))


def trap_to_dict(trap: TrapSpec) -> dict:
    return json.loads(trap.model_dump_json(by_alias=True))


class SingleParticleBasis(ABC):
    """Energies eps_0 < eps_1 < ... and real orbitals phi_n(x) for n <= n_max"""

    kind = "abstract"
    quadrature_rtol = QUADRATURE_RTOL

    def __init__(self, n_max: int, energies: np.ndarray):
        self.n_max = n_max
        self.energies = np.asarray(energies, dtype=float)

    @property
    def domain(self) -> Tuple[float, float]:
        return (-np.inf, np.inf)

    @abstractmethod
    def values(self, x, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        """phi_n(x) for n in indices (default all); shape (len(indices), *x.shape)"""

    @abstractmethod
    def derivatives(self, x, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        """phi_n'(x), same layout as values()"""

    @abstractmethod
    def support(self, indices: Optional[Sequence[int]] = None) -> Tuple[float, float]:
        """Interval outside which every requested orbital is negligible"""

    def reflection_parities(self) -> Optional[np.ndarray]:
        """(-1)^n when the trap is reflection symmetric, else None"""
        return None

    def evaluate(self, n: int, x):
        self._check_index(n)
        result = self.values(x, [n])[0]
        return float(result) if np.ndim(result) == 0 else result

    def overlap_matrix(self) -> np.ndarray:
        """<phi_m|phi_n> by the basis' own Gauss-Legendre quadrature"""
        from coupling.quadrature import integrate_1d

        a, b = self.support()

        def products(x):
            phi = self.values(x)
            return np.einsum("mq,nq->qmn", phi, phi)

        matrix, _ = integrate_1d(products, a, b, rtol=self.quadrature_rtol)
        return matrix

    def _indices(self, indices):
        if indices is None:
            return list(range(self.n_max + 1))
        indices = [int(i) for i in indices]
        for n in indices:
            self._check_index(n)
        return indices

    def _check_index(self, n: int):
        if not 0 <= n <= self.n_max:
            raise DomainError(f"orbital index {n} out of range 0..{self.n_max}")


class HarmonicBasis(SingleParticleBasis):
    kind = "harmonic"

    def __init__(self, n_max: int):
        super().__init__(n_max, np.arange(n_max + 1) + 0.5)

    def values(self, x, indices=None):
        indices = self._indices(indices)
        return hermite_functions(max(indices), x)[indices]

    def derivatives(self, x, indices=None):
        indices = self._indices(indices)
        return hermite_derivatives(max(indices), x)[indices]

    def support(self, indices=None):
        indices = self._indices(indices)
        half_width = harmonic_half_width(max(indices), WAVEFUNCTION_CUTOFF)
        return (-half_width, half_width)

    def reflection_parities(self):
        return (-1.0) ** np.arange(self.n_max + 1)


class BoxBasis(SingleParticleBasis):
    """Infinite square well on [0, L]"""

    kind = "box"

    def __init__(self, n_max: int, length: float):
        self.length = float(length)
        energies = (np.arange(n_max + 1) + 1) ** 2 * np.pi**2 / (2 * self.length**2)
        super().__init__(n_max, energies)

    @property
    def domain(self):
        return (0.0, self.length)

    def _wavenumbers(self, indices):
        return (np.asarray(indices, dtype=float) + 1) * np.pi / self.length

    def values(self, x, indices=None):
        indices = self._indices(indices)
        x = np.asarray(x, dtype=float)
        k = self._wavenumbers(indices).reshape((-1,) + (1,) * x.ndim)
        inside = (x >= 0) & (x <= self.length)
        return np.where(inside, np.sqrt(2 / self.length) * np.sin(k * x), 0.0)

    def derivatives(self, x, indices=None):
        indices = self._indices(indices)
        x = np.asarray(x, dtype=float)
        k = self._wavenumbers(indices).reshape((-1,) + (1,) * x.ndim)
        inside = (x >= 0) & (x <= self.length)
        return np.where(inside, np.sqrt(2 / self.length) * k * np.cos(k * x), 0.0)

    def support(self, indices=None):
        return (0.0, self.length)

    def reflection_parities(self):
        return (-1.0) ** np.arange(self.n_max + 1)


class GridBasis(SingleParticleBasis):
    """Fourth-order (five-point) finite differences on the interior grid points

    Eigenvectors are scaled to unit continuum norm, interpolated by cubic
    splines, and signed positive at their leftmost antinode.
    """

    kind = "custom"
    quadrature_rtol = GRID_QUADRATURE_RTOL

    def __init__(self, n_max: int, trap: CustomTrap, derivative_step: float = FD_DERIVATIVE_STEP):
        x = np.asarray(trap.x, dtype=float)
        potential = np.asarray(trap.values, dtype=float)
        dx = float(x[1] - x[0])
        interior = potential[1:-1]
        if interior.size < n_max + 1:
            raise ResolutionError(f"{interior.size} interior points cannot hold {n_max + 1} states")

        # lower band storage of -1/2 d2/dx2 + V; the stencil sees zeros past the walls
        band = np.zeros((3, interior.size))
        band[0] = 1.25 / dx**2 + interior
        band[1, :-1] = -2.0 / (3.0 * dx**2)
        band[2, :-2] = 1.0 / (24.0 * dx**2)
        energies, vectors = eigh_banded(band, lower=True, select="i", select_range=(0, n_max))

        self.grid = x
        self.potential = potential
        self.dx = dx
        self.derivative_step = derivative_step
        self._check_resolution(energies, n_max)

        states = np.zeros((n_max + 1, x.size))
        states[:, 1:-1] = vectors.T / np.sqrt(dx)
        for n in range(n_max + 1):
            states[n] *= self._antinode_sign(states[n])
        self.grid_states = states
        self._splines = [CubicSpline(x, states[n]) for n in range(n_max + 1)]

        super().__init__(n_max, energies)
        logger.debug("grid_basis_built", points=x.size, n_max=n_max, highest_energy=float(energies[-1]))

    def _check_resolution(self, energies, n_max):
        wall = min(self.potential[0], self.potential[-1])
        if energies[-1] >= wall:
            raise ResolutionError(
                f"state {n_max} at energy {energies[-1]:.6g} is not below the boundary potential {wall:.6g}; widen the grid"
            )
        if np.any(np.diff(energies) <= 0):
            raise ResolutionError("grid eigenvalues are not strictly ascending")
        max_wavenumber = np.sqrt(2.0 * max(energies[-1] - float(np.min(self.potential)), 0.0))
        if max_wavenumber > 0:
            half_wavelength = np.pi / max_wavenumber
            if self.dx > half_wavelength / POINTS_PER_HALF_WAVELENGTH:
                raise ResolutionError(
                    f"grid spacing {self.dx:.3g} gives fewer than {POINTS_PER_HALF_WAVELENGTH} points per half-wavelength of state {n_max}"
                )

    @staticmethod
    def _antinode_sign(state):
        magnitude = np.abs(state)
        floor = 1e-3 * magnitude.max()
        for i in range(1, state.size - 1):
            if magnitude[i] > floor and magnitude[i] >= magnitude[i - 1] and magnitude[i] >= magnitude[i + 1]:
                return 1.0 if state[i] > 0 else -1.0
        return 1.0

    @property
    def domain(self):
        return (float(self.grid[0]), float(self.grid[-1]))

    def values(self, x, indices=None):
        indices = self._indices(indices)
        x = np.asarray(x, dtype=float)
        inside = (x >= self.grid[0]) & (x <= self.grid[-1])
        return np.stack([np.where(inside, self._splines[n](x), 0.0) for n in indices])

    def derivatives(self, x, indices=None):
        """Five-point central differences of the interpolated orbitals"""
        indices = self._indices(indices)
        return self._five_point(np.asarray(x, dtype=float), indices, self.derivative_step)

    def _five_point(self, x, indices, h):
        f = lambda shift: self.values(x + shift, indices)
        return (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h)

    def derivative_discrepancy(self, x, indices=None) -> float:
        """Richardson check: max difference between steps h and 2h"""
        indices = self._indices(indices)
        x = np.asarray(x, dtype=float)
        h = self.derivative_step
        return float(np.max(np.abs(self._five_point(x, indices, h) - self._five_point(x, indices, 2 * h))))

    def support(self, indices=None):
        return self.domain

    def reflection_parities(self):
        mirrored = np.allclose(self.potential, self.potential[::-1], rtol=1e-12, atol=1e-12)
        centered = np.isclose(self.grid[0], -self.grid[-1], atol=1e-12 * max(1.0, abs(self.grid[-1])))
        if mirrored and centered:
            return np.array([1.0 if self._parity_of(n) > 0 else -1.0 for n in range(self.n_max + 1)])
        return None

    def _parity_of(self, n):
        state = self.grid_states[n]
        return float(np.dot(state, state[::-1]))


def eigenbasis(trap: TrapSpec, n_max: int) -> SingleParticleBasis:
    """Lowest n_max + 1 single-particle states of a trap"""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    if isinstance(trap, HarmonicTrap):
        return HarmonicBasis(n_max)
    if isinstance(trap, BoxTrap):
        return BoxBasis(n_max, trap.length)
    if isinstance(trap, CustomTrap):
        return GridBasis(n_max, trap)
    raise DomainError(f"unknown trap kind {getattr(trap, 'kind', trap)!r}")


def evaluate(basis: SingleParticleBasis, n: int, x):
    """phi_n(x); zero outside a box or grid"""
    return basis.evaluate(n, x)
