"""
Levels - unitary-limit multiplets labelled by their occupied trap orbitals
"""

import itertools
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from errors import DomainError, ParseError
from trap.basis import SingleParticleBasis


class LevelIndex(BaseModel):
    """Occupied orbitals n_1 < ... < n_N of one Slater determinant"""

    model_config = ConfigDict(frozen=True)

    quanta: List[int]
    label: Optional[int] = None

    @field_validator("quanta")
    @classmethod
    def _strictly_increasing(cls, quanta):
        if len(quanta) < 2:
            raise ValueError("a multiplet needs at least two particles")
        if quanta[0] < 0 or any(b <= a for a, b in zip(quanta, quanta[1:])):
            raise ValueError(f"quanta must be distinct, nonnegative and ascending, got {quanta}")
        return quanta

    @property
    def n_particles(self) -> int:
        return len(self.quanta)

    @property
    def highest(self) -> int:
        return self.quanta[-1]

    def energy(self, basis: SingleParticleBasis) -> float:
        """E_infinity: the noninteracting fermion energy of the occupied orbitals"""
        if self.highest > basis.n_max:
            raise DomainError(f"level {self.quanta} needs orbital {self.highest}, basis stops at {basis.n_max}")
        return float(sum(basis.energies[n] for n in self.quanta))

    def __str__(self):
        return "{" + ",".join(str(n) for n in self.quanta) + "}"


def ground_level(n: int) -> LevelIndex:
    return LevelIndex(quanta=list(range(n)), label=0)


def parse_level(text: str) -> LevelIndex:
    """"0,1,2" or "{0,1,2}" """
    body = text.strip().strip("{}")
    quanta = []
    position = 0
    for token in body.split(","):
        stripped = token.strip()
        if not stripped.isdigit():
            raise ParseError(f"invalid orbital index {stripped!r}", position)
        quanta.append(int(stripped))
        position += len(token) + 1
    if sorted(quanta) != quanta:
        quanta = sorted(quanta)
    try:
        return LevelIndex(quanta=quanta)
    except ValueError as e:
        raise DomainError(str(e)) from None


def enumerate_levels(basis: SingleParticleBasis, n: int, count: int) -> List[LevelIndex]:
    """Lowest `count` multiplets by E_infinity, ties broken lexicographically on quanta

    The j-th level never occupies an orbital above n - 1 + j, so the basis
    must reach n + count - 2.
    """
    if count < 1:
        raise DomainError("count must be positive")
    needed = n + count - 2
    if basis.n_max < needed:
        raise DomainError(f"listing {count} levels of N={n} needs orbitals up to {needed}, basis stops at {basis.n_max}")

    scale = max(abs(float(basis.energies[needed])), 1.0)
    candidates = []
    for quanta in itertools.combinations(range(needed + 1), n):
        energy = float(sum(basis.energies[q] for q in quanta))
        candidates.append((round(energy / scale, 9), quanta))
    candidates.sort()
    return [LevelIndex(quanta=list(quanta), label=i) for i, (_, quanta) in enumerate(candidates[:count])]
