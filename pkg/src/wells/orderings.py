"""
Orderings - wells of configuration space and the operators that permute them
One ordering <i j k> is the domain x_i < x_j < x_k; the well basis is lexicographic
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

import numpy as np
import structlog
from scipy import sparse

from config.settings import DENSE_CEILING, ORDERING_CEILING
from errors import DimensionGuardError, DomainError
from wells.permutation import Permutation

logger = structlog.get_logger(__name__)

# Letters used for the six wells of three particles
THREE_PARTICLE_LETTERS = {
    "A": (1, 2, 3),
    "B": (1, 3, 2),
    "C": (3, 1, 2),
    "D": (3, 2, 1),
    "E": (2, 3, 1),
    "F": (2, 1, 3),
}


@dataclass(frozen=True)
class Ordering:
    """Spatial order of particle labels, read left to right"""

    seq: Tuple[int, ...]

    def __post_init__(self):
        seq = tuple(int(v) for v in self.seq)
        if sorted(seq) != list(range(1, len(seq) + 1)):
            raise DomainError(f"{list(seq)} is not an ordering of 1..{len(seq)}")
        object.__setattr__(self, "seq", seq)

    @property
    def size(self) -> int:
        return len(self.seq)

    def reversed(self) -> "Ordering":
        return Ordering(self.seq[::-1])

    def to_list(self) -> List[int]:
        return list(self.seq)

    def __str__(self):
        sep = "," if self.size > 9 else ""
        return "<" + sep.join(str(s) for s in self.seq) + ">"


def check_size(n: int, ceiling: int = ORDERING_CEILING):
    if n < 2:
        raise DomainError(f"need at least two particles, got N={n}")
    if n > ceiling:
        raise DimensionGuardError(f"N={n} exceeds the ordering ceiling {ceiling} ({math.factorial(n)} wells)")


@lru_cache(maxsize=None)
def _orderings(n: int) -> Tuple[Ordering, ...]:
    return tuple(Ordering(p) for p in itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _index_table(n: int) -> Dict[Tuple[int, ...], int]:
    return {w.seq: i for i, w in enumerate(_orderings(n))}


def all_orderings(n: int, ceiling: int = ORDERING_CEILING) -> List[Ordering]:
    """All N! orderings in lexicographic order; list position is the well index"""
    check_size(n, ceiling)
    return list(_orderings(n))


def ordering_index(w: Ordering) -> int:
    """Lexicographic rank via the Lehmer code"""
    n = w.size
    index = 0
    remaining = list(range(1, n + 1))
    for position, label in enumerate(w.seq):
        rank = remaining.index(label)
        index += rank * math.factorial(n - 1 - position)
        remaining.pop(rank)
    return index


def ordering_from_index(index: int, n: int) -> Ordering:
    if not 0 <= index < math.factorial(n):
        raise DomainError(f"well index {index} out of range for N={n}")
    remaining = list(range(1, n + 1))
    seq = []
    for position in range(n):
        block = math.factorial(n - 1 - position)
        rank, index = divmod(index, block)
        seq.append(remaining.pop(rank))
    return Ordering(tuple(seq))


def particle_action(p: Permutation, w: Ordering) -> Ordering:
    """Relabel particles in place: entry k becomes p(w[k])"""
    _check_match(p, w)
    return Ordering(tuple(p(label) for label in w.seq))


def ordering_action(q: Permutation, w: Ordering) -> Ordering:
    """Move positions: the entry at position k lands at position q(k)"""
    _check_match(q, w)
    result = [0] * w.size
    for k, label in enumerate(w.seq, start=1):
        result[q(k) - 1] = label
    return Ordering(tuple(result))


def _check_match(p: Permutation, w: Ordering):
    if p.degree != w.size:
        raise DomainError(f"size mismatch: permutation on {p.degree} symbols, ordering of {w.size}")


def letter_map() -> Dict[str, Ordering]:
    """Letter names of the three-particle wells"""
    return {letter: Ordering(seq) for letter, seq in THREE_PARTICLE_LETTERS.items()}


def letter_of(w: Ordering) -> str:
    for letter, seq in THREE_PARTICLE_LETTERS.items():
        if seq == w.seq:
            return letter
    raise DomainError(f"{w} has no letter name (only three-particle wells are lettered)")


@dataclass(frozen=True, eq=False)
class WellOperator:
    """Permutation matrix on the well basis, stored as its index image

    Column j holds a single 1 in row images[j].
    """

    n_particles: int
    images: np.ndarray = field(repr=False)

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.int64)
        size = math.factorial(self.n_particles)
        if images.shape != (size,):
            raise DomainError(f"expected {size} images, got shape {images.shape}")
        if not np.array_equal(np.sort(images), np.arange(size)):
            raise DomainError("map on wells is not a bijection")
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    @property
    def size(self) -> int:
        return self.images.shape[0]

    def to_dense(self, ceiling: int = DENSE_CEILING) -> np.ndarray:
        if self.n_particles > ceiling:
            raise DimensionGuardError(f"dense {self.size}x{self.size} matrix refused above N={ceiling}; use to_sparse()")
        matrix = np.zeros((self.size, self.size))
        matrix[self.images, np.arange(self.size)] = 1.0
        return matrix

    def to_sparse(self) -> sparse.csr_matrix:
        data = np.ones(self.size)
        return sparse.csr_matrix((data, (self.images, np.arange(self.size))), shape=(self.size, self.size))

    def __matmul__(self, other):
        if isinstance(other, WellOperator):
            if other.n_particles != self.n_particles:
                raise DomainError("cannot compose well operators of different N")
            return WellOperator(self.n_particles, self.images[other.images])
        return self.apply(other)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """Move the amplitude of well j to well images[j] (rows of `vectors` are wells)"""
        vectors = np.asarray(vectors)
        result = np.empty_like(vectors)
        result[self.images] = vectors
        return result

    def transpose(self) -> "WellOperator":
        inverse = np.empty_like(self.images)
        inverse[self.images] = np.arange(self.size)
        return WellOperator(self.n_particles, inverse)

    def trace(self) -> int:
        return int(np.count_nonzero(self.images == np.arange(self.size)))

    def determinant(self) -> int:
        """Sign of the induced permutation of wells"""
        seen = np.zeros(self.size, dtype=bool)
        parity = 0
        for start in range(self.size):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            parity += length - 1
        return -1 if parity % 2 else 1

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.size)))

    def commutator_norm(self, matrix) -> float:
        """max |[M, P]| entrywise for a dense or sparse matrix M"""
        if sparse.issparse(matrix):
            p = self.to_sparse()
            diff = matrix @ p - p @ matrix
            return float(abs(diff).max()) if diff.nnz else 0.0
        matrix = np.asarray(matrix)
        mp = matrix[:, self.images]
        pm = np.empty_like(matrix)
        pm[self.images, :] = matrix
        return float(np.max(np.abs(mp - pm))) if matrix.size else 0.0

    def __eq__(self, other):
        return isinstance(other, WellOperator) and self.n_particles == other.n_particles and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash((self.n_particles, self.images.tobytes()))


def well_operator(f: Callable[[Ordering], Ordering], n: int) -> WellOperator:
    """Matrix of a map on wells: M[idx(f(w)), idx(w)] = 1"""
    check_size(n)
    table = _index_table(n)
    images = np.empty(len(table), dtype=np.int64)
    for j, w in enumerate(_orderings(n)):
        image = f(w)
        if not isinstance(image, Ordering) or image.size != n:
            raise DomainError(f"map sends {w} outside the wells of N={n}")
        images[j] = table[image.seq]
    return WellOperator(n, images)


def particle_operator(p: Permutation, n: int = None) -> WellOperator:
    return well_operator(lambda w: particle_action(p, w), n or p.degree)


def ordering_operator(q: Permutation, n: int = None) -> WellOperator:
    return well_operator(lambda w: ordering_action(q, w), n or q.degree)


def parity_operator(n: int) -> WellOperator:
    """Spatial reflection: every ordering is read right to left"""
    return well_operator(lambda w: w.reversed(), n)


def well_transposition(a: Ordering, b: Ordering) -> WellOperator:
    """Exchange wells a and b, fix every other well"""
    if a.size != b.size:
        raise DomainError("wells belong to different N")
    if a == b:
        raise DomainError(f"cannot transpose {a} with itself")
    n = a.size
    check_size(n)
    table = _index_table(n)
    images = np.arange(len(table))
    i, j = table[a.seq], table[b.seq]
    images[i], images[j] = j, i
    return WellOperator(n, images)
