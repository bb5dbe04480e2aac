"""
Character tables of S_2, S_3, S_4 and projection of invariant subspaces onto irreps
Classes are labelled by cycle type; irreps by name with their partition alongside
"""

import math
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
import structlog

from config.settings import CHARACTER_RESIDUAL_TOL
from errors import IrrepDecompositionError
from wells.orderings import WellOperator, particle_operator
from wells.permutation import Permutation

logger = structlog.get_logger(__name__)

UNLABELED = "unlabeled"

CHARACTER_TABLES = {
    2: {
        "classes": [(1, 1), (2,)],
        "sizes": [1, 1],
        "irreps": {
            "trivial": {"partition": [2], "characters": [1, 1]},
            "sign": {"partition": [1, 1], "characters": [1, -1]},
        },
    },
    3: {
        "classes": [(1, 1, 1), (2, 1), (3,)],
        "sizes": [1, 3, 2],
        "irreps": {
            "trivial": {"partition": [3], "characters": [1, 1, 1]},
            "sign": {"partition": [1, 1, 1], "characters": [1, -1, 1]},
            "standard": {"partition": [2, 1], "characters": [2, 0, -1]},
        },
    },
    4: {
        "classes": [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)],
        "sizes": [1, 6, 3, 8, 6],
        "irreps": {
            "trivial": {"partition": [4], "characters": [1, 1, 1, 1, 1]},
            "sign": {"partition": [1, 1, 1, 1], "characters": [1, -1, 1, 1, -1]},
            "standard": {"partition": [3, 1], "characters": [3, 1, -1, 0, -1]},
            "standard_sign": {"partition": [2, 1, 1], "characters": [3, -1, -1, 0, 1]},
            "two_dim": {"partition": [2, 2], "characters": [2, 0, 2, -1, 0]},
        },
    },
}


def has_table(n: int) -> bool:
    return n in CHARACTER_TABLES


def irrep_dimension(n: int, name: str) -> int:
    return CHARACTER_TABLES[n]["irreps"][name]["characters"][0]


def class_representative(cycle_type: Tuple[int, ...]) -> Permutation:
    """Permutation with the given cycle type, cycles on consecutive symbols"""
    n = sum(cycle_type)
    cycles = []
    start = 1
    for length in cycle_type:
        cycles.append(list(range(start, start + length)))
        start += length
    return Permutation.from_cycles(cycles, n)


@lru_cache(maxsize=None)
def class_operators(n: int) -> Tuple[WellOperator, ...]:
    """Particle-permutation operator of one representative per class"""
    return tuple(particle_operator(class_representative(ct)) for ct in CHARACTER_TABLES[n]["classes"])


@lru_cache(maxsize=None)
def generator_operators(n: int) -> Tuple[WellOperator, ...]:
    """Adjacent particle transpositions, enough to test invariance under all of S_N"""
    return tuple(particle_operator(Permutation.transposition(n, i, i + 1)) for i in range(1, n))


def subspace_character(vectors: np.ndarray, operator: WellOperator) -> float:
    """trace(V^T P V) for orthonormal columns V"""
    return float(np.sum(vectors[operator.images] * vectors))


def invariance_residual(vectors: np.ndarray, operators) -> float:
    """max |P V - V V^T P V| over the given operators"""
    residual = 0.0
    for operator in operators:
        moved = operator.apply(vectors)
        projected = vectors @ (vectors.T @ moved)
        residual = max(residual, float(np.max(np.abs(moved - projected))) if moved.size else 0.0)
    return residual


def decompose_character(characters: List[float], n: int, tol: float = CHARACTER_RESIDUAL_TOL) -> Dict[str, int]:
    """Multiplicities m = (1/|G|) sum_c |c| chi(c) chi_irrep(c); raise if not integral"""
    table = CHARACTER_TABLES[n]
    order = math.factorial(n)
    weighted = np.asarray(table["sizes"], dtype=float) * np.asarray(characters, dtype=float)

    multiplicities = {}
    worst = 0.0
    for name, irrep in table["irreps"].items():
        raw = float(np.dot(weighted, irrep["characters"])) / order
        rounded = round(raw)
        worst = max(worst, abs(raw - rounded))
        if rounded < 0:
            raise IrrepDecompositionError(f"negative multiplicity for irrep {name}", residual=abs(raw))
        if rounded:
            multiplicities[name] = int(rounded)

    if worst > tol:
        raise IrrepDecompositionError("character projection is not integral; subspace is not invariant", residual=worst)
    return multiplicities


def irrep_multiplicities(vectors: np.ndarray, n: int, tol: float = CHARACTER_RESIDUAL_TOL) -> Dict[str, int]:
    """Irrep content of the particle-permutation action on span(vectors)

    vectors holds orthonormal columns over the N! wells. N >= 5 is reported
    as {"unlabeled": dimension} without a table lookup.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    dimension = vectors.shape[1]

    if not has_table(n):
        return {UNLABELED: dimension}

    residual = invariance_residual(vectors, generator_operators(n))
    if residual > tol:
        raise IrrepDecompositionError("eigenvector cluster is not invariant under particle permutations", residual=residual)

    characters = [subspace_character(vectors, op) for op in class_operators(n)]
    multiplicities = decompose_character(characters, n, tol)

    total = sum(m * irrep_dimension(n, name) for name, m in multiplicities.items())
    if total != dimension:
        raise IrrepDecompositionError(f"irrep dimensions sum to {total}, cluster has {dimension}", residual=float(abs(total - dimension)))

    logger.debug("irreps_decomposed", n_particles=n, dimension=dimension, irreps=multiplicities)
    return multiplicities
