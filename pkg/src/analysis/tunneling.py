"""
Tunneling Operator - nearest-neighbour hopping between wells, one rate per bond class
T = -sum_k t[k] * sum over class-k edges of the well transposition of that edge
"""

import math
from typing import List, Sequence, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import sparse

from config.settings import DENSE_CEILING, PALINDROME_RTOL
from errors import DimensionGuardError, DomainError, ParseError
from wells.bonds import BondEdge, bond_edges
from wells.orderings import WellOperator, check_size, ordering_index, well_transposition

logger = structlog.get_logger(__name__)


class RateVector(BaseModel):
    """Tunneling rate per bond class, t[0] belongs to bond 1"""

    model_config = ConfigDict(frozen=True)

    t: List[float]

    @field_validator("t")
    @classmethod
    def _nonnegative(cls, values):
        if not values:
            raise ValueError("at least one rate is required")
        for value in values:
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"rates must be finite and nonnegative, got {value}")
        return values

    @property
    def n_particles(self) -> int:
        return len(self.t) + 1

    def is_palindromic(self, rtol: float = PALINDROME_RTOL) -> bool:
        scale = max(self.t) if self.t else 0.0
        return all(abs(a - b) <= rtol * scale for a, b in zip(self.t, reversed(self.t)))

    def scaled(self, factor: float) -> "RateVector":
        return RateVector(t=[factor * value for value in self.t])


def parse_rates(text: str) -> RateVector:
    """Comma separated rates, e.g. "1,0.5,1" """
    values = []
    position = 0
    for token in text.split(","):
        stripped = token.strip()
        try:
            values.append(float(stripped))
        except ValueError:
            raise ParseError(f"invalid rate {stripped!r}", position) from None
        position += len(token) + 1
    try:
        return RateVector(t=values)
    except ValueError as e:
        raise DomainError(str(e)) from None


def _as_rates(rates: Union[RateVector, Sequence[float]]) -> RateVector:
    return rates if isinstance(rates, RateVector) else RateVector(t=list(rates))


def edge_operator(edge: BondEdge) -> WellOperator:
    return well_transposition(edge.a, edge.b)


def build_tunneling(n: int, rates, sparse_format: bool = False):
    """Assemble T for N particles

    Each bond class is a perfect matching of the wells, so its edge sum is
    (|class| - 1) * I + A_k with A_k the class adjacency matrix.
    Returns a dense ndarray, or a CSR matrix when sparse_format is set.
    """
    rates = _as_rates(rates)
    check_size(n)
    if len(rates.t) != n - 1:
        raise DomainError(f"N={n} needs {n - 1} rates, got {len(rates.t)}")
    if not sparse_format and n > DENSE_CEILING:
        raise DimensionGuardError(f"dense assembly refused above N={DENSE_CEILING}; pass sparse_format=True")

    size = math.factorial(n)
    class_size = size // 2
    diagonal = -sum(t * (class_size - 1) for t in rates.t)

    rows, cols, values = [], [], []
    for edge in bond_edges(n):
        rate = rates.t[edge.bond - 1]
        if rate == 0.0:
            continue
        i, j = ordering_index(edge.a), ordering_index(edge.b)
        rows += [i, j]
        cols += [j, i]
        values += [-rate, -rate]

    off_diagonal = sparse.csr_matrix((values, (rows, cols)), shape=(size, size))
    operator = off_diagonal + diagonal * sparse.identity(size, format="csr")

    logger.debug("tunneling_built", n_particles=n, wells=size, rates=rates.t)
    if sparse_format:
        return operator.tocsr()
    return operator.toarray()


def antisymmetric_shift(n: int, rates) -> float:
    """Identity multiple that moves the totally antisymmetric level to zero

    The sign vector of the wells has eigenvalue -sum_k t[k] (N!/2 - 2).
    """
    rates = _as_rates(rates)
    return float(sum(t * (math.factorial(n) / 2 - 2) for t in rates.t))


def tunneling_trace(n: int, rates) -> float:
    rates = _as_rates(rates)
    size = math.factorial(n)
    return float(-sum(t * (size // 2) * (size - 2) for t in rates.t))


def closed_form_n3(t: float, u: float) -> List[float]:
    """Ascending eigenvalues of the three-particle operator with rates (u, t)"""
    s = t + u
    root = math.sqrt(t * t - t * u + u * u)
    return sorted([-3 * s, -2 * s - root, -2 * s - root, -2 * s + root, -2 * s + root, -s])
