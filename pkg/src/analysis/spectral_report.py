"""
Spectral Report - diagonalize a tunneling operator, cluster its levels,
label each level by S_N irrep content and parity
"""

import math
from typing import Dict, List, Optional

import numpy as np
import structlog
from pydantic import BaseModel
from scipy import linalg

from analysis.characters import irrep_multiplicities
from analysis.clustering_engine import ClusteringEngine
from analysis.tunneling import RateVector, antisymmetric_shift, build_tunneling, closed_form_n3
from config.settings import PALINDROME_RTOL, PARITY_RESIDUAL_TOL, SYMMETRY_TOL
from errors import ConsistencyError, DomainError, ParityError
from wells.orderings import parity_operator

logger = structlog.get_logger(__name__)

EVEN = "even"
ODD = "odd"
MIXED = "mixed"
NOT_APPLICABLE = "not-applicable"


class SpectralCluster(BaseModel):
    eigenvalue: float
    multiplicity: int
    irreps: Dict[str, int]
    parity: str
    eigenvectors: List[List[float]]


class SpectralReport(BaseModel):
    n_particles: int
    rates: List[float]
    with_shift: bool
    shift: float
    cluster_tol: float
    clusters: List[SpectralCluster]

    def eigenvalues(self) -> List[float]:
        values = []
        for cluster in self.clusters:
            values.extend([cluster.eigenvalue] * cluster.multiplicity)
        return values

    def trace(self) -> float:
        """Trace of the reported (possibly shifted) operator"""
        return float(sum(c.eigenvalue * c.multiplicity for c in self.clusters))

    def to_rows(self) -> List[Dict]:
        """One CSV row per cluster; irreps joined as name:count"""
        return [
            {
                "eigenvalue": c.eigenvalue,
                "multiplicity": c.multiplicity,
                "irrep": ";".join(f"{name}:{count}" for name, count in sorted(c.irreps.items())),
                "parity": c.parity,
            }
            for c in self.clusters
        ]


def check_symmetric(matrix: np.ndarray, tol: float = SYMMETRY_TOL):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"operator must be square, got shape {matrix.shape}")
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asymmetry > tol * (scale + 1.0):
        raise DomainError(f"operator is not symmetric (max asymmetry {asymmetry:.3e})")
    return matrix


def canonical_signs(vectors: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Flip each column so its first component above tol is positive"""
    vectors = vectors.copy()
    for c in range(vectors.shape[1]):
        column = vectors[:, c]
        significant = np.flatnonzero(np.abs(column) > tol)
        if significant.size and column[significant[0]] < 0:
            vectors[:, c] = -column
    return vectors


def parity_label(vectors: np.ndarray, rates, rtol: float = PALINDROME_RTOL, tol: float = PARITY_RESIDUAL_TOL) -> str:
    """even/odd for a +-1 eigenspace of the reflection; mixed if it holds both"""
    rates = rates if isinstance(rates, RateVector) else RateVector(t=list(rates))
    if not rates.is_palindromic(rtol):
        return NOT_APPLICABLE

    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    reflection = parity_operator(rates.n_particles)

    reflected = reflection.apply(vectors)
    block = vectors.T @ reflected
    residual = float(np.max(np.abs(reflected - vectors @ block))) if vectors.size else 0.0
    if residual > tol:
        raise ParityError(f"cluster is not invariant under reflection (residual {residual:.3e})")

    signs = linalg.eigvalsh((block + block.T) / 2)
    if np.all(signs > 0):
        return EVEN
    if np.all(signs < 0):
        return ODD
    return MIXED


def spectral_report(
    operator: np.ndarray,
    rates,
    cluster_tol: Optional[float] = None,
    with_shift: bool = False,
    engine: Optional[ClusteringEngine] = None,
) -> SpectralReport:
    """Eigen-decomposition of a tunneling operator with labelled, clustered levels"""
    rates = rates if isinstance(rates, RateVector) else RateVector(t=list(rates))
    n = rates.n_particles
    matrix = check_symmetric(operator)
    if matrix.shape[0] != math.factorial(n):
        raise DomainError(f"operator size {matrix.shape[0]} does not match N={n}")
    if cluster_tol is not None and cluster_tol <= 0:
        raise DomainError("cluster_tol must be positive")

    engine = engine or ClusteringEngine()
    eigenvalues, eigenvectors = linalg.eigh(matrix)

    shift = antisymmetric_shift(n, rates) if with_shift else 0.0
    shifted = eigenvalues + shift
    clusters = engine.cluster_eigenvalues(shifted, cluster_tol)
    tol = cluster_tol if cluster_tol is not None else engine.tolerance_for(shifted)

    labelled = []
    for cluster in clusters:
        vectors = canonical_signs(eigenvectors[:, cluster["start"] : cluster["stop"]])
        labelled.append(
            SpectralCluster(
                eigenvalue=cluster["eigenvalue"],
                multiplicity=cluster["multiplicity"],
                irreps=irrep_multiplicities(vectors, n),
                parity=parity_label(vectors, rates),
                eigenvectors=vectors.T.tolist(),
            )
        )

    logger.info("spectrum_built", n_particles=n, shift=shift, **engine.summarize(clusters))
    return SpectralReport(n_particles=n, rates=list(rates.t), with_shift=with_shift, shift=shift, cluster_tol=tol, clusters=labelled)


def tunneling_spectrum(n: int, rates, cluster_tol: Optional[float] = None, with_shift: bool = False) -> SpectralReport:
    """build_tunneling followed by spectral_report"""
    rates = rates if isinstance(rates, RateVector) else RateVector(t=list(rates))
    return spectral_report(build_tunneling(n, rates), rates, cluster_tol=cluster_tol, with_shift=with_shift)


def closed_form_check(report: SpectralReport) -> List[float]:
    """Three-particle levels against the closed-form eigenvalues, shift included

    Returns the closed-form values in ascending order; a disagreement beyond the
    clustering tolerance raises ConsistencyError.
    """
    if report.n_particles != 3:
        raise DomainError(f"the closed form covers N=3 only, got N={report.n_particles}")
    u, t = report.rates
    expected = np.asarray(closed_form_n3(t, u)) + report.shift
    deviation = float(np.max(np.abs(np.sort(report.eigenvalues()) - expected)))
    allowed = report.cluster_tol + 1e-9 * (float(np.max(np.abs(expected))) + 1.0)
    if deviation > allowed:
        raise ConsistencyError(f"spectrum deviates from the closed form by {deviation:.3e} (allowed {allowed:.3e})")
    logger.debug("closed_form_checked", deviation=deviation)
    return expected.tolist()
