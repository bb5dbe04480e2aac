"""
Clustering Engine - Groups sorted eigenvalues into degenerate levels
Flags gap structures too close to the tolerance to call either way
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog

from config.settings import CLUSTER_AMBIGUITY_FACTOR, CLUSTER_RELATIVE_TOL
from errors import ClusteringAmbiguityError, DomainError

logger = structlog.get_logger(__name__)


class ClusteringEngine:
    def __init__(self, relative_tol: float = CLUSTER_RELATIVE_TOL, ambiguity_factor: float = CLUSTER_AMBIGUITY_FACTOR):
        if relative_tol <= 0:
            raise DomainError("clustering tolerance must be positive")
        self.relative_tol = relative_tol
        self.ambiguity_factor = ambiguity_factor

    def tolerance_for(self, eigenvalues: Sequence[float]) -> float:
        """Absolute tolerance: relative_tol * (max|eigenvalue| + 1)"""
        values = np.asarray(eigenvalues, dtype=float)
        scale = float(np.max(np.abs(values))) if values.size else 0.0
        return self.relative_tol * (scale + 1.0)

    def cluster_eigenvalues(self, eigenvalues: Sequence[float], tol: Optional[float] = None) -> List[Dict]:
        """Split ascending eigenvalues wherever the gap exceeds tol

        Each cluster is a dict with start/stop slice bounds, mean eigenvalue,
        multiplicity and spread.
        """
        values = np.asarray(eigenvalues, dtype=float)
        if values.size and np.any(np.diff(values) < 0):
            raise DomainError("eigenvalues must be sorted ascending")
        if tol is None:
            tol = self.tolerance_for(values)
        if tol <= 0:
            raise DomainError("clustering tolerance must be positive")

        gaps = np.diff(values)
        self._check_ambiguity(gaps, tol)

        clusters = []
        start = 0
        for i, gap in enumerate(gaps, start=1):
            if gap > tol:
                clusters.append(self._make_cluster(values, start, i))
                start = i
        if values.size:
            clusters.append(self._make_cluster(values, start, values.size))

        logger.debug("eigenvalues_clustered", levels=len(clusters), tolerance=tol, pattern=self.degeneracy_pattern(clusters))
        return clusters

    def _check_ambiguity(self, gaps, tol):
        low = tol / self.ambiguity_factor
        high = tol * self.ambiguity_factor
        ambiguous = [float(gap) for gap in gaps if low < gap < high]
        if ambiguous:
            raise ClusteringAmbiguityError(
                f"{len(ambiguous)} eigenvalue gap(s) within a factor {self.ambiguity_factor:g} of the clustering tolerance",
                gaps=[float(gap) for gap in gaps],
                tolerance=tol,
            )

    def _make_cluster(self, values, start, stop):
        members = values[start:stop]
        return {
            "start": start,
            "stop": stop,
            "eigenvalue": float(np.mean(members)),
            "multiplicity": stop - start,
            "spread": float(members[-1] - members[0]),
        }

    def degeneracy_pattern(self, clusters: List[Dict]) -> List[int]:
        return [cluster["multiplicity"] for cluster in clusters]

    def summarize(self, clusters: List[Dict]) -> Dict:
        """Human-readable shape of a clustered spectrum"""
        if not clusters:
            return {"levels": 0, "states": 0, "pattern": [], "width": 0.0, "max_spread": 0.0}
        return {
            "levels": len(clusters),
            "states": sum(c["multiplicity"] for c in clusters),
            "pattern": self.degeneracy_pattern(clusters),
            "width": clusters[-1]["eigenvalue"] - clusters[0]["eigenvalue"],
            "max_spread": max(c["spread"] for c in clusters),
        }
