"""
Error hierarchy for the near-unitary toolkit
Library code raises these; only the CLI turns them into exit codes
"""

from typing import List, Optional


class NearUnitaryError(Exception):
    """Base class; exit_code is what the CLI returns for this failure"""

    exit_code = 1


class DomainError(NearUnitaryError, ValueError):
    """A precondition on the inputs does not hold"""

    exit_code = 2


class ParseError(DomainError):
    """Malformed textual input (cycle notation, rate lists, level lists)"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionGuardError(DomainError):
    """Requested size exceeds a configured ceiling"""


class ResolutionError(DomainError):
    """Grid cannot resolve the requested number of trap states"""


class MultipletIsolationError(DomainError):
    """Target multiplet is not spectrally isolated at the requested coupling"""


class ConvergenceError(NearUnitaryError):
    """Numerical procedure did not reach the requested tolerance"""

    exit_code = 3

    def __init__(self, message: str, estimate: Optional[float] = None):
        self.estimate = estimate
        if estimate is not None:
            message = f"{message} (error estimate {estimate:.3e})"
        super().__init__(message)


class ConsistencyError(NearUnitaryError):
    """Internal consistency check failed"""

    exit_code = 4


class ClusteringAmbiguityError(ConsistencyError):
    """Eigenvalue gaps too close to the clustering tolerance to decide degeneracy"""

    def __init__(self, message: str, gaps: List[float], tolerance: float):
        self.gaps = gaps
        self.tolerance = tolerance
        listing = ", ".join(f"{gap:.3e}" for gap in gaps)
        super().__init__(f"{message}; tolerance {tolerance:.3e}; gaps [{listing}]")


class IrrepDecompositionError(ConsistencyError):
    """Character projection gave non-integer multiplicities"""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class ParityError(ConsistencyError):
    """Cluster is not invariant under the parity operator"""
