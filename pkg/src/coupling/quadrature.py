"""
Quadrature - composite Gauss-Legendre rules with panel doubling
Ordered regions a < y_1 < ... < y_d < b are mapped from the unit cube by
collapsed coordinates: y_d = a + (b - a) s_d, y_j = a + (y_{j+1} - a) s_j
"""

import math
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
import structlog

from config.settings import (
    QUADRATURE_ATOL,
    QUADRATURE_CHUNK,
    QUADRATURE_MAX_LEVEL,
    QUADRATURE_MAX_POINTS,
    QUADRATURE_ORDER,
    QUADRATURE_RTOL,
    QUADRATURE_START_PANELS,
)
from errors import ConvergenceError, DomainError

logger = structlog.get_logger(__name__)


@lru_cache(maxsize=None)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_rule(a: float, b: float, panels: int, order: int = QUADRATURE_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of `panels` equal Gauss-Legendre panels on [a, b]"""
    if not b > a:
        raise DomainError(f"empty interval [{a}, {b}]")
    nodes, weights = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def refine_panels(
    rule_value: Callable[[int], np.ndarray],
    rtol: float = QUADRATURE_RTOL,
    atol: float = QUADRATURE_ATOL,
    start_panels: int = QUADRATURE_START_PANELS,
    max_level: int = QUADRATURE_MAX_LEVEL,
    affordable: Callable[[int], bool] = lambda panels: True,
    what: str = "quadrature",
):
    """Double the panel count until two successive rules agree; returns (value, error)

    rule_value(panels) evaluates one composite rule. The error estimate is the
    largest entrywise change |I(2P) - I(P)|.
    """
    panels = start_panels
    previous = rule_value(panels)
    error = np.inf
    for _ in range(max_level):
        if not affordable(2 * panels):
            break
        panels *= 2
        value = rule_value(panels)
        error = float(np.max(np.abs(np.asarray(value) - np.asarray(previous))))
        scale = float(np.max(np.abs(value)))
        logger.debug("quadrature_level", what=what, panels=panels, error=error)
        if error <= max(atol, rtol * scale):
            return value, error
        previous = value
    raise ConvergenceError(f"{what} did not converge with {panels} panels", estimate=error)


def integrate_1d(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = QUADRATURE_RTOL,
    atol: float = QUADRATURE_ATOL,
    order: int = QUADRATURE_ORDER,
):
    """Integral of func over [a, b]; func may return extra trailing axes. Returns (value, error)"""

    def rule_value(panels):
        x, w = composite_rule(a, b, panels, order)
        return np.tensordot(w, func(x), axes=1)

    return refine_panels(rule_value, rtol, atol, what=f"1D quadrature on [{a:.4g}, {b:.4g}]")


def ordered_region_sum(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    dim: int,
    panels: int,
    order: int = QUADRATURE_ORDER,
    chunk: int = QUADRATURE_CHUNK,
) -> float:
    """One tensor-product rule over the ordered region; integrand takes points of shape (P, dim)

    Chunk sums are pairwise (numpy) and combined with fsum, so the result
    depends on nothing but the arguments.
    """
    s, ws = composite_rule(0.0, 1.0, panels, order)
    count = s.size
    total = count**dim
    partial = []
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        axes = np.unravel_index(flat, (count,) * dim)

        points = np.empty((flat.size, dim))
        weights = np.full(flat.size, b - a)
        points[:, dim - 1] = a + (b - a) * s[axes[dim - 1]]
        weights *= ws[axes[dim - 1]]
        for j in range(dim - 2, -1, -1):
            span = points[:, j + 1] - a
            points[:, j] = a + span * s[axes[j]]
            weights *= span * ws[axes[j]]

        partial.append(float(np.sum(weights * integrand(points))))
    return math.fsum(partial)


def integrate_ordered(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    dim: int,
    rtol: float = QUADRATURE_RTOL,
    atol: float = QUADRATURE_ATOL,
    order: int = QUADRATURE_ORDER,
    max_points: int = QUADRATURE_MAX_POINTS,
):
    """Integral over a < y_1 < ... < y_dim < b; returns (value, error)"""
    if dim < 1:
        raise DomainError(f"dimension must be positive, got {dim}")
    return refine_panels(
        lambda panels: ordered_region_sum(integrand, a, b, dim, panels, order),
        rtol,
        atol,
        affordable=lambda panels: (panels * order) ** dim <= max_points,
        what=f"{dim}-dimensional quadrature",
    )
