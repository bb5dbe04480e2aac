"""
Multiplet Comparison - near-unitary ED multiplets against the tunneling-operator prediction

For each sampled g the N! levels nearest E_inf are extracted from the ED
spectrum, labelled by S_N irrep and parity, and matched state by state to the
shifted tunneling spectrum built from the quadrature coefficients. The match
is by irrep, then by magnitude of the deviation from E_inf, which keeps the
pairing stable when the truncated ED inverts the multiplet.
"""

import math
from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, computed_field

from analysis.characters import CHARACTER_TABLES, class_representative, decompose_character, irrep_dimension
from analysis.clustering_engine import ClusteringEngine
from analysis.spectral_report import EVEN, MIXED, NOT_APPLICABLE, ODD, tunneling_spectrum
from config.settings import (
    DEFAULT_G_SAMPLES,
    DEFAULT_THREADS,
    FINGERPRINT_TOLERANCE,
    MULTIPLET_ISOLATION_FRACTION,
    PARITY_RESIDUAL_TOL,
)
from coupling.coefficients import all_bond_coefficients, coefficient_basis_size
from coupling.levels import LevelIndex
from errors import DomainError, IrrepDecompositionError, MultipletIsolationError, ParityError
from oracle.hamiltonian import EDConfig, ProductBasisHamiltonian
from oracle.sampler import EDSampler
from trap.basis import eigenbasis

logger = structlog.get_logger(__name__)

# ED degeneracies are exact up to eigensolver noise; accidental near-degeneracies stay separate
DEGENERACY_RELATIVE_TOL = 1e-8


class CutoffMultiplet(BaseModel):
    cutoff: int
    eigenvalues: List[float]
    multiplet: List[float]
    irreps: List[str]
    parity: List[str]
    spread: float
    isolation_distance: float


class SampleComparison(BaseModel):
    g: float
    coefficients: List[float]
    coefficient_errors: List[float]
    predicted: List[float]
    predicted_irreps: List[str]
    predicted_parity: List[str]
    cutoffs: List[CutoffMultiplet]
    deviations: List[float]
    extrapolated: bool
    systematic_error: Optional[float] = None
    cutoff_changes: List[float]
    slope_ratios: List[Optional[float]]
    fingerprint_predicted: List[float]
    fingerprint_measured: List[float]
    fingerprint_errors: List[float]
    max_fingerprint_error: float
    scale_ratio: float
    fingerprint_passed: bool
    scale_passed: bool

    @property
    def passed(self) -> bool:
        return self.fingerprint_passed and self.scale_passed and self.scale_ratio > 0


class MultipletComparison(BaseModel):
    n_particles: int
    trap_kind: str
    level: LevelIndex
    E_infinity: float
    g_samples: List[float]
    cutoffs: List[int]
    isolation_fraction: float
    tolerance: float
    samples: List[SampleComparison]
    monotone_in_g: bool
    passed: bool

    @computed_field
    @property
    def ed_energies(self) -> List[List[float]]:
        """Sorted multiplet energies at each g, largest cutoff"""
        return [sorted(sample.cutoffs[-1].multiplet) for sample in self.samples]

    @computed_field
    @property
    def predicted(self) -> List[List[float]]:
        """Predicted E_inf + shifted tunneling eigenvalue at each g, sorted"""
        return [sorted(self.E_infinity + value for value in sample.predicted) for sample in self.samples]

    @computed_field
    @property
    def slope_ratios(self) -> List[List[Optional[float]]]:
        return [sample.slope_ratios for sample in self.samples]

    def to_rows(self) -> List[Dict]:
        """One CSV row per (g, state)"""
        rows = []
        for sample in self.samples:
            for s, predicted in enumerate(sample.predicted):
                rows.append(
                    {
                        "g": sample.g,
                        "state": s,
                        "irrep": sample.predicted_irreps[s],
                        "parity": sample.predicted_parity[s],
                        "predicted": predicted,
                        "deviation": sample.deviations[s],
                        "slope_ratio": sample.slope_ratios[s],
                        "fingerprint_predicted": sample.fingerprint_predicted[s],
                        "fingerprint_measured": sample.fingerprint_measured[s],
                    }
                )
        return rows


class UnitaryLimitEstimate(BaseModel):
    n_particles: int
    level: LevelIndex
    E_infinity: float
    g_samples: List[float]
    cutoffs: List[int]
    centroids: List[List[float]]
    intercepts: List[float]
    extrapolated: float
    relative_error: float


def extract_multiplet(eigenvalues: np.ndarray, e_infinity: float, size: int, fraction: float = MULTIPLET_ISOLATION_FRACTION):
    """Indices of the `size` levels nearest E_inf; returns (indices, spread, distance)

    Raises MultipletIsolationError unless spread < fraction * distance, where
    distance runs from the multiplet to the nearest level outside it.
    """
    values = np.asarray(eigenvalues, dtype=float)
    if values.size <= size:
        raise MultipletIsolationError(f"need more than {size} levels to isolate a multiplet, got {values.size}")
    nearest = np.sort(np.argsort(np.abs(values - e_infinity), kind="stable")[:size])
    members = values[nearest]
    low, high = float(members.min()), float(members.max())
    others = np.delete(values, nearest)
    if not np.any(others > high):
        raise MultipletIsolationError("no computed level lies above the multiplet; raise the eigenvalue count")

    below, above = others[others < low], others[others > high]
    inside = others[(others >= low) & (others <= high)]
    if inside.size:
        distance = 0.0
    else:
        gaps = [float(np.min(above)) - high] + ([low - float(np.max(below))] if below.size else [])
        distance = min(gaps)
    spread = high - low
    if not spread < fraction * distance:
        raise MultipletIsolationError(
            f"multiplet near E_inf={e_infinity:.6g} is not isolated: spread {spread:.3e}, distance to neighbours {distance:.3e}"
        )
    return nearest, spread, distance


class MultipletLabeler:
    """Irrep and parity labels of ED eigenvectors in the product basis"""

    def __init__(self, hamiltonian: ProductBasisHamiltonian):
        self.n_particles = hamiltonian.n_particles
        self.class_images = [
            hamiltonian.permutation_images(class_representative(ct)) for ct in CHARACTER_TABLES[self.n_particles]["classes"]
        ]
        self.reflection = hamiltonian.reflection_diagonal()
        self.engine = ClusteringEngine(relative_tol=DEGENERACY_RELATIVE_TOL, ambiguity_factor=1.0)

    def parity_of(self, vectors: np.ndarray) -> str:
        if self.reflection is None:
            return NOT_APPLICABLE
        reflected = self.reflection[:, None] * vectors
        block = vectors.T @ reflected
        residual = float(np.max(np.abs(reflected - vectors @ block)))
        if residual > PARITY_RESIDUAL_TOL:
            raise ParityError(f"ED level is not invariant under reflection (residual {residual:.3e})")
        signs = np.linalg.eigvalsh((block + block.T) / 2)
        if np.all(signs > 0):
            return EVEN
        if np.all(signs < 0):
            return ODD
        return MIXED

    def label(self, energies: np.ndarray, vectors: np.ndarray) -> List[Dict]:
        """One entry per state: energy, irrep, parity; degenerate groups share labels"""
        states = []
        for group in self.engine.cluster_eigenvalues(energies):
            block = vectors[:, group["start"] : group["stop"]]
            characters = [float(np.sum(block[images] * block)) for images in self.class_images]
            irreps = decompose_character(characters, self.n_particles)
            parity = self.parity_of(block)
            members = iter(energies[group["start"] : group["stop"]])
            for name, count in sorted(irreps.items()):
                for _ in range(count * irrep_dimension(self.n_particles, name)):
                    states.append({"energy": float(next(members)), "irrep": name, "parity": parity})
        return states


def predicted_states(n: int, rates: Sequence[float]) -> List[Dict]:
    """Per-state shifted tunneling eigenvalues with irrep and parity, ascending"""
    report = tunneling_spectrum(n, rates, with_shift=True)
    states = []
    for cluster in report.clusters:
        for name, count in sorted(cluster.irreps.items()):
            states.extend(
                {"value": cluster.eigenvalue, "irrep": name, "parity": cluster.parity}
                for _ in range(count * irrep_dimension(n, name))
            )
    return states


def match_states(predicted: List[Dict], measured: List[Dict], e_infinity: float) -> List[float]:
    """Deviation E - E_inf of the ED state paired with each predicted state"""
    deviations: List[Optional[float]] = [None] * len(predicted)
    for name in sorted({state["irrep"] for state in predicted} | {state["irrep"] for state in measured}):
        want = sorted((i for i, s in enumerate(predicted) if s["irrep"] == name), key=lambda i: abs(predicted[i]["value"]))
        have = sorted((s for s in measured if s["irrep"] == name), key=lambda s: abs(s["energy"] - e_infinity))
        if len(want) != len(have):
            raise IrrepDecompositionError(
                f"ED multiplet holds {len(have)} state(s) of irrep {name}, prediction has {len(want)}",
                residual=float(abs(len(want) - len(have))),
            )
        for i, state in zip(want, have):
            expected = predicted[i]["parity"]
            if expected in (EVEN, ODD) and state["parity"] in (EVEN, ODD) and state["parity"] != expected:
                raise ParityError(f"ED {name} state has {state['parity']} parity, prediction says {expected}")
            deviations[i] = state["energy"] - e_infinity
    return deviations


def _fingerprint(predicted: np.ndarray, deviations: np.ndarray, tol: float):
    """Gaps from the top level in units of the smallest predicted gap

    Returns (predicted gaps, measured gaps, per-state errors, scale ratio).
    Measured gaps are normalised by the measured width, so a uniformly
    rescaled or inverted multiplet reproduces the predicted fingerprint; size
    and orientation are carried by the scale ratio alone, which is negative
    for an inverted multiplet and gated by splitting_checks.
    """
    top, bottom = float(predicted.max()), float(predicted.min())
    width = top - bottom
    if width <= tol:
        raise DomainError("predicted multiplet is degenerate; there is no splitting to compare")
    gaps = top - predicted
    unit = float(np.min(gaps[gaps > tol]))

    is_top = np.abs(predicted - top) <= tol
    is_bottom = np.abs(predicted - bottom) <= tol
    measured_width = float(np.mean(deviations[is_top]) - np.mean(deviations[is_bottom]))
    if measured_width == 0:
        raise MultipletIsolationError("ED multiplet shows no splitting")

    predicted_fp = gaps / unit
    measured_fp = (float(np.mean(deviations[is_top])) - deviations) / measured_width * (width / unit)
    reference = np.where(predicted_fp > tol, predicted_fp, float(predicted_fp.max()))
    errors = np.abs(measured_fp - predicted_fp) / reference
    return predicted_fp, measured_fp, errors, measured_width / width


def splitting_checks(max_error: float, scale: float, tolerance: float):
    """(fingerprint passed, scale passed); an inverted multiplet never passes on scale"""
    return max_error <= tolerance, scale > 0 and abs(scale - 1.0) <= tolerance


def _extrapolate(cutoffs: List[int], deviations: np.ndarray):
    """Linear fit in 1/sqrt(M) per state; returns (M -> inf values, systematic error, gap changes)"""
    if len(cutoffs) < 2:
        return deviations[-1], None, []
    x = 1.0 / np.sqrt(np.asarray(cutoffs, dtype=float))
    intercepts = np.array([np.polyfit(x, deviations[:, s], 1)[1] for s in range(deviations.shape[1])])
    systematic = float(np.max(np.abs(intercepts - deviations[-1])))
    gaps = deviations - deviations.mean(axis=1, keepdims=True)
    changes = [float(np.max(np.abs(gaps[i + 1] - gaps[i]))) for i in range(len(cutoffs) - 1)]
    return intercepts, systematic, changes


def _check_request(config: EDConfig, g_samples: Sequence[float], cutoffs: Sequence[int]):
    if not g_samples:
        raise DomainError("at least one g sample is required")
    for g in g_samples:
        if not (g > 0 and math.isfinite(g)):
            raise MultipletIsolationError(f"the multiplet is undefined at g={g}; every g sample must be positive")
    for m in cutoffs:
        config.check_limits(m)


def multiplet_comparison(
    config: EDConfig,
    g_samples: Sequence[float] = tuple(DEFAULT_G_SAMPLES),
    cutoffs: Optional[Sequence[int]] = None,
    isolation_fraction: float = MULTIPLET_ISOLATION_FRACTION,
    tolerance: Optional[float] = None,
    threads: int = DEFAULT_THREADS,
) -> MultipletComparison:
    """Compare ED multiplet splittings with the first-order tunneling prediction"""
    cutoffs = sorted(set(cutoffs or [config.cutoff]))
    g_samples = sorted(float(g) for g in g_samples)
    _check_request(config, g_samples, cutoffs)
    n, level = config.n_particles, config.level
    tolerance = tolerance if tolerance is not None else FINGERPRINT_TOLERANCE[n]

    basis = eigenbasis(config.trap, coefficient_basis_size(level))
    e_infinity = level.energy(basis)
    unit = all_bond_coefficients(level, basis, g=1.0, threads=threads)
    integrals = np.asarray(unit.values)
    errors = np.asarray(unit.errors)
    if basis.reflection_parities() is not None and unit.is_palindromic():
        integrals = (integrals + integrals[::-1]) / 2

    sampler = EDSampler(config.trap, n, e_infinity, threads)
    collected = sampler.collect(g_samples, cutoffs)
    labelers = {m: MultipletLabeler(sampler.hamiltonians[m]) for m in cutoffs}

    samples = []
    for g in g_samples:
        rates = list(integrals / g)
        predicted = predicted_states(n, rates)
        values = np.array([state["value"] for state in predicted])
        tol = 1e-9 * (float(np.max(np.abs(values))) + 1e-300)

        per_cutoff, deviations = [], []
        for m in cutoffs:
            point = collected["data"][m][g]
            indices, spread, distance = extract_multiplet(point["eigenvalues"], e_infinity, len(predicted), isolation_fraction)
            energies = point["eigenvalues"][indices]
            measured = labelers[m].label(energies, point["eigenvectors"][:, indices])
            matched = match_states(predicted, measured, e_infinity)
            deviations.append(matched)
            per_cutoff.append(
                CutoffMultiplet(
                    cutoff=m,
                    eigenvalues=[float(e) for e in point["eigenvalues"]],
                    multiplet=[e_infinity + d for d in matched],
                    irreps=[s["irrep"] for s in measured],
                    parity=[s["parity"] for s in measured],
                    spread=spread,
                    isolation_distance=distance,
                )
            )

        final, systematic, changes = _extrapolate(cutoffs, np.asarray(deviations))
        final = np.asarray(final, dtype=float)
        predicted_fp, measured_fp, fp_errors, scale = _fingerprint(values, final, tol)
        max_error = float(np.max(fp_errors))
        fingerprint_passed, scale_passed = splitting_checks(max_error, scale, tolerance)
        samples.append(
            SampleComparison(
                g=g,
                coefficients=rates,
                coefficient_errors=list(errors / g),
                predicted=list(values),
                predicted_irreps=[state["irrep"] for state in predicted],
                predicted_parity=[state["parity"] for state in predicted],
                cutoffs=per_cutoff,
                deviations=list(final),
                extrapolated=len(cutoffs) > 1,
                systematic_error=systematic,
                cutoff_changes=changes,
                slope_ratios=[float(d / v) if abs(v) > tol else None for d, v in zip(final, values)],
                fingerprint_predicted=list(predicted_fp),
                fingerprint_measured=list(measured_fp),
                fingerprint_errors=list(fp_errors),
                max_fingerprint_error=max_error,
                scale_ratio=scale,
                fingerprint_passed=fingerprint_passed,
                scale_passed=scale_passed,
            )
        )
        logger.info("multiplet_compared", g=g, fingerprint_error=max_error, scale_ratio=scale, systematic=systematic)

    monotone = all(
        np.all(np.diff([sample.cutoffs[c].multiplet[s] for sample in samples]) >= -1e-9)
        for c in range(len(cutoffs))
        for s in range(len(samples[0].predicted))
    )
    return MultipletComparison(
        n_particles=n,
        trap_kind=basis.kind,
        level=level,
        E_infinity=e_infinity,
        g_samples=g_samples,
        cutoffs=cutoffs,
        isolation_fraction=isolation_fraction,
        tolerance=tolerance,
        samples=samples,
        monotone_in_g=bool(monotone),
        passed=all(sample.passed for sample in samples),
    )


def unitary_limit_estimate(
    config: EDConfig,
    g_samples: Sequence[float],
    cutoffs: Optional[Sequence[int]] = None,
    isolation_fraction: float = MULTIPLET_ISOLATION_FRACTION,
    threads: int = DEFAULT_THREADS,
) -> UnitaryLimitEstimate:
    """Multiplet centroid extrapolated to 1/g -> 0, then to 1/sqrt(M) -> 0"""
    cutoffs = sorted(set(cutoffs or [config.cutoff]))
    g_samples = sorted(float(g) for g in g_samples)
    _check_request(config, g_samples, cutoffs)
    if len(g_samples) < 2:
        raise DomainError("the 1/g extrapolation needs at least two g samples")
    n, level = config.n_particles, config.level
    size = math.factorial(n)

    e_infinity = level.energy(eigenbasis(config.trap, coefficient_basis_size(level)))
    collected = EDSampler(config.trap, n, e_infinity, threads).collect(g_samples, cutoffs, vectors=False)

    centroids, intercepts = [], []
    inverse_g = 1.0 / np.asarray(g_samples)
    for m in cutoffs:
        row = []
        for g in g_samples:
            eigenvalues = collected["data"][m][g]["eigenvalues"]
            indices, _, _ = extract_multiplet(eigenvalues, e_infinity, size, isolation_fraction)
            row.append(float(np.mean(eigenvalues[indices])))
        centroids.append(row)
        intercepts.append(float(np.polyfit(inverse_g, row, 1)[1]))

    if len(cutoffs) > 1:
        extrapolated = float(np.polyfit(1.0 / np.sqrt(np.asarray(cutoffs, dtype=float)), intercepts, 1)[1])
    else:
        extrapolated = intercepts[0]
    logger.info("unitary_limit_estimated", level=str(level), intercepts=intercepts, extrapolated=extrapolated, e_infinity=e_infinity)
    return UnitaryLimitEstimate(
        n_particles=n,
        level=level,
        E_infinity=e_infinity,
        g_samples=g_samples,
        cutoffs=cutoffs,
        centroids=centroids,
        intercepts=intercepts,
        extrapolated=extrapolated,
        relative_error=abs(extrapolated - e_infinity) / abs(e_infinity),
    )
