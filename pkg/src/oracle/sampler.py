"""
ED Sampler - runs exact diagonalizations over a grid of (g, M) points
Hamiltonians are assembled once per cutoff; each (g, M) diagonalization is an
independent job and results come back in submission order
"""

import math
from typing import Dict, List, Sequence

import numpy as np
import structlog

from concurrency import gather_bounded, run_bounded
from config.settings import DEFAULT_THREADS, ED_EXTRA_LEVELS
from oracle.hamiltonian import ProductBasisHamiltonian
from trap.basis import TrapSpec, eigenbasis

logger = structlog.get_logger(__name__)


class EDSampler:
    def __init__(self, trap: TrapSpec, n_particles: int, e_infinity: float, threads: int = DEFAULT_THREADS):
        self.trap = trap
        self.n_particles = n_particles
        self.e_infinity = e_infinity
        self.threads = threads
        self.hamiltonians: Dict[int, ProductBasisHamiltonian] = {}

    def eigen_count(self, hamiltonian: ProductBasisHamiltonian) -> int:
        """Enough levels to see past the target multiplet

        The contact term is positive, so the k-th level at g > 0 never lies
        below the k-th unperturbed level; counting unperturbed states up to
        one excitation quantum above E_inf bounds the multiplet from above.
        """
        energies = hamiltonian.basis.energies
        window = self.e_infinity + (energies[1] - energies[0])
        below = int(np.count_nonzero(hamiltonian.unperturbed_energies() <= window + 1e-9))
        count = max(2 * math.factorial(self.n_particles) + ED_EXTRA_LEVELS, below + ED_EXTRA_LEVELS)
        return min(count, hamiltonian.dimension)

    def _assemble(self, cutoff: int) -> ProductBasisHamiltonian:
        return ProductBasisHamiltonian(eigenbasis(self.trap, cutoff - 1), self.n_particles, cutoff).assemble()

    def _assembly_jobs(self, cutoffs):
        missing = [m for m in dict.fromkeys(cutoffs) if m not in self.hamiltonians]
        return missing, [lambda m=m: self._assemble(m) for m in missing]

    def prepare(self, cutoffs: Sequence[int]):
        missing, jobs = self._assembly_jobs(cutoffs)
        self.hamiltonians.update(zip(missing, run_bounded(jobs, self.threads)))

    def sample_point(self, g: float, cutoff: int, vectors: bool = True) -> Dict:
        hamiltonian = self.hamiltonians[cutoff]
        count = self.eigen_count(hamiltonian)
        if vectors:
            eigenvalues, eigenvectors = hamiltonian.lowest(g, count, vectors=True)
        else:
            eigenvalues, eigenvectors = hamiltonian.lowest(g, count), None
        return {
            "g": g,
            "cutoff": cutoff,
            "status": "success",
            "eigenvalues": eigenvalues,
            "eigenvectors": eigenvectors,
        }

    def _jobs(self, g_values, cutoffs, vectors):
        return [lambda m=m, g=g: self.sample_point(g, m, vectors) for m in cutoffs for g in g_values]

    def _package(self, results: List[Dict], g_values, cutoffs) -> Dict:
        data: Dict[int, Dict[float, Dict]] = {}
        for result in results:
            data.setdefault(result["cutoff"], {})[result["g"]] = result

        summary = {
            "points": len(results),
            "cutoffs": list(cutoffs),
            "g_values": list(g_values),
            "dimensions": {m: self.hamiltonians[m].dimension for m in cutoffs},
        }
        logger.info("ed_sampling_complete", **summary)
        return {"data": data, "summary": summary}

    async def collect_all(self, g_values: Sequence[float], cutoffs: Sequence[int], vectors: bool = True) -> Dict:
        """Diagonalize every (g, M) pair; data is keyed by cutoff then g"""
        logger.info("ed_sampling_started", n_particles=self.n_particles, g_values=list(g_values), cutoffs=list(cutoffs))
        missing, jobs = self._assembly_jobs(cutoffs)
        self.hamiltonians.update(zip(missing, await gather_bounded(jobs, self.threads)))
        results = await gather_bounded(self._jobs(g_values, cutoffs, vectors), self.threads)
        return self._package(results, g_values, cutoffs)

    def collect(self, g_values: Sequence[float], cutoffs: Sequence[int], vectors: bool = True) -> Dict:
        """Synchronous collect_all"""
        logger.info("ed_sampling_started", n_particles=self.n_particles, g_values=list(g_values), cutoffs=list(cutoffs))
        self.prepare(cutoffs)
        results = run_bounded(self._jobs(g_values, cutoffs, vectors), self.threads)
        return self._package(results, g_values, cutoffs)
