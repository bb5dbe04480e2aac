"""
Main Orchestrator - command-line front end of the near-unitary toolkit

COMMANDS:
├── spectrum      tunneling operator for given rates → SpectralReport
├── coefficients  trap-dependent rates t[k] of one multiplet → CouplingCoefficients
│                 (--monte-carlo SAMPLES attaches an independent estimate of bond 1)
├── verify        ED multiplets vs the first-order prediction → MultipletComparison
│                 (--cutoffs extrapolates in the basis size, --unitary-limit adds the E_inf check)
├── orderings     wells, letter map and bond edges of N particles
└── levels        lowest unitary-limit multiplets of a trap with their E_inf

Every JSON report embeds the JobConfig that produced it and nothing else that
varies between runs. Exit codes: 0 ok, 2 invalid input, 3 no convergence,
4 failed consistency check.
"""

import argparse
import sys
import time
from typing import Any, Dict, List, Optional, Tuple

import structlog
from pydantic import BaseModel, ValidationError

from analysis.spectral_report import closed_form_check, tunneling_spectrum
from analysis.tunneling import parse_rates
from config.logging_config import configure_logging
from config.settings import DEFAULT_G_SAMPLES, DEFAULT_SEED, DEFAULT_THREADS, ED_DEFAULT_CUTOFF, MULTIPLET_ISOLATION_FRACTION
from coupling.coefficients import all_bond_coefficients, coefficient_basis_size
from coupling.levels import enumerate_levels, ground_level, parse_level
from coupling.monte_carlo import monte_carlo_check
from errors import DomainError, NearUnitaryError, ParseError
from oracle.comparison import multiplet_comparison, unitary_limit_estimate
from oracle.hamiltonian import EDConfig
from output.report_writer import ReportWriter
from trap.basis import HarmonicTrap, TrapSpec, eigenbasis, load_trap, parse_trap, trap_to_dict
from wells.bonds import bond_edges, ordering_graph

logger = structlog.get_logger(__name__)

Report = Tuple[Dict[str, Any], Optional[List[Dict]]]


class JobConfig(BaseModel):
    command: str
    parameters: Dict[str, Any]
    seed: int
    threads: int
    format: str
    output: Optional[str] = None


def parse_number_list(text: str, what: str, cast=float) -> List:
    values = []
    position = 0
    for token in text.split(","):
        try:
            values.append(cast(token.strip()))
        except ValueError:
            raise ParseError(f"invalid {what} entry {token.strip()!r}", position=position) from None
        position += len(token) + 1
    return values


def read_trap(text: str) -> TrapSpec:
    """A trap JSON file, inline JSON, or the shorthand 'harmonic'"""
    if text == "harmonic":
        return HarmonicTrap()
    if text.lstrip().startswith("{"):
        return parse_trap(text)
    return load_trap(text)


class NearUnitaryToolkit:
    def __init__(self, seed: int = DEFAULT_SEED, threads: int = DEFAULT_THREADS):
        self.seed = seed
        self.threads = threads

    def spectrum(self, args) -> Report:
        rates = parse_rates(args.rates)
        report = tunneling_spectrum(args.particles, rates, cluster_tol=args.tol, with_shift=args.shift)
        payload = {"report": report.model_dump()}
        if args.particles == 3:
            payload["closed_form"] = closed_form_check(report)
        return payload, report.to_rows()

    def coefficients(self, args) -> Report:
        trap = read_trap(args.trap)
        level = parse_level(args.level) if args.level else ground_level(args.particles)
        if level.n_particles != args.particles:
            raise DomainError(f"level {level} has {level.n_particles} particles, -N is {args.particles}")
        basis = eigenbasis(trap, coefficient_basis_size(level))

        result = all_bond_coefficients(level, basis, args.g, threads=self.threads)
        if args.monte_carlo:
            check = monte_carlo_check(level, basis, args.bond, args.g, samples=args.monte_carlo, seed=self.seed)
            result = result.model_copy(update={"monte_carlo": check})
        return {"trap": trap_to_dict(trap), "coefficients": result.model_dump()}, result.to_rows()

    def verify(self, args) -> Report:
        trap = read_trap(args.trap)
        level = parse_level(args.level) if args.level else ground_level(args.particles)
        g_samples = parse_number_list(args.g_list, "g") if args.g_list else list(DEFAULT_G_SAMPLES)
        cutoffs = parse_number_list(args.cutoffs, "cutoff", int) if args.cutoffs else [args.cutoff]
        config = EDConfig(trap=trap, n_particles=args.particles, g=max(g_samples), cutoff=max(cutoffs), target_level=level)

        comparison = multiplet_comparison(
            config, g_samples, cutoffs, isolation_fraction=args.isolation, tolerance=args.tolerance, threads=self.threads
        )
        payload = {"trap": trap_to_dict(trap), "comparison": comparison.model_dump()}
        if args.unitary_limit:
            estimate = unitary_limit_estimate(config, g_samples, cutoffs, args.isolation, threads=self.threads)
            payload["unitary_limit"] = estimate.model_dump()
        logger.info("verify_result", passed=comparison.passed, monotone_in_g=comparison.monotone_in_g)
        return payload, comparison.to_rows()

    def orderings(self, args) -> Report:
        n = args.particles
        graph = ordering_graph(n)
        wells = [{"index": index, **attrs} for index, attrs in graph.nodes(data=True)]
        edges = [edge.to_dict() for edge in bond_edges(n)]
        rows = [{"a": str(e["a"]), "b": str(e["b"]), "bond": e["bond"]} for e in edges]
        return {"n_particles": n, "wells": wells, "edges": edges}, rows

    def levels(self, args) -> Report:
        trap = read_trap(args.trap)
        n = args.particles
        basis = eigenbasis(trap, max(n + args.count - 2, 1))
        rows = [
            {"label": level.label, "quanta": str(level), "energy": level.energy(basis)}
            for level in enumerate_levels(basis, n, args.count)
        ]
        return {"trap": trap_to_dict(trap), "n_particles": n, "levels": rows}, rows

    def run(self, args) -> Report:
        handler = getattr(self, args.command)
        start = time.perf_counter()
        logger.info("job_started", command=args.command)
        payload, rows = handler(args)
        logger.info("job_finished", command=args.command, elapsed=round(time.perf_counter() - start, 3))
        return payload, rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="near-unitary", description="Symmetry breaking of strongly interacting particles in 1D traps")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", help="output path; '-' writes to stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    common.add_argument("--verbose", action="store_true")

    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", parents=[common], help="tunneling-operator spectrum")
    spectrum.add_argument("-N", "--particles", type=int, required=True)
    spectrum.add_argument("-t", "--rates", required=True, help="comma-separated rates t[1..N-1]")
    spectrum.add_argument("--shift", action="store_true", help="put the antisymmetric level at zero")
    spectrum.add_argument("--tol", type=float, help="absolute clustering tolerance")

    coefficients = commands.add_parser("coefficients", parents=[common], help="coupling coefficients of a multiplet")
    coefficients.add_argument("--trap", default="harmonic", help="trap JSON file, inline JSON or 'harmonic'")
    coefficients.add_argument("-N", "--particles", type=int, required=True)
    coefficients.add_argument("--level", help="occupied orbitals, e.g. 0,1,2 (default: ground multiplet)")
    coefficients.add_argument("-g", type=float, required=True)
    coefficients.add_argument("--monte-carlo", type=int, default=0, metavar="SAMPLES")
    coefficients.add_argument("--bond", type=int, default=1, help="bond checked by --monte-carlo")

    verify = commands.add_parser("verify", parents=[common], help="compare with exact diagonalization")
    verify.add_argument("--trap", default="harmonic")
    verify.add_argument("-N", "--particles", type=int, required=True)
    verify.add_argument("--level")
    verify.add_argument("--g-list", help="comma-separated interaction strengths")
    verify.add_argument("-M", "--cutoff", type=int, default=ED_DEFAULT_CUTOFF)
    verify.add_argument("--cutoffs", help="comma-separated cutoffs for extrapolation in 1/sqrt(M)")
    verify.add_argument("--isolation", type=float, default=MULTIPLET_ISOLATION_FRACTION)
    verify.add_argument("--tolerance", type=float)
    verify.add_argument("--unitary-limit", action="store_true", help="also extrapolate the centroid to 1/g -> 0")
    verify.add_argument("--strict", action="store_true", help="exit 4 when the comparison fails")

    orderings = commands.add_parser("orderings", parents=[common], help="wells and bond edges")
    orderings.add_argument("-N", "--particles", type=int, required=True)

    levels = commands.add_parser("levels", parents=[common], help="lowest multiplets of a trap")
    levels.add_argument("--trap", default="harmonic")
    levels.add_argument("-N", "--particles", type=int, required=True)
    levels.add_argument("--count", type=int, default=5)
    return parser


def job_config(args) -> JobConfig:
    shared = {"command", "format", "output", "seed", "threads", "verbose"}
    parameters = {key: value for key, value in sorted(vars(args).items()) if key not in shared}
    return JobConfig(command=args.command, parameters=parameters, seed=args.seed, threads=args.threads, format=args.format, output=args.output)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None)

    try:
        toolkit = NearUnitaryToolkit(seed=args.seed, threads=args.threads)
        payload, rows = toolkit.run(args)
        report = {"job": job_config(args).model_dump(), **payload}
        ReportWriter().write(args.command, report, rows, fmt=args.format, path=args.output)
    except NearUnitaryError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: invalid input: {e.errors()[0].get('msg', e)}", file=sys.stderr)
        return 2

    if args.command == "verify" and args.strict and not payload["comparison"]["passed"]:
        print("error: multiplet comparison failed", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
