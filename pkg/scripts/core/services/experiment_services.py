import math
from pathlib import Path
from typing import Optional

import typer

from scripts.api import Commands
from scripts.core.handlers.experiment_handler import ExperimentHandler
from scripts.core.schemas.experiment_model import ExperimentConfig
from scripts.core.services import parse_bits, parse_float_list, parse_int_list, run_command


def entangler(
    n: str = typer.Option("1", "--n", help="Comma-separated boson numbers."),
    t_max: float = typer.Option(math.pi / 2, "--t-max", help="End of the time grid."),
    steps: int = typer.Option(400, "--steps", help="Number of grid points."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """Entropy trajectories under Sz1 Sz2 and the entropy at t = pi/4N for each N."""
    run_command(
        lambda: ExperimentConfig(command=Commands.entangler, n_list=parse_int_list(n), t_max=t_max, steps=steps,
                                 output=output, format=fmt, jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).entangler(),
    )


def cnot(
    n: str = typer.Option("1", "--n"),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """CNOT analogue: site-1 states after projecting site 2 onto k2 = 0 and k2 = N."""
    run_command(
        lambda: ExperimentConfig(command=Commands.cnot, n_list=parse_int_list(n), output=output, format=fmt,
                                 jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).cnot(),
    )


def deutsch(
    oracle: Optional[str] = typer.Option(None, "--oracle", help="CONST0, CONST1, BAL01 or BAL10; all when omitted."),
    n: str = typer.Option("1", "--n"),
    oracle_time: Optional[float] = typer.Option(None, "--oracle-time", help="Defaults to pi/2N."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """Deutsch's algorithm with one oracle evaluation per (oracle, N)."""
    run_command(
        lambda: ExperimentConfig(command=Commands.deutsch, oracle=oracle.upper() if oracle else None,
                                 n_list=parse_int_list(n), m=2, oracle_time=oracle_time, output=output,
                                 format=fmt, jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).deutsch(),
    )


def grover(
    m: int = typer.Option(2, "--m", help="Number of bosonic qubits."),
    n: str = typer.Option("1", "--n"),
    t_max: Optional[float] = typer.Option(None, "--t-max", help="Defaults to 1.5 pi sqrt(2^M)/N."),
    steps: int = typer.Option(400, "--steps"),
    solution: Optional[str] = typer.Option(None, "--solution", help="Bit string, site 1 first; all ones by default."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """Continuous-time Grover search: <Sz_n>/N trajectories and the first Rabi peak."""
    run_command(
        lambda: ExperimentConfig(command=Commands.grover, m=m, n_list=parse_int_list(n), t_max=t_max, steps=steps,
                                 solution=parse_bits(solution), output=output, format=fmt, jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).grover(),
    )


def dephase(
    m: int = typer.Option(1, "--m"),
    n: str = typer.Option("1", "--n"),
    gamma: float = typer.Option(0.1, "--gamma"),
    t_max: Optional[float] = typer.Option(None, "--t-max", help="Defaults to 1/gamma."),
    steps: int = typer.Option(101, "--steps", help="Number of sampled times."),
    loss: bool = typer.Option(False, "--loss", help="Literal particle loss on a_n, b_n instead of dephasing."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """Correlator decay under the double-commutator master equation, with the fitted rate."""
    run_command(
        lambda: ExperimentConfig(command=Commands.dephase, m=m, n_list=parse_int_list(n), gamma=gamma, t_max=t_max,
                                 steps=steps, loss=loss, output=output, format=fmt, jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).dephase(),
    )


def buscheck(
    n: str = typer.Option("1", "--n"),
    g: float = typer.Option(1.0, "--g"),
    omega_pulse: float = typer.Option(0.02, "--omega-pulse", help="Effective exchange amplitude Omega."),
    deltas: str = typer.Option("10,20,40", "--deltas", help="Detunings in units of g sqrt(N)."),
    photon_cutoff: int = typer.Option(2, "--photon-cutoff"),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    jobs: int = typer.Option(1, "--jobs"),
):
    """Infidelity of the adiabatically eliminated exchange against the full bus model."""
    run_command(
        lambda: ExperimentConfig(command=Commands.buscheck, n_list=parse_int_list(n), m=2, g=g,
                                 omega_pulse=omega_pulse, deltas=parse_float_list(deltas),
                                 photon_cutoff=photon_cutoff, output=output, format=fmt, jobs=jobs),
        lambda config, writer: ExperimentHandler(config, writer).buscheck(),
    )
