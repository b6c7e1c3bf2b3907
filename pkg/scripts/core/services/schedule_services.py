from pathlib import Path
from typing import Optional

import typer

from scripts.api import Commands
from scripts.core.handlers.schedule_handler import ScheduleHandler
from scripts.core.schemas.experiment_model import ExperimentConfig
from scripts.core.services import run_command


def compile_schedule(
    input_path: Path = typer.Option(..., "--in", help="Abstract qubit schedule (.bsched)."),
    n: int = typer.Option(..., "--n", help="Bosons per qubit."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
):
    """Translate a qubit schedule into its bosonic form."""
    run_command(
        lambda: ExperimentConfig(command=Commands.compile, n_list=[n], bosons=n, input_path=input_path, output=output),
        lambda config, writer: ScheduleHandler(config, writer).compile_file(),
    )


def run_schedule(
    input_path: Path = typer.Option(..., "--in", help="Schedule file (.bsched)."),
    n: Optional[int] = typer.Option(None, "--n", help="Compile an abstract schedule for N bosons first."),
    init: Optional[str] = typer.Option(None, "--init", help="Per-site initial labels from '+-01'; '+' everywhere by default."),
    output: Path = typer.Option(Path("out"), "--output", "-o"),
    fmt: str = typer.Option("csv", "--format"),
    allow_large: bool = typer.Option(False, "--allow-large", help="Ignore the dimension cap."),
):
    """Execute a schedule and write final-state observables and measurement records."""
    run_command(
        lambda: ExperimentConfig(command=Commands.run_schedule, bosons=n, init=init, input_path=input_path,
                                 output=output, format=fmt, allow_large=allow_large),
        lambda config, writer: ScheduleHandler(config, writer).run_file(),
    )
