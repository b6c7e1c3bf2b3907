from typing import Callable, List

import orjson
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from scripts.api import ExitCodes
from scripts.config.constants import FileNames, Project
from scripts.core.schemas import CommandFailure, CommandSummary, RunMetadata
from scripts.core.schemas.experiment_model import ExperimentConfig
from scripts.exceptions.module_exception import BoseqError, CutoffError, DimensionCapError
from scripts.logging import logger
from scripts.utils.output_util import ArtifactWriter

diagnostics = Console(stderr=True)


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated numbers, got {text!r}") from None


def exit_code_for(error: Exception) -> int:
    if isinstance(error, (DimensionCapError, CutoffError)):
        return ExitCodes.NUMERICAL_CAP
    return ExitCodes.VALIDATION


def run_command(build_config: Callable[[], ExperimentConfig], body: Callable[[ExperimentConfig, ArtifactWriter], dict]):
    """
    Validates the flags, runs ``body`` with an artifact writer and emits the
    JSON summary on stdout and into the output directory. Known errors become
    exit code 2, or 3 for dimension-cap and photon-cutoff refusals.
    """
    config = None
    try:
        config = build_config()
        meta = RunMetadata(
            tool=Project.NAME, version=Project.VERSION, command=config.command, config=config.header_config()
        )
        writer = ArtifactWriter(config.output, meta)
        data = body(config, writer)
        summary = CommandSummary(meta=meta, data=data, checksums=dict(writer.checksums))
        writer.write_json(FileNames.SUMMARY, summary.model_dump(mode="json"))
        typer.echo(orjson.dumps(summary.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS).decode())
    except (BoseqError, ValidationError, OSError) as e:
        code = exit_code_for(e)
        command = config.command if config is not None else "unknown"
        logger.error(f"{command} failed : {str(e)}")
        failure = CommandFailure(message=f"{command} failed", error=str(e), exit_code=code)
        diagnostics.print(f"[red]error:[/red] {escape(failure.error)}", highlight=False)
        raise typer.Exit(code=code)


def parse_bits(text):
    if text is None:
        return None
    if not text or any(char not in "01" for char in text):
        raise typer.BadParameter(f"expected a bit string such as 11, got {text!r}")
    return [int(char) for char in text]
