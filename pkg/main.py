import typer

from scripts.api import Commands
from scripts.config.constants import Project
from scripts.core.services.experiment_services import buscheck, cnot, dephase, deutsch, entangler, grover
from scripts.core.services.schedule_services import compile_schedule, run_schedule

app = typer.Typer(
    name=Project.NAME,
    help="Exact simulation of qubits encoded in two-mode bosonic states.",
    add_completion=False,
    no_args_is_help=True,
)

app.command(Commands.entangler)(entangler)
app.command(Commands.cnot)(cnot)
app.command(Commands.deutsch)(deutsch)
app.command(Commands.grover)(grover)
app.command(Commands.dephase)(dephase)
app.command(Commands.buscheck)(buscheck)
app.command(Commands.compile)(compile_schedule)
app.command(Commands.run_schedule)(run_schedule)
