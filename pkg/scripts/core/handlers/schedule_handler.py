"""
Line-oriented Hamiltonian schedules and their qubit -> bosonic compilation.

    qubits 2                # optional; defaults to the largest site used
    bosons 5                # optional; present once compiled
    term 1.0 Z1 Z2          # coefficient, then X/Y/Z<site> factors or I
    evolve pi/4             # decimal, pi, pi/INT, D*pi, D*pi/INT, each optionally /N
    measure 1 x
"""
import math
import re
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from scripts.core.handlers import spin_handler
from scripts.core.handlers.dynamics_handler import evolve_unitary
from scripts.core.schemas.experiment_model import ExperimentConfig
from scripts.core.schemas.schedule_model import (
    Evolve,
    Factor,
    HamiltonianBlock,
    Measure,
    Schedule,
    ScheduleTerm,
    TimeExpr,
)
from scripts.core.schemas.spin_model import Operator, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import (
    ArgumentError,
    CompileError,
    IoError,
    OrderError,
    ScheduleDuplicateSiteError,
    ScheduleSyntaxError,
    UnknownSiteError,
)
from scripts.logging import logger
from scripts.utils.linalg_util import check_dimension_cap
from scripts.utils.output_util import ArtifactWriter

_DECIMAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TIME_PI = re.compile(rf"^(?:(?P<num>{_DECIMAL})\*)?pi(?:/(?P<den>\d+))?(?P<over>/N)?$")
_TIME_DECIMAL = re.compile(rf"^(?P<num>{_DECIMAL})(?P<over>/N)?$")
_FACTOR = re.compile(r"^(?P<axis>[XYZ])(?P<site>\d+)$")
_INTEGER = re.compile(r"^\d+$")
_TOKEN = re.compile(r"\S+")


class ScheduleParser:
    """Single-use parser; diagnostics carry 1-based line and column."""

    def __init__(self, text: str):
        self.text = text
        self.n_sites: Optional[int] = None
        self.n_bosons: Optional[int] = None
        self.statements = []
        self.max_site = 0
        self.site_refs: List[Tuple[int, int, int]] = []
        self._open_block: Optional[HamiltonianBlock] = None
        self._seen_statement = False

    def parse(self) -> Schedule:
        for line_no, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            tokens = [(match.group(), match.start() + 1) for match in _TOKEN.finditer(line)]
            if tokens:
                self._statement(tokens, line_no)
        n_sites = self.n_sites if self.n_sites is not None else max(1, self.max_site)
        if self.n_sites is not None:
            for site, line_no, column in self.site_refs:
                if site > n_sites:
                    raise UnknownSiteError(f"site {site} outside 1..{n_sites}", line_no, column)
        for block in self.statements:
            if isinstance(block, HamiltonianBlock):
                block.terms.sort(key=lambda term: term.first_site)
        return Schedule(n_sites=n_sites, n_bosons=self.n_bosons, statements=self.statements)

    def _statement(self, tokens, line_no: int) -> None:
        keyword, column = tokens[0]
        handler = {
            "qubits": self._header,
            "bosons": self._header,
            "term": self._term,
            "evolve": self._evolve,
            "measure": self._measure,
        }.get(keyword)
        if handler is None:
            raise ScheduleSyntaxError(f"unknown keyword {keyword!r}", line_no, column)
        handler(tokens, line_no)

    def _integer(self, token: str, column: int, line_no: int, what: str) -> int:
        if not _INTEGER.match(token):
            raise ScheduleSyntaxError(f"expected {what}, got {token!r}", line_no, column)
        value = int(token)
        if value < 1:
            raise ScheduleSyntaxError(f"{what} must be >= 1, got {value}", line_no, column)
        return value

    def _header(self, tokens, line_no: int) -> None:
        keyword, column = tokens[0]
        if len(tokens) != 2:
            raise ScheduleSyntaxError(f"'{keyword}' takes exactly one integer", line_no, column)
        if self._seen_statement:
            raise ScheduleSyntaxError(f"'{keyword}' must precede all statements", line_no, column)
        attribute = "n_sites" if keyword == "qubits" else "n_bosons"
        if getattr(self, attribute) is not None:
            raise ScheduleSyntaxError(f"duplicate '{keyword}' header", line_no, column)
        value = self._integer(tokens[1][0], tokens[1][1], line_no, "a positive integer")
        setattr(self, attribute, value)

    def _reference_site(self, site: int, line_no: int, column: int) -> None:
        if self.n_sites is not None and site > self.n_sites:
            raise UnknownSiteError(f"site {site} outside 1..{self.n_sites}", line_no, column)
        self.max_site = max(self.max_site, site)
        self.site_refs.append((site, line_no, column))

    def _term(self, tokens, line_no: int) -> None:
        self._seen_statement = True
        if len(tokens) < 3:
            raise ScheduleSyntaxError("'term' needs a coefficient and at least one factor", line_no, tokens[0][1])
        coeff_token, coeff_column = tokens[1]
        try:
            coeff = float(coeff_token)
        except ValueError:
            raise ScheduleSyntaxError(f"invalid coefficient {coeff_token!r}", line_no, coeff_column) from None
        if not math.isfinite(coeff):
            raise ScheduleSyntaxError(f"coefficient {coeff_token!r} is not finite", line_no, coeff_column)
        factors, seen = [], set()
        for token, column in tokens[2:]:
            if token == "I":
                continue
            match = _FACTOR.match(token)
            if not match:
                raise ScheduleSyntaxError(f"invalid factor {token!r}", line_no, column)
            site = int(match.group("site"))
            if site < 1:
                raise ScheduleSyntaxError("sites start at 1", line_no, column)
            if site in seen:
                raise ScheduleDuplicateSiteError(f"site {site} appears twice in one term", line_no, column)
            seen.add(site)
            self._reference_site(site, line_no, column)
            factors.append(Factor(axis=match.group("axis"), site=site))
        factors.sort(key=lambda factor: factor.site)
        term = ScheduleTerm(coeff=coeff, factors=factors or [Factor(axis="I")])
        if self._open_block is None:
            self._open_block = HamiltonianBlock(terms=[])
            self.statements.append(self._open_block)
        self._open_block.terms.append(term)

    def _evolve(self, tokens, line_no: int) -> None:
        self._seen_statement = True
        keyword_column = tokens[0][1]
        if len(tokens) != 2:
            raise ScheduleSyntaxError("'evolve' takes exactly one time expression", line_no, keyword_column)
        if not any(isinstance(statement, HamiltonianBlock) for statement in self.statements):
            raise ScheduleSyntaxError("'evolve' before any 'term'", line_no, keyword_column)
        self._open_block = None
        self.statements.append(Evolve(time=parse_time(tokens[1][0], line_no, tokens[1][1])))

    def _measure(self, tokens, line_no: int) -> None:
        self._seen_statement = True
        if len(tokens) != 3:
            raise ScheduleSyntaxError("'measure' takes a site and an axis", line_no, tokens[0][1])
        site = self._integer(tokens[1][0], tokens[1][1], line_no, "a site number")
        self._reference_site(site, line_no, tokens[1][1])
        basis, column = tokens[2]
        if basis not in ("x", "y", "z"):
            raise ScheduleSyntaxError(f"measurement axis must be x, y or z, got {basis!r}", line_no, column)
        self._open_block = None
        self.statements.append(Measure(site=site, basis=basis))


def parse_time(token: str, line_no: Optional[int] = None, column: Optional[int] = None) -> TimeExpr:
    match = _TIME_PI.match(token)
    with_pi = match is not None
    if not with_pi:
        match = _TIME_DECIMAL.match(token)
    if match is None:
        raise ScheduleSyntaxError(f"invalid time expression {token!r}", line_no, column)
    numerator = float(match.group("num")) if match.group("num") else 1.0
    denominator = int(match.groupdict().get("den") or 1)
    if not math.isfinite(numerator) or numerator <= 0 or denominator < 1:
        raise ScheduleSyntaxError(f"time {token!r} must be finite and positive", line_no, column)
    return TimeExpr(numerator=numerator, with_pi=with_pi, denominator=denominator, over_n=bool(match.group("over")))


def parse_schedule(text: str) -> Schedule:
    """
    Parses schedule text into its normalized form: factors sorted by site and
    terms of a block sorted by their first site (identity first).
    Raises:
        ScheduleSyntaxError: On malformed input.
        UnknownSiteError: For sites beyond the `qubits` header.
        ScheduleDuplicateSiteError: For a site repeated within one term.
    """
    try:
        return ScheduleParser(text).parse()
    except Exception as e:
        logger.info(f"Error while parsing schedule : {str(e)}")
        raise


def pretty_print(schedule: Schedule) -> str:
    lines = [f"qubits {schedule.n_sites}"]
    if schedule.n_bosons is not None:
        lines.append(f"bosons {schedule.n_bosons}")
    for statement in schedule.statements:
        if isinstance(statement, HamiltonianBlock):
            for term in statement.terms:
                lines.append(f"term {term.coeff!r} " + " ".join(factor.render() for factor in term.factors))
        elif isinstance(statement, Evolve):
            lines.append(f"evolve {statement.time.render()}")
        else:
            lines.append(f"measure {statement.site} {statement.basis}")
    return "\n".join(lines) + "\n"


def compile_to_bosonic(schedule: Schedule, N: int) -> Schedule:
    """
    Replaces sigma by S: coefficients scale by N^(2 - order), so single-site
    terms gain N, pairs are unchanged and identity terms gain N^2. Every time
    not already written over N is divided by N.
    Raises:
        CompileError: If bosons are already bound or N < 1.
        OrderError: For a term with more than two non-identity factors.
    """
    if schedule.n_bosons is not None:
        raise CompileError(f"schedule is already bound to {schedule.n_bosons} bosons")
    if N < 1:
        raise CompileError(f"boson number must be >= 1, got {N}")
    statements = []
    for index, statement in enumerate(schedule.statements, start=1):
        if isinstance(statement, HamiltonianBlock):
            terms = []
            for term in statement.terms:
                if term.order > 2:
                    rendered = " ".join(factor.render() for factor in term.factors)
                    raise OrderError(f"statement {index}: term '{rendered}' has order {term.order} > 2")
                terms.append(ScheduleTerm(coeff=term.coeff * N ** (2 - term.order), factors=list(term.factors)))
            statements.append(HamiltonianBlock(terms=terms))
        elif isinstance(statement, Evolve):
            statements.append(Evolve(time=statement.time.model_copy(update={"over_n": True})))
        else:
            statements.append(statement.model_copy())
    logger.debug(f"compiled schedule for N={N}: {len(statements)} statements")
    return Schedule(n_sites=schedule.n_sites, n_bosons=N, statements=statements)


def block_operator(block: HamiltonianBlock, M: int, N: int, allow_large: bool = False) -> Operator:
    terms = []
    for term in block.terms:
        ops = [(factor.axis.lower(), factor.site) for factor in term.factors if factor.axis != "I"]
        terms.append((term.coeff, spin_handler.operator_product(ops, M=M, N=N, allow_large=allow_large)))
    return spin_handler.operator_sum(terms, dim=(N + 1) ** M)


def realize(schedule: Schedule, allow_large: bool = False) -> List[Tuple[Operator, float]]:
    """
    Pairs every evolve with the most recent Hamiltonian block.
    Raises:
        CompileError: If no boson number is bound.
        DimensionCapError: If (N+1)^M exceeds the configured cap.
    """
    if schedule.n_bosons is None:
        raise CompileError("realize needs a schedule with bosons bound; compile it first")
    N, M = schedule.n_bosons, schedule.n_sites
    check_dimension_cap((N + 1) ** M, allow_large)
    steps, current = [], None
    for statement in schedule.statements:
        if isinstance(statement, HamiltonianBlock):
            current = block_operator(statement, M, N, allow_large)
        elif isinstance(statement, Evolve):
            if current is None:
                raise CompileError("evolve before any Hamiltonian block")
            steps.append((current, statement.time.evaluate(N)))
    return steps


def initial_register(labels: str, N: int) -> RegisterState:
    """
    Product state from one character per site: '+'/'-' for |1/sqrt2, +-1/sqrt2>>,
    '1' for |1,0>> (all bosons in a) and '0' for |0,1>>.
    """
    amplitudes = {
        "+": (1 / np.sqrt(2), 1 / np.sqrt(2)),
        "-": (1 / np.sqrt(2), -1 / np.sqrt(2)),
        "1": (1.0, 0.0),
        "0": (0.0, 1.0),
    }
    unknown = [label for label in labels if label not in amplitudes]
    if not labels or unknown:
        raise CompileError(f"initial state labels must be drawn from '+-01', got {labels!r}")
    return spin_handler.product_state([spin_handler.coherent_qubit_state(*amplitudes[label], N) for label in labels])


def execute_schedule(
    schedule: Schedule, initial: Optional[RegisterState] = None, allow_large: bool = False
) -> Tuple[RegisterState, List[dict]]:
    """
    Runs a bound schedule from ``initial`` (default |1/sqrt2, 1/sqrt2>> on every
    site). Each measure statement records <S^axis_site>/N at that point.
    """
    if schedule.n_bosons is None:
        raise CompileError("execute needs a schedule with bosons bound; compile it first")
    N, M = schedule.n_bosons, schedule.n_sites
    steps = iter(realize(schedule, allow_large))
    state = initial or initial_register("+" * M, N)
    if state.n_sites != M or state.n_bosons != N:
        raise CompileError(f"initial state has {state.n_sites} sites of {state.n_bosons} bosons, expected {M} of {N}")
    measurements, elapsed = [], 0.0
    for statement in schedule.statements:
        if isinstance(statement, Evolve):
            operator, t = next(steps)
            state = evolve_unitary(state, operator, t)
            elapsed += t
        elif isinstance(statement, Measure):
            op = spin_handler.embed(spin_handler.spin_operator(statement.basis, N), statement.site, M, N, allow_large)
            value = spin_handler.expectation(state, op).real / N
            measurements.append({"site": statement.site, "basis": statement.basis, "time": elapsed, "value": value})
    return state, measurements


class ScheduleHandler:
    """Schedule-file subcommands: compile to the bosonic form and execute."""

    def __init__(self, config: ExperimentConfig, writer: ArtifactWriter):
        self.config = config
        self.writer = writer

    def read(self) -> Schedule:
        path = self.config.input_path
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise IoError(ErrorMessages.IO.format(action="read schedule", path=path, reason=e)) from e
        return parse_schedule(text)

    def compile_file(self) -> dict:
        try:
            N = self.config.bosons
            compiled = compile_to_bosonic(self.read(), N)
            name = f"{self.config.input_path.stem}_N{N}.bsched"
            self.writer.write_text(name, pretty_print(compiled))
            terms = [
                {"coeff": term.coeff, "factors": " ".join(factor.render() for factor in term.factors)}
                for block in compiled.blocks()
                for term in block.terms
            ]
            times = [statement.time.evaluate(N) for statement in compiled.statements if statement.kind == "evolve"]
            return {"file": name, "terms": terms, "times": times}
        except Exception as e:
            logger.info(f"Error while compiling schedule : {str(e)}")
            raise

    def run_file(self) -> dict:
        try:
            n = self.config.bosons
            schedule = self.read()
            if schedule.n_bosons is None:
                if n is None:
                    raise ArgumentError("schedule has no bosons bound; pass --n")
                schedule = compile_to_bosonic(schedule, n)
            elif n is not None and n != schedule.n_bosons:
                raise ArgumentError(f"--n {n} conflicts with 'bosons {schedule.n_bosons}' in the schedule")
            N, M = schedule.n_bosons, schedule.n_sites
            initial = initial_register(self.config.init, N) if self.config.init else None
            final, measurements = execute_schedule(schedule, initial, self.config.allow_large)
            observables = pd.DataFrame(
                {
                    "site": list(range(1, M + 1)),
                    **{f"s{axis}_over_N": spin_handler.site_observables(final, axis) for axis in ("x", "y", "z")},
                }
            )
            files = [self.writer.write_table("final_observables", observables, self.config.format)]
            if measurements:
                files.append(self.writer.write_table("measurements", pd.DataFrame(measurements), self.config.format))
            logger.info(f"run-schedule {self.config.input_path.name}: N={N}, M={M}, {len(measurements)} measurements")
            return {"files": files, "n_bosons": N, "n_sites": M, "measurements": measurements}
        except Exception as e:
            logger.info(f"Error while running schedule : {str(e)}")
            raise
