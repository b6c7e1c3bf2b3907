import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
import pandas as pd

from scripts.config.constants import FileNames
from scripts.core.handlers import algolab_handler, dynamics_handler, entanglement_handler, qubus_handler, spin_handler
from scripts.core.schemas.algolab_model import OracleKind
from scripts.core.schemas.dynamics_model import LindbladSpec
from scripts.core.schemas.entanglement_model import BipartitionSpec
from scripts.core.schemas.experiment_model import ExperimentConfig
from scripts.core.schemas.spin_model import DensityMatrix, Operator
from scripts.exceptions.module_exception import AmbiguousOutcomeError
from scripts.logging import logger
from scripts.utils.output_util import ArtifactWriter


def dephase_correlator(M: int, N: int, gamma: float, t_max: float, samples: int, loss: bool = False):
    """Decay of <prod_n Sx_n>/N^M from |1/sqrt2, 1/sqrt2>>^M under dephasing or literal particle loss."""
    plus = spin_handler.coherent_qubit_state(1 / np.sqrt(2), 1 / np.sqrt(2), N)
    state = spin_handler.product_state([plus] * M)
    times = np.linspace(0.0, t_max, samples)
    if loss:
        model = dynamics_handler.particle_loss_couplings(N, range(1, M + 1), M)
        spec = LindbladSpec(gamma=gamma, couplings=model.couplings)
        psi = dynamics_handler.loss_embed_state(model, state)
        observable = dynamics_handler.loss_spin_operator(model, "x", 1).matrix
        for site in range(2, M + 1):
            observable = observable @ dynamics_handler.loss_spin_operator(model, "x", site).matrix
    else:
        spec = dynamics_handler.dephasing_spec(M, N, gamma)
        psi = state.amps
        observable = spin_handler.operator_product([("x", site) for site in range(1, M + 1)], M, N).matrix
    rho = DensityMatrix(matrix=np.outer(psi, psi.conj()))
    correlator = Operator(matrix=observable / N**M, hermitian_hint=True, label="correlator")
    trajectory = dynamics_handler.lindblad_trajectory(rho, spec, {"correlator": correlator}, times)
    return trajectory, dynamics_handler.correlator_decay_rate(trajectory)


class ExperimentHandler:
    """
    Runs one experiment subcommand for a validated flag set. Each public method
    writes its tables through the artifact writer and returns the summary data.
    """

    def __init__(self, config: ExperimentConfig, writer: ArtifactWriter):
        self.config = config
        self.writer = writer

    def _map(self, function: Callable, items: Iterable) -> list:
        """Order-preserving map; sequential unless jobs > 1."""
        items = list(items)
        if self.config.jobs <= 1 or len(items) <= 1:
            return [function(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
            return list(pool.map(function, items))

    def _table(self, stem: str, frame: pd.DataFrame) -> str:
        return self.writer.write_table(stem, frame, self.config.format)

    def entangler(self) -> dict:
        try:
            t_grid = np.linspace(0.0, self.config.t_max, self.config.steps)

            def one(N: int) -> dict:
                trajectory = entanglement_handler.entropy_trajectory(N, t_grid)
                frame = pd.DataFrame(
                    {"t": trajectory.times, "entropy_bits": trajectory.column("entropy_bits"),
                     "entropy_norm": trajectory.column("entropy_norm")}
                )
                quarter = algolab_handler.entangler_closed_form(N, math.pi / (4 * N))
                entropy = entanglement_handler.von_neumann_entropy(
                    entanglement_handler.reduced_density(quarter, BipartitionSpec.keep([1], 2))
                )
                return {
                    "N": N,
                    "file": self._table(f"entangler_N{N}", frame),
                    "max_entropy_bits": float(frame["entropy_bits"].max()),
                    "entropy_at_pi_over_4N": entropy,
                }

            rows = self._map(one, self.config.n_list)
            quarter_table = pd.DataFrame({"N": [row["N"] for row in rows],
                                          "entropy_at_pi_over_4N": [row["entropy_at_pi_over_4N"] for row in rows]})
            self._table(Path(FileNames.QUARTER_ENTROPY).stem, quarter_table)
            return {"runs": rows}
        except Exception as e:
            logger.info(f"Error while running entangler experiment : {str(e)}")
            raise

    def cnot(self) -> dict:
        try:
            reports = self._map(algolab_handler.run_cnot_analogue, self.config.n_list)
            rows = [
                {"N": report.n_bosons, "k2": outcome.k, "probability": outcome.probability,
                 "fidelity": outcome.fidelity, "reference": outcome.reference,
                 "oracle_fidelity": report.oracle_fidelity}
                for report in reports
                for outcome in report.projections
            ]
            return {"file": self._table("cnot", pd.DataFrame(rows)), "projections": rows}
        except Exception as e:
            logger.info(f"Error while running CNOT experiment : {str(e)}")
            raise

    def _deutsch_case(self, case) -> dict:
        kind, N = case
        try:
            report = algolab_handler.run_deutsch(kind, N, self.config.oracle_time)
        except AmbiguousOutcomeError:
            report = algolab_handler.deutsch_overlaps(kind, N, self.config.oracle_time)
            report.classification = "ambiguous"
        return report.model_dump(mode="json")

    def deutsch(self) -> dict:
        try:
            kinds = [self.config.oracle] if self.config.oracle else list(OracleKind)
            rows = self._map(self._deutsch_case, [(kind, N) for kind in kinds for N in self.config.n_list])
            data = {"file": self._table("deutsch", pd.DataFrame(rows)), "results": rows}
            if len(rows) == 1:
                data.update(rows[0])
            return data
        except Exception as e:
            logger.info(f"Error while running Deutsch experiment : {str(e)}")
            raise

    def _grover_run(self, N: int) -> dict:
        config = self.config
        result = algolab_handler.run_grover(config.m, N, config.t_max, config.steps, config.solution)
        frame = pd.DataFrame(result.trajectory.values, columns=result.trajectory.labels)
        frame.insert(0, "t", result.trajectory.times)
        return {
            "N": N,
            "file": self._table(f"grover_M{config.m}_N{N}", frame),
            "t_peak": result.t_peak,
            "peak_value": result.peak_value,
            "omega_est": result.omega_est,
            "omega_commutator": result.omega_commutator,
            "second_derivative": result.second_derivative,
        }

    def grover(self) -> dict:
        try:
            rows = self._map(self._grover_run, self.config.n_list)
            peaks = pd.DataFrame([{key: value for key, value in row.items() if key != "file"} for row in rows])
            return {"runs": rows, "peaks_file": self._table(f"grover_M{self.config.m}_peaks", peaks)}
        except Exception as e:
            logger.info(f"Error while running Grover experiment : {str(e)}")
            raise

    def dephase(self) -> dict:
        config = self.config
        try:
            horizon = config.t_max or (1.0 / config.gamma if config.gamma > 0 else 1.0)
            kind = "loss" if config.loss else "dephase"

            def one(N: int) -> dict:
                trajectory, rate = dephase_correlator(config.m, N, config.gamma, horizon, config.steps, config.loss)
                frame = pd.DataFrame({"t": trajectory.times, "correlator": trajectory.column("correlator"),
                                      "fitted_rate": rate})
                return {"N": N, "file": self._table(f"{kind}_M{config.m}_N{N}", frame),
                        "fitted_rate": rate, "rate_over_gamma": rate / config.gamma if config.gamma else None}

            return {"runs": self._map(one, config.n_list), "loss": config.loss}
        except Exception as e:
            logger.info(f"Error while running {'loss' if config.loss else 'dephasing'} experiment : {str(e)}")
            raise

    def _buscheck_run(self, N: int) -> dict:
        config = self.config
        scale = config.g * math.sqrt(N)
        results = qubus_handler.delta_sweep(
            config.g, config.omega_pulse, N, [ratio * scale for ratio in config.deltas], config.photon_cutoff
        )
        frame = pd.DataFrame(
            {"delta": [r.delta for r in results], "infidelity": [r.infidelity for r in results],
             "fidelity_printed": [r.fidelity_printed for r in results],
             "photon_leak": [r.max_photon_population for r in results],
             "leaked_population": [r.leaked_population for r in results], "t": [r.t for r in results]}
        )
        return {"N": N, "file": self._table(f"buscheck_N{N}", frame), "infidelity": frame["infidelity"].tolist()}

    def buscheck(self) -> dict:
        try:
            return {"runs": self._map(self._buscheck_run, self.config.n_list)}
        except Exception as e:
            logger.info(f"Error while running bus check : {str(e)}")
            raise
