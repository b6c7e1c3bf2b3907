import math
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.special import comb

from scripts.config.constants import Defaults, Tolerances
from scripts.core.handlers import spin_handler
from scripts.core.handlers.dynamics_handler import evolve_states, evolve_unitary, propagate
from scripts.core.handlers.entanglement_handler import entangler_initial_state, entropy_trajectory
from scripts.core.schemas.algolab_model import (
    CnotReport,
    DeutschReport,
    EntanglerResult,
    GroverResult,
    OracleKind,
    ProjectionOutcome,
)
from scripts.core.schemas.dynamics_model import Trajectory
from scripts.core.schemas.spin_model import Operator, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import AmbiguousOutcomeError, ArgumentError, NoPeakError
from scripts.logging import logger
from scripts.utils.linalg_util import check_dimension_cap, commutator, kron_all

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _zz(N: int) -> Operator:
    return spin_handler.operator_product([("z", 1), ("z", 2)], M=2, N=N)


def entangler_closed_form(N: int, t: float) -> RegisterState:
    """sum sqrt(C(N,k1) C(N,k2)) 2^-N exp(-i (N-2k1)(N-2k2) t) |k1, k2>."""
    k = np.arange(N + 1)
    weights = np.sqrt(comb(N, k)) * 2.0 ** (-N / 2.0)
    sz = N - 2.0 * k
    amps = np.outer(weights, weights) * np.exp(-1j * np.outer(sz, sz) * t)
    return RegisterState(n_bosons=N, n_sites=2, amps=amps)


def run_entangler(N: int, t_grid: Sequence[float], keep_states: bool = False) -> EntanglerResult:
    """
    Evolves |1/sqrt2, 1/sqrt2>>^2 under Sz1 Sz2.
    Returns:
        EntanglerResult: The site-1 entropy trajectory, the state at t = pi/4N
        and, with keep_states, the state at every grid time.
    """
    try:
        trajectory = entropy_trajectory(N, t_grid)
        initial = entangler_initial_state(N)
        zz = _zz(N)
        snapshots = evolve_states(initial, zz, t_grid) if keep_states else []
        quarter = evolve_unitary(initial, zz, math.pi / (4 * N))
        logger.info(f"entangler N={N}: {len(trajectory.times)} samples")
        return EntanglerResult(n_bosons=N, trajectory=trajectory, state_at_quarter=quarter, snapshots=snapshots)
    except Exception as e:
        logger.info(f"Error while running entangler : {str(e)}")
        raise


def cnot_hamiltonian(N: int) -> Operator:
    """N Sz1 - N Sz2 + N^2."""
    sz = spin_handler.spin_operator("z", N)
    identity = Operator(matrix=sp.identity((N + 1) ** 2, dtype=complex, format="csr"), hermitian_hint=True)
    return spin_handler.operator_sum(
        [
            (float(N), spin_handler.embed(sz, 1, 2, N)),
            (-float(N), spin_handler.embed(sz, 2, 2, N)),
            (float(N * N), identity),
        ]
    )


def run_cnot_analogue(N: int) -> CnotReport:
    """
    Entangles for pi/4N, applies N Sz1 - N Sz2 + N^2 for another pi/4N and
    post-selects site 2 on its extreme Fock states. Site 1 should be left in
    |+1/sqrt2, 1/sqrt2>> for k2 = 0 and in |-1/sqrt2, 1/sqrt2>> for k2 = N.
    """
    try:
        t = math.pi / (4 * N)
        initial = entangler_initial_state(N)
        entangled = evolve_unitary(initial, _zz(N), t)
        local = cnot_hamiltonian(N)
        state = evolve_unitary(entangled, local, t)

        projections = []
        for k2, sign, label in ((0, 1.0, "+"), (N, -1.0, "-")):
            site1, probability = spin_handler.conditional_state(state, 2, k2)
            reference = spin_handler.coherent_qubit_state(sign * INV_SQRT2, INV_SQRT2, N)
            projections.append(
                ProjectionOutcome(
                    k=k2,
                    probability=probability,
                    fidelity=spin_handler.fidelity(reference, site1),
                    reference=f"|{label}1/sqrt2, 1/sqrt2>>",
                )
            )

        oracle = la.expm(-1j * local.to_dense() * t) @ (la.expm(-1j * _zz(N).to_dense() * t) @ initial.amps)
        oracle_fidelity = spin_handler.fidelity(oracle, state)
        logger.info(f"cnot N={N}: projection fidelities {[p.fidelity for p in projections]}")
        return CnotReport(n_bosons=N, t=t, state=state, projections=projections, oracle_fidelity=oracle_fidelity)
    except Exception as e:
        logger.info(f"Error while running CNOT analogue : {str(e)}")
        raise


def hamiltonian_deutsch(kind: OracleKind, N: int) -> Operator:
    """H_D in {0, 2N Sz2, Sz1 Sz2 + N Sz2 - N^2, -Sz1 Sz2 + N Sz2 - N^2}."""
    kind = OracleKind(kind)
    dim = (N + 1) ** 2
    if kind is OracleKind.CONST0:
        return spin_handler.operator_sum([], dim=dim)
    sz2 = spin_handler.embed(spin_handler.spin_operator("z", N), 2, 2, N)
    if kind is OracleKind.CONST1:
        return spin_handler.operator_sum([(2.0 * N, sz2)])
    identity = Operator(matrix=sp.identity(dim, dtype=complex, format="csr"), hermitian_hint=True)
    sign = 1.0 if kind is OracleKind.BAL01 else -1.0
    return spin_handler.operator_sum([(sign, _zz(N)), (float(N), sz2), (-float(N * N), identity)])


def deutsch_initial_state(N: int) -> RegisterState:
    plus = spin_handler.coherent_qubit_state(INV_SQRT2, INV_SQRT2, N)
    up = spin_handler.coherent_qubit_state(1.0, 0.0, N)
    return spin_handler.product_state([plus, up])


def default_oracle_time(N: int) -> float:
    return math.pi / (2 * N)


def deutsch_overlaps(kind: OracleKind, N: int, t_oracle: Optional[float] = None) -> DeutschReport:
    """Evolves under H_D and reports squared overlaps with |1/sqrt2, +-1/sqrt2>>|1,0>>."""
    kind = OracleKind(kind)
    t_oracle = default_oracle_time(N) if t_oracle is None else t_oracle
    if not t_oracle > 0:
        raise ArgumentError(f"oracle time must be positive, got {t_oracle}")
    final = evolve_unitary(deutsch_initial_state(N), hamiltonian_deutsch(kind, N), t_oracle)
    up = spin_handler.coherent_qubit_state(1.0, 0.0, N)
    overlaps = []
    for sign in (1.0, -1.0):
        reference = spin_handler.coherent_qubit_state(INV_SQRT2, sign * INV_SQRT2, N)
        overlaps.append(spin_handler.fidelity(spin_handler.product_state([reference, up]), final))
    site2 = float(np.sum(np.abs(final.tensor()[:, N]) ** 2))
    return DeutschReport(
        oracle=kind,
        n_bosons=N,
        t_oracle=t_oracle,
        overlap_plus=overlaps[0],
        overlap_minus=overlaps[1],
        site2_fidelity=site2,
    )


def run_deutsch(kind: OracleKind, N: int, t_oracle: Optional[float] = None) -> DeutschReport:
    """
    One oracle evaluation; "+" on site 1 means constant, "-" means balanced.
    Raises:
        AmbiguousOutcomeError: Unless one overlap is >= 0.99 and the other <= 0.01.
    """
    try:
        report = deutsch_overlaps(kind, N, t_oracle)
        plus, minus = report.overlap_plus, report.overlap_minus
        if plus >= Tolerances.DECISIVE_HIGH and minus <= Tolerances.DECISIVE_LOW:
            report.classification = "constant"
        elif minus >= Tolerances.DECISIVE_HIGH and plus <= Tolerances.DECISIVE_LOW:
            report.classification = "balanced"
        else:
            raise AmbiguousOutcomeError(ErrorMessages.AMBIGUOUS.format(plus=plus, minus=minus), plus, minus)
        logger.info(f"deutsch {report.oracle.value} N={N}: {report.classification}")
        return report
    except Exception as e:
        logger.info(f"Error while running Deutsch oracle : {str(e)}")
        raise


def _solution_signs(M: int, solution: Optional[Sequence[int]]) -> List[float]:
    if solution is None:
        return [1.0] * M
    if len(solution) != M or any(bit not in (0, 1) for bit in solution):
        raise ArgumentError(f"solution must be {M} bits, got {list(solution)}")
    return [1.0 if bit else -1.0 for bit in solution]


def build_grover_hamiltonian(
    M: int, N: int, solution: Optional[Sequence[int]] = None, allow_large: bool = False
) -> Operator:
    """
    H_G = N^2 prod_n (1 + Sx_n/N)/2 + N^2 prod_n (1 + s_n Sz_n/N)/2, where s_n = +1
    for solution bit 1 (all bosons in mode a) and -1 for bit 0.
    """
    if M < 1:
        raise ArgumentError(f"register needs at least one site, got {M}")
    signs = _solution_signs(M, solution)
    check_dimension_cap((N + 1) ** M, allow_large)
    identity = sp.identity(N + 1, dtype=complex, format="csr")
    sx = spin_handler.spin_operator("x", N).matrix
    sz = spin_handler.spin_operator("z", N).matrix
    start = kron_all([(identity + sx / N) / 2.0] * M)
    target = kron_all([(identity + s * sz / N) / 2.0 for s in signs])
    return Operator(matrix=N * N * (start + target), hermitian_hint=True, label="H_G")


def grover_initial_state(M: int, N: int) -> RegisterState:
    plus = spin_handler.coherent_qubit_state(INV_SQRT2, INV_SQRT2, N)
    return spin_handler.product_state([plus] * M)


def grover_second_derivative(
    M: int, N: int, solution: Optional[Sequence[int]] = None, site: int = 1
) -> float:
    """d^2 <Sz_site/N>/dt^2 at t = 0, as -<X|[H, [H, Sz_site/N]]|X>."""
    H = build_grover_hamiltonian(M, N, solution).matrix
    observable = spin_handler.embed(spin_handler.spin_operator("z", N), site, M, N).matrix / N
    double = commutator(H, commutator(H, observable))
    psi = grover_initial_state(M, N).amps
    return float(-np.vdot(psi, double @ psi).real)


def default_grover_time(M: int, N: int) -> float:
    return 1.5 * math.pi * math.sqrt(2**M) / N


def first_peak(times: np.ndarray, values: np.ndarray) -> tuple:
    """First interior local maximum, refined by the vertex of the parabola through three samples."""
    for i in range(1, values.size - 1):
        if values[i] >= values[i - 1] and values[i] > values[i + 1] and values[i] > values[0]:
            left, mid, right = values[i - 1], values[i], values[i + 1]
            curvature = left - 2.0 * mid + right
            offset = 0.5 * (left - right) / curvature if curvature != 0 else 0.0
            step = times[i + 1] - times[i]
            return float(times[i] + offset * step), float(mid - 0.25 * (left - right) * offset)
    raise NoPeakError(ErrorMessages.NO_PEAK.format(t_max=float(times[-1])))


def run_grover(
    M: int,
    N: int,
    t_max: Optional[float] = None,
    steps: int = Defaults.GROVER_STEPS,
    solution: Optional[Sequence[int]] = None,
) -> GroverResult:
    """
    Samples <Sz_n>/N for every site while H_G drives |X> towards the solution.
    The peak is taken on site 1, signed so that the solution value is +1.
    """
    try:
        if steps < 100:
            raise ArgumentError(f"steps must be >= 100, got {steps}")
        signs = _solution_signs(M, solution)
        t_max = default_grover_time(M, N) if t_max is None else t_max
        H = build_grover_hamiltonian(M, N, solution)
        initial = grover_initial_state(M, N)
        times = np.linspace(0.0, t_max, steps + 1)
        observables = [
            spin_handler.embed(spin_handler.spin_operator("z", N), n, M, N).matrix / N for n in range(1, M + 1)
        ]
        values = np.zeros((times.size, M))
        for i, t in enumerate(times):
            psi = propagate(initial.amps, H, float(t))
            values[i] = [np.vdot(psi, op @ psi).real for op in observables]
        trajectory = Trajectory(times=times, values=values, labels=[f"sz_over_N_site{n}" for n in range(1, M + 1)])
        t_peak, peak_value = first_peak(times, signs[0] * values[:, 0])
        second = grover_second_derivative(M, N, solution)
        result = GroverResult(
            n_sites=M,
            n_bosons=N,
            trajectory=trajectory,
            t_peak=t_peak,
            peak_value=peak_value,
            omega_est=math.pi / (2.0 * t_peak),
            omega_commutator=math.sqrt(abs(second) / 2.0),
            second_derivative=second,
        )
        logger.info(f"grover M={M} N={N}: t_peak={t_peak:.6g}, peak={peak_value:.6g}")
        return result
    except Exception as e:
        logger.info(f"Error while running Grover search : {str(e)}")
        raise
