"""
Unitary and Lindblad-form time evolution.

The dissipative generator is the double commutator
    d rho/dt = -i[H, rho] - gamma * sum_n [A_n, [A_n, rho]]
applied literally, also for non-Hermitian A_n.
"""
import math
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from scripts.config.constants import Defaults, Tolerances
from scripts.core.handlers import spin_handler
from scripts.core.schemas.dynamics_model import LindbladSpec, LossModel, Trajectory
from scripts.core.schemas.spin_model import DensityMatrix, Operator, QubitAmplitudes, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import (
    ArgumentError,
    DimensionCapError,
    DimensionError,
    FitError,
    NonHermitianError,
    StepSizeError,
)
from scripts.logging import logger
from scripts.utils.linalg_util import check_dimension_cap, kron_all, max_abs

State = Union[RegisterState, QubitAmplitudes]


def cached_spectrum(H: Operator):
    if H._spectrum is None:
        logger.debug(f"diagonalizing {H.dim}x{H.dim} operator {H.label or ''}")
        H._spectrum = la.eigh(H.to_dense())
    else:
        logger.debug(f"reusing cached spectrum of {H.label or 'operator'}")
    return H._spectrum


def _require_hermitian(H: Operator) -> None:
    if H.hermitian_hint:
        return
    deviation = max_abs(H.matrix - H.matrix.conj().T)
    if deviation > Tolerances.HERMITIAN * max(1.0, max_abs(H.matrix)):
        raise NonHermitianError(ErrorMessages.NON_HERMITIAN.format(dev=deviation))


def _rebuild(state: State, amps: np.ndarray) -> State:
    if isinstance(state, QubitAmplitudes):
        return QubitAmplitudes(n_bosons=state.n_bosons, amps=amps)
    return RegisterState(n_bosons=state.n_bosons, n_sites=state.n_sites, amps=amps)


def propagate(psi: np.ndarray, H: Operator, t: float) -> np.ndarray:
    """e^{-iHt} psi on a raw amplitude vector."""
    if psi.size != H.dim:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=psi.size, expected=H.dim))
    if t == 0:
        return psi.copy()
    if H.is_diagonal():
        return np.exp(-1j * H.diagonal().real * t) * psi
    energies, vectors = cached_spectrum(H)
    return vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ psi))


def evolve_unitary(state: State, H: Operator, t: float) -> State:
    """
    Applies e^{-iHt}. Diagonal Hamiltonians take an exact phase path; others are
    diagonalized once and the spectrum is cached on the operator.
    Raises:
        DimensionError: If the state and H differ in dimension.
        NonHermitianError: If H is not Hermitian.
    """
    try:
        _require_hermitian(H)
        return _rebuild(state, propagate(state.amps, H, t))
    except Exception as e:
        logger.info(f"Error while evolving state : {str(e)}")
        raise


def evolve_states(state: State, H: Operator, times: Sequence[float]) -> List[State]:
    _require_hermitian(H)
    return [_rebuild(state, propagate(state.amps, H, float(t))) for t in times]


def _default_dt(gamma: float, t: float) -> float:
    dt = t / Defaults.LINDBLAD_STEPS_PER_WINDOW
    if gamma > 0:
        dt = min(Tolerances.MAX_GAMMA_DT / gamma, dt)
    return dt


def _check_step(gamma: float, dt: float) -> None:
    if not dt > 0:
        raise StepSizeError(f"time step must be positive, got {dt!r}")
    if gamma * dt > Tolerances.MAX_GAMMA_DT * (1 + 1e-12):
        raise StepSizeError(ErrorMessages.STEP_SIZE.format(value=gamma * dt, limit=Tolerances.MAX_GAMMA_DT))


class DoubleCommutatorGenerator:
    """Right-hand side of the master equation on dense matrices."""

    def __init__(self, spec: LindbladSpec):
        self.gamma = spec.gamma
        self.hamiltonian = None if spec.hamiltonian is None else spec.hamiltonian.to_dense()
        self.couplings = [(op.to_dense(), (op.matrix @ op.matrix).toarray()) for op in spec.couplings]
        self.hermitian = spec.hermitian_couplings

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        drho = np.zeros_like(rho)
        if self.hamiltonian is not None:
            drho -= 1j * (self.hamiltonian @ rho - rho @ self.hamiltonian)
        if self.gamma:
            for a, a_sq in self.couplings:
                drho -= self.gamma * (a_sq @ rho - 2.0 * a @ rho @ a + rho @ a_sq)
        return drho

    def rk4_step(self, rho: np.ndarray, dt: float) -> np.ndarray:
        k1 = self(rho)
        k2 = self(rho + 0.5 * dt * k1)
        k3 = self(rho + 0.5 * dt * k2)
        k4 = self(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if self.hermitian:
            rho = 0.5 * (rho + rho.conj().T)
        return rho

    def integrate(self, rho: np.ndarray, t: float, dt: float) -> np.ndarray:
        if t <= 0:
            return rho.copy()
        steps = max(1, math.ceil(t / dt - 1e-9))
        step = t / steps
        for _ in range(steps):
            rho = self.rk4_step(rho, step)
        return rho


def _check_spec(rho: DensityMatrix, spec: LindbladSpec) -> None:
    if spec.dim is not None and spec.dim != rho.dim:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=rho.dim, expected=spec.dim))


def evolve_lindblad(
    rho: DensityMatrix, spec: LindbladSpec, t: float, dt: Optional[float] = None
) -> DensityMatrix:
    """
    Integrates the double-commutator master equation with fixed-step RK4.
    Args:
        rho: Initial density matrix.
        spec: Rate, couplings and optional Hamiltonian.
        t: Total time.
        dt: Step size; defaults to min(1e-2/gamma, t/1000). The step actually
            taken is t / ceil(t / dt).
    Returns:
        DensityMatrix: rho(t). Hermiticity is only enforced for Hermitian couplings.
    Raises:
        StepSizeError: If dt <= 0 or gamma * dt > 1e-2.
        DimensionError: If rho and spec disagree in dimension.
    """
    try:
        if t < 0:
            raise ArgumentError(f"evolution time must be non-negative, got {t}")
        _check_spec(rho, spec)
        if dt is None:
            if t == 0:
                return rho
            dt = _default_dt(spec.gamma, t)
        _check_step(spec.gamma, dt)
        generator = DoubleCommutatorGenerator(spec)
        final = generator.integrate(rho.matrix, t, dt)
        return DensityMatrix(matrix=final, strict=rho.strict and generator.hermitian)
    except Exception as e:
        logger.info(f"Error while integrating master equation : {str(e)}")
        raise


def lindblad_trajectory(
    rho: DensityMatrix,
    spec: LindbladSpec,
    observables: Dict[str, Operator],
    times: Sequence[float],
    dt: Optional[float] = None,
) -> Trajectory:
    """Samples Tr(O rho(t)) for each observable; times start at or after 0."""
    _check_spec(rho, spec)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] < 0:
        raise ArgumentError("trajectory times must be non-empty and non-negative")
    if dt is None:
        dt = _default_dt(spec.gamma, float(times[-1]) or 1.0)
    _check_step(spec.gamma, dt)
    generator = DoubleCommutatorGenerator(spec)
    dense = {label: op.to_dense() for label, op in observables.items()}
    values = np.zeros((times.size, len(dense)))
    current, clock = rho.matrix.copy(), 0.0
    for i, t in enumerate(times):
        current = generator.integrate(current, t - clock, dt)
        clock = t
        for j, matrix in enumerate(dense.values()):
            values[i, j] = np.trace(matrix @ current).real
    logger.debug(f"sampled {times.size} points of {list(dense)} with dt={dt:.3g}")
    return Trajectory(times=times, values=values, labels=list(dense))


def lindblad_superoperator(spec: LindbladSpec, dim: int) -> np.ndarray:
    """Generator on row-major vec(rho), where vec(A rho B) = (A kron B^T) vec(rho)."""
    identity = np.eye(dim)
    generator = np.zeros((dim * dim, dim * dim), dtype=complex)
    if spec.hamiltonian is not None:
        h = spec.hamiltonian.to_dense()
        generator -= 1j * (np.kron(h, identity) - np.kron(identity, h.T))
    for op in spec.couplings:
        a = op.to_dense()
        a_sq = a @ a
        generator -= spec.gamma * (np.kron(a_sq, identity) - 2.0 * np.kron(a, a.T) + np.kron(identity, a_sq.T))
    return generator


def exact_lindblad(rho: DensityMatrix, spec: LindbladSpec, t: float) -> DensityMatrix:
    """Superoperator exponential; reference solution for small systems."""
    _check_spec(rho, spec)
    if rho.dim**2 > Defaults.SUPEROPERATOR_MAX:
        raise DimensionCapError(ErrorMessages.DIMENSION_CAP.format(dim=rho.dim**2, cap=Defaults.SUPEROPERATOR_MAX))
    propagator = la.expm(lindblad_superoperator(spec, rho.dim) * t)
    final = (propagator @ rho.matrix.reshape(-1)).reshape(rho.dim, rho.dim)
    return DensityMatrix(matrix=final, strict=rho.strict and spec.hermitian_couplings)


def dephasing_spec(M: int, N: int, gamma: float, hamiltonian: Optional[Operator] = None) -> LindbladSpec:
    """A_n = S^z_n on every site."""
    sz = spin_handler.spin_operator("z", N)
    couplings = [spin_handler.embed(sz, n, M, N) for n in range(1, M + 1)]
    return LindbladSpec(gamma=gamma, couplings=couplings, hamiltonian=hamiltonian)


def correlator_decay_rate(trajectory: Trajectory, label: Optional[str] = None) -> float:
    """
    Least-squares slope of log|value| against t, returned as a positive rate.
    Raises:
        FitError: With fewer than 10 samples or any magnitude below 1e-13.
    """
    values = np.abs(trajectory.column(label))
    if values.size < Defaults.MIN_FIT_SAMPLES:
        raise FitError(ErrorMessages.FIT.format(reason=f"{values.size} samples, need {Defaults.MIN_FIT_SAMPLES}"))
    if np.any(values < Tolerances.FIT_MAGNITUDE):
        raise FitError(ErrorMessages.FIT.format(reason="magnitude below 1e-13"))
    slope, _ = np.polyfit(trajectory.times, np.log(values), 1)
    return float(-slope)


def loss_site_basis(N: int) -> List[tuple]:
    """(n_a, n_b) with n_a + n_b <= N, by total number, then n_a descending."""
    return [(n - m, m) for n in range(N + 1) for m in range(n + 1)]


def _site_ladder(basis: List[tuple], mode: int) -> sp.csr_matrix:
    index = {occupation: i for i, occupation in enumerate(basis)}
    rows, cols, data = [], [], []
    for col, occupation in enumerate(basis):
        if occupation[mode] == 0:
            continue
        lowered = list(occupation)
        lowered[mode] -= 1
        rows.append(index[tuple(lowered)])
        cols.append(col)
        data.append(math.sqrt(occupation[mode]))
    return sp.csr_matrix((data, (rows, cols)), shape=(len(basis),) * 2, dtype=complex)


def particle_loss_couplings(N: int, sites: Sequence[int], M: Optional[int] = None) -> LossModel:
    """
    Mode annihilators a_n, b_n on the truncated two-mode Fock space of each site.
    Args:
        N: Per-site boson cutoff.
        sites: Sites that lose particles; both modes of each contribute a coupling.
        M: Register size, defaults to the largest listed site.
    Returns:
        LossModel: Couplings ordered a_s, b_s per listed site, and every annihilator by name.
    """
    try:
        if N < 1:
            raise ArgumentError(ErrorMessages.BOSONS.format(n=N))
        sites = list(sites)
        M = M or max(sites, default=1)
        for site in sites:
            if not 1 <= site <= M:
                raise DimensionError(ErrorMessages.SITE.format(site=site, n_sites=M))
        basis = loss_site_basis(N)
        check_dimension_cap(len(basis) ** M)
        identity = sp.identity(len(basis), dtype=complex, format="csr")
        annihilators = {}
        for site in range(1, M + 1):
            for mode, name in enumerate("ab"):
                factors = [_site_ladder(basis, mode) if n == site else identity for n in range(1, M + 1)]
                annihilators[f"{name}{site}"] = Operator(matrix=kron_all(factors), label=f"{name}{site}")
        couplings = [annihilators[f"{name}{site}"] for site in sites for name in "ab"]
        return LossModel(n_bosons=N, n_sites=M, site_basis=basis, couplings=couplings, annihilators=annihilators)
    except Exception as e:
        logger.info(f"Error while building particle loss couplings : {str(e)}")
        raise


def loss_spin_operator(model: LossModel, axis: str, site: int) -> Operator:
    """Schwinger operator of one site on the enlarged space."""
    a = model.annihilators[f"a{site}"].matrix
    b = model.annihilators[f"b{site}"].matrix
    a_dag, b_dag = a.conj().T, b.conj().T
    if axis == "x":
        matrix = a_dag @ b + b_dag @ a
    elif axis == "y":
        matrix = -1j * (a_dag @ b) + 1j * (b_dag @ a)
    elif axis == "z":
        matrix = a_dag @ a - b_dag @ b
    else:
        raise ArgumentError(ErrorMessages.AXIS.format(axis=axis))
    return Operator(matrix=matrix, hermitian_hint=True, label=f"S{axis}{site}")


def loss_embed_state(model: LossModel, state: RegisterState) -> np.ndarray:
    """Maps |k_1 ... k_M> to |(k_1, N-k_1) ... (k_M, N-k_M)> in the enlarged space."""
    if state.n_bosons != model.n_bosons or state.n_sites != model.n_sites:
        raise DimensionError(
            ErrorMessages.DIMENSION.format(
                got=(state.n_bosons, state.n_sites), expected=(model.n_bosons, model.n_sites)
            )
        )
    N = model.n_bosons
    position = {occupation: i for i, occupation in enumerate(model.site_basis)}
    site_map = np.array([position[(k, N - k)] for k in range(N + 1)])
    embedded = np.zeros((model.site_dim,) * model.n_sites, dtype=complex)
    index = np.ix_(*([site_map] * model.n_sites))
    embedded[index] = state.tensor()
    return embedded.reshape(-1)
