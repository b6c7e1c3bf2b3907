from typing import Sequence

import numpy as np
import scipy.linalg as la

from scripts.config.constants import Tolerances
from scripts.core.handlers import spin_handler
from scripts.core.handlers.dynamics_handler import evolve_unitary
from scripts.core.schemas.dynamics_model import Trajectory
from scripts.core.schemas.entanglement_model import BipartitionSpec
from scripts.core.schemas.spin_model import DensityMatrix, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import (
    ArgumentError,
    DimensionError,
    NegativeEigenvalueError,
    NonHermitianError,
)
from scripts.logging import logger
from scripts.utils.linalg_util import max_abs


def _split(state: RegisterState, spec: BipartitionSpec) -> np.ndarray:
    """Amplitudes as a (kept, traced) matrix, grouping indices on the site-major layout."""
    if spec.n_sites != state.n_sites or set(spec.keep_sites + spec.traced_sites) != set(
        range(1, state.n_sites + 1)
    ):
        raise DimensionError(
            ErrorMessages.DIMENSION.format(got=spec.keep_sites + spec.traced_sites, expected=state.n_sites)
        )
    axes = [site - 1 for site in spec.keep_sites + spec.traced_sites]
    kept_dim = state.site_dim ** len(spec.keep_sites)
    return state.tensor().transpose(axes).reshape(kept_dim, -1)


def reduced_density(state: RegisterState, spec: BipartitionSpec) -> DensityMatrix:
    """Partial trace over ``spec.traced_sites``; kept sites stay in listed order."""
    psi = _split(state, spec)
    rho = psi @ psi.conj().T
    return DensityMatrix(matrix=0.5 * (rho + rho.conj().T))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """
    -Tr(rho log2 rho) in bits.
    Raises:
        NonHermitianError: If rho is not Hermitian within 1e-10.
        NegativeEigenvalueError: If an eigenvalue lies below -1e-8.
    """
    if not rho.strict:
        deviation = max_abs(rho.matrix - rho.matrix.conj().T)
        if deviation > Tolerances.DENSITY_HERMITIAN:
            raise NonHermitianError(ErrorMessages.NON_HERMITIAN.format(dev=deviation))
    eigenvalues = la.eigvalsh(rho.matrix)
    if eigenvalues.min() < -Tolerances.EIGEN_CLIP:
        raise NegativeEigenvalueError(ErrorMessages.NEGATIVE_EIGENVALUE.format(value=eigenvalues.min()))
    eigenvalues = eigenvalues[eigenvalues > Tolerances.EIGEN_ZERO]
    return float(max(0.0, -np.sum(eigenvalues * np.log2(eigenvalues))))


def schmidt_coefficients(state: RegisterState, spec: BipartitionSpec) -> np.ndarray:
    """Singular values of the bipartite amplitude matrix, descending."""
    return la.svd(_split(state, spec), compute_uv=False)


def schmidt_entropy(state: RegisterState, spec: BipartitionSpec) -> float:
    weights = schmidt_coefficients(state, spec) ** 2
    weights = weights[weights > Tolerances.EIGEN_ZERO]
    return float(max(0.0, -np.sum(weights * np.log2(weights))))


def entangler_initial_state(N: int) -> RegisterState:
    plus = spin_handler.coherent_qubit_state(1 / np.sqrt(2), 1 / np.sqrt(2), N)
    return spin_handler.product_state([plus, plus])


def entropy_trajectory(N: int, t_grid: Sequence[float]) -> Trajectory:
    """
    Site-1 entropy of exp(-i Sz1 Sz2 t)|1/sqrt2, 1/sqrt2>>^2 along t_grid, raw and
    normalized by log2(N + 1).
    """
    try:
        t_grid = np.asarray(t_grid, dtype=float)
        if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0):
            raise ArgumentError("t_grid must be strictly increasing")
        zz = spin_handler.operator_product([("z", 1), ("z", 2)], M=2, N=N)
        initial = entangler_initial_state(N)
        keep_first = BipartitionSpec.keep([1], 2)
        e_max = np.log2(N + 1)
        values = np.zeros((t_grid.size, 2))
        for i, t in enumerate(t_grid):
            entropy = von_neumann_entropy(reduced_density(evolve_unitary(initial, zz, t), keep_first))
            values[i] = entropy, entropy / e_max
        logger.debug(f"entropy trajectory N={N}: {t_grid.size} points, max {values[:, 0].max():.6g} bits")
        return Trajectory(times=t_grid, values=values, labels=["entropy_bits", "entropy_norm"])
    except Exception as e:
        logger.info(f"Error while computing entropy trajectory : {str(e)}")
        raise
