import numpy as np
import scipy.sparse as sp

from scripts.config import Simulation
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import DimensionCapError


def max_abs(matrix) -> float:
    """Largest absolute entry of a dense or sparse matrix (0 for an empty one)."""
    if sp.issparse(matrix):
        data = matrix.tocoo().data
        return float(np.abs(data).max()) if data.size else 0.0
    matrix = np.asarray(matrix)
    return float(np.abs(matrix).max()) if matrix.size else 0.0


def check_dimension_cap(dim: int, allow_large: bool = False) -> int:
    """
    Refuses register dimensions above the configured cap.
    Args:
        dim: Hilbert space dimension about to be materialized.
        allow_large: Explicit override of the cap.
    Returns:
        int: The dimension, unchanged.
    Raises:
        DimensionCapError: If dim exceeds Simulation.DIM_CAP and no override was given.
    """
    if not allow_large and dim > Simulation.DIM_CAP:
        raise DimensionCapError(ErrorMessages.DIMENSION_CAP.format(dim=dim, cap=Simulation.DIM_CAP))
    return dim


def commutator(a, b):
    return a @ b - b @ a


def kron_all(factors):
    """Kronecker product of a site-ordered list; the first factor varies slowest."""
    result = sp.identity(1, dtype=complex, format="csr")
    for factor in factors:
        result = sp.kron(result, factor, format="csr")
    return result
