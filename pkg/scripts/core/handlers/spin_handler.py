"""
Fock-basis states and Schwinger-boson spin operators of bosonic qubits.

Conventions: basis index k counts bosons in mode a, so S^z|k> = (2k - N)|k> and
|1,0>> (all bosons in a) is k = N. In a register, site 1 is the slowest-varying
Kronecker index.
"""
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.special import comb

from scripts.config.constants import Tolerances
from scripts.core.schemas.spin_model import DensityMatrix, Operator, QubitAmplitudes, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import (
    ArgumentError,
    DimensionError,
    DuplicateSiteError,
    NormalizationError,
    ZeroProbabilityError,
)
from scripts.logging import logger
from scripts.utils.linalg_util import check_dimension_cap, kron_all

AXES = ("x", "y", "z")


def _check_bosons(N: int) -> None:
    if int(N) != N or N < 1:
        raise ArgumentError(ErrorMessages.BOSONS.format(n=N))


def _check_site(site: int, n_sites: int) -> None:
    if not 1 <= site <= n_sites:
        raise DimensionError(ErrorMessages.SITE.format(site=site, n_sites=n_sites))


def coherent_qubit_state(alpha: complex, beta: complex, N: int) -> QubitAmplitudes:
    """
    Builds (alpha a^dag + beta b^dag)^N |0> / sqrt(N!) in the Fock basis.
    Args:
        alpha: Amplitude of mode a.
        beta: Amplitude of mode b.
        N: Number of bosons.
    Returns:
        QubitAmplitudes: amps[k] = sqrt(C(N, k)) alpha^k beta^(N-k).
    Raises:
        ArgumentError: If N < 1.
        NormalizationError: If |alpha|^2 + |beta|^2 differs from 1 by more than 1e-9.
    """
    _check_bosons(N)
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > Tolerances.INPUT_NORM:
        raise NormalizationError(ErrorMessages.NORMALIZATION.format(norm=norm))
    k = np.arange(N + 1)
    amps = np.sqrt(comb(N, k)) * np.power(complex(alpha), k) * np.power(complex(beta), N - k)
    amps = amps / np.linalg.norm(amps)
    return QubitAmplitudes(n_bosons=N, amps=amps)


@lru_cache(maxsize=None)
def spin_operator(axis: str, N: int) -> Operator:
    """Single-site S^x, S^y or S^z on the (N+1)-dimensional Fock space."""
    _check_bosons(N)
    axis = str(axis).lower()
    if axis not in AXES:
        raise ArgumentError(ErrorMessages.AXIS.format(axis=axis))
    k = np.arange(N + 1)
    if axis == "z":
        return Operator(matrix=sp.diags(2.0 * k - N, format="csr"), hermitian_hint=True, label="Sz")
    # <k+1| a^dag b |k> = sqrt((k+1)(N-k))
    raising = np.sqrt((k[:-1] + 1.0) * (N - k[:-1]))
    a_dag_b = sp.diags(raising, offsets=-1, shape=(N + 1, N + 1), format="csr", dtype=complex)
    b_dag_a = a_dag_b.conj().T.tocsr()
    if axis == "x":
        return Operator(matrix=a_dag_b + b_dag_a, hermitian_hint=True, label="Sx")
    return Operator(matrix=-1j * a_dag_b + 1j * b_dag_a, hermitian_hint=True, label="Sy")


def raising_operator(N: int) -> Operator:
    """S+ = Sx + i Sy = 2 a^dag b."""
    matrix = spin_operator("x", N).matrix + 1j * spin_operator("y", N).matrix
    return Operator(matrix=matrix, label="S+")


def lowering_operator(N: int) -> Operator:
    matrix = spin_operator("x", N).matrix - 1j * spin_operator("y", N).matrix
    return Operator(matrix=matrix, label="S-")


def embed(op: Operator, site: int, M: int, N: int, allow_large: bool = False) -> Operator:
    """Places a single-site operator on ``site`` of an M-site register."""
    if op.dim != N + 1:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=op.dim, expected=N + 1))
    _check_site(site, M)
    check_dimension_cap((N + 1) ** M, allow_large)
    identity = sp.identity(N + 1, dtype=complex, format="csr")
    factors = [op.matrix if n == site else identity for n in range(1, M + 1)]
    label = f"{op.label}{site}" if op.label else ""
    return Operator(matrix=kron_all(factors), hermitian_hint=op.hermitian_hint, label=label)


def operator_product(
    ops: Sequence[Tuple[str, int]], M: int, N: int, allow_large: bool = False
) -> Operator:
    """
    Product of spin operators on distinct sites, e.g. [("z", 1), ("z", 2)] is Sz1 Sz2.
    An empty list gives the register identity.
    """
    sites = [site for _, site in ops]
    seen = set()
    for site in sites:
        if site in seen:
            raise DuplicateSiteError(ErrorMessages.DUPLICATE_SITE.format(site=site))
        seen.add(site)
        _check_site(site, M)
    _check_bosons(N)
    check_dimension_cap((N + 1) ** M, allow_large)
    by_site = {site: spin_operator(axis, N).matrix for axis, site in ops}
    identity = sp.identity(N + 1, dtype=complex, format="csr")
    factors = [by_site.get(n, identity) for n in range(1, M + 1)]
    label = "".join(f"S{axis}{site}" for axis, site in ops) or "I"
    return Operator(matrix=kron_all(factors), hermitian_hint=True, label=label)


def operator_sum(terms: Iterable[Tuple[complex, Operator]], dim: int = None) -> Operator:
    """
    Linear combination of operators of one dimension. The result carries the
    Hermitian hint when every coefficient is real and every operand is hinted.
    """
    terms = list(terms)
    if not terms:
        if dim is None:
            raise ArgumentError("operator_sum of no terms needs an explicit dimension")
        return Operator(matrix=sp.csr_matrix((dim, dim), dtype=complex), hermitian_hint=True)
    dims = {op.dim for _, op in terms}
    if dim is not None:
        dims.add(dim)
    if len(dims) != 1:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=sorted(dims), expected="one common dimension"))
    total = sp.csr_matrix((dims.pop(),) * 2, dtype=complex)
    hermitian = True
    for coeff, op in terms:
        if not np.isfinite(coeff):
            raise ArgumentError(f"coefficient {coeff!r} is not finite")
        hermitian = hermitian and op.hermitian_hint and np.imag(coeff) == 0
        total = total + coeff * op.matrix
    return Operator(matrix=total, hermitian_hint=hermitian)


def _vector(state) -> np.ndarray:
    if isinstance(state, (RegisterState, QubitAmplitudes)):
        return state.amps
    return np.asarray(state, dtype=complex).reshape(-1)


def expectation(state: Union[RegisterState, QubitAmplitudes], op: Operator) -> complex:
    psi = _vector(state)
    if psi.size != op.dim:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=psi.size, expected=op.dim))
    return complex(np.vdot(psi, op.matrix @ psi))


def spin_variance(state: RegisterState, axis: str, site: int) -> float:
    """(<S^2> - <S>^2) / N^2 of one site component."""
    _check_site(site, state.n_sites)
    op = embed(spin_operator(axis, state.n_bosons), site, state.n_sites, state.n_bosons)
    psi = state.amps
    s_psi = op.matrix @ psi
    mean = np.vdot(psi, s_psi).real
    second = np.vdot(s_psi, s_psi).real
    return float((second - mean**2) / state.n_bosons**2)


def register_state(amps, N: int, M: int) -> RegisterState:
    return RegisterState(n_bosons=N, n_sites=M, amps=amps)


def product_state(qubits: Sequence[QubitAmplitudes]) -> RegisterState:
    """Register state of independent qubits, qubits[0] on site 1."""
    if not qubits:
        raise ArgumentError("product_state needs at least one qubit")
    n_values = {qubit.n_bosons for qubit in qubits}
    if len(n_values) != 1:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=sorted(n_values), expected="one boson number"))
    N = n_values.pop()
    check_dimension_cap((N + 1) ** len(qubits))
    amps = np.ones(1, dtype=complex)
    for qubit in qubits:
        amps = np.kron(amps, qubit.amps)
    return RegisterState(n_bosons=N, n_sites=len(qubits), amps=amps / np.linalg.norm(amps))


def project_site(state: RegisterState, site: int, k: int) -> Tuple[RegisterState, float]:
    """
    Post-selects |k> on one site.
    Returns:
        Tuple[RegisterState, float]: Renormalized full-register state and the outcome probability.
    Raises:
        ZeroProbabilityError: If the outcome probability is below 1e-14.
    """
    try:
        _check_site(site, state.n_sites)
        if not 0 <= k <= state.n_bosons:
            raise ArgumentError(f"outcome k={k} outside 0..{state.n_bosons}")
        tensor = state.tensor()
        mask = np.zeros(state.site_dim)
        mask[k] = 1.0
        shape = [1] * state.n_sites
        shape[site - 1] = state.site_dim
        projected = tensor * mask.reshape(shape)
        probability = float(np.vdot(projected, projected).real)
        if probability < Tolerances.ZERO_PROBABILITY:
            raise ZeroProbabilityError(ErrorMessages.ZERO_PROBABILITY.format(k=k, site=site, p=probability))
        amps = projected.reshape(-1) / np.sqrt(probability)
        return RegisterState(n_bosons=state.n_bosons, n_sites=state.n_sites, amps=amps), probability
    except Exception as e:
        logger.info(f"Error while projecting site {site} : {str(e)}")
        raise


def conditional_state(state: RegisterState, site: int, k: int) -> Tuple[RegisterState, float]:
    """State of the remaining sites after observing |k> on ``site``."""
    if state.n_sites < 2:
        raise ArgumentError("conditional_state needs at least two sites")
    projected, probability = project_site(state, site, k)
    remainder = np.take(projected.tensor(), k, axis=site - 1).reshape(-1)
    remainder = remainder / np.linalg.norm(remainder)
    return RegisterState(n_bosons=state.n_bosons, n_sites=state.n_sites - 1, amps=remainder), probability


def density_from_state(state: Union[RegisterState, QubitAmplitudes]) -> DensityMatrix:
    psi = _vector(state)
    return DensityMatrix(matrix=np.outer(psi, psi.conj()))


def fidelity(first, second) -> float:
    """Phase-invariant |<first|second>|^2 of two pure states."""
    a, b = _vector(first), _vector(second)
    if a.size != b.size:
        raise DimensionError(ErrorMessages.DIMENSION.format(got=a.size, expected=b.size))
    return float(abs(np.vdot(a, b)) ** 2)


def rotation_hamiltonian(direction: Sequence[float], N: int) -> Operator:
    """n.S for a unit axis n; the direction is normalized first."""
    n = np.asarray(direction, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)) or np.linalg.norm(n) == 0:
        raise ArgumentError(f"rotation axis must be a finite non-zero 3-vector, got {list(direction)}")
    n = n / np.linalg.norm(n)
    return operator_sum([(float(c), spin_operator(axis, N)) for c, axis in zip(n, AXES)])


def site_observables(state: RegisterState, axis: str = "z") -> List[float]:
    """<S^axis_n>/N for every site n."""
    N, M = state.n_bosons, state.n_sites
    return [expectation(state, embed(spin_operator(axis, N), n, M, N)).real / N for n in range(1, M + 1)]
