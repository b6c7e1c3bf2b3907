"""
Two three-level bosonic sites coupled through a single truncated photon mode.

Per site the basis is lexicographic in (n_a, n_b, n_c) with n_a + n_b + n_c = N;
the bus space is site 1 (slowest) x site 2 x photon number 0..cutoff.
"""
import itertools
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from scripts.config.constants import Defaults, Tolerances
from scripts.core.handlers import spin_handler
from scripts.core.handlers.dynamics_handler import cached_spectrum, propagate
from scripts.core.schemas.bus_model import BusComparison, BusParams
from scripts.core.schemas.spin_model import Operator, RegisterState
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import ArgumentError, CutoffError, DimensionError
from scripts.logging import logger
from scripts.utils.linalg_util import check_dimension_cap, kron_all

MODES = {"a": 0, "b": 1, "c": 2}


def site_basis(N: int) -> List[tuple]:
    return [occ for occ in itertools.product(range(N + 1), repeat=3) if sum(occ) == N]


class BusSpace:
    """Basis bookkeeping and elementary operators of the bus Hilbert space."""

    def __init__(self, N: int, photon_cutoff: int):
        self.N = N
        self.photon_cutoff = photon_cutoff
        self.basis = site_basis(N)
        self.index = {occ: i for i, occ in enumerate(self.basis)}
        self.site_dim = len(self.basis)
        self.photon_dim = photon_cutoff + 1
        self.dim = check_dimension_cap(self.site_dim**2 * self.photon_dim)
        self._site_identity = sp.identity(self.site_dim, dtype=complex, format="csr")
        self._photon_identity = sp.identity(self.photon_dim, dtype=complex, format="csr")

    def site_number(self, mode: str) -> sp.csr_matrix:
        return sp.diags([float(occ[MODES[mode]]) for occ in self.basis], format="csr", dtype=complex)

    def site_transition(self, to_mode: str, from_mode: str) -> sp.csr_matrix:
        """to^dag from on one site."""
        i, j = MODES[to_mode], MODES[from_mode]
        rows, cols, data = [], [], []
        for col, occ in enumerate(self.basis):
            if occ[j] == 0:
                continue
            moved = list(occ)
            moved[j] -= 1
            moved[i] += 1
            rows.append(self.index[tuple(moved)])
            cols.append(col)
            data.append(math.sqrt(occ[j] * (occ[i] + 1)))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.site_dim,) * 2, dtype=complex)

    def photon_annihilator(self) -> sp.csr_matrix:
        return sp.diags(np.sqrt(np.arange(1.0, self.photon_dim)), offsets=1, format="csr", dtype=complex)

    def on_site(self, site: int, matrix, photon=None) -> sp.csr_matrix:
        factors = [self._site_identity, self._site_identity, self._photon_identity if photon is None else photon]
        factors[site - 1] = matrix
        return kron_all(factors)

    def on_photon(self, matrix) -> sp.csr_matrix:
        return kron_all([self._site_identity, self._site_identity, matrix])

    def embed_register(self, state: RegisterState) -> np.ndarray:
        """|k1, k2> -> |(k1, N-k1, 0), (k2, N-k2, 0); 0 photons>."""
        if state.n_sites != 2 or state.n_bosons != self.N:
            raise DimensionError(
                ErrorMessages.DIMENSION.format(got=(state.n_bosons, state.n_sites), expected=(self.N, 2))
            )
        psi = np.zeros((self.site_dim, self.site_dim, self.photon_dim), dtype=complex)
        rows = [self.index[(k, self.N - k, 0)] for k in range(self.N + 1)]
        psi[np.ix_(rows, rows, [0])] = state.tensor()[:, :, None]
        return psi.reshape(-1)

    def project_register(self, psi: np.ndarray) -> np.ndarray:
        """Unnormalized register amplitudes of the c-empty, photon-vacuum component."""
        tensor = psi.reshape(self.site_dim, self.site_dim, self.photon_dim)
        rows = [self.index[(k, self.N - k, 0)] for k in range(self.N + 1)]
        return tensor[np.ix_(rows, rows, [0])][:, :, 0].reshape(-1)

    def photon_populations(self, psi: np.ndarray) -> np.ndarray:
        tensor = psi.reshape(self.site_dim, self.site_dim, self.photon_dim)
        return np.sum(np.abs(tensor) ** 2, axis=(0, 1))


def build_bus_hamiltonian(params: BusParams) -> Operator:
    """
    H = sum_n [E_a n_a + E_b n_b + E_c n_c] + omega p^dag p
        + g sum_n (F-_n p^dag + F+_n p) + Omega_p sum_n (c^dag_n a_n + h.c.)
    with F+ = c^dag b and level energies in the frame of the pulse.
    """
    try:
        space = BusSpace(params.N, params.photon_cutoff)
        e_a, e_b, e_c = params.level_energies
        p = space.photon_annihilator()
        p_dag = p.conj().T.tocsr()
        bare = e_a * space.site_number("a") + e_b * space.site_number("b") + e_c * space.site_number("c")
        f_plus = space.site_transition("c", "b")
        f_minus = space.site_transition("b", "c")
        pulse = space.site_transition("c", "a") + space.site_transition("a", "c")
        matrix = params.omega * space.on_photon(p_dag @ p)
        for site in (1, 2):
            matrix = matrix + space.on_site(site, bare)
            matrix = matrix + params.g * (space.on_site(site, f_minus, p_dag) + space.on_site(site, f_plus, p))
            matrix = matrix + params.pulse_amplitude * space.on_site(site, pulse)
        logger.debug(f"bus Hamiltonian N={params.N} cutoff={params.photon_cutoff}: dim {space.dim}")
        return Operator(matrix=matrix, hermitian_hint=True, label="H_bus")
    except Exception as e:
        logger.info(f"Error while building bus Hamiltonian : {str(e)}")
        raise


def bus_conserved_operators(params: BusParams) -> Dict[str, Operator]:
    """Per-site boson numbers and the excitation count sum_n (n_a + n_c) + p^dag p."""
    space = BusSpace(params.N, params.photon_cutoff)
    total = space.site_number("a") + space.site_number("b") + space.site_number("c")
    upper = space.site_number("a") + space.site_number("c")
    p = space.photon_annihilator()
    excitations = space.on_site(1, upper) + space.on_site(2, upper) + space.on_photon(p.conj().T @ p)
    return {
        "site1": Operator(matrix=space.on_site(1, total), hermitian_hint=True),
        "site2": Operator(matrix=space.on_site(2, total), hermitian_hint=True),
        "excitations": Operator(matrix=excitations, hermitian_hint=True),
    }


def effective_hamiltonian(params: BusParams) -> Operator:
    """(g^2 Omega / Delta^2)(S+_1 S-_2 + S-_1 S+_2) on the two-site register."""
    N = params.N
    s_plus, s_minus = spin_handler.raising_operator(N).matrix, spin_handler.lowering_operator(N).matrix
    exchange = sp.kron(s_plus, s_minus, format="csr") + sp.kron(s_minus, s_plus, format="csr")
    return Operator(matrix=params.exchange_coupling * exchange, hermitian_hint=True, label="H_eff")


def effective_diagonal(params: BusParams) -> np.ndarray:
    """
    Terms the exchange form leaves out, per site: bare energies, the exact
    single-boson light shift and the twist J n_a (n_b + 1).
    """
    N = params.N
    e_a, e_b, _ = params.level_energies
    k = np.arange(N + 1, dtype=float)
    site = e_a * k + e_b * (N - k) + params.light_shift * k + params.pair_exchange * k * (N - k + 1)
    return np.add.outer(site, site).reshape(-1)


def comparison_hamiltonian(params: BusParams) -> Operator:
    matrix = effective_hamiltonian(params).matrix + sp.diags(effective_diagonal(params), format="csr")
    return Operator(matrix=matrix, hermitian_hint=True, label="H_eff_full")


def _projected_fidelity(target: np.ndarray, projected: np.ndarray, kept: float) -> float:
    return float(abs(np.vdot(target, projected)) ** 2 / kept) if kept > 0 else 0.0


def _sample_times(t: float, samples: int) -> np.ndarray:
    return np.linspace(0.0, t, max(2, samples))


def compare_effective(
    params: BusParams, initial: RegisterState, t: float, samples: int = Defaults.BUS_SAMPLES
) -> BusComparison:
    """
    Evolves ``initial`` under the full bus Hamiltonian and under the effective
    exchange (plus its diagonal bookkeeping), then compares on the c-empty,
    photon-vacuum subspace.
    Returns:
        BusComparison: Phase-invariant fidelity of the renormalized projection,
        once against the exchange with its diagonal terms and once against the
        bare exchange form (``fidelity_printed``), plus the leaked population and
        the photon occupations seen along the way.
    Raises:
        CutoffError: If the population of the highest photon level exceeds 1e-3.
    """
    try:
        if t < 0:
            raise ArgumentError(f"evolution time must be non-negative, got {t}")
        if params.t_final and t > params.t_final * (1 + 1e-12):
            raise ArgumentError(f"t={t:g} exceeds t_final={params.t_final:g}")
        space = BusSpace(params.N, params.photon_cutoff)
        full = build_bus_hamiltonian(params)
        effective = comparison_hamiltonian(params)
        psi0 = space.embed_register(initial)

        energies, vectors = cached_spectrum(full)
        coefficients = vectors.conj().T @ psi0
        max_photon, cutoff_population, psi_t = 0.0, 0.0, psi0
        for time in _sample_times(t, samples):
            psi_t = vectors @ (np.exp(-1j * energies * time) * coefficients)
            populations = space.photon_populations(psi_t)
            max_photon = max(max_photon, float(1.0 - populations[0]))
            cutoff_population = max(cutoff_population, float(populations[-1]))
        if cutoff_population > Tolerances.CUTOFF_POPULATION:
            raise CutoffError(
                ErrorMessages.CUTOFF.format(cutoff=params.photon_cutoff, population=cutoff_population)
            )

        projected = space.project_register(psi_t)
        kept = float(np.vdot(projected, projected).real)
        fidelity = _projected_fidelity(propagate(initial.amps, effective, t), projected, kept)
        printed = _projected_fidelity(propagate(initial.amps, effective_hamiltonian(params), t), projected, kept)
        logger.debug(f"bus comparison delta={params.delta:g} t={t:.6g}: fidelity {fidelity:.12g}")
        return BusComparison(
            delta=params.delta,
            t=t,
            fidelity=fidelity,
            infidelity=max(0.0, 1.0 - fidelity),
            fidelity_printed=printed,
            leaked_population=max(0.0, 1.0 - kept),
            max_photon_population=max_photon,
            cutoff_population=cutoff_population,
        )
    except Exception as e:
        logger.info(f"Error while comparing bus and effective dynamics : {str(e)}")
        raise


def transfer_state(N: int) -> RegisterState:
    """|1,0>> on site 1 and |0,1>> on site 2."""
    site1 = spin_handler.coherent_qubit_state(1.0, 0.0, N)
    site2 = spin_handler.coherent_qubit_state(0.0, 1.0, N)
    return spin_handler.product_state([site1, site2])


def exchange_rate(params: BusParams, t: float) -> float:
    """
    Observed exchange rate arcsin(sqrt(P)) / t, where P is the population moved
    from |N, 0> to |N-1, 1> by the full bus dynamics after time t.
    """
    if t <= 0:
        raise ArgumentError(f"exchange_rate needs t > 0, got {t}")
    space = BusSpace(params.N, params.photon_cutoff)
    full = build_bus_hamiltonian(params)
    energies, vectors = cached_spectrum(full)
    psi0 = space.embed_register(transfer_state(params.N))
    psi_t = vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ psi0))
    moved = space.project_register(psi_t).reshape(params.N + 1, params.N + 1)[params.N - 1, 1]
    probability = min(1.0, float(abs(moved) ** 2))
    return math.asin(math.sqrt(probability)) / t


def delta_sweep(
    g: float,
    Omega: float,
    N: int,
    deltas: Sequence[float],
    photon_cutoff: int = Defaults.BUS_PHOTON_CUTOFF,
    initial: Optional[RegisterState] = None,
    t: Optional[float] = None,
) -> List[BusComparison]:
    """
    Infidelity against detuning. Each point uses omega0 = 2 delta, omega = delta
    and, unless t is given, the half exchange period of that point.
    """
    initial = initial or transfer_state(N)
    results = []
    for delta in deltas:
        params = BusParams(omega0=2.0 * delta, omega=delta, g=g, Omega=Omega, N=N, photon_cutoff=photon_cutoff)
        time = params.half_exchange_period() if t is None else t
        results.append(compare_effective(params, initial, time))
        logger.info(f"bus sweep N={N} delta={delta:g}: infidelity {results[-1].infidelity:.3e}")
    return results
