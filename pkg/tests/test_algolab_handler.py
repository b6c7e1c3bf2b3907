import cmath
import math

import numpy as np
import pytest

from scripts.core.handlers import algolab_handler, spin_handler
from scripts.core.handlers.dynamics_handler import propagate
from scripts.core.schemas.algolab_model import OracleKind
from scripts.exceptions.module_exception import (
    AmbiguousOutcomeError,
    ArgumentError,
    DimensionCapError,
    NoPeakError,
)
from scripts.utils.linalg_util import max_abs

INV_SQRT2 = 1 / math.sqrt(2)


def test_entangler_snapshots_match_closed_form(rng):
    for N in (1, 3, 7, 20):
        times = sorted(rng.uniform(0.0, math.pi) for _ in range(10))
        result = algolab_handler.run_entangler(N, times, keep_states=True)
        assert len(result.snapshots) == len(times)
        for t, snapshot in zip(times, result.snapshots):
            assert np.linalg.norm(snapshot.amps) == pytest.approx(1.0, abs=1e-12)
            expected = algolab_handler.entangler_closed_form(N, t).amps
            assert max_abs(snapshot.amps - expected) < 1e-10


def test_entangler_quarter_state_and_zero_entropy():
    result = algolab_handler.run_entangler(4, [0.0, 0.1])
    assert result.trajectory.column("entropy_bits")[0] == pytest.approx(0.0, abs=1e-12)
    expected = algolab_handler.entangler_closed_form(4, math.pi / 16).amps
    assert max_abs(result.state_at_quarter.amps - expected) < 1e-10
    assert result.snapshots == []


@pytest.mark.parametrize("k2, phase", [(0, math.pi / 4), (1, -math.pi / 4)])
def test_single_boson_bell_projections(k2, phase):
    state = algolab_handler.run_entangler(1, [0.0]).state_at_quarter
    site1, probability = spin_handler.conditional_state(state, 2, k2)
    expected = spin_handler.coherent_qubit_state(cmath.exp(1j * phase) * INV_SQRT2, cmath.exp(-1j * phase) * INV_SQRT2, 1)
    assert probability == pytest.approx(0.5)
    assert spin_handler.fidelity(site1, expected) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("N", [1, 2, 3, 6])
def test_cnot_analogue(N):
    report = algolab_handler.run_cnot_analogue(N)
    assert report.t == pytest.approx(math.pi / (4 * N))
    assert [outcome.k for outcome in report.projections] == [0, N]
    for outcome in report.projections:
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-9)
        assert outcome.probability == pytest.approx(2.0**-N)
    assert report.oracle_fidelity == pytest.approx(1.0, abs=1e-10)


def test_cnot_hamiltonian_diagonal():
    H = algolab_handler.cnot_hamiltonian(1)
    # N Sz1 - N Sz2 + N^2 with Sz = diag(-1, 1) per site
    np.testing.assert_allclose(H.diagonal().real, [1, -1, 3, 1])


@pytest.mark.parametrize("kind", list(OracleKind))
@pytest.mark.parametrize("N", [1, 2, 5, 20])
def test_deutsch_classification(kind, N):
    report = algolab_handler.run_deutsch(kind, N)
    assert report.classification == ("constant" if kind.is_constant else "balanced")
    assert report.t_oracle == pytest.approx(math.pi / (2 * N))
    assert report.site2_fidelity == pytest.approx(1.0, abs=1e-9)
    assert max(report.overlap_plus, report.overlap_minus) == pytest.approx(1.0, abs=1e-9)


def test_deutsch_trivial_oracle_leaves_state():
    H = algolab_handler.hamiltonian_deutsch(OracleKind.CONST0, 3)
    assert max_abs(H.matrix) == 0
    report = algolab_handler.run_deutsch("CONST0", 3)
    assert report.overlap_plus == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kind", [OracleKind.BAL01, OracleKind.BAL10])
@pytest.mark.parametrize("N", [1, 3])
def test_deutsch_printed_time_is_ambiguous(kind, N):
    with pytest.raises(AmbiguousOutcomeError) as info:
        algolab_handler.run_deutsch(kind, N, t_oracle=math.pi / (4 * N))
    assert info.value.overlap_plus == pytest.approx(2.0**-N, abs=1e-9)
    assert info.value.overlap_minus == pytest.approx(2.0**-N, abs=1e-9)


@pytest.mark.parametrize("kind", [OracleKind.CONST0, OracleKind.CONST1])
def test_constant_oracles_decisive_at_printed_time(kind):
    report = algolab_handler.run_deutsch(kind, 2, t_oracle=math.pi / 8)
    assert report.classification == "constant"


def test_deutsch_rejects_non_positive_time():
    with pytest.raises(ArgumentError):
        algolab_handler.run_deutsch(OracleKind.BAL01, 2, t_oracle=0.0)


def test_grover_single_qubit_spectrum():
    H = algolab_handler.build_grover_hamiltonian(1, 1).to_dense()
    np.testing.assert_allclose(np.linalg.eigvalsh(H), [1 - INV_SQRT2, 1 + INV_SQRT2], atol=1e-12)


@pytest.mark.parametrize("M, solution", [(2, None), (3, None), (2, [0, 1]), (3, [1, 0, 0])])
def test_grover_matches_projector_form(M, solution):
    H = algolab_handler.build_grover_hamiltonian(M, 1, solution).to_dense()
    x = np.full(2**M, 2.0 ** (-M / 2))
    bits = solution or [1] * M
    # k = 1 (bit 1) is the second basis state of each site
    answer = np.zeros(2**M)
    answer[int("".join(str(bit) for bit in bits), 2)] = 1.0
    expected = np.outer(x, x) + np.outer(answer, answer)
    assert max_abs(H - expected) < 1e-10


@pytest.mark.parametrize("N", [1, 2, 4])
def test_grover_terms_have_eigenvalue_n_squared(N):
    H = algolab_handler.build_grover_hamiltonian(1, N)
    up = spin_handler.coherent_qubit_state(1, 0, N).amps
    plus = algolab_handler.grover_initial_state(1, N).amps
    sz = spin_handler.spin_operator("z", N).to_dense()
    sx = spin_handler.spin_operator("x", N).to_dense()
    target = N * N * (np.eye(N + 1) + sz / N) / 2
    start = N * N * (np.eye(N + 1) + sx / N) / 2
    np.testing.assert_allclose(target @ up, N * N * up, atol=1e-10)
    np.testing.assert_allclose(start @ plus, N * N * plus, atol=1e-10)
    assert max_abs(H.to_dense() - target - start) < 1e-10


@pytest.mark.parametrize("M, N", [(1, 3), (2, 2), (3, 1)])
def test_grover_hamiltonian_is_psd(M, N):
    H = algolab_handler.build_grover_hamiltonian(M, N).to_dense()
    assert max_abs(H - H.conj().T) < 1e-12
    assert np.linalg.eigvalsh(H).min() > -1e-9


def test_grover_solution_validation():
    with pytest.raises(ArgumentError):
        algolab_handler.build_grover_hamiltonian(2, 1, [1])
    with pytest.raises(ArgumentError):
        algolab_handler.build_grover_hamiltonian(2, 1, [1, 2])


def test_grover_dimension_cap(dim_cap):
    dim_cap(50)
    with pytest.raises(DimensionCapError):
        algolab_handler.build_grover_hamiltonian(3, 3)


@pytest.mark.parametrize("N", [1, 2, 5])
@pytest.mark.parametrize("M", [1, 2])
def test_grover_second_derivative_closed_form(M, N):
    assert algolab_handler.grover_second_derivative(M, N) == pytest.approx(2.0 * N**2 / 2**M, rel=1e-6)


@pytest.mark.parametrize("N, rel", [(1, 1e-5), (2, 1e-4)])
def test_grover_second_derivative_matches_finite_difference(N, rel):
    M, h = 2, 1e-3
    H = algolab_handler.build_grover_hamiltonian(M, N)
    psi0 = algolab_handler.grover_initial_state(M, N).amps
    sz = spin_handler.embed(spin_handler.spin_operator("z", N), 1, M, N).matrix / N

    def value(t):
        psi = propagate(psi0, H, t)
        return np.vdot(psi, sz @ psi).real

    finite = (value(h) - 2 * value(0.0) + value(-h)) / h**2
    assert algolab_handler.grover_second_derivative(M, N) == pytest.approx(finite, rel=rel)


def test_single_qubit_grover_peak():
    result = algolab_handler.run_grover(1, 1)
    assert result.t_peak == pytest.approx(math.pi / math.sqrt(2), rel=1e-3)
    assert result.peak_value == pytest.approx(1.0, abs=1e-3)
    assert result.omega_est == pytest.approx(INV_SQRT2, rel=1e-3)
    assert result.omega_commutator == pytest.approx(INV_SQRT2, rel=1e-9)


def test_two_solution_bits_peak_time():
    result = algolab_handler.run_grover(2, 1)
    assert result.t_peak == pytest.approx(math.pi, rel=1e-3)


def test_grover_sites_evolve_identically():
    result = algolab_handler.run_grover(3, 2)
    values = result.trajectory.values
    assert result.trajectory.labels == ["sz_over_N_site1", "sz_over_N_site2", "sz_over_N_site3"]
    assert np.abs(values - values[:, :1]).max() < 1e-9


def test_grover_peak_time_scales_inversely_with_bosons():
    scaled = [algolab_handler.run_grover(2, N, steps=2000).t_peak * N for N in range(1, 6)]
    assert scaled[0] == pytest.approx(math.pi, rel=1e-3)
    for value in scaled[1:]:
        assert value == pytest.approx(scaled[0], rel=0.12)


def test_grover_respects_solution_sign():
    result = algolab_handler.run_grover(2, 1, solution=[0, 1])
    site1 = result.trajectory.column("sz_over_N_site1")
    site2 = result.trajectory.column("sz_over_N_site2")
    assert result.peak_value > 0.5
    assert np.abs(site1 + site2).max() < 1e-9


def test_grover_without_peak():
    with pytest.raises(NoPeakError):
        algolab_handler.run_grover(1, 1, t_max=0.5)


def test_grover_needs_enough_steps():
    with pytest.raises(ArgumentError):
        algolab_handler.run_grover(1, 1, steps=50)


def test_first_peak_refines_vertex():
    times = np.linspace(0.0, 2.0, 21)
    values = -((times - 1.03) ** 2)
    t_peak, peak = algolab_handler.first_peak(times, values)
    assert t_peak == pytest.approx(1.03, abs=1e-12)
    assert peak == pytest.approx(0.0, abs=1e-12)
