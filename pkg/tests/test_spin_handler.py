import cmath
import math

import numpy as np
import pytest

from scripts.core.handlers import spin_handler
from scripts.core.handlers.algolab_handler import entangler_closed_form
from scripts.core.schemas.spin_model import Operator, RegisterState
from scripts.exceptions.module_exception import (
    ArgumentError,
    DimensionCapError,
    DimensionError,
    DuplicateSiteError,
    NonHermitianError,
    NormalizationError,
    ZeroProbabilityError,
)
from scripts.utils.linalg_util import commutator, max_abs

SQRT2 = math.sqrt(2)


def dense(axis, N):
    return spin_handler.spin_operator(axis, N).to_dense()


def test_coherent_state_all_in_mode_a():
    state = spin_handler.coherent_qubit_state(1, 0, 3)
    np.testing.assert_allclose(state.amps, [0, 0, 0, 1], atol=1e-15)


def test_coherent_state_binomial_expansion():
    state = spin_handler.coherent_qubit_state(1 / SQRT2, 1 / SQRT2, 2)
    np.testing.assert_allclose(state.amps, [0.5, 1 / SQRT2, 0.5], atol=1e-15)


def test_coherent_state_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        spin_handler.coherent_qubit_state(0.9, 0.1, 2)


@pytest.mark.parametrize("N", [0, -2])
def test_coherent_state_rejects_bad_boson_number(N):
    with pytest.raises(ArgumentError):
        spin_handler.coherent_qubit_state(1, 0, N)


def test_sz_matrix():
    np.testing.assert_array_equal(np.diag(dense("z", 4)).real, [-4, -2, 0, 2, 4])


def test_sx_single_boson_is_pauli_x():
    np.testing.assert_array_equal(dense("x", 1), [[0, 1], [1, 0]])


def test_sx_two_bosons_tridiagonal():
    expected = np.array([[0, SQRT2, 0], [SQRT2, 0, SQRT2], [0, SQRT2, 0]])
    np.testing.assert_allclose(dense("x", 2), expected, atol=1e-15)


def test_unknown_axis():
    with pytest.raises(ArgumentError):
        spin_handler.spin_operator("w", 2)


@pytest.mark.parametrize("N", range(1, 9))
def test_commutation_relations(N):
    sx, sy, sz = dense("x", N), dense("y", N), dense("z", N)
    assert max_abs(commutator(sx, sy) - 2j * sz) < 1e-10
    assert max_abs(commutator(sy, sz) - 2j * sx) < 1e-10
    assert max_abs(commutator(sz, sx) - 2j * sy) < 1e-10


@pytest.mark.parametrize("N", range(1, 9))
def test_casimir(N):
    casimir = sum(dense(axis, N) @ dense(axis, N) for axis in "xyz")
    assert max_abs(casimir - N * (N + 2) * np.eye(N + 1)) < 1e-10


@pytest.mark.parametrize("N", [1, 4, 7])
def test_extreme_states_are_sz_eigenstates(N):
    sz = spin_handler.spin_operator("z", N)
    up = spin_handler.coherent_qubit_state(1, 0, N)
    down = spin_handler.coherent_qubit_state(0, 1, N)
    np.testing.assert_allclose(sz.matrix @ up.amps, N * up.amps)
    np.testing.assert_allclose(sz.matrix @ down.amps, -N * down.amps)


def test_embed_identity_for_single_site():
    sz = spin_handler.spin_operator("z", 1)
    assert max_abs(spin_handler.embed(sz, 1, 1, 1).matrix - sz.matrix) == 0


def test_embed_second_site_ordering():
    embedded = spin_handler.embed(spin_handler.spin_operator("z", 1), 2, 2, 1)
    np.testing.assert_array_equal(np.diag(embedded.to_dense()).real, [-1, 1, -1, 1])


def test_embed_dimension_mismatch():
    with pytest.raises(DimensionError):
        spin_handler.embed(spin_handler.spin_operator("x", 2), 1, 2, 1)


@pytest.mark.parametrize("site", [0, 3])
def test_site_out_of_range_is_a_dimension_error(site, plus_state):
    state = spin_handler.product_state([plus_state(1), plus_state(1)])
    with pytest.raises(DimensionError):
        spin_handler.embed(spin_handler.spin_operator("z", 1), site, 2, 1)
    with pytest.raises(DimensionError):
        spin_handler.operator_product([("x", site)], M=2, N=1)
    with pytest.raises(DimensionError):
        spin_handler.project_site(state, site, 0)


def test_embed_respects_dimension_cap(dim_cap):
    dim_cap(10)
    sz = spin_handler.spin_operator("z", 1)
    with pytest.raises(DimensionCapError):
        spin_handler.embed(sz, 1, 4, 1)
    assert spin_handler.embed(sz, 1, 4, 1, allow_large=True).dim == 16


def test_zz_product():
    zz = spin_handler.operator_product([("z", 1), ("z", 2)], M=2, N=1)
    np.testing.assert_array_equal(np.diag(zz.to_dense()).real, [1, -1, -1, 1])


def test_sum_of_local_fields():
    # k = 0 is the first basis state on each site, so S^z = diag(-1, 1)
    sz1 = spin_handler.operator_product([("z", 1)], M=2, N=1)
    sz2 = spin_handler.operator_product([("z", 2)], M=2, N=1)
    total = spin_handler.operator_sum([(1.0, sz1), (1.0, sz2)])
    np.testing.assert_array_equal(np.diag(total.to_dense()).real, [-2, 0, 0, 2])
    assert total.hermitian_hint


def test_duplicate_site_in_product():
    with pytest.raises(DuplicateSiteError):
        spin_handler.operator_product([("z", 1), ("z", 1)], M=2, N=1)


def test_complex_coefficient_drops_hermitian_hint():
    sx = spin_handler.spin_operator("x", 2)
    assert not spin_handler.operator_sum([(1j, sx)]).hermitian_hint


def test_operator_rejects_non_hermitian_hint():
    with pytest.raises(NonHermitianError):
        Operator(matrix=[[0, 1], [0, 0]], hermitian_hint=True)


@pytest.mark.parametrize("N", [1, 3, 6])
def test_operators_on_distinct_sites_commute(N):
    a = spin_handler.embed(spin_handler.spin_operator("x", N), 1, 2, N).matrix
    b = spin_handler.embed(spin_handler.spin_operator("y", N), 2, 2, N).matrix
    assert max_abs(commutator(a, b)) < 1e-12


def test_expectation_sz_unequal_weights():
    state = spin_handler.coherent_qubit_state(math.sqrt(3) / 2, 0.5, 4)
    value = spin_handler.expectation(state, spin_handler.spin_operator("z", 4))
    assert value == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("N", [1, 2, 9])
def test_expectation_of_equal_superposition(N, plus_state):
    state = plus_state(N)
    assert spin_handler.expectation(state, spin_handler.spin_operator("x", N)).real == pytest.approx(N)
    assert abs(spin_handler.expectation(state, spin_handler.spin_operator("z", N))) < 1e-12


def test_expectation_dimension_mismatch(plus_state):
    with pytest.raises(DimensionError):
        spin_handler.expectation(plus_state(2), spin_handler.spin_operator("x", 3))


def test_expectations_match_coherent_formula(rng, random_amplitudes):
    for _ in range(20):
        alpha, beta = random_amplitudes()
        N = rng.randint(1, 12)
        state = spin_handler.coherent_qubit_state(alpha, beta, N)
        overlap = alpha.conjugate() * beta
        expected = {"x": 2 * N * overlap.real, "y": 2 * N * overlap.imag, "z": N * (abs(alpha) ** 2 - abs(beta) ** 2)}
        for axis, value in expected.items():
            measured = spin_handler.expectation(state, spin_handler.spin_operator(axis, N))
            assert measured.real == pytest.approx(value, abs=1e-10)
            assert abs(measured.imag) < 1e-10


def test_variance_matches_coherent_formula(rng, random_amplitudes):
    for _ in range(20):
        alpha, beta = random_amplitudes()
        N = rng.randint(1, 12)
        state = spin_handler.product_state([spin_handler.coherent_qubit_state(alpha, beta, N)])
        expected = 4 * abs(alpha * beta) ** 2 / N
        assert spin_handler.spin_variance(state, "z", 1) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("N", [1, 4, 10])
def test_variance_examples(N, plus_state):
    plus = spin_handler.product_state([plus_state(N)])
    up = spin_handler.product_state([spin_handler.coherent_qubit_state(1, 0, N)])
    assert spin_handler.spin_variance(plus, "z", 1) == pytest.approx(1 / N, abs=1e-12)
    assert spin_handler.spin_variance(up, "z", 1) == pytest.approx(0, abs=1e-12)
    assert spin_handler.spin_variance(plus, "x", 1) == pytest.approx(0, abs=1e-10)


def test_variance_rejects_unknown_site(plus_state):
    with pytest.raises(DimensionError):
        spin_handler.spin_variance(spin_handler.product_state([plus_state(2)]), "z", 2)


@pytest.mark.parametrize("N", [1, 3, 8])
def test_project_bell_analogue(N):
    state = entangler_closed_form(N, math.pi / (4 * N))
    site1, probability = spin_handler.conditional_state(state, 2, 0)
    expected = spin_handler.coherent_qubit_state(cmath.exp(1j * math.pi / 4) / SQRT2, cmath.exp(-1j * math.pi / 4) / SQRT2, N)
    assert spin_handler.fidelity(site1, expected) == pytest.approx(1.0, abs=1e-10)
    assert probability == pytest.approx(2.0**-N)


def test_project_eigenstate_keeps_state():
    N = 3
    state = spin_handler.product_state([spin_handler.coherent_qubit_state(1, 0, N)])
    projected, probability = spin_handler.project_site(state, 1, N)
    assert probability == pytest.approx(1.0)
    np.testing.assert_allclose(projected.amps, state.amps)


@pytest.mark.parametrize("N", [1, 2, 5])
def test_project_probability_of_product_state(N, plus_state):
    state = spin_handler.product_state([plus_state(N), plus_state(N)])
    projected, probability = spin_handler.project_site(state, 2, N)
    assert probability == pytest.approx(2.0**-N)
    assert max_abs(projected.tensor()[:, :N]) == 0


def test_project_zero_probability():
    state = spin_handler.product_state([spin_handler.coherent_qubit_state(1, 0, 2)])
    with pytest.raises(ZeroProbabilityError):
        spin_handler.project_site(state, 1, 0)


def test_register_state_validation():
    with pytest.raises(DimensionError):
        spin_handler.register_state(np.ones(5) / math.sqrt(5), 1, 2)
    with pytest.raises(NormalizationError):
        spin_handler.register_state(np.ones(4), 1, 2)
    state = spin_handler.register_state(np.ones(4) / 2, 1, 2)
    assert isinstance(state, RegisterState) and state.dim == 4


def test_density_from_state(plus_state):
    rho = spin_handler.density_from_state(plus_state(2))
    assert np.trace(rho.matrix) == pytest.approx(1.0)
    assert max_abs(rho.matrix @ rho.matrix - rho.matrix) < 1e-12


def test_fidelity_ignores_global_phase(plus_state):
    state = plus_state(3)
    assert spin_handler.fidelity(state, np.exp(0.7j) * state.amps) == pytest.approx(1.0)


def test_rotation_hamiltonian_normalizes_axis():
    rotation = spin_handler.rotation_hamiltonian([0, 0, 2], 3)
    assert max_abs(rotation.matrix - spin_handler.spin_operator("z", 3).matrix) < 1e-15
    tilted = spin_handler.rotation_hamiltonian([1, 1, 0], 2)
    expected = (dense("x", 2) + dense("y", 2)) / SQRT2
    assert max_abs(tilted.to_dense() - expected) < 1e-12
    assert tilted.hermitian_hint


def test_rotation_hamiltonian_rejects_zero_axis():
    with pytest.raises(ArgumentError):
        spin_handler.rotation_hamiltonian([0, 0, 0], 2)


def test_raising_operator_is_twice_a_dag_b():
    s_plus = spin_handler.raising_operator(2).to_dense()
    # <k+1| a^dag b |k> = sqrt((k+1)(N-k))
    np.testing.assert_allclose(np.diag(s_plus, -1), 2 * np.sqrt([2, 2]))
    assert max_abs(np.triu(s_plus)) == 0


def test_site_observables(plus_state):
    up = spin_handler.coherent_qubit_state(1, 0, 2)
    state = spin_handler.product_state([plus_state(2), up])
    assert spin_handler.site_observables(state, "z") == pytest.approx([0.0, 1.0], abs=1e-12)
    assert spin_handler.site_observables(state, "x") == pytest.approx([1.0, 0.0], abs=1e-12)
