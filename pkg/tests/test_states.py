import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ceslab import fock
from ceslab.analysis.eigen import eigen_residuals
from ceslab.errors import DegenerateWeightsError, DomainError
from ceslab.states import (
    CesParams,
    ConjugateParams,
    ModeWeights,
    MultiWeights,
    Regularization,
    as_weights,
    bipartite_ces_formula,
    conjugate_ces_formula,
    multipartite_ces,
    tripartite_ces_formula,
    tripartite_coefficients,
    tripartite_ladder_linear,
)

weight = st.floats(0.5, 3.0) | st.floats(-3.0, -0.5)
small_complex = st.complex_numbers(max_magnitude=1.0)


def _ladder(amps, weights, i, j):
    return weights[j] * fock.lower(amps, i) - weights[i] * fock.lower(amps, j)


def _interior_residual(state, vec, eig):
    mask = fock.interior_mask(state.num_modes, state.cutoff, 1)
    return np.linalg.norm((vec - eig * state.amplitudes)[mask]) / state.norm


def test_weights_lambda_and_domain():
    w = ModeWeights(1, 2, 3)
    assert w.lam**2 == pytest.approx(14 / 3, abs=1e-12)
    assert MultiWeights((1, 1, 2, 3)).lam ** 2 == pytest.approx(15 / 4, abs=1e-12)
    with pytest.raises(DegenerateWeightsError):
        ModeWeights(1, 0, 2)
    with pytest.raises(DegenerateWeightsError):
        MultiWeights((1.0,))
    assert isinstance(as_weights([1, 2, 3]), ModeWeights)
    assert isinstance(as_weights([1, 2]), MultiWeights)


def test_params_domain():
    with pytest.raises(DomainError):
        CesParams(0, 0, 0, reg_r=0)
    with pytest.raises(DomainError):
        CesParams(0, 0, 0, reg_r=6.5)
    with pytest.raises(DomainError):
        CesParams(0, 0, 1j)
    with pytest.raises(DomainError):
        ConjugateParams(0, 0, 1j)


def test_zero_labels_leave_only_squeezed_kernel():
    c = tripartite_coefficients(ModeWeights(1, 2, 3), CesParams(0, 0, 0))
    assert np.all(c.linear == 0) and c.c0 == 0


@given(weight, weight, weight, small_complex, small_complex)
@settings(max_examples=100, deadline=None)
def test_linear_coefficients_satisfy_ladder_identities(mu, nu, tau, beta, gamma):
    w = ModeWeights(mu, nu, tau)
    lin = tripartite_ladder_linear(w, beta, gamma)
    assert abs(nu * lin[0] - mu * lin[1] - nu * beta * w.lam) <= 1e-12 * (1 + abs(beta) + abs(gamma)) * 30
    assert abs(tau * lin[1] - nu * lin[2] - tau * gamma * w.lam) <= 1e-12 * (1 + abs(beta) + abs(gamma)) * 30
    # no component along the collective direction
    assert abs(lin @ w.vector()) <= 1e-12 * 100


def test_symmetric_ladder_residual():
    w = ModeWeights(1, 1, 1)
    state = tripartite_ces_formula(w, CesParams(1, 0, 0, 2.0), 30)
    assert _interior_residual(state, _ladder(state.amplitudes, w.vector(), 0, 1), 1.0) <= 1e-8


def test_asymmetric_ladder_residuals():
    w = ModeWeights(1, 2, 3)
    state = tripartite_ces_formula(w, CesParams(0.3, -0.2j, 0.5, 2.0), 30)
    report = eigen_residuals(state, w, [0.3, -0.2j], 0.5)
    assert report.max_ladder_relative() <= 1e-7


@pytest.mark.parametrize("reg_r", [0.5, 1.0, 2.0])
def test_ladder_exact_at_every_reg_r(reg_r):
    w = ModeWeights(1.0, -1.5, 2.0)
    state = tripartite_ces_formula(w, CesParams(0.5 + 0.2j, -0.3, 0.4, reg_r), 24)
    assert eigen_residuals(state, w, [0.5 + 0.2j, -0.3], 0.4).max_ladder_relative() <= 1e-6


def test_bipartite_eigenvalues():
    s = bipartite_ces_formula(1, 1, 0.5, 0, 2.0, 60)
    assert _interior_residual(s, _ladder(s.amplitudes, [1, 1], 0, 1), 0.5) <= 1e-8
    nu = math.sqrt(3)
    s = bipartite_ces_formula(1, nu, 1.0, 1.0, 2.0, 60)
    assert _interior_residual(s, _ladder(s.amplitudes, [1, nu], 0, 1), math.sqrt(6)) <= 1e-8


def test_conjugate_eigenvalues():
    w = ModeWeights(1, 1, 1)
    s = conjugate_ces_formula(w, ConjugateParams(1, 0, 0, 2.0), 30)
    assert _interior_residual(s, _ladder(s.amplitudes, w.vector(), 0, 1), 1.0) <= 1e-8
    s = conjugate_ces_formula(w, ConjugateParams(1, 0.5, 0, 2.0), 30)
    assert _interior_residual(s, _ladder(s.amplitudes, w.vector(), 1, 2), 0.5) <= 1e-8


def test_conjugate_state_is_phase_rotated_ces():
    w = ModeWeights(1, 2, 1.5)
    beta, gamma, x = 0.3 - 0.1j, 0.2j, 0.4
    ces = tripartite_ces_formula(w, CesParams(beta, gamma, x, 1.0), 26)
    conj = conjugate_ces_formula(w, ConjugateParams(1j * beta, 1j * gamma, x, 1.0), 26)
    # exp(i pi/2 N) maps a -> i a, turning the x-type state into the p-type state
    rotated = fock.rotate_phase(ces, math.pi / 2)
    overlap = abs(fock.inner(rotated, conj)) / (rotated.norm * conj.norm)
    assert overlap >= 1 - 1e-6


def test_literal_scheme_shifts_collective_mean():
    w = ModeWeights(1, 1, 1)
    params = CesParams(0, 0, 0.6, 1.0)
    matched = eigen_residuals(tripartite_ces_formula(w, params, 30), w, [0, 0], 0.6)
    literal = eigen_residuals(tripartite_ces_formula(w, params, 30, Regularization.LITERAL), w, [0, 0], 0.6)
    assert matched.collective_mean_error <= 1e-10
    assert literal.collective_mean_error > 1e-2


def test_quadrature_residual_decreases_with_reg_r():
    w = ModeWeights(1, 1, 1)
    values = []
    for r in (0.5, 1.0, 1.5, 2.0):
        state = tripartite_ces_formula(w, CesParams(0.2, 0.1, 0.3, r), 40)
        values.append(eigen_residuals(state, w, [0.2, 0.1], 0.3).quadrature().relative)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_multipartite_reductions():
    w3 = ModeWeights(1, 2, 3)
    circuit_state = multipartite_ces(w3, [0.3, -0.2j], 0.5, 2.0, 30)
    formula_state = tripartite_ces_formula(w3, CesParams(0.3, -0.2j, 0.5, 2.0), 30)
    assert abs(fock.inner(circuit_state, formula_state)) / (circuit_state.norm * formula_state.norm) >= 1 - 1e-8
    two = multipartite_ces(MultiWeights((1, 1)), [0], 0.0, 1.0, 20)
    assert abs(two.amplitudes[1, 0]) == 0 and abs(two.amplitudes[1, 1]) > 0


def test_four_mode_ladder_residuals():
    w = MultiWeights((1, 1, 2, 3))
    betas = [0.1, 0, -0.2]
    state = multipartite_ces(w, betas, 0.3, 1.5, 10)
    assert eigen_residuals(state, w, betas, 0.3).max_ladder_relative() <= 1e-6
