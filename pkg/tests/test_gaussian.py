import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ceslab import fock, gaussian
from ceslab.errors import ImpureStateError, ModeIndexError, ShapeMismatchError
from ceslab.gates import BeamSplitter, CollectiveSqueeze, Displace, Squeeze, symplectic_form

gate_strategy = st.one_of(
    st.builds(BeamSplitter, st.just(0), st.just(2), st.floats(-4, 4)),
    st.builds(Displace, st.integers(0, 2), st.complex_numbers(max_magnitude=2)),
    st.builds(Squeeze, st.integers(0, 2), st.floats(-2, 2)),
    st.builds(CollectiveSqueeze, st.just((1.0, -2.0, 0.5)), st.floats(-2, 2)),
)


def test_vacuum_moments():
    v1 = gaussian.vacuum_gaussian(1)
    assert np.array_equal(v1.mean, [0, 0])
    assert np.array_equal(v1.cov, 0.5 * np.eye(2))
    v3 = gaussian.vacuum_gaussian(3)
    assert np.array_equal(v3.cov, 0.5 * np.eye(6))
    assert v3.purity_defect() == pytest.approx(0.0, abs=1e-15)


def test_displace_shifts_mean():
    out = gaussian.apply_gate(gaussian.vacuum_gaussian(1), Displace(0, 1.0))
    assert np.allclose(out.mean, [math.sqrt(2), 0])
    assert np.array_equal(out.cov, 0.5 * np.eye(2))


def test_squeeze_variances():
    out = gaussian.apply_gate(gaussian.vacuum_gaussian(1), Squeeze(0, 1.0))
    assert out.cov[0, 0] == pytest.approx(math.exp(-2) / 2)
    assert out.cov[1, 1] == pytest.approx(math.exp(2) / 2)


def test_balanced_beam_splitter_on_squeezed_mode():
    r = 0.7
    state = gaussian.apply_gates(gaussian.vacuum_gaussian(2), [Squeeze(0, r), BeamSplitter(0, 1, math.pi / 4)])
    assert state.cov[0, 0] == pytest.approx((math.exp(-2 * r) + 1) / 4)
    assert state.cov[1, 1] == pytest.approx((math.exp(-2 * r) + 1) / 4)
    # mode 0 is sent to (a_0 + a_1)/sqrt(2), so the x-covariance carries a plus sign
    assert state.cov[0, 1] == pytest.approx((math.exp(-2 * r) - 1) / 4)


def test_beam_splitter_sign_matches_fock_engine():
    r = 0.4
    gates = [Squeeze(0, r), BeamSplitter(0, 1, math.pi / 4)]
    g = gaussian.apply_gates(gaussian.vacuum_gaussian(2), gates)
    f = fock.apply_gates(fock.vacuum_fock(2, 30), gates)
    a0, a1 = f.amplitudes, f.amplitudes

    def x(v, k):
        return (fock.lower(v, k) + fock.raise_(v, k)) / math.sqrt(2)

    cov01 = np.vdot(a0, x(x(a1, 1), 0)).real
    assert cov01 == pytest.approx(g.cov[0, 1], abs=1e-10)


def test_gate_index_out_of_range():
    with pytest.raises(ModeIndexError):
        gaussian.apply_gate(gaussian.vacuum_gaussian(2), Squeeze(2, 0.1))


@given(gate_strategy)
@settings(max_examples=60, deadline=None)
def test_gates_are_symplectic(gate):
    s = gate.symplectic(3)
    omega = symplectic_form(3)
    assert np.max(np.abs(s @ omega @ s.T - omega)) <= 1e-12


@given(st.lists(gate_strategy, min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_gates_preserve_purity_and_uncertainty(gates):
    state = gaussian.apply_gates(gaussian.vacuum_gaussian(3), gates)
    assert state.is_pure()
    assert state.uncertainty_min_eig() >= -1e-10 * max(1.0, np.abs(state.cov).max())


def test_collective_stats_arithmetic():
    _, var_x, _, _ = gaussian.collective_quadrature_stats(gaussian.vacuum_gaussian(3), [1, 1, 1])
    assert var_x == pytest.approx(1 / 6)
    _, var_x, _, _ = gaussian.collective_quadrature_stats(gaussian.vacuum_gaussian(3), [1, 2, 3])
    assert var_x == pytest.approx(14 / 18)
    with pytest.raises(ShapeMismatchError):
        gaussian.collective_quadrature_stats(gaussian.vacuum_gaussian(3), [1, 2])


def test_overlap_values():
    vac = gaussian.vacuum_gaussian(1)
    assert gaussian.overlap_gaussian(vac, vac) == pytest.approx(1.0)
    shifted = gaussian.apply_gate(vac, Displace(0, 2.0))
    assert gaussian.overlap_gaussian(vac, shifted) == pytest.approx(math.exp(-4), rel=1e-12)
    squeezed = gaussian.apply_gate(vac, Squeeze(0, 1.0))
    assert gaussian.overlap_gaussian(vac, squeezed) == pytest.approx(0.648054, abs=1e-6)


def test_overlap_matches_fock_engine():
    gates = [Squeeze(0, 0.3), BeamSplitter(0, 1, 0.6), Displace(1, 0.4 - 0.1j)]
    ref = [Squeeze(1, -0.2), Displace(0, 0.2)]
    g = gaussian.overlap_gaussian(
        gaussian.apply_gates(gaussian.vacuum_gaussian(2), ref),
        gaussian.apply_gates(gaussian.vacuum_gaussian(2), gates),
    )
    f = abs(fock.inner(fock.apply_gates(fock.vacuum_fock(2, 30), ref), fock.apply_gates(fock.vacuum_fock(2, 30), gates))) ** 2
    assert f == pytest.approx(g, abs=1e-10)


def test_overlap_rejects_mixed_state():
    mixed = gaussian.GaussianState(np.zeros(2), np.eye(2))
    with pytest.raises(ImpureStateError):
        gaussian.overlap_gaussian(mixed, gaussian.vacuum_gaussian(1))


@given(st.lists(gate_strategy, min_size=1, max_size=5))
@settings(max_examples=30, deadline=None)
def test_bargmann_round_trip(gates):
    state = gaussian.apply_gates(gaussian.vacuum_gaussian(3), gates)
    _, linear, quad = gaussian.to_bargmann(state)
    back = gaussian.from_bargmann(linear, quad)
    scale = max(1.0, np.abs(state.cov).max())
    assert np.allclose(back.mean, state.mean, atol=1e-8 * scale)
    assert np.allclose(back.cov, state.cov, atol=1e-8 * scale**2)


def test_bargmann_inner_matches_fock_amplitudes(rng):
    l1 = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    l2 = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    q1 = np.array([[0.1, 0.05], [0.05, -0.12]])
    q2 = np.array([[-0.08j, 0.02], [0.02, 0.1]])
    f1 = fock.build_quadratic_exponential(2, 40, 0.1, l1, q1)
    f2 = fock.build_quadratic_exponential(2, 40, -0.2, l2, q2)
    exact = gaussian.bargmann_inner(0.1, l1, q1, -0.2, l2, q2)
    assert fock.inner(f1, f2) == pytest.approx(exact, abs=1e-12)


def test_ladder_residual_of_coherent_state():
    state = gaussian.apply_gate(gaussian.vacuum_gaussian(2), Displace(0, 0.5 + 0.5j))
    assert gaussian.ladder_residual(state, [1, 0], 0.5 + 0.5j) == pytest.approx(0.0, abs=1e-15)
    # mode 1 is empty, so a_1 has eigenvalue 0 and the residual is the mismatch alone
    assert gaussian.ladder_residual(state, [0, 1], 1.0) == pytest.approx(1.0)
