import numpy as np
import pytest

from ceslab.analysis.completeness import completeness_mc, envelope_precision
from ceslab.fock import basis_fock
from ceslab.states import ModeWeights


def test_deterministic_given_seed():
    w = ModeWeights(1, 2, 3)
    states = [basis_fock([0, 0, 0], 4), basis_fock([1, 0, 0], 4)]
    a = completeness_mc(w, states, 2.0, 20_000, seed=5, shard_size=7_000)
    b = completeness_mc(w, states, 2.0, 20_000, seed=5, shard_size=7_000)
    assert np.array_equal(a.estimate, b.estimate)
    assert np.array_equal(a.stderr, b.stderr)
    c = completeness_mc(w, states, 2.0, 20_000, seed=6, shard_size=7_000)
    assert not np.array_equal(a.estimate, c.estimate)


def test_vacuum_diagonal_near_one():
    w = ModeWeights(1, 1, 1)
    report = completeness_mc(w, [basis_fock([0, 0, 0], 3)], 3.0, 200_000, seed=3)
    assert abs(report.estimate[0, 0] - 1.0) <= 3 * report.stderr[0, 0] + 2e-3


def test_offdiagonal_consistent_with_zero():
    w = ModeWeights(1, 1, 1)
    report = completeness_mc(w, [basis_fock([0, 0, 0], 3), basis_fock([1, 0, 0], 3)], 3.0, 200_000, seed=11)
    assert report.max_offdiagonal_z() <= 3.0


def test_envelope_precision_positive_definite():
    h = envelope_precision(ModeWeights(1, 2, 3))
    assert np.all(np.linalg.eigvalsh(h) > 0)


def test_inconclusive_when_stderr_too_large():
    w = ModeWeights(1, 1, 1)
    report = completeness_mc(w, [basis_fock([0, 0, 0], 3)], 3.0, 100, seed=1, stderr_bound=1e-6)
    assert report.status == "inconclusive"


def test_rejects_high_photon_test_states():
    with pytest.raises(ValueError):
        completeness_mc(ModeWeights(1, 1, 1), [basis_fock([5, 0, 0], 6)], 3.0, 10, seed=1)


def test_diagonal_approaches_one_as_reg_r_grows():
    w = ModeWeights(1, 1, 1)
    state = basis_fock([1, 0, 0], 3)
    errors = [abs(completeness_mc(w, [state], r, 200_000, seed=42).estimate[0, 0] - 1) for r in (1.0, 2.0, 3.0)]
    assert errors[0] > errors[1] > errors[2]
