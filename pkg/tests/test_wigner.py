import math

import numpy as np
import pytest

from ceslab import gaussian
from ceslab.analysis.wigner import (
    LITERAL,
    collective_density,
    label_moments,
    marginal_p,
    marginal_x,
    single_mode_wigner,
    wigner_collective,
    wigner_grid,
)
from ceslab.circuits import circuit_state_fock, generate_ces_circuit, run_gaussian
from ceslab.errors import ShapeMismatchError
from ceslab.fock import vacuum_fock
from ceslab.states import ModeWeights, MultiWeights


def literal_prefactor(w):
    return 1 / (math.pi * w.tau**2 * w.lam**2)


@pytest.mark.parametrize("weights", [(1, 1, 1), (1, 2, 3)])
def test_vacuum_literal_values(weights):
    w = ModeWeights(*weights)
    vac = gaussian.vacuum_gaussian(3)
    assert wigner_collective(vac, w, 0.0, 0.0, LITERAL) == pytest.approx(literal_prefactor(w))
    assert wigner_collective(vac, w, 1.0, 0.0, LITERAL) == pytest.approx(math.exp(-1.5) * literal_prefactor(w))


def test_vacuum_fock_path_matches_literal_value():
    w = ModeWeights(1, 2, 3)
    value = wigner_collective(vacuum_fock(3, 6), w, 1.0, 0.0, LITERAL)
    assert value == pytest.approx(math.exp(-1.5) * literal_prefactor(w), abs=1e-12)


def test_literal_convention_needs_three_modes():
    with pytest.raises(ShapeMismatchError):
        wigner_collective(gaussian.vacuum_gaussian(2), MultiWeights((1, 1)), 0.0, 0.0, LITERAL)
    literal, normalized = wigner_grid(gaussian.vacuum_gaussian(2), MultiWeights((1, 1)), [0.0], [0.0])
    assert literal is None and normalized[0, 0] == pytest.approx(1 / math.pi)


def test_single_mode_wigner_known_states():
    vac = np.zeros((4, 4))
    vac[0, 0] = 1
    assert single_mode_wigner(vac, 0.0, 0.0) == pytest.approx(1 / math.pi)
    one = np.zeros((4, 4))
    one[1, 1] = 1
    # the one-photon state is negative at the origin
    assert single_mode_wigner(one, 0.0, 0.0) == pytest.approx(-1 / math.pi)
    q, p = 0.7, -0.4
    assert single_mode_wigner(one, q, p) == pytest.approx((2 * (q * q + p * p) - 1) * math.exp(-q * q - p * p) / math.pi)


def test_fock_and_gaussian_paths_agree():
    w = ModeWeights(1, 2, 3)
    circuit = generate_ces_circuit(w, [0.3, -0.2j], 0.5, 0.5)
    g = run_gaussian(circuit)
    f = circuit_state_fock(circuit, 24)
    xs = np.linspace(-1.5, 2.0, 7)
    ps = np.linspace(-1.0, 1.0, 5)
    _, gn = wigner_grid(g, w, xs, ps)
    _, fn = wigner_grid(f, w, xs, ps)
    assert np.max(np.abs(gn - fn)) <= 1e-6


@pytest.mark.parametrize("state_kind", ["vacuum", "ces"])
def test_marginals_match_collective_density(state_kind):
    w = ModeWeights(1, 2, 3)
    if state_kind == "vacuum":
        state = gaussian.vacuum_gaussian(3)
    else:
        state = run_gaussian(generate_ces_circuit(w, [0.3, -0.2j], 0.5, 2.0))
    mean, cov = label_moments(state, w)
    xs = mean[0] + math.sqrt(cov[0, 0]) * np.linspace(-6, 6, 121)
    ps = mean[1] + math.sqrt(cov[1, 1]) * np.linspace(-6, 6, 121)
    assert np.max(np.abs(marginal_x(state, w, xs) - collective_density(state, w, xs, "x"))) <= 1e-4
    assert np.max(np.abs(marginal_p(state, w, ps) - collective_density(state, w, ps, "p"))) <= 1e-4


def test_normalized_marginal_integrates_to_one():
    w = ModeWeights(1, 1, 1)
    state = run_gaussian(generate_ces_circuit(w, [0.2, 0.1], 0.4, 1.0))
    mean, cov = label_moments(state, w)
    sigma = math.sqrt(cov[0, 0])
    xs = np.linspace(mean[0] - 8 * sigma, mean[0] + 8 * sigma, 321)
    assert np.trapezoid(marginal_x(state, w, xs), xs) == pytest.approx(1.0, abs=1e-4)


def test_ces_peak_at_its_label():
    w = ModeWeights(1, 2, 3)
    x0 = 0.7
    state = run_gaussian(generate_ces_circuit(w, [0.3, -0.2j], x0, 2.0))
    xs = np.linspace(-2, 2, 401)
    values = wigner_collective(state, w, xs, 0.0)
    assert abs(xs[np.argmax(values)] - x0) <= xs[1] - xs[0]


def test_under_resolved_grid_flagged():
    with pytest.raises(ValueError):
        marginal_x(gaussian.vacuum_gaussian(3), ModeWeights(1, 1, 1), [0.0], points_per_sigma=5)


def test_unknown_convention():
    with pytest.raises(ValueError):
        wigner_collective(gaussian.vacuum_gaussian(3), ModeWeights(1, 1, 1), 0.0, 0.0, "other")
