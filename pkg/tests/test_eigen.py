import math

import numpy as np
import pytest

from ceslab.analysis.eigen import LADDER_NO_LAMBDA, eigen_residuals, gaussian_eigen_residuals
from ceslab.circuits import generate_ces_circuit, run_gaussian
from ceslab.errors import ShapeMismatchError
from ceslab.states import (
    CesParams,
    ConjugateParams,
    ModeWeights,
    MultiWeights,
    conjugate_ces_formula,
    tripartite_ces_formula,
)


def test_squeezed_vacuum_has_zero_ladder_residuals():
    w = ModeWeights(1, 2, 3)
    state = tripartite_ces_formula(w, CesParams(0, 0, 0, 1.5), 20)
    report = eigen_residuals(state, w, [0, 0], 0.0)
    assert all(r.absolute <= 1e-10 for r in report.ladder())
    assert all(r.cutoff == 20 and r.leak == 0 for r in report.relations)


def test_relative_is_absolute_over_norm():
    w = ModeWeights(1, 1, 1)
    state = tripartite_ces_formula(w, CesParams(0.5, 0.2, 0.1, 1.0), 20)
    for r in eigen_residuals(state, w, [0.5, 0.2], 0.1).relations:
        assert r.relative == pytest.approx(r.absolute / state.norm)


def test_quadrature_residual_ratio_follows_squeezing():
    w = ModeWeights(1, 2, 3)
    values = []
    for r in (0.5, 1.0, 1.5, 2.0):
        state = run_gaussian(generate_ces_circuit(w, [0.3, -0.2j], 0.5, r))
        values.append(gaussian_eigen_residuals(state, w, [0.3, -0.2j], 0.5).quadrature().absolute)
    ratios = [b / a for a, b in zip(values, values[1:])]
    assert all(math.exp(-1) / 2 <= q <= 2 * math.exp(-1) for q in ratios)


def test_fock_and_gaussian_residuals_agree():
    w = ModeWeights(1, 2, 3)
    circuit = generate_ces_circuit(w, [0.3, -0.2j], 0.5, 0.8)
    g = gaussian_eigen_residuals(run_gaussian(circuit), w, [0.3, -0.2j], 0.5)
    f = eigen_residuals(tripartite_ces_formula(w, CesParams(0.3, -0.2j, 0.5, 0.8), 30), w, [0.3, -0.2j], 0.5)
    assert f.quadrature().relative == pytest.approx(g.quadrature().absolute, abs=1e-6)
    assert f.collective_mean_error == pytest.approx(g.collective_mean_error, abs=1e-6)


def test_momentum_family_uses_p_quadrature():
    w = ModeWeights(1, 1, 1)
    state = conjugate_ces_formula(w, ConjugateParams(0.2, 0.1, 0.4, 1.0), 30)
    report = eigen_residuals(state, w, [0.2, 0.1], 0.4, kind="p")
    assert report.collective_mean_error <= 1e-9
    assert report.max_ladder_relative() <= 1e-9


def test_both_lambda_readings_reported_for_four_modes():
    w = MultiWeights((1, 1, 2, 3))
    state = run_gaussian(generate_ces_circuit(w, [0.1, 0, -0.2], 0.3, 1.5))
    report = gaussian_eigen_residuals(state, w, [0.1, 0, -0.2], 0.3)
    assert len(report.ladder()) == 3
    assert len(report.of_kind(LADDER_NO_LAMBDA)) == 3
    assert max(r.absolute for r in report.ladder()) <= 1e-10
    # lambda != 1 here, so the reading without lambda does not hold
    assert max(r.absolute for r in report.of_kind(LADDER_NO_LAMBDA)) > 1e-3


def test_shape_checks():
    w = ModeWeights(1, 1, 1)
    state = tripartite_ces_formula(w, CesParams(0, 0, 0, 1.0), 6)
    with pytest.raises(ShapeMismatchError):
        eigen_residuals(state, w, [0], 0.0)
    with pytest.raises(ShapeMismatchError):
        eigen_residuals(state, MultiWeights((1, 1)), [0], 0.0)
