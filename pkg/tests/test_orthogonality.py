import math

import pytest

from ceslab.analysis.orthogonality import (
    delta_coefficient,
    expected_delta_width,
    fit_delta_width,
    orthogonality_check,
    overlap_formula_coefficient,
)
from ceslab.analysis.integrals import nascent_delta
from ceslab.states import CesParams, ModeWeights


def test_self_overlap_is_one():
    w = ModeWeights(1, 2, 3)
    p = CesParams(0.3, -0.2j, 0.5, 1.0)
    report = orthogonality_check(w, p, p, 20, sweep=())
    assert abs(report.numeric_overlap) == pytest.approx(1.0, abs=1e-12)
    assert report.gaussian_overlap == pytest.approx(1.0, abs=1e-12)


def test_fock_overlap_matches_gaussian_overlap():
    w = ModeWeights(1, 1, 1)
    p1 = CesParams(0.3, 0.1, 0.2, 1.0)
    p2 = CesParams(0.1, -0.2j, 0.4, 1.0)
    report = orthogonality_check(w, p1, p2, 30, sweep=())
    assert report.tail_fraction < 1e-8
    assert abs(report.numeric_overlap) ** 2 == pytest.approx(report.gaussian_overlap, abs=1e-6)


def test_width_fit_at_moderate_squeezing():
    w = ModeWeights(1, 1, 1)
    p = CesParams(0.3, 0.0, 0.2, 1.0)
    report = orthogonality_check(w, p, p, 30)
    assert report.fit_error is None
    assert report.width_relative_error <= 0.05


def test_fit_recovers_exact_gaussian():
    offsets = [0.0, 0.1, 0.2, 0.3, 0.4]
    amp, eps = fit_delta_width(offsets, [0.9 * math.exp(-d * d / 0.05) for d in offsets])
    assert amp == pytest.approx(0.9) and eps == pytest.approx(0.05)


def test_formula_coefficient_is_one_when_outer_weights_match():
    p = CesParams(0.3, -0.2j, 0.5, 2.0)
    assert overlap_formula_coefficient(ModeWeights(1, 2, 1), p, p) == pytest.approx(1.0, abs=1e-12)
    # with mu != tau the literal coefficient carries a residual label dependence
    assert abs(overlap_formula_coefficient(ModeWeights(1, 2, 3), p, p) - 1.0) > 0.1


def test_delta_coefficient_independent_of_weights():
    p = CesParams(0.3, -0.2j, 0.5, 4.0)
    values = [delta_coefficient(ModeWeights(*w), p, p).real for w in [(1, 1, 1), (1, 2, 3), (2, -1, 0.5)]]
    assert max(values) - min(values) <= 1e-10
    assert values[0] == pytest.approx(math.sqrt(2 * math.pi / 3), rel=1e-3)


def test_expected_width():
    assert expected_delta_width(2.0) == pytest.approx(8 / 3 * math.exp(-4))
    assert float(nascent_delta(0.0, expected_delta_width(2.0))) > float(nascent_delta(0.0, expected_delta_width(1.0)))


def test_shared_reg_r_required():
    w = ModeWeights(1, 1, 1)
    with pytest.raises(ValueError):
        orthogonality_check(w, CesParams(0, 0, 0, 1.0), CesParams(0, 0, 0, 2.0), 10)
