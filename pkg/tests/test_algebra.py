import math

import pytest

from ceslab.analysis.algebra import squeeze_functions, squeeze_operator_check, su11_check
from ceslab.errors import DomainError
from ceslab.states import ModeWeights


def test_su11_standard_normalization_closes():
    report = su11_check(ModeWeights(1, 1, 1), 12)
    assert report.defects["[R, R^dag] - 1"] <= 1e-12
    assert report.standard_closes()


def test_su11_literal_relations_are_off_by_a_factor():
    report = su11_check(ModeWeights(1, 2, 3), 12)
    assert not report.literal_closes()
    assert all(report.defects[k] > 1.0 for k in report.defects if k.startswith("literal"))


def test_su11_needs_room():
    with pytest.raises(DomainError):
        su11_check(ModeWeights(1, 1, 1), 6)


def test_squeeze_functions():
    s, sech, tanh = squeeze_functions(math.e)
    assert s == pytest.approx(1.0)
    assert sech == pytest.approx(1 / math.cosh(1.0))
    assert tanh == pytest.approx(math.tanh(1.0))


def test_identity_at_l_one():
    report = squeeze_operator_check(ModeWeights(1, 2, 3), 1.0, 10)
    assert report.interior_defect <= 1e-12
    assert report.vacuum_norm == pytest.approx(1.0, abs=1e-12)


def test_defect_shrinks_with_cutoff():
    w = ModeWeights(1, 1, 1)
    defects = [squeeze_operator_check(w, math.e, c).interior_defect for c in (12, 20, 30)]
    assert defects[0] > defects[1] > defects[2]


def test_vacuum_action_and_prefactor():
    report = squeeze_operator_check(ModeWeights(1, 1, 1), math.e, 20)
    assert report.prefactor_ratio == pytest.approx(1.0, abs=1e-8)
    assert report.vacuum_norm == pytest.approx(1.0, abs=1e-8)
    assert report.vacuum_overlap_rescaled == pytest.approx(1.0, abs=1e-12)
    # with lambda = 1 the literal kernel coincides with the rescaled one
    assert report.vacuum_overlap_literal == pytest.approx(1.0, abs=1e-12)
    assert report.literal_prefactor == pytest.approx(1.0)


def test_literal_kernel_not_normalizable_for_large_weights():
    report = squeeze_operator_check(ModeWeights(1, 2, 3), math.e, 12)
    assert report.vacuum_overlap_literal is None
    assert report.notes
    assert report.literal_prefactor == pytest.approx(1 / (9 * 14 / 3))


def test_squeeze_domain():
    with pytest.raises(DomainError):
        squeeze_operator_check(ModeWeights(1, 1, 1), 0.0, 12)
    with pytest.raises(DomainError):
        squeeze_operator_check(ModeWeights(1, 1, 1), math.exp(2.0), 12)
    with pytest.raises(DomainError):
        squeeze_operator_check(ModeWeights(1, 1, 1), math.e, 6)
