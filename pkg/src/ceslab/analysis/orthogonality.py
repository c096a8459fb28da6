"""Overlaps between coherent-entangled states with different labels.

For shared ``(beta, gamma)`` the normalized overlap magnitude of two
regularized states decays as ``exp(-(x_1 - x_2)^2/eps)`` with
``eps = (8/3) exp(-2 reg_r)``; as ``reg_r`` grows this becomes the delta
function in ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import curve_fit

from ..errors import ShapeMismatchError
from ..fock import inner
from ..gaussian import bargmann_inner, overlap_gaussian
from ..states import (
    CesParams,
    ModeWeights,
    Regularization,
    coefficients_to_gaussian,
    tripartite_ces_formula,
    tripartite_coefficients,
)
from .integrals import nascent_delta

DEFAULT_SWEEP = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)


def expected_delta_width(reg_r: float) -> float:
    return 8.0 / 3.0 * math.exp(-2.0 * reg_r)


def overlap_formula_coefficient(weights: ModeWeights, p1: CesParams, p2: CesParams) -> complex:
    """The exponential prefactor of the closed-form overlap, evaluated literally.

    ``p1`` carries the primed (bra) labels.
    """
    mu, nu, tau = weights.mu, weights.nu, weights.tau
    bp, gp = p1.beta, p1.gamma
    b, g = p2.beta, p2.gamma
    exponent = (
        -(mu**2 + nu**2) / (6 * nu**2) * (nu**2 * (abs(b) ** 2 + abs(bp) ** 2) + tau**2 * (abs(g) ** 2 + abs(gp) ** 2))
        - mu / (6 * nu) * tau**2 * (
            b * np.conj(g) + np.conj(b) * g + bp * np.conj(gp) + np.conj(bp) * gp
            - 2 * (b * np.conj(gp) + np.conj(bp) * g)
        )
        + (nu**2 + tau**2) / (3 * nu**2) * (nu**2 * b * np.conj(bp) + mu**2 * g * np.conj(gp))
    )
    return complex(np.exp(exponent))


def delta_coefficient(
    weights: ModeWeights,
    p1: CesParams,
    p2: CesParams,
    scheme: Regularization = Regularization.MATCHED,
) -> complex:
    """Unnormalized overlap divided by the nascent delta of width ``(8/3) exp(-2 reg_r)``.

    Uses the literal scalar prefactors of both states and no truncation. As
    ``reg_r`` grows this tends to the coefficient multiplying
    ``delta(x_1 - x_2)``.
    """
    if p1.reg_r != p2.reg_r:
        raise ValueError("both states must share reg_r")
    c1 = tripartite_coefficients(weights, p1, scheme)
    c2 = tripartite_coefficients(weights, p2, scheme)
    value = bargmann_inner(c1.c0, c1.linear, c1.quad, c2.c0, c2.linear, c2.quad)
    width = expected_delta_width(p1.reg_r)
    return value / float(nascent_delta(p1.x - p2.x, width))


@dataclass
class OrthogonalityReport:
    numeric_overlap: complex
    gaussian_overlap: float
    formula_coefficient: complex
    delta_coefficient: complex
    offsets: list = field(default_factory=list)
    magnitudes: list = field(default_factory=list)
    fitted_delta_width: Optional[float] = None
    fitted_amplitude: Optional[float] = None
    expected_delta_width: float = 0.0
    fit_error: Optional[str] = None
    cutoff: int = 0
    leak: float = 0.0
    tail_fraction: float = 0.0

    @property
    def width_relative_error(self) -> Optional[float]:
        if self.fitted_delta_width is None:
            return None
        return abs(self.fitted_delta_width / self.expected_delta_width - 1.0)

    def to_dict(self) -> dict:
        return {
            "numeric_overlap": complex(self.numeric_overlap),
            "gaussian_overlap": self.gaussian_overlap,
            "formula_coefficient": complex(self.formula_coefficient),
            "delta_coefficient": complex(self.delta_coefficient),
            "offsets": list(self.offsets),
            "magnitudes": list(self.magnitudes),
            "fitted_delta_width": self.fitted_delta_width,
            "fitted_amplitude": self.fitted_amplitude,
            "expected_delta_width": self.expected_delta_width,
            "width_relative_error": self.width_relative_error,
            "fit_error": self.fit_error,
            "cutoff": self.cutoff,
            "leak": self.leak,
            "tail_fraction": self.tail_fraction,
        }


def _normalized_overlap(a, b) -> complex:
    return inner(a, b) / math.sqrt(a.norm_tracked * b.norm_tracked)


def tail_fraction(weights: ModeWeights, params: CesParams, state, scheme: Regularization) -> float:
    """Fraction of the untruncated squared norm lying outside the cube."""
    c = tripartite_coefficients(weights, params, scheme)
    full = bargmann_inner(c.c0, c.linear, c.quad, c.c0, c.linear, c.quad).real
    return float(max(0.0, 1.0 - state.norm_tracked / full))


def fit_delta_width(offsets: Sequence[float], magnitudes: Sequence[float]):
    """Least-squares fit of ``C exp(-d^2/eps)``; returns ``(C, eps)``."""
    d = np.asarray(offsets, dtype=float)
    m = np.asarray(magnitudes, dtype=float)
    if d.size < 3:
        raise ValueError("need at least three sweep points")
    guess = 1.0
    for di, mi in zip(d, m):
        if di != 0 and 0 < mi < m[0]:
            guess = -di * di / math.log(mi / m[0])
            break
    popt, _ = curve_fit(lambda x, c, e: c * np.exp(-x * x / e), d, m, p0=(m[0], guess), maxfev=10000)
    return float(popt[0]), float(popt[1])


def orthogonality_check(
    weights: ModeWeights,
    p1: CesParams,
    p2: CesParams,
    cutoff: int,
    sweep: Sequence[float] = DEFAULT_SWEEP,
    scheme: Regularization = Regularization.MATCHED,
) -> OrthogonalityReport:
    """Compare ``<psi(p1)|psi(p2)>`` in the Fock engine with the delta-function regime.

    The sweep keeps ``p1`` fixed and moves ``x`` of a state with ``p2``'s
    ``beta``, ``gamma`` to ``p1.x + d`` for every offset ``d``; the normalized
    overlap magnitudes are fitted by ``C exp(-d^2/eps)``. ``tail_fraction``
    is the largest share of any state's norm lying outside the cube; the fit
    is only trustworthy when it is small.
    """
    if p1.reg_r != p2.reg_r:
        raise ValueError("both states must share reg_r")
    if len(sweep) and len(sweep) < 3:
        raise ShapeMismatchError("sweep needs at least three offsets")
    s1 = tripartite_ces_formula(weights, p1, cutoff, scheme)
    s2 = tripartite_ces_formula(weights, p2, cutoff, scheme)
    g1 = coefficients_to_gaussian(tripartite_coefficients(weights, p1, scheme))
    g2 = coefficients_to_gaussian(tripartite_coefficients(weights, p2, scheme))
    report = OrthogonalityReport(
        numeric_overlap=_normalized_overlap(s1, s2),
        gaussian_overlap=overlap_gaussian(g1, g2),
        formula_coefficient=overlap_formula_coefficient(weights, p1, p2),
        delta_coefficient=delta_coefficient(weights, p1, p2, scheme),
        expected_delta_width=expected_delta_width(p1.reg_r),
        cutoff=cutoff,
        leak=max(s1.leak, s2.leak),
        tail_fraction=max(tail_fraction(weights, p1, s1, scheme), tail_fraction(weights, p2, s2, scheme)),
    )
    for d in sweep:
        moved = CesParams(p2.beta, p2.gamma, p1.x + d, p1.reg_r)
        sm = tripartite_ces_formula(weights, moved, cutoff, scheme)
        report.offsets.append(float(d))
        report.magnitudes.append(abs(_normalized_overlap(s1, sm)))
        report.leak = max(report.leak, sm.leak)
        report.tail_fraction = max(report.tail_fraction, tail_fraction(weights, moved, sm, scheme))
    if len(sweep):
        try:
            report.fitted_amplitude, report.fitted_delta_width = fit_delta_width(report.offsets, report.magnitudes)
        except (RuntimeError, ValueError) as exc:
            report.fit_error = str(exc)
    return report
