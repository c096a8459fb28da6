"""Residuals of the defining eigenrelations.

For weights ``mu`` on ``N`` modes the relations are

* ``(1/N) sum mu_i X_i |psi> = (lambda x/sqrt(2)) |psi>`` (``P`` for the
  momentum-type family, eigenvalue ``lambda p/sqrt(2)``),
* ``(mu_{i+1} a_i - mu_i a_{i+1}) |psi> = mu_{i+1} beta_i lambda |psi>``.

Fock-space residuals are evaluated on the interior of the cube (every mode
below ``cutoff - 1``), where ``a`` and ``a^dag`` act without truncation. On a
state with exact in-cube amplitudes the ladder residuals are then exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import ShapeMismatchError
from ..fock import FockState, interior_mask, lower, raise_
from ..gaussian import GaussianState, collective_quadrature_stats, ladder_residual
from ..states import Weights, as_weights

QUADRATURE = "quadrature"
LADDER = "ladder"
LADDER_NO_LAMBDA = "ladder_no_lambda"


@dataclass
class RelationResidual:
    label: str
    kind: str
    eigenvalue: complex
    absolute: float
    relative: float
    reg_r: Optional[float]
    cutoff: Optional[int]
    leak: float

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "eigenvalue": complex(self.eigenvalue),
            "absolute": self.absolute,
            "relative": self.relative,
            "reg_r": self.reg_r,
            "cutoff": self.cutoff,
            "leak": self.leak,
        }


@dataclass
class ResidualReport:
    relations: list = field(default_factory=list)
    collective_mean_error: float = 0.0

    def of_kind(self, kind: str) -> list:
        return [r for r in self.relations if r.kind == kind]

    def ladder(self) -> list:
        return self.of_kind(LADDER)

    def quadrature(self) -> RelationResidual:
        return self.of_kind(QUADRATURE)[0]

    def max_ladder_relative(self) -> float:
        return max(r.relative for r in self.ladder())

    def to_dict(self) -> dict:
        return {
            "relations": [r.to_dict() for r in self.relations],
            "collective_mean_error": self.collective_mean_error,
        }


def _ladder_label(i: int) -> str:
    return f"mu{i + 2} a{i + 1} - mu{i + 1} a{i + 2}"


def _prepare(weights, betas):
    weights = as_weights(weights)
    mu = weights.vector()
    b = np.asarray(betas, dtype=complex).reshape(-1)
    if b.size != mu.size - 1:
        raise ShapeMismatchError(f"need {mu.size - 1} ladder eigenvalue labels, got {b.size}")
    return weights, mu, b


def _ladder_targets(mu, betas, lam, lambda_free: bool):
    out = []
    for i in range(mu.size - 1):
        out.append((i, LADDER, mu[i + 1] * betas[i] * lam))
        if lambda_free:
            out.append((i, LADDER_NO_LAMBDA, mu[i + 1] * betas[i]))
    return out


def eigen_residuals(
    state: FockState,
    weights: Weights,
    betas: Sequence[complex],
    label: float,
    kind: str = "x",
    reg_r: Optional[float] = None,
    include_lambda_free: Optional[bool] = None,
) -> ResidualReport:
    """Residuals of all ``N`` eigenrelations on the interior of a Fock state.

    ``kind`` selects the collective quadrature: ``"x"`` for ``X`` with
    eigenvalue ``lambda label/sqrt(2)``, ``"p"`` for ``P``.
    ``include_lambda_free`` (default: ``N != 3``) adds the ladder residuals
    against ``mu_{i+1} beta_i`` without the factor ``lambda``.
    """
    weights, mu, b = _prepare(weights, betas)
    if state.num_modes != mu.size:
        raise ShapeMismatchError(f"state has {state.num_modes} modes, weights have {mu.size}")
    if kind not in ("x", "p"):
        raise ValueError("kind must be 'x' or 'p'")
    if include_lambda_free is None:
        include_lambda_free = mu.size != 3
    amps = state.amplitudes
    mask = interior_mask(state.num_modes, state.cutoff, 1)
    norm = state.norm
    lam = weights.lam
    report = ResidualReport()

    def record(lbl, knd, eig, vec):
        resid = vec - eig * amps
        absolute = float(np.linalg.norm(resid[mask]))
        report.relations.append(
            RelationResidual(lbl, knd, complex(eig), absolute, absolute / norm if norm else math.inf,
                             reg_r, state.cutoff, state.leak)
        )

    lowered = [lower(amps, k) for k in range(mu.size)]
    raised = [raise_(amps, k) for k in range(mu.size)]
    if kind == "x":
        quad = sum(m * (lo + ra) for m, lo, ra in zip(mu, lowered, raised)) / (math.sqrt(2) * mu.size)
    else:
        quad = sum(m * (lo - ra) for m, lo, ra in zip(mu, lowered, raised)) / (1j * math.sqrt(2) * mu.size)
    target = lam * label / math.sqrt(2)
    record(f"(1/{mu.size}) sum mu_i {kind.upper()}_i", QUADRATURE, target, quad)
    mean = complex(np.vdot(amps, quad)) / state.norm_tracked if norm else 0.0
    report.collective_mean_error = abs(mean - target)

    for i, knd, eig in _ladder_targets(mu, b, lam, include_lambda_free):
        vec = mu[i + 1] * lowered[i] - mu[i] * lowered[i + 1]
        record(_ladder_label(i), knd, eig, vec)
    return report


def gaussian_eigen_residuals(
    state: GaussianState,
    weights: Weights,
    betas: Sequence[complex],
    label: float,
    kind: str = "x",
    reg_r: Optional[float] = None,
    include_lambda_free: Optional[bool] = None,
) -> ResidualReport:
    """Exact residual norms for a normalized Gaussian state."""
    weights, mu, b = _prepare(weights, betas)
    if state.num_modes != mu.size:
        raise ShapeMismatchError(f"state has {state.num_modes} modes, weights have {mu.size}")
    if include_lambda_free is None:
        include_lambda_free = mu.size != 3
    lam = weights.lam
    mean_x, var_x, mean_p, var_p = collective_quadrature_stats(state, mu)
    mean, var = (mean_x, var_x) if kind == "x" else (mean_p, var_p)
    target = lam * label / math.sqrt(2)
    quad_res = math.sqrt((mean - target) ** 2 + max(var, 0.0))
    report = ResidualReport(collective_mean_error=abs(mean - target))
    report.relations.append(
        RelationResidual(f"(1/{mu.size}) sum mu_i {kind.upper()}_i", QUADRATURE, target, quad_res, quad_res,
                         reg_r, None, 0.0)
    )
    for i, knd, eig in _ladder_targets(mu, b, lam, include_lambda_free):
        coeffs = np.zeros(mu.size)
        coeffs[i], coeffs[i + 1] = mu[i + 1], -mu[i]
        res = ladder_residual(state, coeffs, eig)
        report.relations.append(RelationResidual(_ladder_label(i), knd, complex(eig), res, res, reg_r, None, 0.0))
    return report
