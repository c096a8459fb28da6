"""Closed-form constructors for the coherent-entangled state families.

Every ideal state here is a limit of Gaussian states and cannot be
normalized. A finite ``reg_r`` regularizes it: the collective quadratic
coefficient is multiplied by ``t = tanh(reg_r)``, which is exactly what a
single-mode squeeze of strength ``reg_r`` produces after the beam-splitter
cascade.

Two regularization schemes are offered:

``MATCHED`` (default)
    Also scales the ``x`` (or ``p``) part of the linear coefficient by
    ``s = (1 + t)/2``. The resulting state coincides with the circuit output
    (squeeze, beam splitters, constraint-solved displacements) at every
    ``reg_r`` and its collective-quadrature mean equals ``lambda x/sqrt(2)``
    exactly.
``LITERAL``
    Scales only the quadratic coefficient. The ladder eigenrelations still
    hold exactly, but the collective-quadrature mean is off by a factor
    ``2/(1 + t)`` and the state differs from the circuit output when
    ``x != 0``.

Both schemes tend to the same ideal state as ``reg_r -> inf``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateWeightsError, DomainError, ShapeMismatchError
from .fock import FockState, build_quadratic_exponential
from .gaussian import GaussianState, from_bargmann

MAX_REG_R = 6.0


class Regularization(enum.Enum):
    MATCHED = "matched"
    LITERAL = "literal"


def _check_weight_values(values: Sequence[float]) -> None:
    for k, w in enumerate(values):
        if not np.isfinite(w) or w == 0:
            raise DegenerateWeightsError(f"weight {k + 1} must be a nonzero finite real, got {w}")


@dataclass(frozen=True)
class ModeWeights:
    """Three-mode weights ``(mu, nu, tau)`` with ``lambda^2 = (mu^2 + nu^2 + tau^2)/3``."""

    mu: float
    nu: float
    tau: float
    lam: float = field(init=False)

    def __post_init__(self) -> None:
        vals = (float(self.mu), float(self.nu), float(self.tau))
        _check_weight_values(vals)
        object.__setattr__(self, "mu", vals[0])
        object.__setattr__(self, "nu", vals[1])
        object.__setattr__(self, "tau", vals[2])
        object.__setattr__(self, "lam", math.sqrt(sum(v * v for v in vals) / 3.0))

    @property
    def num_modes(self) -> int:
        return 3

    def vector(self) -> np.ndarray:
        return np.array([self.mu, self.nu, self.tau])


@dataclass(frozen=True)
class MultiWeights:
    """``N``-mode weights with ``lambda^2 = sum(mu_i^2)/N``."""

    mu: tuple
    lam: float = field(init=False)

    def __post_init__(self) -> None:
        vals = tuple(float(m) for m in np.asarray(self.mu, dtype=float).reshape(-1))
        if len(vals) < 2:
            raise DegenerateWeightsError("need at least two weights")
        _check_weight_values(vals)
        object.__setattr__(self, "mu", vals)
        object.__setattr__(self, "lam", math.sqrt(sum(v * v for v in vals) / len(vals)))

    @property
    def num_modes(self) -> int:
        return len(self.mu)

    def vector(self) -> np.ndarray:
        return np.array(self.mu)


Weights = Union[ModeWeights, MultiWeights]


def as_weights(values) -> Weights:
    """Wrap a weight sequence, using :class:`ModeWeights` for three modes."""
    if isinstance(values, (ModeWeights, MultiWeights)):
        return values
    vals = [float(v) for v in values]
    if len(vals) == 3:
        return ModeWeights(*vals)
    return MultiWeights(tuple(vals))


def _check_reg_r(reg_r: float) -> float:
    reg_r = float(reg_r)
    if not 0 < reg_r <= MAX_REG_R:
        raise DomainError(f"reg_r must lie in (0, {MAX_REG_R}], got {reg_r}")
    return reg_r


@dataclass(frozen=True)
class CesParams:
    beta: complex
    gamma: complex
    x: float
    reg_r: float = 2.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "gamma", complex(self.gamma))
        if isinstance(self.x, complex) or np.iscomplexobj(self.x):
            raise DomainError("x must be real")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "reg_r", _check_reg_r(self.reg_r))


@dataclass(frozen=True)
class ConjugateParams:
    sigma: complex
    kappa: complex
    p: float
    reg_r: float = 2.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", complex(self.sigma))
        object.__setattr__(self, "kappa", complex(self.kappa))
        if isinstance(self.p, complex) or np.iscomplexobj(self.p):
            raise DomainError("p must be real")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "reg_r", _check_reg_r(self.reg_r))


@dataclass(frozen=True)
class BargmannCoefficients:
    """``exp(c0 + L.a^dag + a^dag.Q.a^dag)|0>``."""

    c0: complex
    linear: np.ndarray
    quad: np.ndarray

    @property
    def num_modes(self) -> int:
        return len(self.linear)


def regularization_factors(reg_r: float, scheme: Regularization = Regularization.MATCHED):
    """Return ``(t, s)``: quadratic scale ``tanh(reg_r)`` and quadrature-label scale."""
    t = math.tanh(reg_r)
    s = 0.5 * (1.0 + t) if scheme is Regularization.MATCHED else 1.0
    return t, s


# ---------------------------------------------------------------------------
# Coefficients


def tripartite_ladder_linear(weights: ModeWeights, beta: complex, gamma: complex) -> np.ndarray:
    """The ``beta``/``gamma`` part of the linear coefficient (no collective component)."""
    mu, nu, tau, lam = weights.mu, weights.nu, weights.tau, weights.lam
    return np.array(
        [
            beta * (nu**2 + tau**2) + gamma * mu * tau**2 / nu,
            -beta * mu * nu + gamma * tau**2,
            -gamma * (mu**2 + nu**2) * tau / nu - beta * mu * tau,
        ],
        dtype=complex,
    ) / (3 * lam)


def _tripartite_scalar(weights: ModeWeights, a: complex, b: complex, label: float) -> float:
    mu, nu, tau = weights.mu, weights.nu, weights.tau
    cross = 2.0 * (np.conj(a) * b).real
    return float(
        -0.75 * label**2
        - cross * mu * tau**2 / (6 * nu)
        - abs(b) ** 2 * tau**2 * (1 + mu**2 / nu**2) / 6
        - abs(a) ** 2 * (nu**2 + tau**2) / 6
    )


def tripartite_coefficients(
    weights: ModeWeights,
    params: CesParams,
    scheme: Regularization = Regularization.MATCHED,
) -> BargmannCoefficients:
    t, s = regularization_factors(params.reg_r, scheme)
    mu_vec = weights.vector()
    linear = tripartite_ladder_linear(weights, params.beta, params.gamma)
    linear = linear + s * params.x * mu_vec / weights.lam
    quad = -t * np.outer(mu_vec, mu_vec) / (6 * weights.lam**2)
    c0 = _tripartite_scalar(weights, params.beta, params.gamma, params.x)
    return BargmannCoefficients(c0, linear, quad.astype(complex))


def conjugate_coefficients(
    weights: ModeWeights,
    params: ConjugateParams,
    scheme: Regularization = Regularization.MATCHED,
) -> BargmannCoefficients:
    t, s = regularization_factors(params.reg_r, scheme)
    mu_vec = weights.vector()
    linear = tripartite_ladder_linear(weights, params.sigma, params.kappa)
    linear = linear + 1j * s * params.p * mu_vec / weights.lam
    quad = t * np.outer(mu_vec, mu_vec) / (6 * weights.lam**2)
    c0 = _tripartite_scalar(weights, params.sigma, params.kappa, params.p)
    return BargmannCoefficients(c0, linear, quad.astype(complex))


def bipartite_coefficients(
    mu: float,
    nu: float,
    alpha: complex,
    x: float,
    reg_r: float,
    scheme: Regularization = Regularization.MATCHED,
) -> BargmannCoefficients:
    w = MultiWeights((mu, nu))
    lam = w.lam
    reg_r = _check_reg_r(reg_r)
    t, s = regularization_factors(reg_r, scheme)
    mu_vec = w.vector()
    alpha = complex(alpha)
    linear = np.array([lam * alpha, 0.0], dtype=complex) - alpha * mu * mu_vec / (2 * lam)
    linear = linear + s * x * mu_vec / lam
    quad = -t * np.outer(mu_vec, mu_vec) / (4 * lam**2)
    c0 = -0.5 * x**2 - 0.25 * abs(nu * alpha) ** 2
    return BargmannCoefficients(c0, linear, quad.astype(complex))


# ---------------------------------------------------------------------------
# Fock and Gaussian constructors


def _to_fock(coeffs: BargmannCoefficients, cutoff: int, max_dim=None) -> FockState:
    return build_quadratic_exponential(
        coeffs.num_modes, cutoff, coeffs.c0, coeffs.linear, coeffs.quad, max_dim=max_dim
    )


def tripartite_ces_formula(
    weights: ModeWeights,
    params: CesParams,
    cutoff: int,
    scheme: Regularization = Regularization.MATCHED,
    max_dim=None,
) -> FockState:
    """Unnormalized Fock amplitudes of the regularized ``|beta, gamma, x>``."""
    return _to_fock(tripartite_coefficients(weights, params, scheme), cutoff, max_dim)


def bipartite_ces_formula(
    mu: float,
    nu: float,
    alpha: complex,
    x: float,
    reg_r: float,
    cutoff: int,
    scheme: Regularization = Regularization.MATCHED,
    max_dim=None,
) -> FockState:
    """Unnormalized Fock amplitudes of the regularized ``|alpha, x>``."""
    return _to_fock(bipartite_coefficients(mu, nu, alpha, x, reg_r, scheme), cutoff, max_dim)


def conjugate_ces_formula(
    weights: ModeWeights,
    params: ConjugateParams,
    cutoff: int,
    scheme: Regularization = Regularization.MATCHED,
    max_dim=None,
) -> FockState:
    """Unnormalized Fock amplitudes of the regularized momentum-type ``|sigma, kappa, p>``."""
    return _to_fock(conjugate_coefficients(weights, params, scheme), cutoff, max_dim)


def coefficients_to_gaussian(coeffs: BargmannCoefficients) -> GaussianState:
    """Normalized Gaussian moments of a Bargmann-form state (no truncation)."""
    return from_bargmann(coeffs.linear, coeffs.quad)


def multipartite_ces(
    weights: Weights,
    betas: Sequence[complex],
    x: float,
    reg_r: float,
    cutoff: int,
    max_dim=None,
) -> FockState:
    """``N``-mode state built by the circuit route and expanded in the Fock basis.

    The circuit is run on the Gaussian engine and the output is converted to
    exact Fock amplitudes, so no truncation error enters the in-cube values.
    """
    from .circuits import circuit_state_fock, generate_ces_circuit

    betas = np.asarray(betas, dtype=complex).reshape(-1)
    if betas.size != weights.num_modes - 1:
        raise ShapeMismatchError(f"need {weights.num_modes - 1} betas, got {betas.size}")
    circuit = generate_ces_circuit(weights, betas, x, _check_reg_r(reg_r))
    return circuit_state_fock(circuit, cutoff, max_dim=max_dim)
