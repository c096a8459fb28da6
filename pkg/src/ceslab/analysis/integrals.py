"""The two-dimensional complex Gaussian integral and the nascent delta function."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class GaussIntegralParams:
    """Parameters of ``int d^2z/pi exp(zeta|z|^2 + xi z + eta z* + f z^2 + g z*^2)``."""

    zeta: complex
    xi: complex = 0.0
    eta: complex = 0.0
    f: complex = 0.0
    g: complex = 0.0

    def __post_init__(self) -> None:
        for name in ("zeta", "xi", "eta", "f", "g"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def convergence_conditions(self) -> bool:
        """Either ``Re(zeta + f + g) < 0`` and ``Re((zeta^2 - 4fg)/(zeta + f + g)) < 0``,
        or the same pair with ``f + g`` replaced by ``-(f + g)``.
        """
        disc = self.zeta**2 - 4 * self.f * self.g
        for s in (self.f + self.g, -(self.f + self.g)):
            denom = self.zeta + s
            if denom.real < 0 and denom != 0 and (disc / denom).real < 0:
                return True
        return False

    def integrable(self) -> bool:
        """True when the real part of the exponent is a negative-definite form in ``(Re z, Im z)``."""
        z, f, g = self.zeta, self.f, self.g
        # zeta(u^2 + v^2) + f (u + iv)^2 + g (u - iv)^2
        quad = np.array([[z + f + g, 1j * (f - g)], [1j * (f - g), z - f - g]])
        return bool(np.linalg.eigvalsh(quad.real).max() < 0)


def gaussian_integral_2d(params: GaussIntegralParams) -> complex:
    """Closed form ``exp[(-zeta xi eta + xi^2 g + eta^2 f)/(zeta^2 - 4fg)]/sqrt(zeta^2 - 4fg)``.

    The square root is the principal branch.
    """
    if not params.convergence_conditions():
        raise DomainError(f"convergence conditions violated for {params}")
    z, xi, eta, f, g = params.zeta, params.xi, params.eta, params.f, params.g
    disc = z * z - 4 * f * g
    return complex(cmath.exp((-z * xi * eta + xi * xi * g + eta * eta * f) / disc) / cmath.sqrt(disc))


def nascent_delta(x, epsilon: float):
    """``exp(-x^2/epsilon)/sqrt(pi epsilon)``, which tends to ``delta(x)`` as ``epsilon -> 0``."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    return np.exp(-np.square(x) / epsilon) / math.sqrt(math.pi * epsilon)
