"""Optical gate descriptions shared by the Fock and Gaussian engines.

Phase-space vectors are ordered ``(x_1..x_N, p_1..p_N)`` with
``X = (a + a^dag)/sqrt(2)`` and ``P = (a - a^dag)/(i sqrt(2))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


def symplectic_form(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class BeamSplitter:
    """``B_ij(theta) = exp[-theta (a_i^dag a_j - a_i a_j^dag)]``.

    In the Schrodinger picture ``a_i^dag -> cos(theta) a_i^dag + sin(theta) a_j^dag``
    and ``a_j^dag -> cos(theta) a_j^dag - sin(theta) a_i^dag``, so mean
    amplitudes rotate as ``alpha_i' = c alpha_i - s alpha_j``,
    ``alpha_j' = s alpha_i + c alpha_j``.
    """

    i: int
    j: int
    theta: float

    @property
    def modes(self) -> tuple:
        return (self.i, self.j)

    def symplectic(self, n: int) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        rot = np.eye(n)
        rot[self.i, self.i] = c
        rot[self.i, self.j] = -s
        rot[self.j, self.i] = s
        rot[self.j, self.j] = c
        zero = np.zeros((n, n))
        return np.block([[rot, zero], [zero, rot]])

    def shift(self, n: int) -> np.ndarray:
        return np.zeros(2 * n)


@dataclass(frozen=True)
class Displace:
    """``D(epsilon) = exp(epsilon a^dag - epsilon^* a)`` on one mode."""

    mode: int
    epsilon: complex

    @property
    def modes(self) -> tuple:
        return (self.mode,)

    def symplectic(self, n: int) -> np.ndarray:
        return np.eye(2 * n)

    def shift(self, n: int) -> np.ndarray:
        d = np.zeros(2 * n)
        d[self.mode] = np.sqrt(2) * complex(self.epsilon).real
        d[n + self.mode] = np.sqrt(2) * complex(self.epsilon).imag
        return d


@dataclass(frozen=True)
class Squeeze:
    """``exp[(r/2)(a^2 - a^dag^2)]``: ``x -> e^{-r} x``, ``p -> e^{r} p``."""

    mode: int
    r: float

    @property
    def modes(self) -> tuple:
        return (self.mode,)

    def symplectic(self, n: int) -> np.ndarray:
        s = np.eye(2 * n)
        s[self.mode, self.mode] = np.exp(-self.r)
        s[n + self.mode, n + self.mode] = np.exp(self.r)
        return s

    def shift(self, n: int) -> np.ndarray:
        return np.zeros(2 * n)


@dataclass(frozen=True)
class CollectiveSqueeze:
    """Squeeze of the normalized collective mode ``R = sum_k w_k a_k / |w|``."""

    weights: tuple
    r: float

    @property
    def modes(self) -> tuple:
        return tuple(range(len(self.weights)))

    def unit_weights(self) -> np.ndarray:
        w = np.asarray(self.weights, dtype=float)
        return w / np.linalg.norm(w)

    def symplectic(self, n: int) -> np.ndarray:
        w = self.unit_weights()
        proj = np.outer(w, w)
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return np.block(
            [
                [eye + (np.exp(-self.r) - 1) * proj, zero],
                [zero, eye + (np.exp(self.r) - 1) * proj],
            ]
        )

    def shift(self, n: int) -> np.ndarray:
        return np.zeros(2 * n)


Gate = Union[BeamSplitter, Displace, Squeeze, CollectiveSqueeze]
