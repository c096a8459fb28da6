"""Wigner function of the collective mode and its marginals.

For weights ``mu`` on ``N`` modes let ``R = sum mu_i a_i/|mu|`` with
quadratures ``X_R``, ``P_R``. The normally ordered operator

    Delta(p, x) = (1/(pi tau^2 lambda^2)) :exp[-(u - X_R)^2 - (v - P_R)^2]:,
    u = sqrt(N/2) x,  v = sqrt(N/2) p,

has expectation ``W_R(u, v)/(tau^2 lambda^2)``, where ``W_R`` is the usual
single-mode Wigner function of the reduced state of ``R`` (vacuum:
``exp(-u^2 - v^2)/pi``). Its integral over ``(x, p)`` is
``2/(N tau^2 lambda^2)``, so the probability-normalized value is
``(N/2) W_R(u, v)``. The ``"literal"`` convention (three modes only) keeps
the ``1/(tau^2 lambda^2)`` prefactor; ``"normalized"`` is the density.

Gaussian states use the reduced moments of ``(X_R, P_R)``. Fock states are
rotated with the inverse beam-splitter cascade so that ``R`` becomes mode 0,
the other modes are traced out, and the single-mode Wigner function is
evaluated from the reduced density matrix.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from ..errors import ShapeMismatchError
from ..fock import FockState, apply_gates
from ..gates import BeamSplitter
from ..gaussian import GaussianState, collective_quadrature_stats
from ..states import Weights, as_weights

NORMALIZED = "normalized"
LITERAL = "literal"
SIGMA_SPAN = 8.0
POINTS_PER_SIGMA = 20

State = Union[FockState, GaussianState]


def _unit_direction(weights: Weights) -> np.ndarray:
    mu = as_weights(weights).vector()
    return mu / np.linalg.norm(mu)


def _prefactor(weights: Weights, convention: str) -> float:
    w = as_weights(weights)
    if convention == NORMALIZED:
        return w.num_modes / 2.0
    if convention == LITERAL:
        if w.num_modes != 3:
            raise ShapeMismatchError("the literal convention is defined for three modes")
        return 1.0 / (w.tau**2 * w.lam**2)
    raise ValueError(f"unknown convention {convention!r}")


def gaussian_collective_moments(state: GaussianState, weights: Weights):
    """Mean ``(X_R, P_R)`` and their 2x2 covariance."""
    u = _unit_direction(weights)
    n = state.num_modes
    if u.size != n:
        raise ShapeMismatchError(f"expected {n} weights, got {u.size}")
    proj = np.zeros((2, 2 * n))
    proj[0, :n] = u
    proj[1, n:] = u
    return proj @ state.mean, proj @ state.cov @ proj.T


def inverse_cascade(weights: Weights) -> list:
    """Gates undoing the generation cascade, so that ``R`` becomes mode 0."""
    from ..circuits import multipartite_angles

    thetas = multipartite_angles(as_weights(weights))
    return [BeamSplitter(i, i + 1, -float(th)) for i, th in reversed(list(enumerate(thetas)))]


def reduced_collective_density(state: FockState, weights: Weights) -> np.ndarray:
    """Normalized single-mode density matrix of the collective mode."""
    if state.num_modes != as_weights(weights).num_modes:
        raise ShapeMismatchError("state and weights disagree on the number of modes")
    rotated = apply_gates(state, inverse_cascade(weights))
    amps = rotated.amplitudes.reshape(state.cutoff, -1)
    rho = amps @ amps.conj().T
    return rho / np.trace(rho).real


def density_moments(rho: np.ndarray):
    """Mean and covariance of ``(X, P)`` for a single-mode density matrix."""
    c = rho.shape[0]
    a = np.diag(np.sqrt(np.arange(1, c, dtype=float)), 1)
    x = (a + a.T) / math.sqrt(2)
    p = (a - a.T) / (1j * math.sqrt(2))
    ex = np.trace(rho @ x).real
    ep = np.trace(rho @ p).real
    vxx = np.trace(rho @ x @ x).real - ex**2
    vpp = np.trace(rho @ p @ p).real - ep**2
    vxp = 0.5 * np.trace(rho @ (x @ p + p @ x)).real - ex * ep
    return np.array([ex, ep]), np.array([[vxx, vxp], [vxp, vpp]])


def single_mode_wigner(rho: np.ndarray, q, p) -> np.ndarray:
    """``W(q, p)`` normalized in ``dq dp``, from Laguerre-polynomial matrix elements."""
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    alpha = (q + 1j * p) / math.sqrt(2)
    b = 4.0 * np.abs(alpha) ** 2
    w = np.zeros(q.shape)
    c = rho.shape[0]
    log_fact = gammaln(np.arange(c) + 1.0)
    for m in range(c):
        if rho[m, m] != 0:
            w += (rho[m, m] * (-1) ** m).real * eval_genlaguerre(m, 0, b)
        for n in range(m + 1, c):
            if rho[m, n] == 0:
                continue
            coeff = rho[m, n] * (-1) ** m * math.exp(0.5 * (log_fact[m] - log_fact[n]))
            w += 2.0 * np.real(coeff * (2 * alpha) ** (n - m)) * eval_genlaguerre(m, n - m, b)
    return w * np.exp(-b / 2) / math.pi


def _gaussian_density_2d(mean, cov, q, p):
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    d = np.stack([q - mean[0], p - mean[1]], axis=-1)
    inv = np.linalg.inv(cov)
    quad = np.einsum("...i,ij,...j->...", d, inv, d)
    return np.exp(-0.5 * quad) / (2 * math.pi * math.sqrt(np.linalg.det(cov)))


def wigner_collective(state: State, weights: Weights, x, p, convention: str = NORMALIZED) -> np.ndarray:
    """Expectation of the collective Wigner operator at ``(x, p)`` (arrays broadcast)."""
    weights = as_weights(weights)
    pref = _prefactor(weights, convention)
    scale = math.sqrt(weights.num_modes / 2.0)
    u = scale * np.asarray(x, dtype=float)
    v = scale * np.asarray(p, dtype=float)
    if isinstance(state, GaussianState):
        mean, cov = gaussian_collective_moments(state, weights)
        return pref * _gaussian_density_2d(mean, cov, u, v)
    rho = reduced_collective_density(state, weights)
    return pref * single_mode_wigner(rho, u, v)


def wigner_grid(state: State, weights: Weights, xs, ps):
    """Literal and normalized values on the grid ``xs x ps`` (rows follow ``xs``)."""
    weights = as_weights(weights)
    xx, pp = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ps, dtype=float), indexing="ij")
    normalized = wigner_collective(state, weights, xx, pp, NORMALIZED)
    literal = None
    if weights.num_modes == 3:
        literal = normalized * _prefactor(weights, LITERAL) / _prefactor(weights, NORMALIZED)
    return literal, normalized


def label_moments(state: State, weights: Weights):
    """Mean and covariance of the ``(x, p)`` labels under the normalized Wigner density."""
    weights = as_weights(weights)
    if isinstance(state, GaussianState):
        mean, cov = gaussian_collective_moments(state, weights)
    else:
        mean, cov = density_moments(reduced_collective_density(state, weights))
    scale = math.sqrt(weights.num_modes / 2.0)
    return mean / scale, cov / scale**2


def _marginal(state, weights, values, axis: int, convention: str, points_per_sigma: int):
    if points_per_sigma < POINTS_PER_SIGMA:
        raise ValueError(f"integration grid under-resolved: need at least {POINTS_PER_SIGMA} points per sigma")
    mean, cov = label_moments(state, weights)
    other = 1 - axis
    sigma = math.sqrt(cov[other, other])
    count = int(2 * SIGMA_SPAN * points_per_sigma) + 1
    grid = np.linspace(mean[other] - SIGMA_SPAN * sigma, mean[other] + SIGMA_SPAN * sigma, count)
    vals = np.atleast_1d(np.asarray(values, dtype=float))
    if axis == 0:
        w = wigner_collective(state, weights, vals[:, None], grid[None, :], convention)
    else:
        w = wigner_collective(state, weights, grid[None, :], vals[:, None], convention)
    return np.trapezoid(w, grid, axis=1)


def marginal_x(state: State, weights: Weights, x, convention: str = NORMALIZED,
               points_per_sigma: int = POINTS_PER_SIGMA) -> np.ndarray:
    """``int dp W(p, x)`` by trapezoidal quadrature over +-8 standard deviations."""
    return _marginal(state, weights, x, 0, convention, points_per_sigma)


def marginal_p(state: State, weights: Weights, p, convention: str = NORMALIZED,
               points_per_sigma: int = POINTS_PER_SIGMA) -> np.ndarray:
    """``int dx W(p, x)`` by trapezoidal quadrature over +-8 standard deviations."""
    return _marginal(state, weights, p, 1, convention, points_per_sigma)


def collective_density(state: GaussianState, weights: Weights, values, which: str = "x") -> np.ndarray:
    """Probability density of ``sqrt(2) C/lambda`` with ``C = (1/N) sum mu_i X_i`` (or ``P_i``)."""
    weights = as_weights(weights)
    mean_x, var_x, mean_p, var_p = collective_quadrature_stats(state, weights.vector())
    mean, var = (mean_x, var_x) if which == "x" else (mean_p, var_p)
    m = math.sqrt(2) * mean / weights.lam
    v = 2 * var / weights.lam**2
    vals = np.asarray(values, dtype=float)
    return np.exp(-0.5 * (vals - m) ** 2 / v) / math.sqrt(2 * math.pi * v)
