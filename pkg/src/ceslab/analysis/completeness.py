"""Monte Carlo estimate of the resolution of identity by tripartite states.

Estimates the Gram matrix

    G_ab = tau^2 lambda^2 int d^2beta/pi d^2gamma/pi dx/sqrt(6 pi)
           <phi_a|beta,gamma,x><beta,gamma,x|phi_b>

for low-excitation test states by importance sampling over
``y = (Re beta, Im beta, Re gamma, Im gamma, x)``. The states carry their
literal scalar prefactor, so ``|<000|beta,gamma,x>|^2 = exp(2 Re c0)`` is a
Gaussian in ``y``. Its covariance, with every standard deviation inflated by
``scale`` (1.5 by default), is the proposal.

Samples are split into shards; shard ``k`` draws from the stream seeded by
``(seed, k)``, so the estimate depends only on ``seed``, ``samples`` and
``shard_size``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import ShapeMismatchError
from ..fock import FockState, bargmann_amplitudes, total_number
from ..states import ModeWeights, Regularization, regularization_factors, tripartite_ladder_linear

MAX_TEST_PHOTONS = 4
DEFAULT_SHARD = 100_000


@dataclass
class CompletenessReport:
    estimate: np.ndarray
    stderr: np.ndarray
    samples: int
    seed: int
    reg_r: float
    proposal_cov: np.ndarray
    scale: float
    status: str = "ok"
    notes: list = field(default_factory=list)

    def diagonal_spread(self) -> float:
        """Largest relative deviation of a diagonal entry from the mean diagonal."""
        d = np.real(np.diag(self.estimate))
        return float(np.max(np.abs(d / d.mean() - 1.0)))

    def max_offdiagonal_z(self) -> float:
        """Largest ``|G_ab| / stderr_ab`` over ``a != b``."""
        n = self.estimate.shape[0]
        off = ~np.eye(n, dtype=bool)
        if not off.any():
            return 0.0
        return float(np.max(np.abs(self.estimate[off]) / self.stderr[off]))

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "reg_r": self.reg_r,
            "proposal": {
                "family": "gaussian in (Re beta, Im beta, Re gamma, Im gamma, x)",
                "covariance": self.proposal_cov,
                "scale": self.scale,
            },
            "status": self.status,
            "notes": list(self.notes),
        }


def envelope_precision(weights: ModeWeights) -> np.ndarray:
    """``H`` with ``|<000|beta,gamma,x>|^2 = exp(-y^T H y)``."""
    mu, nu, tau = weights.mu, weights.nu, weights.tau
    m = np.array(
        [
            [(nu**2 + tau**2) / 3, mu * tau**2 / (3 * nu)],
            [mu * tau**2 / (3 * nu), tau**2 * (nu**2 + mu**2) / (3 * nu**2)],
        ]
    )
    h = np.zeros((5, 5))
    # order (Re beta, Im beta, Re gamma, Im gamma, x)
    for part in (0, 1):
        idx = [part, 2 + part]
        h[np.ix_(idx, idx)] = m
    h[4, 4] = 1.5
    return h


def proposal_covariance(weights: ModeWeights, scale: float = 1.5) -> np.ndarray:
    return scale**2 * np.linalg.inv(2 * envelope_precision(weights))


def _test_support(states: Sequence[FockState]):
    if not states:
        raise ValueError("need at least one test state")
    n_modes = states[0].num_modes
    if n_modes != 3:
        raise ShapeMismatchError("test states must live on three modes")
    indices = set()
    for s in states:
        if s.num_modes != n_modes:
            raise ShapeMismatchError("all test states must have the same number of modes")
        tot = total_number(n_modes, s.cutoff)
        nz = np.argwhere(np.abs(s.amplitudes) > 0)
        for idx in map(tuple, nz):
            if tot[idx] > MAX_TEST_PHOTONS:
                raise ValueError(f"test state has support on {idx}; at most {MAX_TEST_PHOTONS} photons allowed")
            indices.add(idx)
    indices = sorted(indices)
    coeffs = np.array([[s.amplitudes[idx] for idx in indices] for s in states], dtype=complex)
    return indices, coeffs


def completeness_mc(
    weights: ModeWeights,
    test_states: Sequence[FockState],
    reg_r: float,
    samples: int,
    seed: int,
    shard_size: int = DEFAULT_SHARD,
    scale: float = 1.5,
    stderr_bound: Optional[float] = None,
    scheme: Regularization = Regularization.MATCHED,
) -> CompletenessReport:
    indices, coeffs = _test_support(test_states)
    max_total = max(sum(i) for i in indices)
    t, s = regularization_factors(reg_r, scheme)
    lam = weights.lam
    mu_vec = weights.vector()
    v_beta = tripartite_ladder_linear(weights, 1.0, 0.0)
    v_gamma = tripartite_ladder_linear(weights, 0.0, 1.0)
    v_x = s * mu_vec / lam
    quad = -t * np.outer(mu_vec, mu_vec) / (6 * lam**2)
    h = envelope_precision(weights)
    cov = proposal_covariance(weights, scale)
    chol = np.linalg.cholesky(cov)
    cov_inv = np.linalg.inv(cov)
    log_q0 = -0.5 * (5 * math.log(2 * math.pi) + math.log(np.linalg.det(cov)))
    log_w = math.log(weights.tau**2 * lam**2) - 2 * math.log(math.pi) - 0.5 * math.log(6 * math.pi)
    mu, nu, tau = weights.mu, weights.nu, weights.tau

    n_states = len(test_states)
    total = np.zeros((n_states, n_states), dtype=complex)
    sq_re = np.zeros((n_states, n_states))
    sq_im = np.zeros((n_states, n_states))
    remaining = int(samples)
    shard = 0
    while remaining > 0:
        m = min(shard_size, remaining)
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), shard]))
        y = rng.standard_normal((m, 5)) @ chol.T
        beta = y[:, 0] + 1j * y[:, 1]
        gamma = y[:, 2] + 1j * y[:, 3]
        x = y[:, 4]
        linear = np.outer(beta, v_beta) + np.outer(gamma, v_gamma) + np.outer(x, v_x)
        c0 = (
            -0.75 * x**2
            - (np.conj(beta) * gamma).real * mu * tau**2 / (3 * nu)
            - np.abs(gamma) ** 2 * tau**2 * (1 + mu**2 / nu**2) / 6
            - np.abs(beta) ** 2 * (nu**2 + tau**2) / 6
        )
        amps = bargmann_amplitudes(linear, quad, max_total)
        # <phi_a|psi> for every sample
        overlaps = np.stack([sum(np.conj(coeffs[a, k]) * amps[idx] for k, idx in enumerate(indices)) for a in range(n_states)])
        log_q = log_q0 - 0.5 * np.einsum("ij,jk,ik->i", y, cov_inv, y)
        factor = np.exp(log_w + 2 * c0 - log_q)
        f = overlaps[:, None, :] * np.conj(overlaps[None, :, :]) * factor
        total += f.sum(axis=2)
        sq_re += (f.real**2).sum(axis=2)
        sq_im += (f.imag**2).sum(axis=2)
        remaining -= m
        shard += 1
    n = int(samples)
    mean = total / n
    var = (sq_re / n - mean.real**2) + (sq_im / n - mean.imag**2)
    stderr = np.sqrt(np.maximum(var, 0.0) / n)
    report = CompletenessReport(mean, stderr, n, int(seed), float(reg_r), cov, scale)
    report.notes.append(f"envelope precision diag {np.diag(h).tolist()}")
    if stderr_bound is not None and np.max(stderr) > stderr_bound:
        report.status = "inconclusive"
    return report
