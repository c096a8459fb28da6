"""Mean/covariance representation of multimode Gaussian states.

Convention: hbar = 1, vacuum covariance ``I/2``, quadratures ordered
``(x_1..x_N, p_1..p_N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ImpureStateError, ModeIndexError, ShapeMismatchError
from .gates import Gate, symplectic_form

PURITY_TOL = 1e-9


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state given by its first and second moments.

    ``factor`` optionally holds a symplectic ``F`` with ``cov = F F^T / 2``
    (the accumulated gate matrix of a state prepared from vacuum). When
    present it is used for quantities where forming ``cov`` first would
    cancel large entries, such as nullifier residuals of strongly squeezed
    states.
    """

    mean: np.ndarray
    cov: np.ndarray
    factor: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.size % 2 or cov.shape != (mean.size, mean.size):
            raise ShapeMismatchError(f"inconsistent shapes {mean.shape} and {cov.shape}")
        if not np.allclose(cov, cov.T, atol=1e-12 * max(1.0, np.abs(cov).max()), rtol=0):
            raise ValueError("covariance matrix is not symmetric")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        if self.factor is not None:
            f = np.array(self.factor, dtype=float)
            if f.shape != cov.shape:
                raise ShapeMismatchError("symplectic factor must match the covariance shape")
            f.setflags(write=False)
            object.__setattr__(self, "factor", f)

    @property
    def num_modes(self) -> int:
        return self.mean.size // 2

    def uncertainty_min_eig(self) -> float:
        """Smallest eigenvalue of ``cov + (i/2) Omega``; must be >= 0 for a physical state."""
        omega = symplectic_form(self.num_modes)
        return float(np.linalg.eigvalsh(self.cov + 0.5j * omega).min())

    def purity_defect(self) -> float:
        return abs(np.linalg.det(2 * self.cov) - 1.0)

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity_defect() <= tol


def vacuum_gaussian(num_modes: int) -> GaussianState:
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    return GaussianState(np.zeros(2 * num_modes), 0.5 * np.eye(2 * num_modes), np.eye(2 * num_modes))


def apply_gate(state: GaussianState, gate: Gate) -> GaussianState:
    n = state.num_modes
    for m in gate.modes:
        if not 0 <= m < n:
            raise ModeIndexError(f"mode {m} out of range for {n} modes")
    s = gate.symplectic(n)
    cov = s @ state.cov @ s.T
    factor = None if state.factor is None else s @ state.factor
    return GaussianState(s @ state.mean + gate.shift(n), 0.5 * (cov + cov.T), factor)


def apply_gates(state: GaussianState, gates) -> GaussianState:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def collective_quadrature_stats(state: GaussianState, weights: Sequence[float]):
    """Moments of ``(1/N) sum mu_k X_k`` and ``(1/N) sum mu_k P_k``.

    Returns ``(mean_x, var_x, mean_p, var_p)``.
    """
    mu = np.asarray(weights, dtype=float)
    n = state.num_modes
    if mu.shape != (n,):
        raise ShapeMismatchError(f"expected {n} weights, got {mu.size}")
    u = mu / n
    xs, ps = slice(0, n), slice(n, 2 * n)
    return (
        float(u @ state.mean[xs]),
        float(u @ state.cov[xs, xs] @ u),
        float(u @ state.mean[ps]),
        float(u @ state.cov[ps, ps] @ u),
    )


def overlap_gaussian(s1: GaussianState, s2: GaussianState) -> float:
    """``|<psi_1|psi_2>|^2`` for two pure Gaussian states."""
    for s in (s1, s2):
        if not s.is_pure():
            raise ImpureStateError(f"state is not pure: |det(2V) - 1| = {s.purity_defect():.3e}")
    if s1.num_modes != s2.num_modes:
        raise ShapeMismatchError("states have different numbers of modes")
    total = s1.cov + s2.cov
    delta = s1.mean - s2.mean
    return float(np.exp(-0.5 * delta @ np.linalg.solve(total, delta)) / np.sqrt(np.linalg.det(total)))


def complex_moments(state: GaussianState):
    """``alpha = <a>``, ``N_ij = <da_i^dag da_j>`` and ``M_ij = <da_i da_j>``."""
    n = state.num_modes
    v = state.cov
    vxx, vpp, vxp = v[:n, :n], v[n:, n:], v[:n, n:]
    alpha = (state.mean[:n] + 1j * state.mean[n:]) / np.sqrt(2)
    big_n = 0.5 * (vxx + vpp - np.eye(n)) + 0.5j * (vxp - vxp.T)
    big_m = 0.5 * (vxx - vpp) + 0.5j * (vxp + vxp.T)
    return alpha, big_n, big_m


def from_complex_moments(alpha, big_n, big_m) -> GaussianState:
    n = len(alpha)
    alpha = np.asarray(alpha)
    vxx = big_n.real + big_m.real + 0.5 * np.eye(n)
    vpp = big_n.real - big_m.real + 0.5 * np.eye(n)
    vxp = big_m.imag + big_n.imag
    cov = np.block([[vxx, vxp], [vxp.T, vpp]])
    mean = np.sqrt(2) * np.concatenate([alpha.real, alpha.imag])
    return GaussianState(mean, 0.5 * (cov + cov.T))


def ladder_residual(state: GaussianState, coeffs: Sequence[complex], eigenvalue: complex) -> float:
    """``||(sum_k c_k a_k - kappa)|psi>||`` for a normalized Gaussian state."""
    k = np.asarray(coeffs, dtype=complex)
    n = state.num_modes
    alpha = (state.mean[:n] + 1j * state.mean[n:]) / np.sqrt(2)
    if state.factor is not None:
        # k.da = c.xi with xi the vacuum quadratures; only its creation part survives on vacuum
        c = np.concatenate([k, 1j * k]) @ state.factor / np.sqrt(2)
        var = float(np.sum(np.abs(c[:n] + 1j * c[n:]) ** 2) / 2)
    else:
        _, big_n, _ = complex_moments(state)
        var = float(np.real(np.conj(k) @ big_n @ k))
    return float(np.sqrt(abs(k @ alpha - eigenvalue) ** 2 + max(var, 0.0)))


def to_bargmann(state: GaussianState):
    """Return ``(c0, L, Q)`` with ``|psi> = exp(c0 + L.a^dag + a^dag.Q.a^dag)|0>`` (global phase dropped).

    ``c0`` is real and fixes the normalization; ``Q`` is complex symmetric.
    """
    if not state.is_pure():
        raise ImpureStateError(f"state is not pure: |det(2V) - 1| = {state.purity_defect():.3e}")
    n = state.num_modes
    alpha, big_n, big_m = complex_moments(state)
    q_full = np.linalg.solve(np.eye(n) + big_n.conj(), big_m)
    q_full = 0.5 * (q_full + q_full.T)
    linear = alpha - q_full @ alpha.conj()
    p_vac = overlap_gaussian(vacuum_gaussian(n), state)
    return 0.5 * np.log(p_vac), linear, 0.5 * q_full


def from_bargmann(linear: Sequence[complex], quad: np.ndarray) -> GaussianState:
    """Gaussian moments of the normalized ``exp(L.a^dag + a^dag.Q.a^dag)|0>``."""
    lin = np.asarray(linear, dtype=complex)
    q_full = 2.0 * np.asarray(quad, dtype=complex)
    n = lin.size
    eye = np.eye(n)
    big_n = np.linalg.inv(eye - q_full.conj() @ q_full) - eye
    big_m = np.linalg.solve(eye - q_full @ q_full.conj(), q_full)
    # alpha - Q alpha^* = L as a real 2n x 2n system
    a, b = q_full.real, q_full.imag
    system = np.block([[eye - a, -b], [-b, eye + a]])
    uv = np.linalg.solve(system, np.concatenate([lin.real, lin.imag]))
    alpha = uv[:n] + 1j * uv[n:]
    return from_complex_moments(alpha, big_n, big_m)


def bargmann_inner(c1, linear1, quad1, c2, linear2, quad2) -> complex:
    """Untruncated ``<psi_1|psi_2>`` for ``psi_k = exp(c_k + L_k.a^dag + a^dag.Q_k.a^dag)|0>``.

    Evaluated as the Gaussian integral over the Bargmann variables
    ``z = u + i v``; requires the real part of the quadratic form to be
    positive definite.
    """
    l1 = np.asarray(linear1, dtype=complex)
    l2 = np.asarray(linear2, dtype=complex)
    q1 = np.asarray(quad1, dtype=complex)
    q2 = np.asarray(quad2, dtype=complex)
    n = l1.size
    eye = np.eye(n)
    plus = q2 + q1.conj()
    minus = q2 - q1.conj()
    a = np.block([[2 * eye - 2 * plus, -2j * minus], [-2j * minus, 2 * eye + 2 * plus]])
    if np.linalg.eigvalsh(a.real).min() <= 0:
        raise ValueError("overlap integral does not converge")
    b = np.concatenate([l2 + l1.conj(), 1j * (l2 - l1.conj())])
    # principal square roots are valid because the eigenvalues have positive real part
    sqrt_det = np.prod(np.sqrt(np.linalg.eigvals(a)))
    exponent = 0.5 * b @ np.linalg.solve(a, b) + np.conj(c1) + c2
    return complex(2**n / sqrt_det * np.exp(exponent))
