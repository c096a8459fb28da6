"""Truncated Fock-space representation of multimode bosonic states.

Amplitudes live in a dense tensor of shape ``(cutoff,) * num_modes``; the
flat (C-order) index has mode 0 varying slowest. States are immutable and
every operation returns a fresh state.

Two notions of truncation error are kept apart:

``leak``
    Accumulated probability weight that an operation either dropped at the
    cutoff or may have reflected back into the cube. A state whose
    amplitudes are exact Taylor coefficients of the untruncated state (see
    :func:`build_quadratic_exponential`) has ``leak == 0`` even though part
    of its norm lies outside the cube.
``edge_weight``
    Fraction of the in-cube norm sitting on the top level of any mode.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import (
    ConvergenceError,
    DivergentSeriesError,
    ModeIndexError,
    ResourceBudgetError,
    ShapeMismatchError,
    UnsupportedGeneratorError,
)
from .gates import BeamSplitter, CollectiveSqueeze, Displace, Gate, Squeeze

DEFAULT_MAX_DIM = 4_000_000
NORM_GUARD = 1e-8


@dataclass(frozen=True)
class FockState:
    amplitudes: np.ndarray
    leak: float = 0.0
    norm_tracked: float = field(init=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim < 1 or len(set(amps.shape)) != 1:
            raise ShapeMismatchError(f"amplitude tensor must be a hypercube, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain NaN or Inf")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm_tracked", float(np.vdot(amps, amps).real))

    @property
    def num_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_tracked)

    def normalized(self) -> "FockState":
        return FockState(self.amplitudes / self.norm, self.leak)

    def edge_weight(self) -> float:
        """Fraction of the squared norm on level ``cutoff - 1`` of any mode."""
        if self.norm_tracked == 0.0:
            return 0.0
        return float(np.sum(np.abs(self.amplitudes[~interior_mask(self.num_modes, self.cutoff, 1)]) ** 2)) / self.norm_tracked


class LadderKind(enum.Enum):
    ANNIHILATE = "annihilate"
    CREATE = "create"


def check_budget(num_modes: int, cutoff: int, max_dim: int | None = None) -> int:
    budget = DEFAULT_MAX_DIM if max_dim is None else max_dim
    dim = cutoff**num_modes
    if dim > budget:
        raise ResourceBudgetError(dim, budget)
    return dim


def vacuum_fock(num_modes: int, cutoff: int, max_dim: int | None = None) -> FockState:
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    check_budget(num_modes, cutoff, max_dim)
    amps = np.zeros((cutoff,) * num_modes, dtype=complex)
    amps[(0,) * num_modes] = 1.0
    return FockState(amps)


def basis_fock(levels: Sequence[int], cutoff: int) -> FockState:
    """Number state ``|n_1 ... n_N>``."""
    if any(n < 0 or n >= cutoff for n in levels):
        raise ValueError(f"levels {tuple(levels)} outside cutoff {cutoff}")
    amps = np.zeros((cutoff,) * len(levels), dtype=complex)
    amps[tuple(levels)] = 1.0
    return FockState(amps)


def interior_mask(num_modes: int, cutoff: int, margin: int = 1) -> np.ndarray:
    """Boolean tensor, True where every mode is at most ``cutoff - 1 - margin``."""
    levels = np.arange(cutoff) <= cutoff - 1 - margin
    mask = levels
    for _ in range(num_modes - 1):
        mask = np.logical_and.outer(mask, levels)
    return mask


def total_number(num_modes: int, cutoff: int) -> np.ndarray:
    """Tensor holding the total photon number of each basis index."""
    n = np.arange(cutoff)
    total = n
    for _ in range(num_modes - 1):
        total = np.add.outer(total, n)
    return total


def _axis_sqrt(cutoff: int, axis: int, ndim: int, start: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = cutoff - 1
    return np.sqrt(np.arange(start, start + cutoff - 1, dtype=float)).reshape(shape)


def lower(amps: np.ndarray, axis: int) -> np.ndarray:
    """Raw annihilation along ``axis``: ``out[n] = sqrt(n+1) amps[n+1]``."""
    c = amps.shape[axis]
    out = np.zeros_like(amps)
    dst = [slice(None)] * amps.ndim
    src = [slice(None)] * amps.ndim
    dst[axis] = slice(0, c - 1)
    src[axis] = slice(1, c)
    out[tuple(dst)] = amps[tuple(src)] * _axis_sqrt(c, axis, amps.ndim, 1)
    return out


def raise_(amps: np.ndarray, axis: int) -> np.ndarray:
    """Raw creation along ``axis``; the top level is dropped."""
    c = amps.shape[axis]
    out = np.zeros_like(amps)
    dst = [slice(None)] * amps.ndim
    src = [slice(None)] * amps.ndim
    dst[axis] = slice(1, c)
    src[axis] = slice(0, c - 1)
    out[tuple(dst)] = amps[tuple(src)] * _axis_sqrt(c, axis, amps.ndim, 1)
    return out


def apply_ladder(state: FockState, mode: int, kind: LadderKind) -> FockState:
    if not 0 <= mode < state.num_modes:
        raise ModeIndexError(f"mode {mode} out of range for {state.num_modes} modes")
    amps = state.amplitudes
    if kind is LadderKind.ANNIHILATE:
        return FockState(lower(amps, mode), state.leak)
    top = np.take(amps, state.cutoff - 1, axis=mode)
    dropped = state.cutoff * float(np.sum(np.abs(top) ** 2))
    return FockState(raise_(amps, mode), state.leak + dropped)


def inner(s1: FockState, s2: FockState) -> complex:
    """``<s1|s2>``, conjugate-linear in the first argument."""
    if s1.amplitudes.shape != s2.amplitudes.shape:
        raise ShapeMismatchError(
            f"cannot take inner product of shapes {s1.amplitudes.shape} and {s2.amplitudes.shape}"
        )
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def rotate_phase(state: FockState, phi: float) -> FockState:
    """Apply ``exp(i phi N_total)``, which maps ``a_k -> exp(i phi) a_k`` in the Heisenberg picture."""
    n = total_number(state.num_modes, state.cutoff)
    return FockState(state.amplitudes * np.exp(1j * phi * n), state.leak)


# ---------------------------------------------------------------------------
# Gate exponentials


def _single_annihilator(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


@functools.lru_cache(maxsize=256)
def _displacement_matrix(cutoff: int, epsilon: complex) -> np.ndarray:
    a = _single_annihilator(cutoff)
    return scipy.linalg.expm(epsilon * a.T - np.conj(epsilon) * a)


@functools.lru_cache(maxsize=256)
def _squeeze_matrix(cutoff: int, r: float) -> np.ndarray:
    a = _single_annihilator(cutoff)
    return scipy.linalg.expm(0.5 * r * (a @ a - a.T @ a.T))


@functools.lru_cache(maxsize=64)
def _beamsplitter_matrix(cutoff: int, theta: float) -> np.ndarray:
    a = _single_annihilator(cutoff)
    eye = np.eye(cutoff)
    ai = np.kron(a, eye)
    aj = np.kron(eye, a)
    gen = -theta * (ai.T @ aj - aj.T @ ai)
    # the generator conserves n_i + n_j, so exponentiate each fixed-total block
    totals = np.add.outer(np.arange(cutoff), np.arange(cutoff)).reshape(-1)
    out = np.zeros_like(gen)
    for t in range(2 * cutoff - 1):
        idx = np.flatnonzero(totals == t)
        out[np.ix_(idx, idx)] = scipy.linalg.expm(gen[np.ix_(idx, idx)])
    return out.reshape((cutoff,) * 4)


@functools.lru_cache(maxsize=16)
def annihilators(num_modes: int, cutoff: int) -> tuple:
    """Sparse CSR annihilation operators on the truncated cube, one per mode."""
    a = sp.diags(np.sqrt(np.arange(1, cutoff, dtype=float)), 1, format="csr")
    eye = sp.identity(cutoff, format="csr")
    ops = []
    for k in range(num_modes):
        mat = sp.identity(1, format="csr")
        for m in range(num_modes):
            mat = sp.kron(mat, a if m == k else eye, format="csr")
        ops.append(mat)
    return tuple(ops)


def collective_annihilator(weights: Sequence[float], cutoff: int) -> sp.csr_matrix:
    w = np.asarray(weights, dtype=float)
    w = w / np.linalg.norm(w)
    ops = annihilators(len(w), cutoff)
    return sum((wk * op for wk, op in zip(w, ops)), sp.csr_matrix(ops[0].shape)).tocsr()


def _check_mode(state: FockState, *modes: int) -> None:
    for m in modes:
        if not 0 <= m < state.num_modes:
            raise ModeIndexError(f"mode {m} out of range for {state.num_modes} modes")


def _apply_single(amps: np.ndarray, mat: np.ndarray, mode: int) -> np.ndarray:
    out = np.tensordot(mat, amps, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def apply_generator_exponential(state: FockState, generator: Gate) -> FockState:
    """Apply ``exp(G)`` for one of the supported quadratic-or-lower generators.

    Local gates are exponentiated with scaling-and-squaring on the truncated
    one- or two-mode generator; the collective squeeze uses a scaled
    truncated-Taylor action of the sparse generator on the full cube. The
    truncated generators are exactly anti-Hermitian, so the only norm change
    is round-off. The returned leak grows by that norm change plus the edge
    weight of the result.
    """
    amps = state.amplitudes
    c = state.cutoff
    if isinstance(generator, BeamSplitter):
        _check_mode(state, generator.i, generator.j)
        if generator.i == generator.j:
            raise UnsupportedGeneratorError("beam splitter needs two distinct modes")
        u = _beamsplitter_matrix(c, float(generator.theta))
        out = np.tensordot(u, amps, axes=([2, 3], [generator.i, generator.j]))
        out = np.moveaxis(out, [0, 1], [generator.i, generator.j])
    elif isinstance(generator, Displace):
        _check_mode(state, generator.mode)
        if generator.epsilon == 0:
            return state
        out = _apply_single(amps, _displacement_matrix(c, complex(generator.epsilon)), generator.mode)
    elif isinstance(generator, Squeeze):
        _check_mode(state, generator.mode)
        if generator.r == 0:
            return state
        out = _apply_single(amps, _squeeze_matrix(c, float(generator.r)), generator.mode)
    elif isinstance(generator, CollectiveSqueeze):
        if len(generator.weights) != state.num_modes:
            raise ShapeMismatchError("collective squeeze weights must match the number of modes")
        if generator.r == 0:
            return state
        big_r = collective_annihilator(generator.weights, c)
        gen = (0.5 * generator.r * (big_r @ big_r - big_r.T @ big_r.T)).tocsc()
        out = expm_multiply(gen, amps.reshape(-1)).reshape(amps.shape)
    else:
        raise UnsupportedGeneratorError(f"unsupported generator {generator!r}")

    result = FockState(out, state.leak)
    if state.norm_tracked > 0:
        deviation = abs(result.norm_tracked - state.norm_tracked) / state.norm_tracked
    else:
        deviation = 0.0
    if deviation > NORM_GUARD:
        raise ConvergenceError(f"norm drifted by {deviation:.3e} applying {generator!r}")
    return FockState(out, state.leak + deviation + result.edge_weight())


def apply_gates(state: FockState, gates) -> FockState:
    for gate in gates:
        state = apply_generator_exponential(state, gate)
    return state


# ---------------------------------------------------------------------------
# Quadratic exponentials of creation operators


def _bargmann_tensor(linear: np.ndarray, quad2: np.ndarray, cutoff: int) -> np.ndarray:
    # sqrt(n_1+1) psi[n+e_1] = L_1 psi[n] + sum_j quad2[0, j] sqrt(n_j) psi[n-e_j]
    n_modes = len(linear)
    if n_modes == 0:
        return np.array(1.0 + 0.0j)
    out = np.zeros((cutoff,) * n_modes, dtype=complex)
    out[0] = _bargmann_tensor(linear[1:], quad2[1:, 1:], cutoff)
    for k in range(cutoff - 1):
        nxt = linear[0] * out[k]
        if k > 0:
            nxt = nxt + quad2[0, 0] * math.sqrt(k) * out[k - 1]
        for j in range(1, n_modes):
            if quad2[0, j] != 0:
                nxt = nxt + quad2[0, j] * raise_(out[k], j - 1)
        out[k + 1] = nxt / math.sqrt(k + 1)
    return out


def build_quadratic_exponential(
    num_modes: int,
    cutoff: int,
    c0: complex,
    linear: Sequence[complex],
    quad: np.ndarray,
    max_dim: int | None = None,
) -> FockState:
    """Fock amplitudes of ``exp(c0 + sum L_i a_i^dag + sum_ij Q_ij a_i^dag a_j^dag)|0...0>``.

    Amplitudes are generated by the exact derivative recursion of the
    Bargmann function, so every in-cube amplitude equals the untruncated
    one and the returned state has zero leak. The result is unnormalized.

    Raises:
        DivergentSeriesError: if the largest singular value of ``Q`` is not
            below 1/2 (the state would not be normalizable).
    """
    check_budget(num_modes, cutoff, max_dim)
    lin = np.asarray(linear, dtype=complex).reshape(-1)
    q = np.asarray(quad, dtype=complex)
    if lin.shape != (num_modes,) or q.shape != (num_modes, num_modes):
        raise ShapeMismatchError("linear/quad shapes do not match num_modes")
    if not np.allclose(q, q.T, atol=1e-12):
        raise ValueError("quadratic coefficient matrix must be symmetric")
    if num_modes and np.linalg.norm(q, 2) >= 0.5:
        raise DivergentSeriesError(
            f"largest singular value of Q is {np.linalg.norm(q, 2):.6f}; need < 1/2"
        )
    amps = _bargmann_tensor(lin, 2.0 * q, cutoff) * np.exp(c0)
    return FockState(amps)



def bargmann_amplitudes(linear: np.ndarray, quad: np.ndarray, max_total: int) -> dict:
    """Batched Fock amplitudes of ``exp(L.a^dag + a^dag.Q.a^dag)|0>`` up to a total photon number.

    ``linear`` has shape ``(batch, N)``; ``quad`` is a fixed symmetric
    ``N x N`` matrix. Returns ``{levels: amplitudes}`` for every multi-index
    with ``sum(levels) <= max_total``; each value has shape ``(batch,)``.
    """
    lin = np.atleast_2d(np.asarray(linear, dtype=complex))
    q2 = 2.0 * np.asarray(quad, dtype=complex)
    batch, n = lin.shape
    zero = (0,) * n
    out = {zero: np.ones(batch, dtype=complex)}
    frontier = [zero]
    for _ in range(max_total):
        nxt = []
        for idx in frontier:
            # raise the first mode that keeps the index in canonical order
            for i in range(n):
                if any(idx[k] for k in range(i + 1, n)):
                    continue
                new = list(idx)
                new[i] += 1
                new = tuple(new)
                if new in out:
                    continue
                val = lin[:, i] * out[idx]
                for j in range(n):
                    if idx[j]:
                        down = list(idx)
                        down[j] -= 1
                        val = val + q2[i, j] * math.sqrt(idx[j]) * out[tuple(down)]
                out[new] = val / math.sqrt(new[i])
                nxt.append(new)
        frontier = nxt
    return out
