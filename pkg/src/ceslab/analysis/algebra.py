"""Algebra of the collective mode: su(1,1) closure and the disentangled squeeze operator.

``R = sum mu_i a_i/|mu|`` on the truncated cube. Operators are compared on an
interior subspace of low total photon number, where every product involved
acts exactly as in the untruncated space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from ..errors import DomainError
from ..fock import build_quadratic_exponential, check_budget, collective_annihilator, total_number
from ..gaussian import bargmann_inner
from ..states import Weights, as_weights

CLOSURE_TOL = 1e-10
SQUEEZE_INTERIOR_TOTAL = 3
MIN_SQUEEZE_CUTOFF = 8
MAX_LOG_L = 1.5
COLLECTIVE_CUTOFF = 400


def _interior_columns(num_modes: int, cutoff: int, max_total: int) -> np.ndarray:
    return np.flatnonzero(total_number(num_modes, cutoff).reshape(-1) <= max_total)


def _restricted_norm(op: sp.spmatrix, cols: np.ndarray) -> float:
    """Operator 2-norm of ``op`` restricted to the span of the basis vectors ``cols``."""
    block = op[:, cols]
    gram = (block.conj().T @ block).toarray()
    return float(math.sqrt(max(np.linalg.eigvalsh(gram).max(), 0.0)))


def _comm(a, b):
    return a @ b - b @ a


@dataclass
class Su11Report:
    cutoff: int
    interior_max_total: int
    defects: dict = field(default_factory=dict)
    closing: list = field(default_factory=list)

    def standard_closes(self) -> bool:
        return all(k in self.closing for k in self.defects if k.startswith("standard"))

    def literal_closes(self) -> bool:
        return all(k in self.closing for k in self.defects if k.startswith("literal"))

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "interior_max_total": self.interior_max_total,
            "defects": dict(self.defects),
            "closing": list(self.closing),
            "standard_closes": self.standard_closes(),
            "literal_closes": self.literal_closes(),
        }


def su11_check(weights: Weights, cutoff: int, tol: float = CLOSURE_TOL) -> Su11Report:
    """Commutator defects of ``R^2``, ``R^dag^2`` and ``R^dag R + 1/2``.

    Two normalizations are tested: the literal relations
    ``[R^2, R^dag^2] = 2(R^dag R + 1/2)``, ``[R^dag R + 1/2, R^2] = -R^2``,
    ``[R^dag R + 1/2, R^dag^2] = R^dag^2``, and the standard generators
    ``K- = R^2/2``, ``K+ = R^dag^2/2``, ``K0 = (R^dag R + 1/2)/2``. Norms are
    taken on states with total photon number at most ``cutoff - 4``.
    """
    if cutoff < 8:
        raise DomainError("su(1,1) check needs cutoff >= 8")
    weights = as_weights(weights)
    n = weights.num_modes
    check_budget(n, cutoff)
    r = collective_annihilator(weights.vector(), cutoff).tocsr()
    rd = r.conj().T.tocsr()
    eye = sp.identity(r.shape[0], format="csr")
    r2, rd2 = r @ r, rd @ rd
    n_half = rd @ r + 0.5 * eye
    km, kp, k0 = 0.5 * r2, 0.5 * rd2, 0.5 * n_half
    max_total = cutoff - 4
    cols = _interior_columns(n, cutoff, max_total)
    ops = {
        "[R, R^dag] - 1": _comm(r, rd) - eye,
        "standard [K0, K+] - K+": _comm(k0, kp) - kp,
        "standard [K0, K-] + K-": _comm(k0, km) + km,
        "standard [K-, K+] - 2 K0": _comm(km, kp) - 2 * k0,
        "literal [R^2, R^dag^2] - 2(R^dag R + 1/2)": _comm(r2, rd2) - 2 * n_half,
        "literal [R^dag R + 1/2, R^2] + R^2": _comm(n_half, r2) + r2,
        "literal [R^dag R + 1/2, R^dag^2] - R^dag^2": _comm(n_half, rd2) - rd2,
    }
    report = Su11Report(cutoff, max_total)
    for name, op in ops.items():
        value = _restricted_norm(op.tocsr(), cols)
        report.defects[name] = value
        if value <= tol:
            report.closing.append(name)
    return report


@dataclass
class SqueezeReport:
    l: float
    squeeze_param: float
    cutoff: int
    interior_max_total: int
    interior_defect: float
    prefactor_ratio: complex
    literal_prefactor: float
    vacuum_norm: float
    vacuum_norm_in_cube: float
    vacuum_overlap_literal: Optional[float]
    vacuum_overlap_rescaled: float
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "squeeze_param": self.squeeze_param,
            "cutoff": self.cutoff,
            "interior_max_total": self.interior_max_total,
            "interior_defect": self.interior_defect,
            "prefactor_ratio": complex(self.prefactor_ratio),
            "literal_prefactor": self.literal_prefactor,
            "vacuum_norm": self.vacuum_norm,
            "vacuum_norm_in_cube": self.vacuum_norm_in_cube,
            "vacuum_overlap_literal": self.vacuum_overlap_literal,
            "vacuum_overlap_rescaled": self.vacuum_overlap_rescaled,
            "notes": list(self.notes),
        }


def squeeze_functions(l: float):
    """``(squeeze_param, sech, tanh)`` for ``l = exp(squeeze_param)``."""
    return math.log(l), 2 * l / (1 + l * l), (l * l - 1) / (1 + l * l)


def _series_projected(op: sp.spmatrix, coeff: float, vecs: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """``P exp(coeff op) vecs`` for an operator that shifts the total number by a fixed nonzero step.

    Terms whose support lies entirely outside ``keep`` are dropped; since each
    power moves the total further away, the projected series is finite.
    """
    out = np.zeros_like(vecs)
    term = vecs.copy()
    k = 0
    while np.any(term[keep] != 0) or k == 0:
        out[keep] += term[keep]
        k += 1
        term = coeff * (op @ term) / k
    return out


def squeeze_operator_check(weights: Weights, l: float, cutoff: int) -> SqueezeReport:
    """Compare the disentangled squeeze operator with ``exp((s/2)(R^2 - R^dag^2))``, ``s = ln l``.

    The factored form ``sech^{1/2}(s) exp(-R^dag^2 tanh(s)/2) exp(R^dag R ln sech s)
    exp(R^2 tanh(s)/2)`` carries no ``1/(tau^2 lambda^2)`` prefactor; that
    literal factor is reported next to the measured ratio between the two
    sides. Both sides are compressed to states with at most three photons in
    total. The squeezed vacuum norm is computed in the collective-mode
    number basis, where the state is a single-mode squeezed vacuum; the
    in-cube norm is reported as well.
    """
    if not 0 < l <= math.exp(MAX_LOG_L):
        raise DomainError(f"l must lie in (0, e^{MAX_LOG_L}]")
    if cutoff < MIN_SQUEEZE_CUTOFF:
        raise DomainError(f"cutoff must be at least {MIN_SQUEEZE_CUTOFF} for a 4-level interior")
    weights = as_weights(weights)
    n = weights.num_modes
    check_budget(n, cutoff)
    s, sech, tanh = squeeze_functions(l)
    r = collective_annihilator(weights.vector(), cutoff).tocsc()
    rd = r.conj().T.tocsc()
    r2, rd2 = (r @ r).tocsc(), (rd @ rd).tocsc()
    dim = r.shape[0]
    cols = _interior_columns(n, cutoff, SQUEEZE_INTERIOR_TOTAL)
    basis = np.zeros((dim, cols.size))
    basis[cols, np.arange(cols.size)] = 1.0
    keep = np.zeros(dim, dtype=bool)
    keep[cols] = True

    generator = (0.5 * s * (r2 - rd2)).tocsc()
    exact = expm_multiply(generator, basis)[cols]

    # rightmost factor lowers the total, so its series terminates
    step = _series_projected(r2, 0.5 * tanh, basis, np.ones(dim, dtype=bool))
    if sech != 1.0:
        step = expm_multiply((math.log(sech) * (rd @ r)).tocsc(), step)
    factored = math.sqrt(sech) * _series_projected(rd2, -0.5 * tanh, step, keep)[cols]

    defect = float(np.linalg.norm(exact - factored, 2))
    ratio = complex(np.vdot(factored, exact) / np.vdot(factored, factored))

    unit = weights.vector() / np.linalg.norm(weights.vector())
    c0 = 0.5 * math.log(sech)
    single = build_quadratic_exponential(1, COLLECTIVE_CUTOFF, c0, np.zeros(1), np.array([[-0.5 * tanh]]))
    cube = build_quadratic_exponential(n, cutoff, c0, np.zeros(n), -0.5 * tanh * np.outer(unit, unit))

    q_factored = -0.5 * tanh * np.outer(unit, unit)
    mu = weights.vector()
    q_literal = -(tanh / 6.0) * np.outer(mu, mu)
    q_rescaled = q_literal / weights.lam**2
    zeros = np.zeros(n)
    report = SqueezeReport(
        l=float(l),
        squeeze_param=s,
        cutoff=cutoff,
        interior_max_total=SQUEEZE_INTERIOR_TOTAL,
        interior_defect=defect,
        prefactor_ratio=ratio,
        literal_prefactor=1.0 / (weights.tau**2 * weights.lam**2),
        vacuum_norm=math.sqrt(single.norm_tracked),
        vacuum_norm_in_cube=math.sqrt(cube.norm_tracked),
        vacuum_overlap_literal=None,
        vacuum_overlap_rescaled=_normalized_bargmann_overlap(zeros, q_factored, q_rescaled),
    )
    if np.linalg.norm(q_literal, 2) < 0.5:
        report.vacuum_overlap_literal = _normalized_bargmann_overlap(zeros, q_factored, q_literal)
    else:
        report.notes.append("literal squeezed-vacuum kernel is not normalizable for these weights")
    if n != 3:
        report.notes.append("literal squeezed-vacuum kernel uses 1/6; compared as literal for N modes")
    return report


def _normalized_bargmann_overlap(linear: np.ndarray, qa: np.ndarray, qb: np.ndarray) -> float:
    ab = bargmann_inner(0.0, linear, qa, 0.0, linear, qb)
    aa = bargmann_inner(0.0, linear, qa, 0.0, linear, qa)
    bb = bargmann_inner(0.0, linear, qb, 0.0, linear, qb)
    return float(abs(ab) / math.sqrt(abs(aa) * abs(bb)))
