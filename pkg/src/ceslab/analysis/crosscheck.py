"""Agreement between the Fock and Gaussian engines on random short circuits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import fock, gaussian
from ..gates import BeamSplitter, Displace, Gate, Squeeze
from ..serialization import to_jsonable

AGREEMENT_TOL = 1e-6
LEAK_TOL = 1e-8


def fock_collective_stats(state: fock.FockState, weights: Sequence[float]):
    """``(mean_x, var_x, mean_p, var_p)`` of ``(1/N) sum mu_k X_k`` and its ``P`` partner."""
    mu = np.asarray(weights, dtype=float)
    n = state.num_modes
    amps = state.amplitudes / state.norm
    low = sum(m * fock.lower(amps, k) for k, m in enumerate(mu)) / n
    # C = (L + L^dag)/sqrt(2) with L the weighted lowering combination
    mean_l = complex(np.vdot(amps, low))
    mean_ldl = float(np.vdot(low, low).real)
    mean_ll = complex(np.vdot(amps, sum(m * fock.lower(low, k) for k, m in enumerate(mu)) / n))
    commutator = float(mu @ mu) / n**2
    mean_x = math.sqrt(2) * mean_l.real
    mean_p = math.sqrt(2) * mean_l.imag
    # <X^2> = (<L^2> + <L^dag^2> + 2<L^dag L> + [L, L^dag])/2
    var_x = (2 * mean_ll.real + 2 * mean_ldl + commutator) / 2 - mean_x**2
    var_p = (-2 * mean_ll.real + 2 * mean_ldl + commutator) / 2 - mean_p**2
    return mean_x, var_x, mean_p, var_p


def random_circuit(rng: np.random.Generator, num_modes: int = 3, max_gates: int = 6,
                   r_max: float = 0.4, eps_max: float = 0.5) -> list:
    """A random list of 1 to ``max_gates`` squeezers, beam splitters and displacements."""
    gates = []
    for _ in range(int(rng.integers(1, max_gates + 1))):
        kind = rng.integers(3)
        if kind == 0:
            gates.append(Squeeze(int(rng.integers(num_modes)), float(rng.uniform(-r_max, r_max))))
        elif kind == 1:
            i, j = rng.choice(num_modes, size=2, replace=False)
            gates.append(BeamSplitter(int(i), int(j), float(rng.uniform(-math.pi, math.pi))))
        else:
            eps = eps_max * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
            gates.append(Displace(int(rng.integers(num_modes)), complex(eps)))
    return gates


@dataclass
class CrossEngineResult:
    gates: list
    cutoff: int
    fock_stats: tuple
    gaussian_stats: tuple
    fock_overlap: float
    gaussian_overlap: float
    leak: float
    notes: list = field(default_factory=list)

    @property
    def max_discrepancy(self) -> float:
        diffs = [abs(a - b) for a, b in zip(self.fock_stats, self.gaussian_stats)]
        diffs.append(abs(self.fock_overlap - self.gaussian_overlap))
        return float(max(diffs))

    def agrees(self, tol: float = AGREEMENT_TOL) -> Optional[bool]:
        """``None`` when the Fock leak is too large for the comparison to be meaningful."""
        if self.leak >= LEAK_TOL:
            return None
        return self.max_discrepancy <= tol

    def to_dict(self) -> dict:
        return {
            "gates": [{"gate": type(g).__name__, "params": to_jsonable(g)} for g in self.gates],
            "cutoff": self.cutoff,
            "fock_stats": list(self.fock_stats),
            "gaussian_stats": list(self.gaussian_stats),
            "fock_overlap": self.fock_overlap,
            "gaussian_overlap": self.gaussian_overlap,
            "leak": self.leak,
            "max_discrepancy": self.max_discrepancy,
            "agrees": self.agrees(),
            "notes": list(self.notes),
        }


def cross_engine_check(gates: Sequence[Gate], reference: Sequence[Gate], num_modes: int,
                       weights: Sequence[float], cutoff: int) -> CrossEngineResult:
    """Run ``gates`` and ``reference`` in both engines; compare collective moments and ``|<ref|psi>|^2``."""
    f_state = fock.apply_gates(fock.vacuum_fock(num_modes, cutoff), gates)
    f_ref = fock.apply_gates(fock.vacuum_fock(num_modes, cutoff), reference)
    g_state = gaussian.apply_gates(gaussian.vacuum_gaussian(num_modes), gates)
    g_ref = gaussian.apply_gates(gaussian.vacuum_gaussian(num_modes), reference)
    f_overlap = abs(fock.inner(f_ref, f_state)) ** 2 / (f_ref.norm_tracked * f_state.norm_tracked)
    leak = max(f_state.leak, f_ref.leak, f_state.edge_weight(), f_ref.edge_weight())
    return CrossEngineResult(
        gates=list(gates),
        cutoff=cutoff,
        fock_stats=fock_collective_stats(f_state, weights),
        gaussian_stats=gaussian.collective_quadrature_stats(g_state, weights),
        fock_overlap=float(f_overlap),
        gaussian_overlap=gaussian.overlap_gaussian(g_ref, g_state),
        leak=float(leak),
    )
