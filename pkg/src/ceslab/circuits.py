"""Optical generation protocol: squeeze, beam-splitter cascade, displacements.

The squeezed mode 0 is spread over all modes by ``B_{0,1}(theta_0)``,
``B_{1,2}(theta_1)``, ... applied in that order, which maps ``a_0^dag`` to
``sum_i c_i a_i^dag`` with direction cosines ``c_i = mu_i/(sqrt(N) lambda)``.
Displacements come last. Mode indices are zero-based.

The displacement amplitudes are fixed by the eigenrelations. Because the
ladder combinations commute with the collective creation operator, the
eigenvalues are linear in the displacements and the conditions form a
``2N x 2N`` real linear system (:func:`solve_displacements`). The literal
closed-form alternatives are available through :func:`closed_form_displacements`
and compared by :func:`adjudicate_displacements`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gaussian
from .analysis.eigen import gaussian_eigen_residuals
from .errors import DegenerateWeightsError, ShapeMismatchError
from .fock import FockState, apply_gates, build_quadratic_exponential, vacuum_fock
from .gates import BeamSplitter, Displace, Squeeze
from .serialization import complex_from_json, dumps, to_jsonable
from .states import ModeWeights, MultiWeights, Weights, as_weights

ANGLE_TOL = 1e-12


class Provenance(enum.Enum):
    CLOSED_FORM_TRIPARTITE = "ClosedFormTripartite"
    CLOSED_FORM_BIPARTITE = "ClosedFormBipartite"
    CLOSED_FORM_DELTA = "ClosedFormDelta"
    CLOSED_FORM_MULTIPARTITE = "ClosedFormMultipartite"
    CONSTRAINT_SOLVE = "ConstraintSolve"
    # parameters that do not come from a displacement formula
    ANGLE_SOLVE = "AngleSolve"
    REGULARIZATION = "Regularization"


DISPLACEMENT_SOURCES = (
    Provenance.CLOSED_FORM_TRIPARTITE,
    Provenance.CLOSED_FORM_BIPARTITE,
    Provenance.CLOSED_FORM_DELTA,
    Provenance.CLOSED_FORM_MULTIPARTITE,
    Provenance.CONSTRAINT_SOLVE,
)


# ---------------------------------------------------------------------------
# Angles


def direction_cosines(thetas: Sequence[float]) -> np.ndarray:
    """``c_i = sin(t_0)...sin(t_{i-1}) cos(t_i)``, last entry a pure sine product."""
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty(thetas.size + 1)
    prefix = 1.0
    for i, th in enumerate(thetas):
        out[i] = prefix * math.cos(th)
        prefix *= math.sin(th)
    out[-1] = prefix
    return out


def multipartite_angles(weights: Weights) -> np.ndarray:
    """Beam-splitter angles whose cascade sends mode 0 to ``mu/(sqrt(N) lambda)``.

    Each angle is ``arccos`` of the remaining direction cosine; the last one
    uses ``atan2`` so that a negative final weight gets a negative angle
    (the ``arccos`` form alone cannot produce it).
    """
    weights = as_weights(weights)
    mu = weights.vector()
    n = mu.size
    target = mu / (math.sqrt(n) * weights.lam)
    thetas = np.empty(n - 1)
    prefix = 1.0
    for i in range(n - 2):
        if abs(prefix) < ANGLE_TOL:
            raise DegenerateWeightsError(f"sine prefix product vanishes before weight {i + 1}")
        thetas[i] = math.acos(float(np.clip(target[i] / prefix, -1.0, 1.0)))
        prefix *= math.sin(thetas[i])
    if abs(prefix) < ANGLE_TOL:
        raise DegenerateWeightsError(f"sine prefix product vanishes before weight {n - 1}")
    thetas[n - 2] = math.atan2(target[n - 1] / prefix, target[n - 2] / prefix)
    return thetas


def tripartite_angles(weights: ModeWeights):
    """``theta = arccos(sqrt(3) mu/(3 lambda))`` and ``phi = arccos(nu/sqrt(nu^2 + tau^2))``.

    ``phi`` carries the sign of ``tau`` so that negative weights are reachable.
    """
    thetas = multipartite_angles(weights)
    return float(thetas[0]), float(thetas[1])


# ---------------------------------------------------------------------------
# Displacements


@dataclass(frozen=True)
class DeltaParams:
    """Reparametrization ``beta_i = delta_i - (mu_i/mu_{i+1}) delta_{i+1}``."""

    delta: np.ndarray

    def __post_init__(self) -> None:
        d = np.array(self.delta, dtype=complex).reshape(-1)
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)

    @classmethod
    def canonical(cls, weights: Weights, betas: Sequence[complex]) -> "DeltaParams":
        """Lift with ``delta_N = 0`` and back-substitution."""
        mu = as_weights(weights).vector()
        betas = np.asarray(betas, dtype=complex).reshape(-1)
        if betas.size != mu.size - 1:
            raise ShapeMismatchError(f"need {mu.size - 1} betas, got {betas.size}")
        delta = np.zeros(mu.size, dtype=complex)
        for i in range(mu.size - 2, -1, -1):
            delta[i] = betas[i] + mu[i] / mu[i + 1] * delta[i + 1]
        return cls(delta)

    def betas(self, weights: Weights) -> np.ndarray:
        mu = as_weights(weights).vector()
        if self.delta.size != mu.size:
            raise ShapeMismatchError("delta length does not match the number of modes")
        return self.delta[:-1] - mu[:-1] / mu[1:] * self.delta[1:]


def _betas_vector(weights: Weights, betas) -> np.ndarray:
    b = np.asarray(betas, dtype=complex).reshape(-1)
    if b.size != weights.num_modes - 1:
        raise ShapeMismatchError(f"need {weights.num_modes - 1} betas, got {b.size}")
    return b


def solve_displacements(weights: Weights, betas: Sequence[complex], x: float) -> np.ndarray:
    """Displacements satisfying every eigenrelation, from a real linear solve.

    Equations: ``mu_{i+1} eps_i - mu_i eps_{i+1} = mu_{i+1} beta_i lambda`` for
    each adjacent pair, ``Re(sum mu_i eps_i) = N lambda x/2`` and
    ``Im(sum mu_i eps_i) = 0``.
    """
    weights = as_weights(weights)
    mu = weights.vector()
    n = mu.size
    b = _betas_vector(weights, betas)
    lam = weights.lam
    # unknowns (Re eps, Im eps)
    a = np.zeros((2 * n, 2 * n))
    rhs = np.zeros(2 * n)
    for i in range(n - 1):
        for part in (0, 1):
            row = 2 * i + part
            a[row, part * n + i] = mu[i + 1]
            a[row, part * n + i + 1] = -mu[i]
        val = mu[i + 1] * b[i] * lam
        rhs[2 * i], rhs[2 * i + 1] = val.real, val.imag
    a[2 * n - 2, :n] = mu
    a[2 * n - 1, n:] = mu
    rhs[2 * n - 2] = n * lam * x / 2
    sol = np.linalg.solve(a, rhs)
    residual = np.max(np.abs(a @ sol - rhs))
    if residual > 1e-10 * max(1.0, np.max(np.abs(rhs))):
        raise ArithmeticError(f"displacement solve residual {residual:.3e}")
    return sol[:n] + 1j * sol[n:]


def closed_form_displacements(
    weights: Weights,
    betas: Sequence[complex],
    x: float,
    variant: Provenance,
    deltas: Optional[DeltaParams] = None,
) -> np.ndarray:
    """Evaluate one of the closed-form displacement formulas literally."""
    weights = as_weights(weights)
    b = _betas_vector(weights, betas)
    mu_vec = weights.vector()
    n = mu_vec.size
    lam = weights.lam
    if deltas is None:
        deltas = DeltaParams.canonical(weights, b)
    elif not np.allclose(deltas.betas(weights), b, atol=1e-12, rtol=0):
        raise ValueError("delta parameters do not reproduce the requested betas")
    d = deltas.delta

    if variant is Provenance.CLOSED_FORM_TRIPARTITE:
        if n != 3:
            raise ShapeMismatchError("the three-displacement formula needs three modes")
        mu, nu, tau = mu_vec
        beta, gamma = b
        return np.array(
            [
                (2 * beta * nu * (nu**2 + tau**2) + 2 * gamma * mu * tau**2 + 3 * x * mu * nu) / (6 * mu * lam),
                (-2 * beta * mu * nu + 2 * gamma * tau**2 + 3 * x * nu) / (6 * lam),
                (-2 * beta * mu * nu * tau - 2 * gamma * tau * (mu**2 + nu**2) + 3 * x * nu * tau) / (6 * nu * lam),
            ],
            dtype=complex,
        )
    if variant is Provenance.CLOSED_FORM_BIPARTITE:
        if n != 2:
            raise ShapeMismatchError("the two-mode delta formula needs two modes")
        mu, nu = mu_vec
        return np.array(
            [
                (d[0] * nu**2 - d[1] * mu * nu + mu * x) / lam,
                (-d[0] * mu * nu + d[1] * nu**2 + nu * x) / lam,
            ],
            dtype=complex,
        )
    if variant is Provenance.CLOSED_FORM_DELTA:
        if n != 3:
            raise ShapeMismatchError("the three-mode delta formula needs three modes")
        mu, nu, tau = mu_vec
        return np.array(
            [
                d[0] * (nu**2 + tau**2) - d[1] * mu * nu - d[2] * mu * tau + 1.5 * mu * x,
                -d[0] * mu * nu + d[1] * (nu**2 + tau**2) - d[2] * nu * tau + 1.5 * nu * x,
                -d[0] * mu * tau - d[1] * nu * tau + d[2] * (mu**2 + nu**2) + 1.5 * tau * x,
            ],
            dtype=complex,
        ) / (3 * lam)
    if variant is Provenance.CLOSED_FORM_MULTIPARTITE:
        sq = mu_vec**2
        dm = d * mu_vec
        eps = np.empty(n, dtype=complex)
        for i in range(n):
            others = np.arange(n) != i
            eps[i] = d[i] * sq[others].sum() - mu_vec[i] * dm[others].sum() + 0.5 * n * mu_vec[i] * x
        return eps / (n * lam)
    if variant is Provenance.CONSTRAINT_SOLVE:
        return solve_displacements(weights, b, x)
    raise ValueError(f"{variant} is not a displacement formula")


# ---------------------------------------------------------------------------
# Circuits


@dataclass(frozen=True)
class Circuit:
    num_modes: int
    gates: tuple
    provenance: tuple

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        prov = tuple(Provenance(p) for p in self.provenance)
        if len(gates) != len(prov):
            raise ShapeMismatchError("one provenance entry per gate is required")
        if not gates or not isinstance(gates[0], Squeeze) or gates[0].mode != 0:
            raise ValueError("a circuit starts with a squeeze on mode 0")
        if any(isinstance(g, Squeeze) for g in gates[1:]):
            raise ValueError("only the initial squeeze is allowed")
        seen_displacement = False
        for g in gates:
            for m in g.modes:
                if not 0 <= m < self.num_modes:
                    raise ValueError(f"gate {g!r} acts outside {self.num_modes} modes")
            if isinstance(g, Displace):
                seen_displacement = True
            elif isinstance(g, BeamSplitter) and seen_displacement:
                raise ValueError("beam splitters must precede all displacements")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "provenance", prov)

    @property
    def reg_r(self) -> float:
        return self.gates[0].r

    def beam_splitters(self) -> list:
        return [g for g in self.gates if isinstance(g, BeamSplitter)]

    def displacements(self) -> np.ndarray:
        eps = np.zeros(self.num_modes, dtype=complex)
        for g in self.gates:
            if isinstance(g, Displace):
                eps[g.mode] += g.epsilon
        return eps

    def to_list(self) -> list:
        out = []
        for g, p in zip(self.gates, self.provenance):
            if isinstance(g, Squeeze):
                entry = {"gate": "Squeeze", "params": {"mode": g.mode, "r": float(g.r)}}
            elif isinstance(g, BeamSplitter):
                entry = {"gate": "BeamSplitter", "params": {"i": g.i, "j": g.j, "theta": float(g.theta)}}
            else:
                entry = {"gate": "Displace", "params": {"mode": g.mode, "epsilon": complex(g.epsilon)}}
            entry["provenance"] = p.value
            out.append(entry)
        return out

    def to_json(self) -> str:
        return dumps(self.to_list())

    @classmethod
    def from_list(cls, items: list, num_modes: Optional[int] = None) -> "Circuit":
        gates, prov = [], []
        for item in items:
            kind, params = item["gate"], item["params"]
            if kind == "Squeeze":
                gates.append(Squeeze(int(params["mode"]), float(params["r"])))
            elif kind == "BeamSplitter":
                gates.append(BeamSplitter(int(params["i"]), int(params["j"]), float(params["theta"])))
            elif kind == "Displace":
                gates.append(Displace(int(params["mode"]), complex_from_json(params["epsilon"])))
            else:
                raise ValueError(f"unknown gate type {kind!r}")
            prov.append(Provenance(item["provenance"]))
        if num_modes is None:
            num_modes = 1 + max(max(g.modes) for g in gates)
        return cls(num_modes, tuple(gates), tuple(prov))

    @classmethod
    def from_json(cls, text: str, num_modes: Optional[int] = None) -> "Circuit":
        return cls.from_list(json.loads(text), num_modes)


def build_circuit(
    weights: Weights,
    epsilons: Sequence[complex],
    reg_r: float,
    source: Provenance,
    prune_tol: float = 0.0,
) -> Circuit:
    weights = as_weights(weights)
    n = weights.num_modes
    eps = np.asarray(epsilons, dtype=complex).reshape(-1)
    if eps.size != n:
        raise ShapeMismatchError(f"need {n} displacements, got {eps.size}")
    gates = [Squeeze(0, float(reg_r))]
    prov = [Provenance.REGULARIZATION]
    for i, th in enumerate(multipartite_angles(weights)):
        gates.append(BeamSplitter(i, i + 1, float(th)))
        prov.append(Provenance.ANGLE_SOLVE)
    for i, e in enumerate(eps):
        if abs(e) > prune_tol:
            gates.append(Displace(i, complex(e)))
            prov.append(source)
    return Circuit(n, tuple(gates), tuple(prov))


def generate_ces_circuit(
    weights: Weights,
    betas: Sequence[complex],
    x: float,
    reg_r: float,
    displacement_source: Provenance = Provenance.CONSTRAINT_SOLVE,
    deltas: Optional[DeltaParams] = None,
) -> Circuit:
    """Squeeze on mode 0, beam-splitter cascade, then one displacement per mode.

    Zero displacements are dropped from the gate list.
    """
    weights = as_weights(weights)
    if displacement_source is Provenance.CONSTRAINT_SOLVE:
        eps = solve_displacements(weights, betas, x)
    else:
        eps = closed_form_displacements(weights, betas, x, displacement_source, deltas)
    return build_circuit(weights, eps, reg_r, displacement_source)


def run_gaussian(circuit: Circuit) -> gaussian.GaussianState:
    return gaussian.apply_gates(gaussian.vacuum_gaussian(circuit.num_modes), circuit.gates)


def run_fock(circuit: Circuit, cutoff: int, max_dim=None) -> FockState:
    """Gate-by-gate execution on the truncated Fock space (small ``reg_r`` only)."""
    return apply_gates(vacuum_fock(circuit.num_modes, cutoff, max_dim), circuit.gates)


def circuit_state_fock(circuit: Circuit, cutoff: int, max_dim=None) -> FockState:
    """Exact in-cube Fock amplitudes of the circuit output (normalized up to the cube tail)."""
    state = run_gaussian(circuit)
    c0, linear, quad = gaussian.to_bargmann(state)
    return build_quadratic_exponential(circuit.num_modes, cutoff, c0, linear, quad, max_dim=max_dim)


# ---------------------------------------------------------------------------
# Adjudication


@dataclass
class VariantVerdict:
    source: Provenance
    epsilons: np.ndarray
    max_deviation_from_solve: float
    ladder_residuals: list
    collective_mean_error: float
    agrees_with_solve: bool
    passes: bool

    def to_dict(self) -> dict:
        return {
            "source": self.source.value,
            "epsilons": [complex(e) for e in self.epsilons],
            "max_deviation_from_solve": self.max_deviation_from_solve,
            "ladder_residuals": self.ladder_residuals,
            "collective_mean_error": self.collective_mean_error,
            "agrees_with_solve": self.agrees_with_solve,
            "passes": self.passes,
        }


@dataclass
class AdjudicationReport:
    weights: tuple
    betas: tuple
    x: float
    reg_r: float
    tolerance: float
    verdicts: list = field(default_factory=list)

    def verdict(self, source: Provenance) -> VariantVerdict:
        for v in self.verdicts:
            if v.source is source:
                return v
        raise KeyError(source)

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                "weights": list(self.weights),
                "betas": [complex(b) for b in self.betas],
                "x": self.x,
                "reg_r": self.reg_r,
                "tolerance": self.tolerance,
                "verdicts": [v.to_dict() for v in self.verdicts],
            }
        )


def applicable_sources(num_modes: int) -> list:
    sources = []
    if num_modes == 2:
        sources.append(Provenance.CLOSED_FORM_BIPARTITE)
    if num_modes == 3:
        sources += [Provenance.CLOSED_FORM_TRIPARTITE, Provenance.CLOSED_FORM_DELTA]
    sources += [Provenance.CLOSED_FORM_MULTIPARTITE, Provenance.CONSTRAINT_SOLVE]
    return sources


def adjudicate_displacements(
    weights: Weights,
    betas: Sequence[complex],
    x: float,
    reg_r: float = 2.0,
    tol: float = 1e-8,
) -> AdjudicationReport:
    """Run every applicable displacement formula through the eigenrelation checks.

    Checks use the Gaussian engine (no truncation): ladder residuals
    ``||(mu_{i+1} a_i - mu_i a_{i+1} - mu_{i+1} beta_i lambda)|psi>||`` and the
    deviation of the collective-quadrature mean from ``lambda x/sqrt(2)``. The
    quadrature variance itself is a regularization effect and is not part of
    the verdict.
    """
    weights = as_weights(weights)
    b = _betas_vector(weights, betas)
    reference = solve_displacements(weights, b, x)
    report = AdjudicationReport(tuple(weights.vector()), tuple(b), float(x), float(reg_r), tol)
    for source in applicable_sources(weights.num_modes):
        eps = closed_form_displacements(weights, b, x, source)
        state = run_gaussian(build_circuit(weights, eps, reg_r, source))
        res = gaussian_eigen_residuals(state, weights, b, x, reg_r=reg_r)
        ladder = [r.absolute for r in res.ladder()]
        mean_err = res.collective_mean_error
        dev = float(np.max(np.abs(eps - reference)))
        report.verdicts.append(
            VariantVerdict(
                source=source,
                epsilons=eps,
                max_deviation_from_solve=dev,
                ladder_residuals=ladder,
                collective_mean_error=mean_err,
                agrees_with_solve=dev <= tol,
                passes=max(ladder) <= tol and mean_err <= tol,
            )
        )
    return report
