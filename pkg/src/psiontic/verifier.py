"""Simulate the circuit on every product preparation and check the zeros."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend, circuit, qcore
from .errors import DomainError

DEFAULT_TOL = 1e-10
ENUMERATION_CAP = 12
SAMPLED_PREPARATIONS = 256


@dataclass(frozen=True)
class PreparationRecord:
    x: tuple[int, ...]
    outcome: int
    probability: float


@dataclass
class NogoReport:
    theta: float
    n: int
    alpha: float
    beta: float
    max_forbidden_prob: float
    per_preparation: list[PreparationRecord]
    closed_form_max_abs_diff: float
    tol: float = DEFAULT_TOL
    passed: bool = False
    sampled: bool = False
    max_completeness_error: float = 0.0
    bracket: tuple[float, float] | None = None
    details: dict = field(default_factory=dict)

    def forbidden_spread(self) -> float:
        probs = [r.probability for r in self.per_preparation]
        return max(probs) - min(probs)


def simulate_outcomes(pair: qcore.PreparationPair, x: int, n: int, alpha: float, beta: float) -> qcore.ProbabilityVector:
    state = qcore.product_state(pair, x, n)
    return qcore.born_probabilities(qcore.apply_circuit(state, alpha, beta))


def quantum_probability_table(params: circuit.CircuitParams) -> np.ndarray:
    """table[x, k] = probability of outcome k on preparation x."""
    n = params.n
    pair = qcore.PreparationPair(params.theta)
    size = 1 << n
    table = np.empty((size, size))
    for x in range(size):
        table[x] = simulate_outcomes(pair, x, n, params.alpha, params.beta).probs
    return table


def _preparations(n: int, cap: int, seed: int) -> tuple[list[int], bool]:
    size = 1 << n
    if n <= cap:
        return list(range(size)), False
    rng = np.random.default_rng(seed)
    chosen = rng.choice(size, size=min(SAMPLED_PREPARATIONS, size), replace=False)
    return sorted(int(x) for x in chosen), True


def verify_nogo(
    theta: float,
    n: int,
    tol: float = DEFAULT_TOL,
    *,
    solver_tol: float = circuit.DEFAULT_TOL,
    params: circuit.CircuitParams | None = None,
    enumeration_cap: int = ENUMERATION_CAP,
    seed: int = 0,
) -> NogoReport:
    """Solve the circuit for (theta, n) and check every preparation's zero.

    Up to ``enumeration_cap`` qubits all 2**n preparations are simulated;
    beyond it a seeded sample of 256 is used and ``sampled`` is set.
    """
    if params is None:
        params = circuit.solve_params(theta, n, solver_tol)
    elif params.n != n or params.theta != theta:
        raise DomainError("supplied params do not match (theta, n)")
    qcore.check_qubits(n)
    pair = qcore.PreparationPair(theta)
    expected = abs(circuit.forbidden_amplitude(params)) ** 2
    labels, sampled = _preparations(n, enumeration_cap, seed)

    records = []
    worst_diff = 0.0
    worst_completeness = 0.0
    for x in labels:
        probs = simulate_outcomes(pair, x, n, params.alpha, params.beta).probs
        p = float(probs[x])
        records.append(PreparationRecord(qcore.index_to_bits(x, n), x, p))
        worst_diff = max(worst_diff, abs(p - expected))
        worst_completeness = max(worst_completeness, abs(_backend.kernels.compensated_sum(probs) - 1.0))

    max_prob = max(r.probability for r in records)
    return NogoReport(
        theta=theta,
        n=n,
        alpha=params.alpha,
        beta=params.beta,
        max_forbidden_prob=max_prob,
        per_preparation=records,
        closed_form_max_abs_diff=worst_diff,
        tol=tol,
        passed=max_prob <= tol,
        sampled=sampled,
        max_completeness_error=worst_completeness,
        bracket=params.bracket,
        details={"solver_residual": params.residual},
    )


# two-system special case ---------------------------------------------------

_S2 = math.sqrt(2.0)
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = (KET0 + KET1) / _S2
MINUS = (KET0 - KET1) / _S2


def xi_basis() -> np.ndarray:
    """Rows are the four entangled outcome states for |0> vs |+>."""
    k = np.kron
    return np.array([
        (k(KET0, KET1) + k(KET1, KET0)) / _S2,
        (k(KET0, MINUS) + k(KET1, PLUS)) / _S2,
        (k(PLUS, KET1) + k(MINUS, KET0)) / _S2,
        (k(PLUS, MINUS) + k(MINUS, PLUS)) / _S2,
    ])


def _to_circuit_frame() -> np.ndarray:
    """Single-qubit unitary taking |0> -> |psi_0> and |+> -> |psi_1> at theta = pi/4."""
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    psi0 = np.array([c, s])
    psi1 = np.array([c, -s])
    return np.column_stack([psi0, _S2 * psi1 - psi0]).astype(complex)


def twobox_check() -> NogoReport:
    """Check the explicit two-qubit measurement for the states |0> and |+>.

    Verifies orthonormality of the four outcome states, that outcome k is
    impossible on preparation k, and that the outcome statistics coincide
    with the circuit at theta = pi/4 after a local change of basis.
    """
    xi = xi_basis()
    singles = (KET0, PLUS)
    preps = [np.kron(singles[a], singles[b]) for a in (0, 1) for b in (0, 1)]

    gram = xi.conj() @ xi.T
    gram_error = float(np.max(np.abs(gram - np.eye(4))))
    table = np.array([[abs(np.vdot(xi[k], preps[x])) ** 2 for k in range(4)] for x in range(4)])
    zeros = [abs(np.vdot(xi[x], preps[x])) for x in range(4)]

    params = circuit.solve_params(math.pi / 4, 2)
    spec = circuit.build_povm(params)
    frame = np.kron(_to_circuit_frame(), _to_circuit_frame())
    circuit_table = np.array([spec.probabilities(qcore.StateVector(frame @ p)) for p in preps])
    agreement = float(np.max(np.abs(circuit_table - table)))

    records = [PreparationRecord(qcore.index_to_bits(x, 2), x, float(table[x, x])) for x in range(4)]
    max_prob = max(r.probability for r in records)
    passed = max_prob <= 1e-12 and max(zeros) <= 1e-15 and gram_error <= 1e-12 and agreement <= 1e-10
    return NogoReport(
        theta=math.pi / 4,
        n=2,
        alpha=params.alpha,
        beta=params.beta,
        max_forbidden_prob=max_prob,
        per_preparation=records,
        closed_form_max_abs_diff=agreement,
        tol=1e-12,
        passed=passed,
        max_completeness_error=float(np.max(np.abs(table.sum(axis=1) - 1.0))),
        details={
            "gram_max_abs_error": gram_error,
            "max_abs_forbidden_inner_product": max(zeros),
            "circuit_table_max_abs_diff": agreement,
            "probability_table": table.tolist(),
        },
    )
