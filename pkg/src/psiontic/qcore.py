"""Dense n-qubit state vectors for product preparations and the circuit gates.

Basis index convention: qubit 1 is the most significant bit, so the
bitstring ``(x1, ..., xn)`` labels index ``x1 * 2**(n-1) + ... + xn``.
Amplitudes are stored as ``complex128`` numpy arrays, and a single complex
amplitude is a plain Python ``complex``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _backend
from .errors import DomainError, ResourceError

NORM_TOL = 1e-12
PROB_SUM_TOL = 1e-10
NEGATIVE_SLACK = 1e-15

_max_qubits = int(os.environ.get("PSIONTIC_MAX_QUBITS", 16))


def max_qubits() -> int:
    return _max_qubits


def set_max_qubits(n: int) -> int:
    """Override the qubit cap; returns the previous value."""
    global _max_qubits
    if n < 1:
        raise DomainError("qubit cap must be positive")
    previous, _max_qubits = _max_qubits, int(n)
    return previous


def check_qubits(n: int) -> None:
    if n < 1:
        raise DomainError(f"need at least one qubit, got n={n}")
    if n > _max_qubits:
        raise ResourceError(f"n={n} exceeds the qubit cap of {_max_qubits}")


@dataclass(frozen=True)
class PreparationPair:
    """The two preparations cos(theta/2)|0> +/- sin(theta/2)|1>."""

    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and 0.0 < self.theta <= math.pi / 2):
            raise DomainError(f"theta must lie in (0, pi/2], got {self.theta!r}")

    @property
    def t(self) -> float:
        return math.tan(self.theta / 2)

    @property
    def overlap(self) -> float:
        return math.cos(self.theta)

    @property
    def trace_distance(self) -> float:
        return math.sin(self.theta)


class StateVector:
    """Normalized amplitudes over the 2**n computational basis states."""

    __slots__ = ("n", "amps")

    def __init__(self, amps, n: int | None = None, *, check: bool = True):
        amps = np.array(amps, dtype=np.complex128)
        if amps.ndim != 1:
            raise DomainError("amplitudes must be one-dimensional")
        size = amps.shape[0]
        if n is None:
            n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise DomainError(f"need 2**n amplitudes with n >= 1, got {size}")
        if check:
            if not np.all(np.isfinite(amps)):
                raise DomainError("amplitudes must be finite")
            drift = abs(_norm_sq(amps) - 1.0)
            if drift > NORM_TOL:
                raise DomainError(f"state not normalized (|norm^2 - 1| = {drift:.3e})")
        amps.flags.writeable = False
        self.n = n
        self.amps = amps

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        check_qubits(n)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, n)

    def norm(self) -> float:
        return math.sqrt(_norm_sq(self.amps))

    def __len__(self):
        return self.amps.shape[0]

    def __repr__(self):
        return f"StateVector(n={self.n}, amps={self.amps!r})"


@dataclass(frozen=True)
class ProbabilityVector:
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64)
        bad = p < -NEGATIVE_SLACK
        if np.any(bad):
            raise DomainError(f"negative probability {p[bad].min():.3e}")
        p = np.clip(p, 0.0, None)
        if np.any(p > 1.0 + NEGATIVE_SLACK):
            raise DomainError("probability above 1")
        total = float(_backend.kernels.compensated_sum(p))
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __getitem__(self, k):
        return self.probs[k]

    def __len__(self):
        return self.probs.shape[0]


# gates ----------------------------------------------------------------------

@dataclass(frozen=True)
class ZBeta:
    """diag(1, e^{i beta}) on every qubit."""
    beta: float


@dataclass(frozen=True)
class RAlpha:
    """Phase e^{i alpha} on |0...0> only."""
    alpha: float


@dataclass(frozen=True)
class HadamardAll:
    pass


Gate = Union[ZBeta, RAlpha, HadamardAll]


def _norm_sq(amps: np.ndarray) -> float:
    # compensated, sequential: independent of any reduction order
    return float(_backend.kernels.norm_sq(amps))


def bits_to_index(x: Sequence[int]) -> int:
    index = 0
    for bit in x:
        if bit not in (0, 1):
            raise DomainError(f"bitstring entries must be 0 or 1, got {bit!r}")
        index = (index << 1) | int(bit)
    return index


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def prep_states(pair: PreparationPair) -> tuple[StateVector, StateVector]:
    c, s = math.cos(pair.theta / 2), math.sin(pair.theta / 2)
    return StateVector([c, s]), StateVector([c, -s])


def product_state(pair: PreparationPair, x: Sequence[int] | int, n: int | None = None) -> StateVector:
    """Tensor product of |psi_{x1}> ... |psi_{xn}>.

    ``x`` is either a bitstring or an integer index together with ``n``.
    """
    if isinstance(x, (int, np.integer)):
        if n is None:
            raise DomainError("an integer preparation label needs n")
        xmask = int(x)
        if not 0 <= xmask < (1 << n):
            raise DomainError(f"preparation index {xmask} out of range for n={n}")
    else:
        x = tuple(x)
        if n is not None and n != len(x):
            raise DomainError("bitstring length disagrees with n")
        n = len(x)
        xmask = bits_to_index(x)
    check_qubits(n)
    c, s = math.cos(pair.theta / 2), math.sin(pair.theta / 2)
    amps = _backend.kernels.product_amplitudes(n, c, s, xmask)
    return StateVector(amps, n)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    k = _backend.kernels
    if isinstance(gate, ZBeta):
        amps = k.phase_by_popcount(state.amps, state.n, float(gate.beta))
    elif isinstance(gate, RAlpha):
        amps = state.amps.copy()
        amps[0] *= complex(math.cos(gate.alpha), math.sin(gate.alpha))
    elif isinstance(gate, HadamardAll):
        amps = k.walsh_hadamard(state.amps)
    else:
        raise DomainError(f"unknown gate {gate!r}")
    return StateVector(amps, state.n)


def apply_circuit(state: StateVector, alpha: float, beta: float) -> StateVector:
    """H^n R_alpha Z_beta^n applied to ``state``."""
    state = apply_gate(state, ZBeta(beta))
    state = apply_gate(state, RAlpha(alpha))
    return apply_gate(state, HadamardAll())


def apply_circuit_inverse(state: StateVector, alpha: float, beta: float) -> StateVector:
    state = apply_gate(state, HadamardAll())
    state = apply_gate(state, RAlpha(-alpha))
    return apply_gate(state, ZBeta(-beta))


def born_probabilities(state: StateVector) -> ProbabilityVector:
    a = state.amps
    return ProbabilityVector(a.real * a.real + a.imag * a.imag)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.n != b.n:
        raise DomainError(f"dimension mismatch: n={a.n} vs n={b.n}")
    return complex(np.vdot(a.amps, b.amps))
