"""Finite ontological models for the two preparations.

The ontic-state space is ``range(lambda_count)``. Joint ontic states of n
systems are indexed like basis states: lambda_1 is the most significant
digit in base ``lambda_count``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import circuit, qcore, verifier
from .errors import DomainError, ResourceError

DIST_TOL = 1e-12
JOINT_STATE_CAP = 10**6
BOUND_SLACK = 1e-9
REFERENCE_KINDS = ("psi_ontic", "fully_overlapping", "partial")


def _as_distribution(mu, name="distribution") -> np.ndarray:
    mu = np.array(mu, dtype=np.float64)
    if mu.ndim != 1 or mu.size == 0:
        raise DomainError(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(mu)) or np.any(mu < 0):
        raise DomainError(f"{name} must be finite and non-negative")
    total = math.fsum(mu)
    if abs(total - 1.0) > DIST_TOL:
        raise DomainError(f"{name} sums to {total!r}, not 1")
    mu.flags.writeable = False
    return mu


@dataclass(frozen=True)
class OntModel:
    mu0: np.ndarray
    mu1: np.ndarray

    def __post_init__(self):
        mu0 = _as_distribution(self.mu0, "mu0")
        mu1 = _as_distribution(self.mu1, "mu1")
        if mu0.shape != mu1.shape:
            raise DomainError("mu0 and mu1 must have the same length")
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "mu1", mu1)

    @property
    def lambda_count(self) -> int:
        return self.mu0.shape[0]

    def mu(self, bit: int) -> np.ndarray:
        return self.mu1 if bit else self.mu0


@dataclass(frozen=True)
class ResponseTable:
    """Outcome distributions for each joint ontic state.

    ``entries[j, k]`` is the probability of outcome k given joint ontic
    state j.
    """

    n: int
    lambda_count: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        shape = (self.lambda_count**self.n, 1 << self.n)
        if entries.shape != shape:
            raise DomainError(f"response table has shape {entries.shape}, expected {shape}")
        if np.any(entries < 0) or not np.all(np.isfinite(entries)):
            raise DomainError("response probabilities must be finite and non-negative")
        sums = entries.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > DIST_TOL:
            raise DomainError("each response distribution must sum to 1")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class DeviationReport:
    epsilon: float
    D: float
    omega: float
    q: float
    bound_holds: bool
    n: int
    D_lower: float
    omega_power: float
    omega_power_bound_holds: bool


def _pair(mu0, mu1):
    mu0 = np.asarray(mu0, dtype=np.float64)
    mu1 = np.asarray(mu1, dtype=np.float64)
    if mu0.shape != mu1.shape:
        raise DomainError(f"length mismatch: {mu0.shape} vs {mu1.shape}")
    return mu0, mu1


def tv_distance(mu0, mu1) -> float:
    mu0, mu1 = _pair(mu0, mu1)
    return 0.5 * math.fsum(np.abs(mu0 - mu1))


def overlap(mus: Sequence) -> float:
    """Sum over ontic states of the smallest probability any distribution assigns."""
    if len(mus) < 2:
        raise DomainError("overlap needs at least two distributions")
    stack = [np.asarray(m, dtype=np.float64) for m in mus]
    if any(m.shape != stack[0].shape for m in stack):
        raise DomainError("length mismatch among distributions")
    return math.fsum(np.min(np.vstack(stack), axis=0))


def overlap_region_mass(mu0, mu1) -> float:
    mu0, mu1 = _pair(mu0, mu1)
    shared = (mu0 > 0) & (mu1 > 0)
    return min(math.fsum(mu0[shared]), math.fsum(mu1[shared]))


def _check_joint(lambda_count: int, n: int) -> None:
    if n < 1:
        raise DomainError("need at least one system")
    if lambda_count**n > JOINT_STATE_CAP:
        raise ResourceError(
            f"{lambda_count}**{n} joint ontic states exceed the cap of {JOINT_STATE_CAP}"
        )


def product_model(model: OntModel, x: Sequence[int]) -> np.ndarray:
    """Joint distribution of independently prepared systems with labels ``x``."""
    x = tuple(x)
    _check_joint(model.lambda_count, len(x))
    joint = np.ones(1)
    for bit in x:
        if bit not in (0, 1):
            raise DomainError(f"preparation labels must be 0 or 1, got {bit!r}")
        joint = np.kron(joint, model.mu(bit))
    return joint


def all_product_models(model: OntModel, n: int) -> np.ndarray:
    """Row x holds the joint distribution for preparation index x."""
    _check_joint(model.lambda_count, n)
    return np.array([product_model(model, qcore.index_to_bits(x, n)) for x in range(1 << n)])


def _check_compatible(model: OntModel, resp: ResponseTable) -> None:
    if resp.lambda_count != model.lambda_count:
        raise DomainError(
            f"response table is over {resp.lambda_count} ontic states, model has {model.lambda_count}"
        )


def predicted_probabilities(model: OntModel, resp: ResponseTable, x: Sequence[int]) -> qcore.ProbabilityVector:
    _check_compatible(model, resp)
    x = tuple(x)
    if len(x) != resp.n:
        raise DomainError(f"preparation has {len(x)} systems, response table expects {resp.n}")
    return qcore.ProbabilityVector(product_model(model, x) @ resp.entries)


def distance_lower_bound(epsilon: float, n: int) -> float:
    """Smallest total variation distance compatible with deviation ``epsilon``."""
    if epsilon < 0 or n < 1:
        raise DomainError("need epsilon >= 0 and n >= 1")
    return 1.0 - 2.0 * epsilon ** (1.0 / n)


def max_deviation(model: OntModel, resp: ResponseTable, params: circuit.CircuitParams) -> DeviationReport:
    """Largest gap between model and quantum outcome probabilities."""
    _check_compatible(model, resp)
    n = params.n
    if resp.n != n:
        raise DomainError(f"response table is for n={resp.n}, circuit has n={n}")
    quantum = verifier.quantum_probability_table(params)
    predicted = all_product_models(model, n) @ resp.entries
    epsilon = float(np.max(np.abs(predicted - quantum)))

    D = tv_distance(model.mu0, model.mu1)
    omega = overlap([model.mu0, model.mu1])
    lower = distance_lower_bound(epsilon, n)
    omega_power = omega**n
    return DeviationReport(
        epsilon=epsilon,
        D=D,
        omega=omega,
        q=overlap_region_mass(model.mu0, model.mu1),
        bound_holds=D >= lower - BOUND_SLACK,
        n=n,
        D_lower=lower,
        omega_power=omega_power,
        omega_power_bound_holds=omega_power <= 2**n * epsilon + BOUND_SLACK,
    )


def posterior_response(model: OntModel, params: circuit.CircuitParams) -> ResponseTable:
    """Best-guess response: Born statistics averaged over the compatible preparations.

    For each joint ontic state the quantum outcome distributions of all
    preparations are mixed with weights mu_x(lambda); states no preparation
    reaches get a uniform response.
    """
    n = params.n
    quantum = verifier.quantum_probability_table(params)
    weights = all_product_models(model, n)
    mixed = weights.T @ quantum
    norm = weights.sum(axis=0)
    size = 1 << n
    entries = np.full((weights.shape[1], size), 1.0 / size)
    reached = norm > 0
    entries[reached] = mixed[reached] / norm[reached, None]
    return ResponseTable(n, model.lambda_count, entries)


def make_reference_model(kind: str, theta: float, params: circuit.CircuitParams, q: float | None = None):
    """Construct one of the witness models and its response table.

    ``psi_ontic`` has disjoint supports on two ontic states and reproduces
    quantum statistics exactly; ``fully_overlapping`` gives both
    preparations the same uniform distribution; ``partial`` shares one of
    three ontic states with mass ``q``.
    """
    if not math.isclose(theta, params.theta, rel_tol=0, abs_tol=1e-15):
        raise DomainError("theta disagrees with the circuit parameters")
    if kind == "psi_ontic":
        model = OntModel([1.0, 0.0], [0.0, 1.0])
    elif kind == "fully_overlapping":
        model = OntModel([0.5, 0.5], [0.5, 0.5])
    elif kind == "partial":
        if q is None or not 0.0 <= q <= 1.0:
            raise DomainError(f"partial model needs q in [0, 1], got {q!r}")
        model = OntModel([1.0 - q, 0.0, q], [0.0, 1.0 - q, q])
    else:
        raise DomainError(f"unknown reference model {kind!r}; choose from {REFERENCE_KINDS}")
    return model, posterior_response(model, params)


# Monte Carlo ---------------------------------------------------------------

@dataclass(frozen=True)
class OverlapSampling:
    frequency: float
    stderr: float
    samples: int
    seed: int


def sample_all_shared(
    model: OntModel,
    x: Sequence[int],
    samples: int = 10**6,
    seed: int = 0,
    shards: int = 8,
) -> OverlapSampling:
    """Estimate the chance that every sampled ontic state is in the overlap region.

    Each shard draws from its own generator spawned from ``seed``, so the
    result depends only on (seed, samples, shards).
    """
    x = tuple(x)
    if samples < 1 or shards < 1:
        raise DomainError("need at least one sample and one shard")
    shared = (model.mu0 > 0) & (model.mu1 > 0)
    sizes = [samples // shards + (i < samples % shards) for i in range(shards)]
    children = np.random.SeedSequence(seed).spawn(shards)
    hits = 0
    for size, child in zip(sizes, children):
        if size == 0:
            continue
        rng = np.random.default_rng(child)
        inside = np.ones(size, dtype=bool)
        for bit in x:
            draws = rng.choice(model.lambda_count, size=size, p=model.mu(bit))
            inside &= shared[draws]
        hits += int(np.count_nonzero(inside))
    freq = hits / samples
    return OverlapSampling(freq, math.sqrt(freq * (1.0 - freq) / samples), samples, seed)


# model files ---------------------------------------------------------------

def model_to_dict(model: OntModel, resp: ResponseTable | None = None) -> dict:
    doc = {
        "lambda_count": model.lambda_count,
        "mu0": model.mu0.tolist(),
        "mu1": model.mu1.tolist(),
    }
    if resp is not None:
        doc["response"] = {
            "n": resp.n,
            "entries": [
                {"lambda": list(_joint_digits(j, resp.n, resp.lambda_count)), "probs": row.tolist()}
                for j, row in enumerate(resp.entries)
            ],
        }
    return doc


def _joint_digits(j: int, n: int, base: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        j, d = divmod(j, base)
        digits.append(d)
    return tuple(reversed(digits))


def model_from_dict(doc: dict) -> tuple[OntModel, ResponseTable | None]:
    try:
        model = OntModel(doc["mu0"], doc["mu1"])
        declared = int(doc["lambda_count"])
    except KeyError as exc:
        raise DomainError(f"model file is missing field {exc.args[0]!r}") from None
    if declared != model.lambda_count:
        raise DomainError(f"lambda_count={declared} but distributions have length {model.lambda_count}")
    if "response" not in doc:
        return model, None
    block = doc["response"]
    n = int(block["n"])
    _check_joint(declared, n)
    entries = np.full((declared**n, 1 << n), np.nan)
    for item in block["entries"]:
        digits = item["lambda"]
        if len(digits) != n or any(not 0 <= d < declared for d in digits):
            raise DomainError(f"bad joint ontic state {digits!r}")
        if len(item["probs"]) != 1 << n:
            raise DomainError(f"response for {digits!r} needs {1 << n} probabilities")
        j = 0
        for d in digits:
            j = j * declared + d
        entries[j] = item["probs"]
    if np.isnan(entries).any():
        raise DomainError("response table does not cover every joint ontic state")
    return model, ResponseTable(n, declared, entries)


def load_model(path) -> tuple[OntModel, ResponseTable | None]:
    with open(Path(path), encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def save_model(path, model: OntModel, resp: ResponseTable | None = None) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, resp), fh, indent=2)
        fh.write("\n")
