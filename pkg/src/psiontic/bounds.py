"""Discrimination objective for the product ensemble and the overlap bounds it implies.

sigma is the total probability, summed over the 2**n preparations, of the
outcome assigned to each preparation. A measurement with sigma = 0 rules
out any overlap; otherwise quantum statistics force omega**n <= sigma.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import circuit, qcore
from .errors import DomainError, NumericalError, ResourceError

SIMULATION_MAX_QUBITS = 8
SEARCH_MAX_QUBITS = 3
CROSS_CHECK_TOL = 1e-10
GRID_AGREEMENT_TOL = 1e-8
CSV_HEADER = ("delta", "n", "omega_upper")


@dataclass(frozen=True)
class RegionPoint:
    delta: float
    n: int
    omega_upper: float


@dataclass(frozen=True)
class SigmaResult:
    sigma: float
    alpha: float
    beta: float
    zero_attainable: bool
    attained: float


@dataclass(frozen=True)
class SearchResult:
    min_sigma: float
    found: bool
    trials: int
    seed: int


def sigma_closed_form(theta: float, n: int, alpha: float, beta: float) -> float:
    t = math.tan(theta / 2)
    core = complex(math.cos(alpha), math.sin(alpha)) + (1.0 + complex(math.cos(beta), math.sin(beta)) * t) ** n - 1.0
    return math.cos(theta / 2) ** (2 * n) * abs(core) ** 2


def sigma_simulated(theta: float, n: int, alpha: float, beta: float) -> float:
    if n > SIMULATION_MAX_QUBITS:
        raise ResourceError(f"simulated sigma limited to n <= {SIMULATION_MAX_QUBITS}")
    pair = qcore.PreparationPair(theta)
    total = []
    for x in range(1 << n):
        out = qcore.apply_circuit(qcore.product_state(pair, x, n), alpha, beta)
        total.append(abs(out.amps[x]) ** 2)
    return math.fsum(total)


def sigma_parametric(theta: float, n: int, alpha: float, beta: float, check: bool = True) -> float:
    """sigma for the circuit measurement with parameters (alpha, beta).

    With ``check`` the closed form is compared against a full simulation
    for n <= 8.
    """
    qcore.PreparationPair(theta)
    if n < 1:
        raise DomainError("n must be positive")
    value = sigma_closed_form(theta, n, alpha, beta)
    if check and n <= SIMULATION_MAX_QUBITS:
        simulated = sigma_simulated(theta, n, alpha, beta)
        if abs(simulated - value) > CROSS_CHECK_TOL:
            raise NumericalError(f"closed-form sigma {value!r} disagrees with simulation {simulated!r}")
    return value


def grid_minimize_sigma(theta: float, n: int, points: int = 64, polish: int = 4) -> tuple[float, float, float]:
    """Minimize the closed-form sigma over (alpha, beta) by grid search plus local polish."""
    angles = np.linspace(0.0, 2 * math.pi, points, endpoint=False)
    t = math.tan(theta / 2)
    a, b = np.meshgrid(angles, angles, indexing="ij")
    surface = math.cos(theta / 2) ** (2 * n) * np.abs(np.exp(1j * a) + (1 + np.exp(1j * b) * t) ** n - 1) ** 2
    order = np.argsort(surface, axis=None)[:polish]
    best = (float(surface.flat[order[0]]), float(a.flat[order[0]]), float(b.flat[order[0]]))

    def objective(v):
        return sigma_closed_form(theta, n, v[0], v[1])

    for idx in order:
        res = minimize(objective, [a.flat[idx], b.flat[idx]], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000})
        if res.fun < best[0]:
            best = (float(res.fun), float(res.x[0] % (2 * math.pi)), float(res.x[1] % (2 * math.pi)))
    return best


def optimal_sigma(theta: float, n: int, confirm: bool = False) -> SigmaResult:
    """Smallest sigma within the circuit family and where it is attained.

    When n systems suffice the minimum is exactly zero, attained by the
    solved circuit (``attained`` holds the rounding-level value of sigma at
    those parameters). Otherwise the minimum sits at alpha = pi, beta = 0.
    """
    qcore.PreparationPair(theta)
    if n < 1:
        raise DomainError("n must be positive")
    if circuit.is_feasible(theta, n):
        params = circuit.solve_params(theta, n)
        value = sigma_closed_form(theta, n, params.alpha, params.beta)
        return SigmaResult(0.0, params.alpha, params.beta, True, value)
    t = math.tan(theta / 2)
    value = math.cos(theta / 2) ** (2 * n) * (2.0 - (1.0 + t) ** n) ** 2
    if confirm:
        grid_value, _, _ = grid_minimize_sigma(theta, n)
        if grid_value < value - GRID_AGREEMENT_TOL:
            raise NumericalError(
                f"grid search found sigma={grid_value!r} below alpha=pi, beta=0 value {value!r}"
            )
    return SigmaResult(value, math.pi, 0.0, False, value)


def sigma_min(theta: float, n: int, confirm: bool = False) -> float:
    return optimal_sigma(theta, n, confirm).sigma


def omega_upper_bound(theta: float, n: int) -> float:
    return sigma_min(theta, n) ** (1.0 / n)


def region_data(n_max: int = 4, grid_size: int = 512) -> list[RegionPoint]:
    """Overlap upper bounds on the trace-distance grid delta = k/grid_size, k = 1..grid_size."""
    if n_max < 1 or grid_size < 2:
        raise DomainError("need n_max >= 1 and grid_size >= 2")
    deltas = [k / grid_size for k in range(1, grid_size + 1)]
    points = []
    for n in range(1, n_max + 1):
        for delta in deltas:
            theta = math.asin(delta)
            points.append(RegionPoint(delta, n, omega_upper_bound(theta, n)))
    return points


def region_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in points:
        writer.writerow([f"{p.delta:.9g}", p.n, f"{p.omega_upper:.9g}"])
    return buf.getvalue()


def haar_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def random_povm_search(theta: float, n: int, trials: int, seed: int = 0, batch: int = 4096) -> SearchResult:
    """Smallest sigma over random orthonormal measurement bases.

    Outcome x is the x-th column of a random unitary. With no trials the
    result is +inf with ``found`` false.
    """
    if n > SEARCH_MAX_QUBITS:
        raise ResourceError(f"random search limited to n <= {SEARCH_MAX_QUBITS}")
    if trials < 0:
        raise DomainError("trials must be non-negative")
    if trials == 0:
        return SearchResult(math.inf, False, 0, seed)
    pair = qcore.PreparationPair(theta)
    size = 1 << n
    preps = np.array([qcore.product_state(pair, x, n).amps for x in range(size)])
    rng = np.random.default_rng(seed)
    best = math.inf
    remaining = trials
    while remaining:
        count = min(batch, remaining)
        u = haar_unitaries(size, count, rng)
        # amplitude of preparation x on basis column x
        amps = np.einsum("bix,xi->bx", u.conj(), preps)
        sigmas = np.sum(np.abs(amps) ** 2, axis=1)
        best = min(best, float(sigmas.min()))
        remaining -= count
    return SearchResult(best, True, trials, seed)
