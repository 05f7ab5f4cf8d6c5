"""The zero-probability measurement circuit and its parameters.

For n copies of the preparation pair at angle theta the circuit is
U = H^n R_alpha Z_beta^n followed by a computational-basis measurement.
Outcome x has amplitude

    2**(-n/2) cos(theta/2)**n (e^{i alpha} + (1 + e^{i beta} t)**n - 1)

on the product preparation x, with t = tan(theta/2). Choosing beta so that
|1 - (1 + e^{i beta} t)**n| = 1 and alpha as the argument of that number
makes every such amplitude vanish.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import qcore
from .errors import DomainError, InfeasibleError, NumericalError, ResourceError

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200
SCAN_POINTS = 64
POVM_MAX_QUBITS = 12
DENSE_EFFECTS_MAX_QUBITS = 6
ANALYTIC_TOL = 1e-9
# tan(pi/8) rounds 1.1e-16 below sqrt(2) - 1; boundary angles are feasible
FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class CircuitParams:
    n: int
    theta: float
    alpha: float
    beta: float
    solved: bool = False
    residual: float | None = None
    bracket: tuple[float, float] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        qcore.PreparationPair(self.theta)

    @property
    def t(self) -> float:
        return math.tan(self.theta / 2)


def _check_theta(theta: float) -> None:
    if not (math.isfinite(theta) and 0.0 < theta <= math.pi / 2):
        raise DomainError(f"theta must lie in (0, pi/2], got {theta!r}")


def is_feasible(theta: float, n: int) -> bool:
    """True when 2**(1/n) - 1 <= tan(theta/2), up to rounding at the boundary."""
    return 2.0 ** (1.0 / n) - 1.0 <= math.tan(theta / 2) + FEASIBILITY_SLACK


def min_n(theta: float) -> int:
    """Fewest systems for which the circuit has a zero-probability solution."""
    _check_theta(theta)
    t = math.tan(theta / 2)
    # 2**(1/n) <= 1 + t  <=>  n >= ln 2 / ln(1 + t)
    n = max(1, math.ceil(math.log(2.0) / math.log1p(t)) - 1)
    while not is_feasible(theta, n):
        n += 1
    while n > 1 and is_feasible(theta, n - 1):
        n -= 1
    return n


def f_beta(beta: float, theta: float, n: int) -> complex:
    t = math.tan(theta / 2)
    return 1.0 - (1.0 + cmath.exp(1j * beta) * t) ** n


def analytic_beta_n2(theta: float) -> float:
    """Closed-form root of |f(beta)| = 1 for two systems."""
    t = math.tan(theta / 2)
    arg = (1.0 - 4 * t**2 - t**4) / (4 * t**3)
    if abs(arg) > 1.0 + 1e-12:
        raise InfeasibleError(f"no two-system solution at theta={theta!r}")
    return math.acos(min(1.0, max(-1.0, arg)))


def _bisect(g, lo: float, hi: float, g_lo: float, tol: float) -> float:
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = g(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    else:
        raise NumericalError(f"bisection did not converge in {MAX_BISECTIONS} iterations")
    root = lo if abs(g_lo) <= abs(g(hi)) else hi
    if abs(g(root)) > tol:
        raise NumericalError(f"bisection stalled with residual {abs(g(root)):.3e}")
    return root


def solve_params(theta: float, n: int, tol: float = DEFAULT_TOL) -> CircuitParams:
    """Find (alpha, beta) making every forbidden outcome impossible.

    The bracket [0, pi] is scanned for the first sign change of
    |f(beta)| - 1, which is then bisected. For n = 2 the root is checked
    against the closed-form value.
    """
    _check_theta(theta)
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not is_feasible(theta, n):
        raise InfeasibleError(
            f"n={n} is too small for theta={theta!r}; need n >= {min_n(theta)}"
        )

    def g(beta):
        return abs(f_beta(beta, theta, n)) - 1.0

    g0 = g(0.0)
    if g0 <= tol:
        # on (or within rounding of) the boundary: beta = 0 already works
        beta, bracket = 0.0, (0.0, 0.0)
    else:
        grid = np.linspace(0.0, math.pi, SCAN_POINTS + 1)
        lo, g_lo = 0.0, g0
        for hi in grid[1:]:
            g_hi = g(float(hi))
            if g_hi <= 0.0:
                break
            lo, g_lo = float(hi), g_hi
        else:
            raise NumericalError("no sign change of |f(beta)| - 1 on [0, pi]")
        hi = float(hi)
        bracket = (lo, hi)
        beta = hi if g_hi == 0.0 else _bisect(g, lo, hi, g_lo, tol)

    residual = abs(g(beta))
    if residual > tol:
        raise NumericalError(f"residual {residual:.3e} above tolerance {tol:.1e}")
    if n == 2:
        exact = analytic_beta_n2(theta)
        if abs(exact - beta) > ANALYTIC_TOL:
            raise NumericalError(
                f"bisection beta={beta!r} disagrees with closed form {exact!r}"
            )
    alpha = cmath.phase(f_beta(beta, theta, n))
    return CircuitParams(n, theta, alpha, beta, solved=True, residual=residual, bracket=bracket)


def forbidden_amplitude(params: CircuitParams) -> complex:
    """Amplitude of outcome x on preparation x; the same for every x."""
    n, t = params.n, params.t
    prefactor = 2.0 ** (-n / 2) * math.cos(params.theta / 2) ** n
    core = cmath.exp(1j * params.alpha) + (1.0 + cmath.exp(1j * params.beta) * t) ** n - 1.0
    return prefactor * core


@dataclass(frozen=True)
class MeasurementSpec:
    """Rank-one effects E_x = |v_x><v_x| with v_x = U^dagger |x>.

    ``vectors[x]`` holds v_x; dense effect matrices are formed on demand.
    """

    n: int
    vectors: np.ndarray

    def effect(self, x: int) -> np.ndarray:
        v = self.vectors[x]
        return np.outer(v, v.conj())

    def effects(self) -> np.ndarray:
        if self.n > DENSE_EFFECTS_MAX_QUBITS:
            raise ResourceError(
                f"dense effect stack for n={self.n} is too large; use effect(x)"
            )
        v = self.vectors
        return np.einsum("xi,xj->xij", v, v.conj())

    def completeness_error(self) -> float:
        total = self.vectors.T @ self.vectors.conj()
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))

    def probabilities(self, state: qcore.StateVector) -> np.ndarray:
        return np.abs(self.vectors.conj() @ state.amps) ** 2


def build_povm(params: CircuitParams, check: bool = True) -> MeasurementSpec:
    n = params.n
    if n > POVM_MAX_QUBITS:
        raise ResourceError(f"POVM materialization capped at n={POVM_MAX_QUBITS}")
    qcore.check_qubits(n)
    size = 1 << n
    vectors = np.empty((size, size), dtype=np.complex128)
    for x in range(size):
        state = qcore.apply_circuit_inverse(qcore.StateVector.basis(n, x), params.alpha, params.beta)
        vectors[x] = state.amps
    vectors.flags.writeable = False
    spec = MeasurementSpec(n, vectors)
    if check:
        err = spec.completeness_error()
        if err > 1e-10:
            raise NumericalError(f"effects do not sum to identity (error {err:.3e})")
    return spec
