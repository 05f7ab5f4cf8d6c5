import numpy as np
import pytest

from psiontic import _backend, _kernels_py

from conftest import random_state_amps

pytestmark = pytest.mark.skipif("cython" not in _backend.AVAILABLE, reason="compiled kernels not built")


@pytest.mark.parametrize("n", range(1, 13))
def test_backends_agree(n, rng):
    compiled = _backend.AVAILABLE["cython"]
    amps = random_state_amps(rng, n)
    np.testing.assert_allclose(compiled.walsh_hadamard(amps), _kernels_py.walsh_hadamard(amps), atol=1e-14)
    np.testing.assert_allclose(compiled.phase_by_popcount(amps, n, 0.77), _kernels_py.phase_by_popcount(amps, n, 0.77), atol=1e-15)
    for xmask in (0, (1 << n) - 1, int(rng.integers(1 << n))):
        np.testing.assert_allclose(compiled.product_amplitudes(n, 0.9, 0.4, xmask),
                                   _kernels_py.product_amplitudes(n, 0.9, 0.4, xmask), atol=1e-15)
    np.testing.assert_array_equal(compiled.popcounts(n), _kernels_py.popcounts(n))
    assert compiled.norm_sq(amps) == pytest.approx(_kernels_py.norm_sq(amps), abs=1e-15)
    probs = np.abs(amps) ** 2
    assert compiled.compensated_sum(probs) == pytest.approx(_kernels_py.compensated_sum(probs), abs=1e-15)


def test_compensated_sum_is_accurate():
    compiled = _backend.AVAILABLE["cython"]
    values = np.array([1.0, 1e-16] * 1000 + [-1.0] * 1000)
    assert compiled.compensated_sum(values) == pytest.approx(1e-13, rel=1e-6)
    assert compiled.compensated_sum(values) == compiled.compensated_sum(values.copy())


def test_kernels_do_not_mutate_input(rng):
    compiled = _backend.AVAILABLE["cython"]
    amps = random_state_amps(rng, 4)
    before = amps.copy()
    compiled.walsh_hadamard(amps)
    compiled.phase_by_popcount(amps, 4, 1.0)
    np.testing.assert_array_equal(amps, before)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.use_backend("fortran")
