"""Pure numpy state-vector kernels, used when the compiled module is absent."""
import math

import numpy as np


def popcounts(n):
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    return counts


def walsh_hadamard(amps):
    """n-fold Hadamard transform, normalized by 2**(-n/2)."""
    size = amps.shape[0]
    n = size.bit_length() - 1
    out = np.array(amps, dtype=np.complex128, copy=True)
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        top = view[:, 0, :] + view[:, 1, :]
        bottom = view[:, 0, :] - view[:, 1, :]
        view[:, 0, :] = top
        view[:, 1, :] = bottom
        h *= 2
    scale = 0.5 ** (n // 2)
    if n % 2:
        scale /= np.sqrt(2.0)
    return out * scale


def phase_by_popcount(amps, n, beta):
    """Multiply amps[z] by exp(i * beta * popcount(z))."""
    powers = np.exp(1j * beta * np.arange(n + 1))
    return amps * powers[popcounts(n)]


def product_amplitudes(n, c, s, xmask):
    """Amplitudes c**(n-|z|) * s**|z| * (-1)**|x & z| of a product state."""
    out = np.ones(1, dtype=np.complex128)
    for i in range(n):
        bit = (xmask >> (n - 1 - i)) & 1
        out = np.kron(out, np.array([c, -s if bit else s], dtype=np.complex128))
    return out


def compensated_sum(values):
    return math.fsum(values.tolist())


def norm_sq(amps):
    return math.fsum((amps.real * amps.real + amps.imag * amps.imag).tolist())
