# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector kernels.

Mirrors ``_kernels_py`` function for function; the two are selected in
``_backend``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin

cnp.import_array()


cdef inline int _popcount(Py_ssize_t v) nogil:
    cdef int c = 0
    while v:
        v &= v - 1
        c += 1
    return c


def walsh_hadamard(cnp.ndarray[cnp.complex128_t, ndim=1] amps):
    """n-fold Hadamard transform, normalized by 2**(-n/2)."""
    cdef Py_ssize_t size = amps.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = amps.copy()
    cdef double complex[::1] a = out
    cdef Py_ssize_t h = 1, i, j
    cdef double complex u, v
    cdef int n = 0
    cdef double scale
    with nogil:
        while h < size:
            i = 0
            while i < size:
                for j in range(i, i + h):
                    u = a[j]
                    v = a[j + h]
                    a[j] = u + v
                    a[j + h] = u - v
                i += 2 * h
            h *= 2
            n += 1
        scale = 1.0
        for i in range(n // 2):
            scale *= 0.5
        if n % 2:
            scale /= sqrt(2.0)
        for i in range(size):
            a[i] = a[i] * scale
    return out


def phase_by_popcount(cnp.ndarray[cnp.complex128_t, ndim=1] amps, int n, double beta):
    """Multiply amps[z] by exp(i * beta * popcount(z))."""
    cdef Py_ssize_t size = amps.shape[0], z
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = amps.copy()
    cdef double complex[::1] a = out
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] table = np.exp(1j * beta * np.arange(n + 1))
    cdef double complex[::1] powers = table
    with nogil:
        for z in range(size):
            a[z] = a[z] * powers[_popcount(z)]
    return out


def product_amplitudes(int n, double c, double s, Py_ssize_t xmask):
    """Amplitudes c**(n-|z|) * s**|z| * (-1)**|x & z| of a product state."""
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << n, z
    cdef cnp.ndarray[cnp.float64_t, ndim=1] weights = np.empty(n + 1)
    cdef double[::1] w = weights
    cdef int k, m
    for k in range(n + 1):
        w[k] = 1.0
        for m in range(n - k):
            w[k] *= c
        for m in range(k):
            w[k] *= s
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] a = out
    with nogil:
        for z in range(size):
            if _popcount(xmask & z) & 1:
                a[z] = -w[_popcount(z)]
            else:
                a[z] = w[_popcount(z)]
    return out


def popcounts(int n):
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << n, z
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(size, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for z in range(size):
            o[z] = _popcount(z)
    return out


def compensated_sum(values):
    """Sequential Kahan-Babuska sum; independent of any threading."""
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef double total = 0.0, comp = 0.0, t
    cdef Py_ssize_t i
    with nogil:
        for i in range(v.shape[0]):
            t = total + v[i]
            if abs(total) >= abs(v[i]):
                comp += (total - t) + v[i]
            else:
                comp += (v[i] - t) + total
            total = t
    return total + comp


def norm_sq(amps):
    cdef const double complex[::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef double total = 0.0, comp = 0.0, t, x
    cdef Py_ssize_t i
    with nogil:
        for i in range(a.shape[0]):
            x = a[i].real * a[i].real + a[i].imag * a[i].imag
            t = total + x
            if total >= x:
                comp += (total - t) + x
            else:
                comp += (x - t) + total
            total = t
    return total + comp
