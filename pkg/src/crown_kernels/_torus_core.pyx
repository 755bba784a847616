# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled torus quadrature kernel; same contract as _torus_py.density_band_sum."""

from libc.math cimport sin, cos, M_PI


def density_band_sum(double[::1] x, double[::1] y, double[::1] u, double[::1] v,
                     double[::1] jx, double[::1] jy, int k, int p, int q,
                     double delta, int row_start, int row_stop):
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i, j, kk
    cdef double re = 0.0, im = 0.0
    cdef double sf, sd, amp, ph, dist, w
    cdef Py_ssize_t diff
    with nogil:
        for i in range(row_start, row_stop):
            for j in range(n):
                diff = i - j
                if diff < 0:
                    diff = -diff
                if n - diff < diff:
                    diff = n - diff
                dist = 2.0 * M_PI * diff / n
                if dist < delta:
                    continue
                sf = sin(0.5 * (x[i] - y[j]))
                sd = sin(0.5 * (u[i] - v[j]))
                amp = 1.0
                for kk in range(k):
                    amp = amp * sf * sf
                w = amp / (4.0 * sd * sd) * jx[i] * jy[j]
                ph = p * x[i] - q * y[j]
                re = re + w * cos(ph)
                im = im + w * sin(ph)
    return complex(re, im)
