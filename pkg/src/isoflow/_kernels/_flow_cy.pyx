# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for the staircase flow dL/dt = [L, P(L)].

Contract matches _flow_py.rk4_advance; see that module for the docstring.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef void _field(double complex[:, ::1] L, double complex[:, ::1] out,
                 Py_ssize_t n) noexcept nogil:
    # out = L P - P L with P = tril(L, -1) - triu(L, 1)
    cdef Py_ssize_t i, j, k
    cdef double complex acc, p_kj, p_ik
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                if k > j:
                    p_kj = L[k, j]
                elif k < j:
                    p_kj = -L[k, j]
                else:
                    p_kj = 0
                if i > k:
                    p_ik = L[i, k]
                elif i < k:
                    p_ik = -L[i, k]
                else:
                    p_ik = 0
                acc = acc + L[i, k] * p_kj - p_ik * L[k, j]
            out[i, j] = acc


def rk4_advance(cnp.ndarray[cnp.complex128_t, ndim=2] L_arr,
                cnp.ndarray[cnp.uint8_t, ndim=2, cast=True] mask_arr,
                double dt, Py_ssize_t nsteps):
    cdef Py_ssize_t n = L_arr.shape[0]
    cdef double complex[:, ::1] L = np.ascontiguousarray(L_arr)
    cdef cnp.uint8_t[:, ::1] mask = np.ascontiguousarray(mask_arr)
    cdef double complex[:, ::1] k1 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] k2 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] k3 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] k4 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = np.empty((n, n), dtype=np.complex128)
    cdef double max_leak = 0.0, max_f_inc = 0.0
    cdef double f_prev = 0.0, f, leak, mag
    cdef Py_ssize_t step, i, j
    cdef double sixth = dt / 6.0

    for i in range(n):
        f_prev += (i + 1) * L[i, i].real

    with nogil:
        for step in range(nsteps):
            _field(L, k1, n)
            for i in range(n):
                for j in range(n):
                    tmp[i, j] = L[i, j] + 0.5 * dt * k1[i, j]
            _field(tmp, k2, n)
            for i in range(n):
                for j in range(n):
                    tmp[i, j] = L[i, j] + 0.5 * dt * k2[i, j]
            _field(tmp, k3, n)
            for i in range(n):
                for j in range(n):
                    tmp[i, j] = L[i, j] + dt * k3[i, j]
            _field(tmp, k4, n)
            for i in range(n):
                for j in range(n):
                    L[i, j] = L[i, j] + sixth * (
                        k1[i, j] + 2.0 * (k2[i, j] + k3[i, j]) + k4[i, j])
            for i in range(n):
                for j in range(n):
                    if not mask[i, j]:
                        mag = abs(L[i, j])
                        if mag > max_leak:
                            max_leak = mag
                        L[i, j] = 0
            f = 0.0
            for i in range(n):
                f += (i + 1) * L[i, i].real
            if f - f_prev > max_f_inc:
                max_f_inc = f - f_prev
            f_prev = f

    L_arr[:, :] = np.asarray(L)
    return max_leak, max_f_inc
