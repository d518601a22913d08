# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernel for ``n <= 2``.  Same contract as
``opradius._kernels_py.top_eig``.

Tiny matrices are where the numpy path loses most of its time to per-call
overhead, so the combination and its top eigenpair are done in one C loop
with closed forms.  Larger sizes are dispatched to the batched numpy
``eigh`` in :mod:`opradius.kernels`: per-matrix LAPACK calls from C were
measured no faster than it.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot

cnp.import_array()

cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void _top_2x2(double complex* h, double* lam, double complex* x) noexcept nogil:
    # h is column-major 2x2, lower triangle valid
    cdef double a = h[0].real
    cdef double d = h[3].real
    cdef double complex b = h[1].conjugate()  # H[0, 1]
    cdef double rad = hypot((a - d) / 2, sqrt(_abs2(b)))
    cdef double l = (a + d) / 2 + rad
    cdef double complex v1a = b, v1b = l - a
    cdef double complex v2a = l - d, v2b = b.conjugate()
    cdef double n1 = sqrt(_abs2(v1a) + _abs2(v1b))
    cdef double n2 = sqrt(_abs2(v2a) + _abs2(v2b))
    lam[0] = l
    if n1 == 0 and n2 == 0:
        x[0] = 1
        x[1] = 0
    elif n1 >= n2:
        x[0] = v1a / n1
        x[1] = v1b / n1
    else:
        x[0] = v2a / n2
        x[1] = v2b / n2


def top_eig(basis, member, dirs):
    cdef double complex[:, :, :, ::1] B = np.ascontiguousarray(basis, dtype=np.complex128)
    cdef cnp.intp_t[::1] mem = np.ascontiguousarray(member, dtype=np.intp)
    cdef double[:, ::1] U = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef Py_ssize_t m = U.shape[0]
    cdef int d = <int>B.shape[1]
    cdef int n = <int>B.shape[2]
    if n > 2:
        raise ValueError("compiled kernel handles n <= 2 only")

    lam_arr = np.empty(m, dtype=np.float64)
    q_arr = np.empty((m, d), dtype=np.float64)
    x_arr = np.empty((m, n), dtype=np.complex128)
    cdef double[::1] lam = lam_arr
    cdef double[:, ::1] q = q_arr
    cdef double complex[:, ::1] X = x_arr
    cdef double complex H[4]
    cdef double complex Z[2]

    cdef Py_ssize_t j, i, r, c, k, f
    cdef double acc
    cdef double complex s, y
    with nogil:
        for j in range(m):
            f = mem[j]
            for c in range(n):
                for r in range(c, n):
                    s = 0
                    for k in range(d):
                        s = s + U[j, k] * B[f, k, r, c]
                    H[r + c * n] = s
                    H[c + r * n] = s.conjugate()
            if n == 1:
                lam[j] = H[0].real
                Z[0] = 1
            else:
                _top_2x2(&H[0], &lam[j], &Z[0])
            for i in range(n):
                X[j, i] = Z[i]
            # q_k = x^* B_k x, real because B_k is Hermitian
            for k in range(d):
                acc = 0
                for r in range(n):
                    y = 0
                    for c in range(n):
                        y = y + B[f, k, r, c] * Z[c]
                    acc = acc + (Z[r].conjugate() * y).real
                q[j, k] = acc
    return lam_arr, q_arr, x_arr
