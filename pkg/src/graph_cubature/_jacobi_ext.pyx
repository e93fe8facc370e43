# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi kernel.

Mirrors ``_jacobi_py.jacobi_diagonalize`` operation for operation so both
backends produce the same rotations in the same order.
"""
from libc.math cimport sqrt, fabs


cdef inline double _off_norm(double[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t p, q
    cdef double s = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            s += a[p, q] * a[p, q]
    return sqrt(2.0 * s)


def jacobi_diagonalize(double[:, ::1] a, double[:, ::1] v, double tol,
                       int max_sweeps):
    """Diagonalize symmetric ``a`` in place, accumulating rotations into ``v``.

    Returns ``(sweeps, off)`` where ``off`` is the off-diagonal Frobenius
    norm at exit. The loop stops once ``off <= tol``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, apq, theta, t, c, s, x, y

    with nogil:
        off = _off_norm(a, n)
        while off > tol and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    elif theta >= 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - s * y
                        a[k, q] = s * x + c * y
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * y
                        a[q, k] = s * x + c * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * y
                        v[k, q] = s * x + c * y
            sweep += 1
            off = _off_norm(a, n)
    return sweep, off
