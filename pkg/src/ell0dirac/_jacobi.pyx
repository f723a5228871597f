# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cyclic Jacobi sweeps for complex Hermitian matrices."""

from libc.math cimport sqrt, fabs


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef double offdiag_norm(double complex[:, ::1] a) nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += cabs2(a[i, j])
    return sqrt(s)


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                  double tol, int max_sweeps):
    """Diagonalize ``a`` in place, accumulating rotations into ``v``.

    Returns the number of sweeps performed, or -1 if the off-diagonal norm
    is still above ``tol`` after ``max_sweeps`` sweeps.
    """
    cdef int result
    with nogil:
        result = _sweeps(a, v, tol, max_sweeps)
    return result


cdef int _sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                 double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double r, app, aqq, tau, t, c, s
    cdef double complex e, ec, akp, akq, apk, aqk

    for sweep in range(max_sweeps + 1):
        if offdiag_norm(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = sqrt(cabs2(a[p, q]))
                if r < 1e-300:
                    continue
                e = a[p, q] / r
                ec = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = 1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                if tau < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    akp = v[k, p]
                    akq = v[k, q]
                    v[k, p] = c * akp - s * ec * akq
                    v[k, q] = s * e * akp + c * akq
    return -1
