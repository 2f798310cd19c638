# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures as ``_pykernels``.

The truncated Taylor arithmetic is specialised by hand: alpha^2 and beta
along Y + sU + tV are a quadratic and a linear polynomial in (s, t), so
their coefficients come straight from bilinear forms.
"""

from libc.math cimport sqrt
from cython.view cimport array as cvarray

from .errors import DomainError

cdef int RANDERS = 0


cdef struct T2:
    double a
    double b
    double c
    double d


cdef inline T2 t_mul(T2 x, T2 y) noexcept nogil:
    cdef T2 r
    r.a = x.a * y.a
    r.b = x.a * y.b + x.b * y.a
    r.c = x.a * y.c + x.c * y.a
    r.d = x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b
    return r


cdef inline T2 t_apply(T2 x, double f0, double f1, double f2) noexcept nogil:
    cdef T2 r
    r.a = f0
    r.b = f1 * x.b
    r.c = f1 * x.c
    r.d = f1 * x.d + f2 * x.b * x.c
    return r


cdef inline double bilinear(const double[:, ::1] G, const double[::1] u, const double[::1] v) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(3):
        for j in range(3):
            acc += G[i, j] * u[i] * v[j]
    return acc


cdef inline double bilinear_raw(const double[:, ::1] G, double* u, double* v) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(3):
        for j in range(3):
            acc += G[i, j] * u[i] * v[j]
    return acc


cdef int _mixed(int kind, const double[:, ::1] G, double* X, double* Y, double* U, double* V,
                double* out) noexcept nogil:
    """Writes 1/2 d2/dsdt F^2 to out; returns -1 on a Matsumoto domain violation."""
    cdef T2 q, beta, alpha, F, den, inv
    cdef double r
    q.a = bilinear_raw(G, Y, Y)
    q.b = 2.0 * bilinear_raw(G, U, Y)
    q.c = 2.0 * bilinear_raw(G, V, Y)
    q.d = 2.0 * bilinear_raw(G, U, V)
    beta.a = bilinear_raw(G, X, Y)
    beta.b = bilinear_raw(G, X, U)
    beta.c = bilinear_raw(G, X, V)
    beta.d = 0.0
    r = sqrt(q.a)
    alpha = t_apply(q, r, 0.5 / r, -0.25 / (r * q.a))
    if kind == RANDERS:
        F.a = alpha.a + beta.a
        F.b = alpha.b + beta.b
        F.c = alpha.c + beta.c
        F.d = alpha.d + beta.d
    else:
        den.a = alpha.a - beta.a
        den.b = alpha.b - beta.b
        den.c = alpha.c - beta.c
        den.d = alpha.d - beta.d
        if den.a <= 0.0:
            out[0] = den.a
            return -1
        inv = t_apply(den, 1.0 / den.a, -1.0 / (den.a * den.a), 2.0 / (den.a * den.a * den.a))
        F = t_mul(q, inv)
    F = t_mul(F, F)
    out[0] = 0.5 * F.d
    return 0


cdef inline void _load(const double[::1] src, double* dst) noexcept nogil:
    dst[0] = src[0]
    dst[1] = src[1]
    dst[2] = src[2]


def norm_value(int kind, const double[:, ::1] G, const double[::1] X, const double[::1] y):
    cdef double alpha = sqrt(bilinear(G, y, y))
    cdef double beta = bilinear(G, X, y)
    if kind == RANDERS:
        return alpha + beta
    if alpha - beta <= 0.0:
        raise DomainError(f"Matsumoto denominator alpha - beta = {alpha - beta!r} is not positive")
    return alpha * alpha / (alpha - beta)


def fundamental_form(int kind, const double[:, ::1] G, const double[::1] X, const double[::1] Y,
                     const double[::1] U, const double[::1] V):
    cdef double x[3]
    cdef double yy[3]
    cdef double u[3]
    cdef double v[3]
    cdef double out
    _load(X, x)
    _load(Y, yy)
    _load(U, u)
    _load(V, v)
    if _mixed(kind, G, x, yy, u, v, &out) < 0:
        raise DomainError(f"Matsumoto denominator alpha - beta = {out!r} is not positive")
    return out


cdef int _matrix(int kind, const double[:, ::1] G, double* x, double* yy, double[:, ::1] M) noexcept nogil:
    cdef double ei[3]
    cdef double ej[3]
    cdef double out
    cdef Py_ssize_t i, j, k
    for i in range(3):
        for j in range(i, 3):
            for k in range(3):
                ei[k] = 1.0 if k == i else 0.0
                ej[k] = 1.0 if k == j else 0.0
            if _mixed(kind, G, x, yy, ei, ej, &out) < 0:
                M[0, 0] = out
                return -1
            M[i, j] = out
            M[j, i] = out
    return 0


def fundamental_matrix(int kind, const double[:, ::1] G, const double[::1] X, const double[::1] Y):
    cdef double x[3]
    cdef double yy[3]
    cdef cvarray res = cvarray(shape=(3, 3), itemsize=sizeof(double), format="d")
    cdef double[:, ::1] M = res
    _load(X, x)
    _load(Y, yy)
    if _matrix(kind, G, x, yy, M) < 0:
        raise DomainError(f"Matsumoto denominator alpha - beta = {M[0, 0]!r} is not positive")
    return res


def fundamental_matrices(int kind, const double[:, ::1] G, const double[::1] X, const double[:, ::1] Ys):
    """Ys must hold at least one row."""
    cdef Py_ssize_t n = Ys.shape[0], m
    cdef double x[3]
    cdef double yy[3]
    cdef cvarray res = cvarray(shape=(n, 3, 3), itemsize=sizeof(double), format="d")
    cdef double[:, :, ::1] out = res
    cdef int status = 0
    _load(X, x)
    with nogil:
        for m in range(n):
            yy[0] = Ys[m, 0]
            yy[1] = Ys[m, 1]
            yy[2] = Ys[m, 2]
            if _matrix(kind, G, x, yy, out[m]) < 0:
                status = -1
                break
    if status < 0:
        raise DomainError(f"Matsumoto denominator alpha - beta = {out[m, 0, 0]!r} is not positive")
    return res
