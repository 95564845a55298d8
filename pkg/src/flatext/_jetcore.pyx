# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated Taylor recurrences.

Every kernel takes float64 arrays of shape (K+1, N), coefficient index first,
and returns a freshly allocated array of the same shape.
"""
import numpy as np
from libc.math cimport sqrt as csqrt, exp as cexp, sin as csin, cos as ccos


def mul(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], k, j, i
    out = np.zeros((m, n))
    cdef double[:, ::1] o = out
    for k in range(m):
        for j in range(k + 1):
            for i in range(n):
                o[k, i] += a[j, i] * b[k - j, i]
    return out


def div(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], k, j, i
    out = np.empty((m, n))
    cdef double[:, ::1] q = out
    for k in range(m):
        for i in range(n):
            q[k, i] = a[k, i]
        for j in range(1, k + 1):
            for i in range(n):
                q[k, i] -= b[j, i] * q[k - j, i]
        for i in range(n):
            q[k, i] /= b[0, i]
    return out


def sqrt(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], k, j, i
    out = np.empty((m, n))
    cdef double[:, ::1] r = out
    for i in range(n):
        r[0, i] = csqrt(a[0, i])
    for k in range(1, m):
        for i in range(n):
            r[k, i] = a[k, i]
        for j in range(1, k):
            for i in range(n):
                r[k, i] -= r[j, i] * r[k - j, i]
        for i in range(n):
            r[k, i] /= 2.0 * r[0, i]
    return out


def exp(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], k, j, i
    out = np.zeros((m, n))
    cdef double[:, ::1] e = out
    for i in range(n):
        e[0, i] = cexp(a[0, i])
    for k in range(1, m):
        for j in range(1, k + 1):
            for i in range(n):
                e[k, i] += j * a[j, i] * e[k - j, i]
        for i in range(n):
            e[k, i] /= k
    return out


def sincos(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], k, j, i
    s_out = np.zeros((m, n))
    c_out = np.zeros((m, n))
    cdef double[:, ::1] s = s_out
    cdef double[:, ::1] c = c_out
    for i in range(n):
        s[0, i] = csin(a[0, i])
        c[0, i] = ccos(a[0, i])
    for k in range(1, m):
        for j in range(1, k + 1):
            for i in range(n):
                s[k, i] += j * a[j, i] * c[k - j, i]
                c[k, i] -= j * a[j, i] * s[k - j, i]
        for i in range(n):
            s[k, i] /= k
            c[k, i] /= k
    return s_out, c_out
