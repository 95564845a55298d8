"""Numpy versions of the truncated Taylor recurrences.

Same contract as the compiled module: arrays of shape (K+1, N) in, a new
array of the same shape out.
"""
import numpy as np


def mul(a, b):
    out = np.empty_like(a)
    for k in range(a.shape[0]):
        out[k] = (a[:k + 1] * b[k::-1]).sum(axis=0)
    return out


def div(a, b):
    q = np.empty_like(a)
    q[0] = a[0] / b[0]
    for k in range(1, a.shape[0]):
        q[k] = (a[k] - (b[1:k + 1] * q[k - 1::-1]).sum(axis=0)) / b[0]
    return q


def sqrt(a):
    r = np.empty_like(a)
    r[0] = np.sqrt(a[0])
    for k in range(1, a.shape[0]):
        acc = a[k] - (r[1:k] * r[k - 1:0:-1]).sum(axis=0)
        r[k] = acc / (2.0 * r[0])
    return r


def exp(a):
    e = np.empty_like(a)
    e[0] = np.exp(a[0])
    for k in range(1, a.shape[0]):
        j = np.arange(1, k + 1).reshape(-1, 1)
        e[k] = (j * a[1:k + 1] * e[k - 1::-1]).sum(axis=0) / k
    return e


def sincos(a):
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, a.shape[0]):
        j = np.arange(1, k + 1).reshape(-1, 1)
        s[k] = (j * a[1:k + 1] * c[k - 1::-1]).sum(axis=0) / k
        c[k] = -(j * a[1:k + 1] * s[k - 1::-1]).sum(axis=0) / k
    return s, c
