"""Truncated Taylor jets with batched coefficient arrays.

A jet of order K stores c_k = f^(k)(t0)/k! for k = 0..K.  Coefficients live in
an array of shape (K+1, *batch) so whole sample grids (and vector components)
are processed in one call.  The multiplicative recurrences run in a compiled
kernel when it is available; ``FLATEXT_PURE_PYTHON=1`` forces the numpy one.
"""
from __future__ import annotations

import math
import os

import numpy as np

from . import _jetcore_py
from .errors import DomainError
from .expr import Expr, parse

try:
    if os.environ.get("FLATEXT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python requested")
    from . import _jetcore as _compiled
except ImportError:
    _compiled = None

_BACKENDS = {"python": _jetcore_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_core = _BACKENDS.get("cython", _jetcore_py)
DEGENERACY_RATIO = 1e-13


def available_backends():
    return sorted(_BACKENDS)


def get_backend() -> str:
    return "cython" if _core is not _jetcore_py else "python"


def set_backend(name: str) -> str:
    """Switch the kernel backend, returning the previous name."""
    global _core
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    prev = get_backend()
    _core = _BACKENDS[name]
    return prev


def _flat(c):
    return np.ascontiguousarray(c.reshape(c.shape[0], -1), dtype=float)


def _expand(c, batch):
    """Broadcast coefficients of shape (K+1, *b) to (K+1, *batch)."""
    pad = len(batch) - (c.ndim - 1)
    c = c.reshape((c.shape[0],) + (1,) * pad + c.shape[1:])
    return np.broadcast_to(c, (c.shape[0],) + tuple(batch))


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


class Jet:
    """Immutable truncated Taylor jet, possibly batched."""

    __slots__ = ("coeffs",)
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0:
            raise ValueError("a jet needs at least one coefficient axis")
        c.flags.writeable = False
        self.coeffs = c

    # construction

    @classmethod
    def constant(cls, value, order, shape=None):
        value = np.asarray(value, dtype=float)
        if shape is not None:
            value = np.broadcast_to(value, shape)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, order):
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @staticmethod
    def stack(jets, axis=0):
        order = min(j.order for j in jets)
        batch = np.broadcast_shapes(*(j.shape for j in jets))
        arrs = [_expand(j.coeffs[:order + 1], batch) for j in jets]
        return Jet(np.stack(arrs, axis=axis + 1))

    # basic accessors

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, k: int):
        """k-th derivative at the expansion point."""
        return math.factorial(k) * self.coeffs[k]

    def derivatives(self):
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.coeffs * fact.reshape((-1,) + (1,) * len(self.shape))

    def d(self) -> "Jet":
        """Jet of the derivative, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float).reshape((-1,) + (1,) * len(self.shape))
        return Jet(self.coeffs[1:] * k)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.coeffs[:order + 1])

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.coeffs[(slice(None),) + idx])

    def sum(self, axis=0):
        return Jet(self.coeffs.sum(axis=axis + 1))

    def __len__(self):
        return self.shape[0]

    def __repr__(self):
        return f"Jet(order={self.order}, shape={self.shape})"

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    def _pair(self, other):
        other = self._coerce(other)
        m = min(self.order, other.order)
        batch = np.broadcast_shapes(self.shape, other.shape)
        return _expand(self.coeffs[:m + 1], batch), _expand(other.coeffs[:m + 1], batch)

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(a - b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(b - a)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.shape, other.shape)
            return Jet(_expand(self.coeffs, shape) * other)
        a, b = self._pair(other)
        return Jet(_core.mul(_flat(a), _flat(b)).reshape(a.shape))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            if np.any(other == 0.0):
                raise DomainError("division by a vanishing constant")
            shape = np.broadcast_shapes(self.shape, other.shape)
            return Jet(_expand(self.coeffs, shape) / other)
        a, b = self._pair(other)
        _check_nonvanishing(b, "division")
        return Jet(_core.div(_flat(a), _flat(b)).reshape(a.shape))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise TypeError("jets support non-negative integer powers only")
        if n == 0:
            return Jet.constant(np.ones(self.shape), self.order)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self):
        c = self.coeffs
        if np.any(c[0] < 0.0):
            raise DomainError("sqrt of a jet with negative constant term",)
        _check_nonvanishing(c, "sqrt")
        return Jet(_core.sqrt(_flat(c)).reshape(c.shape))

    def exp(self):
        c = self.coeffs
        return Jet(_core.exp(_flat(c)).reshape(c.shape))

    def _sincos(self):
        c = self.coeffs
        s, co = _core.sincos(_flat(c))
        return Jet(s.reshape(c.shape)), Jet(co.reshape(c.shape))

    def sin(self):
        return self._sincos()[0]

    def cos(self):
        return self._sincos()[1]

    def norm(self):
        """Euclidean norm over the leading batch axis."""
        return (self * self).sum(0).sqrt()


def _check_nonvanishing(c, what):
    scale = np.abs(c).max(axis=0)
    bad = np.abs(c[0]) <= DEGENERACY_RATIO * scale
    if np.any(bad):
        err = DomainError(f"{what} by a jet whose constant term vanishes")
        err.index = _first_bad(bad)
        raise err


def dot(a: Jet, b: Jet) -> Jet:
    return (a * b).sum(0)


def cross(a: Jet, b: Jet) -> Jet:
    return Jet.stack([a[1] * b[2] - a[2] * b[1],
                      a[2] * b[0] - a[0] * b[2],
                      a[0] * b[1] - a[1] * b[0]])


def det3(a: Jet, b: Jet, c: Jet) -> Jet:
    return dot(a, cross(b, c))


def cross4(a: Jet, b: Jet, c: Jet) -> Jet:
    """Vector X in R^4 with X.w = det[w, a, b, c] for every w."""
    comps = []
    for i in range(4):
        rows = [r for r in range(4) if r != i]
        m = det3(a[rows], b[rows], c[rows])
        comps.append(m if i % 2 == 0 else -m)
    return Jet.stack(comps)


def _as_jet(x, order, shape):
    if isinstance(x, Jet):
        if x.shape != shape:
            return Jet(_expand(x.coeffs, shape))
        return x
    return Jet.constant(x, order, shape)


def jet_lift(e, base, direction: str = "t", order: int = 6) -> Jet:
    """Jet of ``e`` along one parameter direction at the point ``base`` = (t, u).

    ``base`` entries may be arrays; the result is batched over their broadcast
    shape.
    """
    e = parse(e)
    t, u = (np.asarray(b, dtype=float) for b in base)
    shape = np.broadcast_shapes(t.shape, u.shape)
    if direction == "t":
        env = {"t": Jet.variable(np.broadcast_to(t, shape), order), "u": np.broadcast_to(u, shape)}
    elif direction == "u":
        env = {"t": np.broadcast_to(t, shape), "u": Jet.variable(np.broadcast_to(u, shape), order)}
    else:
        raise ValueError("direction must be 't' or 'u'")
    return _as_jet(e.evaluate(env), order, shape)


def jet_compose_curve(e, inner, order: int | None = None) -> Jet:
    """Compose e(t, u) with a curve given as a pair of jets (t(s), u(s))."""
    e = parse(e)
    tj, uj = inner
    if order is None:
        order = min(j.order for j in inner if isinstance(j, Jet))
    shape = np.broadcast_shapes(*(j.shape for j in inner if isinstance(j, Jet)))
    env = {"t": _as_jet(tj, order, shape).truncate(order),
           "u": _as_jet(uj, order, shape).truncate(order)}
    return _as_jet(e.evaluate(env), order, shape)


__all__ = ["Jet", "Expr", "parse", "jet_lift", "jet_compose_curve", "dot", "cross",
           "det3", "cross4", "set_backend", "get_backend", "available_backends"]
