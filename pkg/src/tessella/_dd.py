"""Vectorized double-double arithmetic on numpy arrays.

A value is a pair ``(hi, lo)`` of float64 arrays with ``|lo| <= ulp(hi)/2``,
giving about 32 significant digits.  Only what patch construction needs is
provided: sums, products and small matrix products.
"""
from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2^27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(x, y):
    s, e = two_sum(x[0], y[0])
    e = e + (x[1] + y[1])
    return quick_two_sum(s, e)


def sub(x, y):
    return add(x, (-y[0], -y[1]))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


def matmul(a, b):
    """``a @ b`` for stacks of matrices/vectors, contracting a's last axis with b's second-to-last.

    Shapes follow numpy broadcasting, with b treated as a matrix (``(..., k, n)``).
    """
    ah, al = a
    bh, bl = b
    k = ah.shape[-1]
    out = None
    for i in range(k):
        term = mul((ah[..., :, i : i + 1], al[..., :, i : i + 1]), (bh[..., i : i + 1, :], bl[..., i : i + 1, :]))
        out = term if out is None else add(out, term)
    return out


def from_float(a):
    a = np.asarray(a, dtype=float)
    return a, np.zeros_like(a)


def from_mpmath(values) -> tuple[np.ndarray, np.ndarray]:
    import mpmath

    arr = np.asarray(values, dtype=object)
    with mpmath.workdps(40):
        hi = np.vectorize(lambda v: float(v), otypes=[float])(arr)
        lo = np.vectorize(lambda v, h: float(v - h), otypes=[float])(arr, hi)
    return hi, lo


def to_float(x) -> np.ndarray:
    return x[0] + x[1]


def take(x, idx):
    return x[0][idx], x[1][idx]
