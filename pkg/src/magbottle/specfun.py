"""Modified Bessel functions of order zero and related series.

Everything here is self-contained (no scipy.special): power series for the
I-functions, the logarithmic series for K near the origin, and the
trapezoid rule on the integral representation

    K0(x) = int_0^inf exp(-x cosh t) dt

for larger arguments. The integrand is entire in t and decays doubly
exponentially, so a fixed step of 1/16 is accurate to machine precision
for every x > 2.

All functions accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "CONSTANTS",
    "SpecFunConstants",
    "bessel_i0",
    "bessel_i0_prime",
    "bessel_k0",
    "bessel_k0_prime",
    "i0k0_product",
    "delta_latata",
    "delta_parts",
    "harmonic_series",
]


@dataclass(frozen=True)
class SpecFunConstants:
    euler_gamma: float = 0.57721566490153286061
    zeta3: float = 1.20205690315959428540
    log2: float = 0.69314718055994530942


CONSTANTS = SpecFunConstants()

_EPS = 1e-17
_MAX_TERMS = 2000
# K switches from the log series to the integral representation here.
K_SWITCH = 2.0
_TRAP_STEP = 1.0 / 16.0
_TRAP_NODES = np.arange(0.0, 4.0 + _TRAP_STEP / 2, _TRAP_STEP)
_TRAP_WEIGHTS = np.full(_TRAP_NODES.shape, _TRAP_STEP)
_TRAP_WEIGHTS[0] *= 0.5


def _prepare(x, *, strictly_positive, upper=None, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if strictly_positive and np.any(arr <= 0):
        raise DomainError(f"{name} must be > 0")
    if not strictly_positive and np.any(arr < 0):
        raise DomainError(f"{name} must be >= 0")
    if upper is not None and np.any(arr > upper):
        raise DomainError(f"{name} must be <= {upper}")
    return arr


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def _i_series(x):
    """Return (I0(x), I1(x)) by their power series."""
    q = 0.25 * x * x
    t0 = np.ones_like(x)
    t1 = np.ones_like(x)
    s0 = np.ones_like(x)
    s1 = np.ones_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, _MAX_TERMS):
            t0 = t0 * q / (k * k)
            t1 = t1 * q / (k * (k + 1))
            s0 = s0 + t0
            s1 = s1 + t1
            if np.all(t0 <= _EPS * s0) and np.all(t1 <= _EPS * s1):
                break
    return s0, 0.5 * x * s1


def harmonic_series(x):
    """Return (S, D) with S = sum_{k>=1} H_k q^k / k!^2 and
    D = sum_{k>=1} k H_k q^k / k!^2, where q = x^2/4 and H_k is the
    k-th harmonic number.

    Terms are dropped once they fall below 1e-16 of the running sum.
    """
    x = np.asarray(x, dtype=float)
    q = 0.25 * x * x
    t = np.ones_like(x)
    h = 0.0
    s = np.zeros_like(x)
    d = np.zeros_like(x)
    for k in range(1, _MAX_TERMS):
        t = t * q / (k * k)
        h += 1.0 / k
        term = h * t
        s = s + term
        d = d + k * term
        if np.all(term <= 1e-16 * s):
            break
    return s, d


def _k_small(x):
    """(K0, K0') from the logarithmic series; meant for 0 < x <= K_SWITCH."""
    i0, i1 = _i_series(x)
    s, d = harmonic_series(x)
    c = np.log(0.5 * x) + CONSTANTS.euler_gamma
    k0 = -c * i0 + s
    k0p = -i0 / x - c * i1 + 2.0 * d / x
    return k0, k0p


def _k_integral(x):
    """(K0, K0') by the trapezoid rule on the cosh integral."""
    x = np.asarray(x, dtype=float)
    ch = np.cosh(_TRAP_NODES)
    e = np.exp(-np.multiply.outer(x, ch - 1.0))
    scale = np.exp(-x)
    k0 = scale * (e @ _TRAP_WEIGHTS)
    k0p = -scale * (e @ (_TRAP_WEIGHTS * ch))
    return k0, k0p


def _k_both(x):
    k0 = np.empty_like(x)
    k0p = np.empty_like(x)
    small = x <= K_SWITCH
    if np.any(small):
        k0[small], k0p[small] = _k_small(x[small])
    if np.any(~small):
        k0[~small], k0p[~small] = _k_integral(x[~small])
    return k0, k0p


def bessel_i0(x):
    """Modified Bessel function I0 for x >= 0."""
    arr = _prepare(x, strictly_positive=False)
    return _out(_i_series(np.atleast_1d(arr))[0].reshape(arr.shape), x)


def bessel_i0_prime(x):
    """Derivative of I0 (which is I1), x >= 0."""
    arr = _prepare(x, strictly_positive=False)
    return _out(_i_series(np.atleast_1d(arr))[1].reshape(arr.shape), x)


def bessel_k0(x):
    """Modified Bessel function K0 for x > 0."""
    arr = _prepare(x, strictly_positive=True)
    return _out(_k_both(np.atleast_1d(arr))[0].reshape(arr.shape), x)


def bessel_k0_prime(x):
    """Derivative of K0 (which is -K1), x > 0."""
    arr = _prepare(x, strictly_positive=True)
    return _out(_k_both(np.atleast_1d(arr))[1].reshape(arr.shape), x)


def _delta(r):
    i0, _ = _i_series(r)
    s, _ = harmonic_series(r)
    i0sq = i0 * i0
    g = CONSTANTS.euler_gamma - CONSTANTS.log2
    part1 = (1.0 - i0sq) * np.log(r)
    part2 = -g * i0sq
    part3 = i0 * s
    return part1, part2, part3


def delta_parts(r):
    """The three non-negative pieces of delta(r), returned as a tuple.

    part1 = (1 - I0^2) log r, part2 = (log 2 - gamma) I0^2,
    part3 = I0 * sum_k H_k (r^2/4)^k / k!^2.
    """
    arr = _prepare(r, strictly_positive=True, upper=1.0, name="r")
    parts = _delta(np.atleast_1d(arr))
    return tuple(_out(p.reshape(arr.shape), r) for p in parts)


def delta_latata(r):
    """delta(r) = I0(r) K0(r) + log r, written through the series of K0.

    Defined for 0 < r <= 1, where it stays below 1.
    """
    arr = _prepare(r, strictly_positive=True, upper=1.0, name="r")
    p1, p2, p3 = _delta(np.atleast_1d(arr))
    return _out((p1 + p2 + p3).reshape(arr.shape), r)


def i0k0_product(x):
    """I0(x) K0(x) for x > 0.

    For x <= 1 the product is formed as delta(x) - log x, which keeps the
    dominant logarithm separate from the bounded remainder.
    """
    arr = _prepare(x, strictly_positive=True)
    a = np.atleast_1d(arr)
    out = np.empty_like(a)
    small = a <= 1.0
    if np.any(small):
        p1, p2, p3 = _delta(a[small])
        out[small] = (p1 + p2 + p3) - np.log(a[small])
    if np.any(~small):
        big = a[~small]
        out[~small] = _i_series(big)[0] * _k_both(big)[0]
    return _out(out.reshape(arr.shape), x)
