"""Green function of T0 + k^2 on (0, 1) and the Bessel-product inequality.

T0 u = -u'' - u/(4 r^2) with u(0) = u(1) = 0 (Friedrichs realisation) is
unitarily equivalent, via u = r^{1/2} w, to the zero-mode radial Laplacian
on L^2((0, 1), r dr). The diagonal of the kernel of (T0 + k^2)^{-1} is

    G(r, r, k^2) = r I0(kr) [K0(kr) - I0(kr) K0(k) / I0(k)]
                 <= r I0(kr) K0(kr) <= r (1 + |log(kr)|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.linalg import solve_banded

from .errors import DomainError, NumericalError
from .field import RadialPotential
from .specfun import bessel_i0, bessel_k0, i0k0_product
from .spectral import ModeSystem, count_negative_inertia

__all__ = [
    "GreenSample",
    "green_diag",
    "birman_schwinger_integral",
    "propjp_ratio",
    "t0_system",
    "point_source_green",
    "count_t0_negatives",
]


@dataclass(frozen=True)
class GreenSample:
    r: float | np.ndarray
    k: float
    value: float | np.ndarray
    bound: float | np.ndarray


def _check_k(k):
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"k must be finite and > 0, got {k}")
    return k


def green_diag(r, k: float = 1.0) -> GreenSample:
    """G(r, r, k^2) together with the majorant r (1 + |log(kr)|).

    ``r`` may be a scalar or an array in [0, 1]. Both vanish-at-the-ends
    values (r = 0 and r = 1) are returned as exact zeros.
    """
    k = _check_k(k)
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("r must lie in [0, 1]")
    a = np.atleast_1d(arr)
    value = np.zeros_like(a)
    bound = np.zeros_like(a)
    inner = (a > 0.0) & (a < 1.0)
    if np.any(inner):
        x = k * a[inner]
        i0x = bessel_i0(x)
        ratio = bessel_k0(k) / bessel_i0(k)
        value[inner] = a[inner] * (i0k0_product(x) - i0x * i0x * ratio)
    pos = a > 0.0
    bound[pos] = a[pos] * (1.0 + np.abs(np.log(k * a[pos])))
    if arr.ndim == 0:
        return GreenSample(float(arr), k, float(value[0]), float(bound[0]))
    return GreenSample(arr, k, value.reshape(arr.shape), bound.reshape(arr.shape))


def birman_schwinger_integral(v: RadialPotential, k: float = 1.0) -> float:
    """int_0^1 G(r, r, k^2) V(r) dr, which bounds N(T0 + k^2 - V)."""
    k = _check_k(k)
    if v.is_zero:
        return 0.0

    def f(r):
        return green_diag(r, k).value * v(r)

    val, err = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200)
    if not math.isfinite(val) or err > 1e-8 * max(abs(val), 1e-300):
        raise NumericalError("Birman-Schwinger quadrature did not converge", {"value": val, "error": err})
    return val


def propjp_ratio(r):
    """I0(r) K0(r) / (1 - log r) for 0 < r <= 1; never exceeds 1."""
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("r must lie in (0, 1]")
    out = i0k0_product(arr) / (1.0 - np.log(arr))
    return float(out) if np.ndim(out) == 0 else out


# ----------------------------------------------------------------------------
# finite-difference realisation of T0 + k^2 (- V)


def t0_system(n: int, k: float = 1.0, v: RadialPotential | None = None) -> ModeSystem:
    """Pencil for w -> (P0 + k^2 - V) w on L^2((0,1), r dr), h = 1/(n+1).

    P0 is the free-at-0, Dirichlet-at-1 radial form int |w'|^2 r dr, so the
    pencil is the image of T0 + k^2 - V under u = r^{1/2} w. Sampling
    -1/(4 r^2) at nodes instead converges only like 1/log(1/h) towards
    the Friedrichs realisation, which is why the weighted form is used.
    """
    if n < 16:
        raise DomainError("n must be >= 16")
    h = 1.0 / (n + 1)
    r = np.arange(1, n + 1) * h
    mid = (np.arange(n + 1) + 0.5) * h
    kin = (mid[:-1] + mid[1:]) / h
    kin[0] = mid[1] / h
    w = r * h
    vals = np.zeros(n) if v is None else v(r) * np.ones(n)
    diag = kin + (k * k) * w - vals * w
    return ModeSystem(0, diag, -mid[1:-1] / h, w)


def point_source_green(r, k: float = 1.0, n: int = 99_999) -> np.ndarray:
    """G(r, r, k^2) from a discrete unit point source at the node nearest r.

    Solves the pencil of ``t0_system`` against a Kronecker right-hand side
    and maps back through u = r^{1/2} w; the result is r_j [S^{-1}]_{jj}.
    """
    k = _check_k(k)
    sys = t0_system(n, k)
    h = 1.0 / (n + 1)
    ab = np.zeros((3, n))
    ab[0, 1:] = sys.off
    ab[1] = sys.diag
    ab[2, :-1] = sys.off
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(rs)
    for i, rp in enumerate(rs):
        j = int(round(rp / h)) - 1
        if not (0 <= j < n):
            raise DomainError(f"r={rp} is outside the interior grid")
        rhs = np.zeros(n)
        rhs[j] = 1.0
        sol = solve_banded((1, 1), ab, rhs)
        out[i] = (j + 1) * h * sol[j]
    return out


def count_t0_negatives(v: RadialPotential, k: float = 1.0, n: int = 20000) -> int:
    """Number of negative eigenvalues of the discretised T0 + k^2 - V."""
    return count_negative_inertia(t0_system(n, _check_k(k), v), 0.0)
