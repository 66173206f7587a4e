"""Radial magnetic fields, radial potentials and the flux function.

A field on the unit disk is b(r) = b0(r) (1 - r)^(-beta) with b0 a
constant or a polynomial that is positive on [0, 1]. The flux through the
disk of radius r is

    A(r) = int_0^r b(t) t dt,

and the squared-potential integral is I = int_0^1 (A(r)/r)^2 r dr.

For catalog profiles A has a closed form in u = 1 - r (a finite sum of
powers u^e, plus log u when beta = 1), used for r > 1/2. For r <= 1/2 the
binomial series of (1 - t)^(-beta) is integrated term by term, which
avoids the cancellation the closed form suffers near r = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly

from .errors import AdmissibilityError, DomainError, NumericalError

__all__ = [
    "Profile",
    "RadialField",
    "RadialPotential",
    "FluxTable",
    "LinePotential",
    "make_field",
    "zero_field",
    "make_potential",
    "zero_potential",
    "flux",
    "amplitude",
    "flux_norm",
]

BETA_MAX = 1.5
TABLE_NODES = 4096
_SERIES_TERMS = 96
_GL_LO, _GL_HI = np.polynomial.legendre.leggauss(24), np.polynomial.legendre.leggauss(40)
_U_MIN = 1e-14


@dataclass(frozen=True)
class Profile:
    """Polynomial shape on [0, 1], coefficients in ascending powers of r."""

    coeffs: tuple[float, ...]

    @classmethod
    def constant(cls, value: float) -> "Profile":
        return cls((float(value),))

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "Profile":
        c = [float(v) for v in coeffs]
        if not c:
            raise DomainError("polynomial profile needs at least one coefficient")
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        return cls(tuple(c))

    @property
    def kind(self) -> str:
        return "constant" if len(self.coeffs) == 1 else "polynomial"

    def __call__(self, r):
        return npoly.polyval(r, self.coeffs)

    def extrema(self) -> tuple[float, float]:
        """Exact (min, max) over [0, 1] from the critical points."""
        pts = [0.0, 1.0]
        if len(self.coeffs) > 2:
            for z in npoly.polyroots(npoly.polyder(self.coeffs)):
                if abs(z.imag) < 1e-12 and 0.0 < z.real < 1.0:
                    pts.append(z.real)
        vals = self(np.array(pts))
        return float(vals.min()), float(vals.max())

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant({self.coeffs[0]:g})"
        return "polynomial(" + ",".join(f"{c:g}" for c in self.coeffs) + ")"


@dataclass(frozen=True)
class FluxTable:
    """A(r) and b(r) cached on Chebyshev nodes of (0, 1), plus I.

    The nodes cluster at both ends of the interval (the last one sits at
    1 - r ~ 4e-8), which is where the mode-truncation test needs them.
    """

    nodes: np.ndarray
    values: np.ndarray
    field_values: np.ndarray
    integral: float


@dataclass(frozen=True, eq=False)
class RadialField:
    profile: Profile
    m: float
    beta: float
    k_min: float
    admissible: bool = True

    def b(self, r):
        """Field strength b(r) = b0(r) (1 - r)^(-beta)."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            out = self.profile(r) * (1.0 - r) ** (-self.beta)
        return float(out) if out.ndim == 0 else out

    def flux(self, r):
        return flux(self, r)

    def amplitude(self, r):
        return amplitude(self, r)

    @cached_property
    def flux_norm(self) -> float:
        return _flux_norm(self)

    @cached_property
    def table(self) -> FluxTable:
        j = np.arange(TABLE_NODES)
        nodes = 0.5 * (1.0 - np.cos(np.pi * (j + 0.5) / TABLE_NODES))
        return FluxTable(
            nodes=nodes,
            values=_flux_r(self, nodes),
            field_values=self.b(nodes),
            integral=self.flux_norm,
        )

    # closed-form pieces, built lazily
    @cached_property
    def _u_coeffs(self) -> np.ndarray:
        # q(u) = b0(1-u) (1-u), so that b(t) t dt = q(u) u^-beta du
        q = Polynomial(self.profile.coeffs)(Polynomial([1.0, -1.0])) * Polynomial([1.0, -1.0])
        return q.coef

    @cached_property
    def _series_coeffs(self) -> np.ndarray:
        n = _SERIES_TERMS
        c = np.empty(n)
        c[0] = 1.0
        for k in range(1, n):
            c[k] = c[k - 1] * (self.beta + k - 1) / k
        bt = np.convolve(np.asarray(self.profile.coeffs), [0.0, 1.0])
        d = np.convolve(bt, c)[:n]
        out = np.zeros(n + 1)
        out[1:] = d / np.arange(1, n + 1)
        return out

    def describe(self) -> str:
        return f"{self.profile.describe()}, m={self.m:g}, beta={self.beta:g}"


def make_field(profile, m: float | None = None, beta: float = 0.0) -> RadialField:
    """Validate a field b(r) = b0(r) (1 - r)^(-beta) and compute K = inf b.

    ``profile`` is a Profile or a number (constant profile). ``m`` defaults
    to max b0 on [0, 1].
    """
    if not isinstance(profile, Profile):
        profile = Profile.constant(profile)
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0.0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    if beta >= BETA_MAX:
        raise AdmissibilityError(f"beta must be < 3/2, got {beta}")
    lo, hi = profile.extrema()
    if lo <= 0.0:
        raise AdmissibilityError(
            f"profile {profile.describe()} is not positive on [0, 1] (min {lo:g}); "
            "inf b must be > 0"
        )
    if m is None:
        m = hi
    m = float(m)
    if not (m > 0.0):
        raise DomainError("m must be > 0")
    if hi > m * (1.0 + 1e-12):
        raise AdmissibilityError(f"profile exceeds m on [0, 1]: max {hi:g} > m={m:g}")
    return RadialField(profile=profile, m=m, beta=beta, k_min=_field_infimum(profile, beta))


def zero_field() -> RadialField:
    """The field b = 0. Not admissible; used as a calibration case."""
    return RadialField(profile=Profile.constant(0.0), m=0.0, beta=0.0, k_min=0.0, admissible=False)


def _field_infimum(profile: Profile, beta: float) -> float:
    # critical points of b solve b0'(r)(1 - r) + beta b0(r) = 0
    c = np.asarray(profile.coeffs)
    dp = npoly.polysub(npoly.polymul(npoly.polyder(c), [1.0, -1.0]), beta * c)
    dp = np.trim_zeros(np.atleast_1d(dp), "b")
    pts = [0.0]
    if len(dp) > 1:
        for z in npoly.polyroots(dp):
            if abs(z.imag) < 1e-12 and 0.0 < z.real < 1.0:
                pts.append(float(z.real))
    vals = [float(profile(p)) * (1.0 - p) ** (-beta) for p in pts]
    if beta == 0.0:
        vals.append(float(profile(1.0)))
    return min(vals)


# ----------------------------------------------------------------------------
# flux function


def _flux_u(fld: RadialField, u: np.ndarray) -> np.ndarray:
    """A(1 - u) for 0 < u <= 1/2, from the closed form in u."""
    q = fld._u_coeffs
    logu = np.log(u)
    out = np.zeros_like(u)
    for j, qj in enumerate(q):
        if qj == 0.0:
            continue
        e = j + 1.0 - fld.beta
        if e == 0.0:
            out += qj * (-logu)
        else:
            out += qj * (-np.expm1(e * logu) / e)
    return out


def _flux_r(fld: RadialField, r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = r <= 0.5
    if np.any(small):
        out[small] = npoly.polyval(r[small], fld._series_coeffs)
    big = ~small
    if np.any(big):
        u = 1.0 - r[big]
        with np.errstate(divide="ignore"):
            out[big] = np.where(u > 0.0, _flux_u(fld, np.maximum(u, 1e-300)), _flux_at_one(fld))
    return out


def _flux_at_one(fld: RadialField) -> float:
    if fld.beta >= 1.0:
        return math.inf
    q = fld._u_coeffs
    return float(sum(qj / (j + 1.0 - fld.beta) for j, qj in enumerate(q)))


def _check_radius(fld: RadialField, r: np.ndarray) -> None:
    if not np.all(np.isfinite(r)):
        raise DomainError("r must be finite")
    if np.any(r < 0.0):
        raise DomainError("r must be >= 0")
    if fld.beta >= 1.0 and np.any(r >= 1.0):
        raise DomainError("flux diverges at r = 1 when beta >= 1")
    if np.any(r > 1.0):
        raise DomainError("r must be <= 1")


def flux(fld: RadialField, r):
    """A(r) = int_0^r b(t) t dt."""
    arr = np.asarray(r, dtype=float)
    _check_radius(fld, arr)
    out = _flux_r(fld, np.atleast_1d(arr)).reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def amplitude(fld: RadialField, r):
    """a(r) = A(r)/r, with a(0) = 0."""
    arr = np.asarray(r, dtype=float)
    _check_radius(fld, arr)
    a = np.atleast_1d(arr)
    out = np.zeros_like(a)
    nz = a > 0.0
    out[nz] = _flux_r(fld, a[nz]) / a[nz]
    out = out.reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def flux_norm(fld: RadialField) -> float:
    """I = int_0^1 (A(r)/r)^2 r dr (cached on the field)."""
    return fld.flux_norm


def _gl(f, a, b, rule):
    x, w = rule
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def _adaptive_panel(f, a, b, tol, depth=0, max_depth=40):
    lo = _gl(f, a, b, _GL_LO)
    hi = _gl(f, a, b, _GL_HI)
    if abs(hi - lo) <= tol or depth >= max_depth:
        if abs(hi - lo) > tol:
            raise NumericalError(
                "panel quadrature did not converge",
                {"panel": (a, b), "estimates": (lo, hi), "depth": depth},
            )
        return hi
    c = 0.5 * (a + b)
    return _adaptive_panel(f, a, c, tol / 2, depth + 1) + _adaptive_panel(f, c, b, tol / 2, depth + 1)


def _power_log_integral(p: float, m: int, h: float) -> float:
    """int_0^h u^p (log u)^m du for p > -1 and m in {0, 1, 2}."""
    s = p + 1.0
    lh = math.log(h)
    base = h**s
    if m == 0:
        return base / s
    if m == 1:
        return base * (lh / s - 1.0 / s**2)
    return base * (lh * lh / s - 2.0 * lh / s**2 + 2.0 / s**3)


def _rim_tail(fld: RadialField, h: float) -> float:
    """int_0^h A(1-u)^2 / (1-u) du in closed form.

    A(1-u) = sum_j q_j (1 - u^e_j)/e_j with e_j = j + 1 - beta (a log
    when e_j = 0) is a finite sum of terms c u^p (log u)^m, so A^2 is too;
    1/(1-u) is replaced by 1 + u, which is exact to O(h^2) relative.
    """
    terms = []  # (coef, power, log power)
    for j, qj in enumerate(fld._u_coeffs):
        if qj == 0.0:
            continue
        e = j + 1.0 - fld.beta
        if e == 0.0:
            terms.append((-qj, 0.0, 1))
        else:
            terms.append((qj / e, 0.0, 0))
            terms.append((-qj / e, e, 0))
    total = []
    for c1, p1, m1 in terms:
        for c2, p2, m2 in terms:
            for extra in (0.0, 1.0):
                total.append(c1 * c2 * _power_log_integral(p1 + p2 + extra, m1 + m2, h))
    return math.fsum(total)


def _flux_norm(fld: RadialField, rtol: float = 1e-12) -> float:
    # near the origin: A^2/r is smooth (~ r^3); the tolerance scales with
    # the size of the integral so that strong fields converge too
    def f(r):
        return _flux_r(fld, r) ** 2 / r

    scale = abs(_gl(f, 0.0, 0.5, _GL_HI))
    inner = _adaptive_panel(f, 0.0, 0.5, rtol * 1e-2 * scale)

    # near the rim: u = 1 - r, geometric panels towards u = 0
    def g(u):
        return _flux_u(fld, u) ** 2 / (1.0 - u)

    outer = 0.0
    hi = 0.5
    while hi > _U_MIN:
        lo = 0.5 * hi
        outer += _adaptive_panel(g, lo, hi, rtol * (abs(inner) + abs(outer) + 1e-300) * 1e-2)
        hi = lo
    tail = _rim_tail(fld, hi)
    total = inner + outer + tail
    if not math.isfinite(total):
        raise NumericalError(
            "flux norm quadrature failed near r = 1",
            {"inner": inner, "outer": outer, "tail": tail},
        )
    return total


# ----------------------------------------------------------------------------
# potentials


@dataclass(frozen=True, eq=False)
class RadialPotential:
    """Bounded non-negative radial potential V(r) on the disk.

    ``l1_norm`` is int_0^1 V(r) r dr (no 2 pi factor).
    """

    profile: Profile
    sup_v: float
    l1_norm: float

    def __call__(self, r):
        out = np.asarray(self.profile(np.asarray(r, dtype=float)), dtype=float)
        return float(out) if out.ndim == 0 else out

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.profile.coeffs)

    def describe(self) -> str:
        return self.profile.describe()


def make_potential(profile) -> RadialPotential:
    if not isinstance(profile, Profile):
        profile = Profile.constant(profile)
    if not all(math.isfinite(c) for c in profile.coeffs):
        raise DomainError("potential coefficients must be finite")
    lo, hi = profile.extrema()
    if lo < 0.0:
        raise AdmissibilityError(f"potential {profile.describe()} is negative somewhere on [0, 1]")
    l1 = math.fsum(c / (j + 2.0) for j, c in enumerate(profile.coeffs))
    return RadialPotential(profile=profile, sup_v=hi, l1_norm=l1)


def zero_potential() -> RadialPotential:
    return make_potential(Profile.constant(0.0))


# ----------------------------------------------------------------------------
# potentials on the line, for the one-dimensional inequality


@dataclass(frozen=True)
class LinePotential:
    """Non-negative potential W on the real line.

    kind: "zero", "square" (depth on [-half_width, half_width]) or
    "sech2" (depth * sech(t)^2).
    """

    kind: str
    depth: float = 0.0
    half_width: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "square", "sech2"):
            raise DomainError(f"unknown line potential {self.kind!r}")
        if not (math.isfinite(self.depth) and self.depth >= 0.0):
            raise DomainError("line potential depth must be finite and >= 0")
        if self.kind == "square" and not (math.isfinite(self.half_width) and self.half_width > 0.0):
            raise DomainError("square well needs a finite positive half-width")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def square(cls, depth, half_width):
        return cls("square", float(depth), float(half_width))

    @classmethod
    def sech2(cls, depth=2.0):
        return cls("sech2", float(depth))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(t)
        elif self.kind == "square":
            out = np.where(np.abs(t) <= self.half_width, self.depth, 0.0)
        else:
            out = self.depth / np.cosh(t) ** 2
        return float(out) if out.ndim == 0 else out

    def integral(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "square":
            return 2.0 * self.half_width * self.depth
        return 2.0 * self.depth

    def support(self) -> float:
        """Half-length of the region where W is not negligible."""
        if self.kind == "square":
            return self.half_width
        if self.kind == "sech2":
            return 4.0
        return 0.0

    def describe(self) -> str:
        if self.kind == "square":
            return f"square(depth={self.depth:g}, half_width={self.half_width:g})"
        if self.kind == "sech2":
            return f"sech2(depth={self.depth:g})"
        return "zero"
