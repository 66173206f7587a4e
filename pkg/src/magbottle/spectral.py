"""Eigenvalue counts for radial magnetic Schrodinger operators on the disk.

The operator H = -(grad - iA)^2 with Dirichlet condition at r = 1 splits
over angular momenta l into the one-dimensional forms

    h_l(u) = int_0^1 [ |u'|^2 + ((l - A(r))^2 / r^2 - V(r)) |u|^2 ] r dr

on L^2((0, 1), r dr). Each form is discretised on a uniform grid
r_i = i h (no node at 0 or 1) into a symmetric tridiagonal stiffness
matrix and a diagonal mass matrix. Eigenvalues below lambda are counted by
Sylvester inertia: the number of negative pivots in the LDL^T
factorisation of (stiffness - lambda * mass).

A second builder discretises the same form in t = log r, where the measure
is flat and the weight e^{2t} moves onto the spectral parameter.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._sturm import negative_pivots
from .errors import DomainError, NumericalError
from .field import LinePotential, RadialField, RadialPotential, zero_potential

__all__ = [
    "RadialGrid",
    "LogGrid",
    "LineGrid",
    "ModeSystem",
    "CountReport",
    "build_mode_system",
    "build_mode_system_log",
    "count_negative_inertia",
    "inertia_with_shift",
    "mode_range",
    "count_eigenvalues",
    "count_negative_with_potential",
    "lowest_mode_eigenvalue",
    "lowest_eigenvalue",
    "line_schrodinger_negatives",
]

log = logging.getLogger(__name__)

DEFAULT_N = 20000
DEFAULT_TMIN = -14.0
TIE_SHIFT = 1e-13
MODE_CAP = 100_000


# ----------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class RadialGrid:
    """Interior nodes r_i = i h, i = 1..n, with h = 1/(n+1)."""

    n: int = DEFAULT_N

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16:
            raise DomainError(f"radial grid needs an integer n >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.n + 1) * self.h

    def refined(self) -> "RadialGrid":
        """Grid with half the spacing; keeps every old node."""
        return RadialGrid(2 * self.n + 1)

    def describe(self) -> str:
        return f"r-grid n={self.n}"


@dataclass(frozen=True)
class LogGrid:
    """Nodes t_i = t_min + i h_t, i = 0..n-1, on [t_min, 0); h_t = -t_min/n."""

    n: int
    t_min: float = DEFAULT_TMIN

    def __post_init__(self):
        if not (self.t_min < 0.0):
            raise DomainError(f"t_min must be < 0, got {self.t_min}")
        if int(self.n) != self.n or self.n < 16:
            raise DomainError(f"log grid needs an integer n >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return -self.t_min / self.n

    @property
    def nodes(self) -> np.ndarray:
        return self.t_min + np.arange(self.n) * self.h

    def refined(self) -> "LogGrid":
        return LogGrid(2 * self.n, self.t_min)

    def describe(self) -> str:
        return f"t-grid n={self.n} t_min={self.t_min:g}"


@dataclass(frozen=True)
class LineGrid:
    """Interior nodes of [-T, T]: t_i = -T + i h, i = 1..n, h = 2T/(n+1)."""

    n: int
    half_length: float

    @property
    def h(self) -> float:
        return 2.0 * self.half_length / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_length + np.arange(1, self.n + 1) * self.h


# ----------------------------------------------------------------------------
# mode systems


@dataclass(frozen=True, eq=False)
class ModeSystem:
    """Pencil (stiffness, weight) for one angular mode.

    ``diag`` already includes the potential terms; ``off`` has length n-1.
    """

    ell: int
    diag: np.ndarray
    off: np.ndarray
    weight: np.ndarray

    @property
    def size(self) -> int:
        return self.diag.shape[0]


@dataclass(frozen=True)
class CountReport:
    lam: float
    total: int
    per_mode: tuple[tuple[int, int], ...]
    ell_range: tuple[int, int]
    grid: str
    skipped: tuple[tuple[int, float], ...] = ()
    shift: float = 0.0

    @property
    def modes_used(self) -> int:
        return len(self.per_mode)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "total": self.total,
            "per_mode": [list(p) for p in self.per_mode],
            "ell_range": list(self.ell_range),
            "grid": self.grid,
            "skipped": [list(s) for s in self.skipped],
            "shift": self.shift,
        }


@dataclass
class _Assembly:
    """Grid-dependent pieces shared by every mode."""

    kin_diag: np.ndarray
    off: np.ndarray
    weight: np.ndarray
    flux: np.ndarray
    inv_r2: np.ndarray  # multiplies (l - A)^2 in the potential
    pot_weight: np.ndarray  # weight applied to the potential terms
    v: np.ndarray
    describe: str

    def system(self, ell: int) -> ModeSystem:
        centrifugal = (ell - self.flux) ** 2 * self.inv_r2
        diag = self.kin_diag + centrifugal * self.pot_weight - self.v * self.pot_weight
        return ModeSystem(int(ell), diag, self.off, self.weight)


def _radial_assembly(fld: RadialField, v: RadialPotential, grid: RadialGrid) -> _Assembly:
    h = grid.h
    r = grid.nodes
    mid = (np.arange(grid.n + 1) + 0.5) * h  # r_{i+1/2}, i = 0..n
    kin = (mid[:-1] + mid[1:]) / h
    # no node at r = 0: the first cell carries no difference (free end)
    kin[0] = mid[1] / h
    off = -mid[1:-1] / h
    w = r * h
    return _Assembly(
        kin_diag=kin,
        off=off,
        weight=w,
        flux=fld.flux(r),
        inv_r2=1.0 / (r * r),
        pot_weight=w,
        v=v(r) * np.ones_like(r),
        describe=grid.describe(),
    )


def _log_assembly(fld: RadialField, v: RadialPotential, grid: LogGrid) -> _Assembly:
    h = grid.h
    t = grid.nodes
    r = np.exp(t)
    kin = np.full(grid.n, 2.0 / h)
    kin[0] = 1.0 / h  # reflecting end at t_min
    off = np.full(grid.n - 1, -1.0 / h)
    return _Assembly(
        kin_diag=kin,
        off=off,
        weight=r * r * h,
        flux=fld.flux(r),
        inv_r2=np.ones_like(t),
        pot_weight=np.full(grid.n, h),
        v=r * r * (v(r) * np.ones_like(r)),
        describe=grid.describe(),
    )


def _assembly(fld, v, grid) -> _Assembly:
    if isinstance(grid, RadialGrid):
        return _radial_assembly(fld, v, grid)
    if isinstance(grid, LogGrid):
        return _log_assembly(fld, v, grid)
    raise DomainError(f"unsupported grid {grid!r}")


def build_mode_system(fld: RadialField, v: RadialPotential | None, ell: int, grid: RadialGrid) -> ModeSystem:
    """Discretise h_l - V against int |u|^2 r dr on the uniform r-grid.

    Stiffness: midpoint-weighted differences with off-diagonals
    -r_{i+1/2}/h, plus the diagonal ((l - A)^2/r^2 - V) r h.
    Dirichlet at r = 1, free at r = 0. Weight r_i h.
    """
    return _radial_assembly(fld, v or zero_potential(), grid).system(ell)


def build_mode_system_log(fld: RadialField, v: RadialPotential | None, ell: int, grid: LogGrid) -> ModeSystem:
    """Same form in t = log r: flat stiffness, diagonal (l - A(e^t))^2 h_t,
    potential e^{2t} V(e^t) h_t, weight e^{2t} h_t.

    Dirichlet at t = 0, reflecting at t_min.
    """
    return _log_assembly(fld, v or zero_potential(), grid).system(ell)


# ----------------------------------------------------------------------------
# counting


def inertia_with_shift(sys: ModeSystem, lam: float) -> tuple[int, float]:
    """(count of eigenvalues below lam, shift applied to lam).

    If lam hits an exact zero pivot it is moved down by 1e-13 (relative)
    and the shift is returned.
    """
    lam = float(lam)
    shift = 0.0
    for attempt in range(8):
        c = negative_pivots(sys.diag, sys.off, sys.weight, lam - shift)
        if c >= 0:
            return int(c), shift
        shift = TIE_SHIFT * max(abs(lam), 1.0) * 4.0**attempt
    raise NumericalError("zero pivot persists after shifting", {"lambda": lam, "ell": sys.ell})


def count_negative_inertia(sys: ModeSystem, lam: float) -> int:
    """Number of generalized eigenvalues of (stiffness, weight) below lam."""
    if np.any(sys.weight <= 0.0):
        raise DomainError("weight must be strictly positive")
    return inertia_with_shift(sys, lam)[0]


def _effective_floor(fld: RadialField, ell: int) -> float:
    tab = fld.table
    r = tab.nodes
    return float(np.min(0.5 * (tab.field_values + (ell - tab.values) ** 2 / (r * r))))


def mode_range(fld: RadialField, threshold: float):
    """Angular modes that can carry eigenvalues below ``threshold``.

    Mode l is skipped when min_r (1/2)[b + (l - A)^2/r^2] >= threshold,
    the minimum being taken over the 4096 cached flux-table nodes. On the
    negative side the floor grows with |l|, so the first skippable mode
    ends the scan; on the positive side three consecutive skippable modes
    are required.

    Returns (lo, hi, skipped) where [lo, hi] may be empty (lo > hi) and
    ``skipped`` lists (l, floor) for the boundary modes that were dropped.
    """
    skipped = []
    lo = 0
    for ell in range(-1, -MODE_CAP, -1):
        floor = _effective_floor(fld, ell)
        if floor >= threshold:
            skipped.append((ell, floor))
            lo = ell + 1
            break
    else:
        raise NumericalError("negative-mode truncation did not terminate", {"threshold": threshold})

    last = None
    run = []
    for ell in range(0, MODE_CAP):
        floor = _effective_floor(fld, ell)
        if floor >= threshold:
            run.append((ell, floor))
            if len(run) == 3:
                break
        else:
            last = ell
            run = []
    else:
        raise NumericalError("positive-mode truncation did not terminate", {"threshold": threshold})
    skipped.extend(run)
    if last is None:
        return 0, -1, tuple(skipped)
    return lo, last, tuple(skipped)


def _default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def _sweep(asm: _Assembly, ells, lam: float, workers: int | None):
    def one(ell):
        return (ell, *inertia_with_shift(asm.system(ell), lam))

    workers = workers or _default_workers()
    ells = list(ells)
    if workers == 1 or len(ells) < 2:
        results = [one(ell) for ell in ells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, ells))
    results.sort(key=lambda t: t[0])
    return results


def _count(fld, v, lam, grid, workers) -> CountReport:
    lo, hi, skipped = mode_range(fld, lam + v.sup_v)
    asm = _assembly(fld, v, grid)
    results = _sweep(asm, range(lo, hi + 1), lam, workers)
    per_mode = tuple((ell, c) for ell, c, _ in results)
    shift = max((s for _, _, s in results), default=0.0)
    if shift:
        log.info("threshold %g hit a discrete eigenvalue; shifted by %g", lam, shift)
    return CountReport(
        lam=float(lam),
        total=sum(c for _, c in per_mode),
        per_mode=per_mode,
        ell_range=(lo, hi),
        grid=asm.describe,
        skipped=skipped,
        shift=shift,
    )


def count_eigenvalues(fld: RadialField, lam: float, grid=None, *, workers: int | None = None) -> CountReport:
    """N(lam): number of eigenvalues of H strictly below lam, summed over modes.

    ``grid`` is a RadialGrid (default n = 20000) or a LogGrid.
    """
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"lambda must be > 0, got {lam}")
    return _count(fld, zero_potential(), lam, grid or RadialGrid(), workers)


def count_negative_with_potential(
    fld: RadialField, v: RadialPotential, grid=None, *, workers: int | None = None
) -> CountReport:
    """N(A, V): number of negative eigenvalues of H - V."""
    return _count(fld, v, 0.0, grid or RadialGrid(), workers)


# ----------------------------------------------------------------------------
# lowest eigenvalue


def lowest_mode_eigenvalue(sys: ModeSystem, rtol: float = 1e-6) -> float:
    """Smallest generalized eigenvalue of one mode, by bisection on inertia."""
    lo = 0.0
    step = 1.0
    while count_negative_inertia(sys, lo) > 0:
        lo -= step
        step *= 2.0
    hi = max(lo + 1.0, 1.0)
    while count_negative_inertia(sys, hi) == 0:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise NumericalError("could not bracket the lowest eigenvalue", {"ell": sys.ell})
    for _ in range(200):
        if hi - lo <= rtol * max(abs(hi), 1e-300) * 0.5:
            break
        mid = 0.5 * (lo + hi)
        if count_negative_inertia(sys, mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def lowest_eigenvalue(
    fld: RadialField,
    grid=None,
    *,
    ells=range(-2, 3),
    rtol: float = 1e-6,
    extrapolate: bool = False,
) -> float:
    """Smallest eigenvalue over the modes in ``ells`` (default -2..2).

    With ``extrapolate`` the value is Richardson-extrapolated from ``grid``
    and its refinement, assuming second-order convergence.
    """
    grid = grid or RadialGrid()

    def on(g):
        asm = _assembly(fld, zero_potential(), g)
        return min(lowest_mode_eigenvalue(asm.system(ell), rtol * 0.1) for ell in ells)

    coarse = on(grid)
    if not extrapolate:
        return coarse
    fine = on(grid.refined())
    return (4.0 * fine - coarse) / 3.0


def mode_eigenvalue_floor(fld: RadialField, grid=None, ells=range(-2, 3), rtol: float = 1e-6):
    """[(l, lowest eigenvalue of mode l)] for each l in ``ells``."""
    asm = _assembly(fld, zero_potential(), grid or RadialGrid())
    return [(ell, lowest_mode_eigenvalue(asm.system(ell), rtol)) for ell in ells]


# ----------------------------------------------------------------------------
# the line problem -v'' - W v


def _line_grid_for(w: LinePotential, spacing: float = 1e-3, margin: float = 10.0) -> LineGrid:
    T = w.support() + margin
    n = int(math.ceil(2.0 * T / spacing)) - 1
    return LineGrid(n, T)


def _cell_average(w: LinePotential, t: np.ndarray, h: float) -> np.ndarray:
    a, b = t - 0.5 * h, t + 0.5 * h
    if w.kind == "square":
        overlap = np.clip(np.minimum(b, w.half_width) - np.maximum(a, -w.half_width), 0.0, None)
        return w.depth * overlap / h
    if w.kind == "sech2":
        return w.depth * (np.tanh(b) - np.tanh(a)) / h
    return np.zeros_like(t)


def line_schrodinger_negatives(w: LinePotential, grid: LineGrid | None = None, tol: float = 1e-9) -> list[float]:
    """Magnitudes nu_k of the negative eigenvalues -nu_k of -d^2/dt^2 - W.

    Dirichlet conditions at the ends of ``grid`` (default: 10 beyond the
    support of W, spacing 1e-3). W is sampled as cell averages, so a jump
    in W costs only second-order error. Largest nu first.
    """
    grid = grid or _line_grid_for(w)
    if grid.half_length < w.support() + 8.0:
        raise DomainError("line grid must extend at least 8 beyond the support of W")
    h = grid.h
    t = grid.nodes
    diag = np.full(grid.n, 2.0 / h) - _cell_average(w, t, h) * h
    sys = ModeSystem(0, diag, np.full(grid.n - 1, -1.0 / h), np.full(grid.n, h))
    m = count_negative_inertia(sys, 0.0)
    floor = -float(np.max(_cell_average(w, t, h))) - 1.0
    out = []
    for k in range(1, m + 1):
        lo, hi = floor, 0.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if count_negative_inertia(sys, mid) >= k:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-14 * max(1.0, abs(lo)):
                break
        nu = -0.5 * (lo + hi)
        if nu > tol:
            out.append(nu)
    return sorted(out, reverse=True)
