"""Closed-form upper bounds on eigenvalue counts for radial magnetic bottles.

For a field with K = inf b and I = int_0^1 (A/r)^2 r dr:

* negative eigenvalues of H - V, for any alpha in (0, 1):

      N(A, V) <= (1/sqrt(1-alpha)) int_0^1 [(1/alpha - 1) A^2/r^2 + V] r dr
                 + 2 int_0^1 [1 + |log(r sqrt K)|] V r dr

* eigenvalues of H below lambda:

      N(lambda) <= c_K lambda + lambda / (2 sqrt(1-alpha)) + (sqrt(1-alpha)/alpha) I

* the large-lambda form (1/2 + c_K) lambda + sqrt(lambda I) + O(1).

Potentials are polynomials, so every V-integral is evaluated in closed form.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError
from .field import LinePotential, RadialField, RadialPotential

__all__ = [
    "BoundReport",
    "gamma_k",
    "c_k",
    "log_weighted_moment",
    "bound_negative_count",
    "bound_counting",
    "optimal_alpha",
    "alpha_objective",
    "asymptotic_bound",
    "hlt_rhs",
]


@dataclass(frozen=True)
class BoundReport:
    lam: float
    alpha: float
    term_ck: float
    term_kinetic: float
    term_flux: float
    total: float

    def as_dict(self) -> dict:
        return asdict(self)


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be finite and > 0, got {value}")
    return value


def _check_alpha(alpha):
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def gamma_k(k: float) -> float:
    """int_0^1 (1 + |log(k r)|) r dr."""
    k = _positive("k", k)
    if k <= 1.0:
        return (3.0 - 2.0 * math.log(k)) / 4.0
    return (1.0 + 2.0 * math.log(k)) / 4.0 + 1.0 / (2.0 * k * k)


def c_k(K: float) -> float:
    """Coefficient of lambda in the counting bound; equals 2 gamma_k(sqrt K)."""
    K = _positive("K", K)
    if K <= 1.0:
        return (3.0 - math.log(K)) / 2.0
    return (1.0 + math.log(K)) / 2.0 + 1.0 / K


def _log_moment(p: float, k: float) -> float:
    # int_0^1 (1 + |log(k r)|) r^p dr
    s = p + 1.0
    lk = math.log(k)
    if k <= 1.0:
        return (1.0 - lk) / s + 1.0 / (s * s)
    return (1.0 + lk) / s - 1.0 / (s * s) + 2.0 * k ** (-s) / (s * s)


def log_weighted_moment(v: RadialPotential, k: float) -> float:
    """int_0^1 (1 + |log(k r)|) V(r) r dr for a polynomial V."""
    k = _positive("k", k)
    return math.fsum(c * _log_moment(j + 1.0, k) for j, c in enumerate(v.profile.coeffs) if c != 0.0)


def bound_negative_count(fld: RadialField, v: RadialPotential, alpha: float) -> float:
    """Upper bound on the number of negative eigenvalues of H - V."""
    alpha = _check_alpha(alpha)
    sq = math.sqrt(1.0 - alpha)
    first = ((1.0 / alpha - 1.0) * fld.flux_norm + v.l1_norm) / sq
    second = 2.0 * log_weighted_moment(v, math.sqrt(fld.k_min))
    return first + second


def bound_counting(fld: RadialField, lam: float, alpha: float) -> BoundReport:
    """Upper bound on the number of eigenvalues of H below lam."""
    lam = _positive("lambda", lam)
    alpha = _check_alpha(alpha)
    sq = math.sqrt(1.0 - alpha)
    term_ck = c_k(fld.k_min) * lam
    term_kinetic = lam / (2.0 * sq)
    term_flux = sq / alpha * fld.flux_norm
    return BoundReport(
        lam=lam,
        alpha=alpha,
        term_ck=term_ck,
        term_kinetic=term_kinetic,
        term_flux=term_flux,
        total=math.fsum((term_ck, term_kinetic, term_flux)),
    )


def alpha_objective(alpha: float, lam: float, I: float) -> float:
    """The alpha-dependent part lam/(2 sqrt(1-alpha)) + I sqrt(1-alpha)/alpha."""
    sq = math.sqrt(1.0 - alpha)
    return lam / (2.0 * sq) + I * sq / alpha


def optimal_alpha(lam: float, I: float) -> float:
    """Minimiser of alpha_objective over (0, 1).

    It is the positive root of alpha^2 (lam - 2I) + 6 alpha I - 4 I = 0.
    The textbook root (-3I + sqrt(I^2 + 4 I lam)) / (lam - 2I) has a
    removable singularity at lam = 2I; rationalising gives
    4I / (3I + sqrt(I^2 + 4 I lam)), which is smooth everywhere.
    """
    lam = _positive("lambda", lam)
    I = _positive("I", I)
    if lam == 2.0 * I:
        return 2.0 / 3.0
    return 4.0 * I / (3.0 * I + math.sqrt(I * I + 4.0 * I * lam))


def asymptotic_bound(lam: float, I: float, K: float) -> float:
    """(1/2 + c_K) lam + sqrt(lam I)."""
    lam = _positive("lambda", lam)
    I = _positive("I", I)
    return (0.5 + c_k(K)) * lam + math.sqrt(lam * I)


def hlt_rhs(w: LinePotential) -> float:
    """(1/2) int W dt over the real line."""
    total = w.integral()
    if not math.isfinite(total) or total < 0.0:
        raise DomainError(f"line potential {w.describe()} is not integrable")
    return 0.5 * total
