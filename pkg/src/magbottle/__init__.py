"""Eigenvalue-counting bounds for radial magnetic bottles on the unit disk.

The magnetic Laplacian on the disk with a radial field b(r) = b0(r)(1 - r)^-beta
is split into angular modes; each mode is a tridiagonal pencil whose inertia
counts eigenvalues exactly. The closed-form bounds in ``bounds`` are then
checked against those counts.
"""

from .bounds import (
    BoundReport,
    asymptotic_bound,
    bound_counting,
    bound_negative_count,
    c_k,
    gamma_k,
    optimal_alpha,
)
from .errors import AdmissibilityError, ConfigError, DomainError, NumericalError
from .field import (
    LinePotential,
    Profile,
    RadialField,
    RadialPotential,
    make_field,
    make_potential,
    zero_field,
    zero_potential,
)
from .green import birman_schwinger_integral, green_diag, propjp_ratio
from .spectral import (
    CountReport,
    LogGrid,
    RadialGrid,
    count_eigenvalues,
    count_negative_with_potential,
    line_schrodinger_negatives,
    lowest_eigenvalue,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "asymptotic_bound",
    "bound_counting",
    "bound_negative_count",
    "c_k",
    "gamma_k",
    "optimal_alpha",
    "LinePotential",
    "Profile",
    "RadialField",
    "RadialPotential",
    "make_field",
    "make_potential",
    "zero_field",
    "zero_potential",
    "CountReport",
    "LogGrid",
    "RadialGrid",
    "count_eigenvalues",
    "count_negative_with_potential",
    "line_schrodinger_negatives",
    "lowest_eigenvalue",
    "AdmissibilityError",
    "ConfigError",
    "DomainError",
    "NumericalError",
    "birman_schwinger_integral",
    "green_diag",
    "propjp_ratio",
]
