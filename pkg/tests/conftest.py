from __future__ import annotations

import pytest

from magbottle import Profile, make_field

# independent reference values, computed once and frozen
ZETA3 = 1.2020569031595942
EXAMPLE_I = 2.0 * ZETA3 - 1.5
# first zero of the order-0 Bessel function, squared; shooting on
# w'' + w'/r + lam w = 0, w(0) = 1, w(1) = 0 (solve_ivp DOP853 + brentq)
DISK_DIRICHLET = 5.783185962947193


@pytest.fixture(scope="session")
def example_field():
    """b(r) = 1/(1 - r): unit profile, m = 1, beta = 1."""
    return make_field(1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def catalog_fields():
    return {
        "unit_beta1": make_field(1.0, 1.0, 1.0),
        "const2": make_field(2.0, 2.0, 0.0),
        "quad_beta_half": make_field(Profile.polynomial([1.0, 0.0, 1.0]), 2.0, 0.5),
        "unit_beta14": make_field(1.0, 1.0, 1.4),
        "unit_beta_half": make_field(1.0, 1.0, 0.5),
    }
