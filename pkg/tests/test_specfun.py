from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from magbottle.errors import DomainError
from magbottle.specfun import (
    CONSTANTS,
    K_SWITCH,
    _k_integral,
    _k_small,
    bessel_i0,
    bessel_i0_prime,
    bessel_k0,
    bessel_k0_prime,
    delta_latata,
    delta_parts,
    harmonic_series,
    i0k0_product,
)

# frozen oracle values: I0 from mpmath at 30 digits, K0 from scipy quad of
# int_0^inf exp(-x cosh t) dt at epsrel 1e-13
I0_REF = {1.0: 1.2660658777520083, 0.5: 1.0634833707413235}
K0_REF = {1.0: 0.4210244382407083, 0.5: 0.924419071227666, 1e-4: 9.326271913450276}


def test_i0_at_zero_is_one():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i0_prime(0.0) == 0.0


@pytest.mark.parametrize("x", sorted(I0_REF))
def test_i0_matches_high_precision_oracle(x):
    assert bessel_i0(x) == pytest.approx(I0_REF[x], rel=1e-14)


@pytest.mark.parametrize("x", sorted(K0_REF))
def test_k0_matches_integral_oracle(x):
    assert bessel_k0(x) == pytest.approx(K0_REF[x], rel=1e-12)


def test_k0_small_argument_law():
    # the next term of the expansion is (x^2/4)(1 - log(x/2) - gamma), so the
    # remainder is O(x^2 log x), not O(x^2)
    x = np.geomspace(1e-9, 1e-3, 50)
    lead = -np.log(x / 2.0) - CONSTANTS.euler_gamma
    rem = bessel_k0(x) - lead
    assert np.all(np.abs(rem) <= 0.5 * x * x * (1.0 + np.abs(np.log(x))))
    nxt = 0.25 * x * x * (1.0 - np.log(x / 2.0) - CONSTANTS.euler_gamma)
    big = x >= 1e-6  # below this the remainder is under the rounding of the log
    assert np.allclose(rem[big], nxt[big], rtol=1e-3)


def test_k0_small_argument_remainder_exceeds_plain_square():
    x = 1e-3
    rem = bessel_k0(x) + math.log(x / 2.0) + CONSTANTS.euler_gamma
    assert rem > x * x


def test_against_scipy_special_on_wide_range():
    x = np.geomspace(1e-6, 50.0, 400)
    assert np.allclose(bessel_i0(x), special.i0(x), rtol=1e-14, atol=0)
    assert np.allclose(bessel_k0(x), special.k0(x), rtol=1e-13, atol=0)
    assert np.allclose(bessel_i0_prime(x), special.i1(x), rtol=1e-13, atol=0)
    assert np.allclose(bessel_k0_prime(x), -special.k1(x), rtol=1e-13, atol=0)


def test_k0_branches_agree_at_switch():
    for x in (0.9 * K_SWITCH, K_SWITCH, 1.1 * K_SWITCH):
        a = _k_small(np.array([x]))
        b = _k_integral(np.array([x]))
        assert abs(a[0][0] - b[0][0]) <= 1e-13 * abs(a[0][0])
        assert abs(a[1][0] - b[1][0]) <= 1e-13 * abs(a[1][0])


def test_wronskian_on_log_grid():
    x = np.geomspace(1e-6, 50.0, 600)
    w = x * (bessel_i0_prime(x) * bessel_k0(x) - bessel_i0(x) * bessel_k0_prime(x))
    assert np.max(np.abs(w - 1.0)) <= 1e-10


@pytest.mark.parametrize("x", [1.0, 0.25])
def test_wronskian_at_spot_points(x):
    w = x * (bessel_i0_prime(x) * bessel_k0(x) - bessel_i0(x) * bessel_k0_prime(x))
    assert abs(w - 1.0) <= 1e-10


def test_monotonicity_and_sign():
    x = np.geomspace(1e-6, 50.0, 800)
    i0 = bessel_i0(x)
    k0 = bessel_k0(x)
    assert np.all(i0 >= 1.0) and np.all(np.diff(i0) >= 0.0)
    assert np.all(k0 > 0.0) and np.all(np.diff(k0) < 0.0)


def test_harmonic_series_against_direct_sum():
    x = 0.7
    q = x * x / 4.0
    s = d = 0.0
    term = 1.0
    h = 0.0
    for k in range(1, 40):
        term *= q / (k * k)
        h += 1.0 / k
        s += h * term
        d += k * h * term
    S, D = harmonic_series(x)
    assert S == pytest.approx(s, rel=1e-15)
    assert D == pytest.approx(d, rel=1e-15)


def test_delta_at_one_is_i0k0():
    assert delta_latata(1.0) == pytest.approx(I0_REF[1.0] * K0_REF[1.0], rel=1e-13)
    assert delta_latata(1.0) == pytest.approx(0.5330446749, abs=1e-9)


def test_delta_identity():
    r = np.linspace(1.0 / 4096, 1.0, 4096)
    ident = i0k0_product(r) + np.log(r)
    assert np.max(np.abs(delta_latata(r) - ident)) <= 1e-10
    assert abs(delta_latata(0.5) - (bessel_i0(0.5) * bessel_k0(0.5) + math.log(0.5))) <= 1e-10


def test_delta_bounded_by_one():
    r = np.linspace(1.0 / 4096, 1.0, 4096)
    d = delta_latata(r)
    assert np.all(d <= 1.0)
    assert np.max(d) <= 0.7


def test_delta_part_bounds():
    r = np.linspace(1.0 / 4096, 1.0, 4096)
    p1, p2, p3 = delta_parts(r)
    assert np.all(p1 >= 0.0) and np.all(p2 >= 0.0) and np.all(p3 >= 0.0)
    majorant = np.expm1(r * r / 2.0) * (-np.log(r))
    assert np.all(p1 <= majorant + 1e-15)
    assert np.max(majorant) <= 0.11
    e = math.exp(0.25)
    assert np.max(p3) <= e * (e - 1.0) + 1e-6


def test_delta_parts_sum_to_delta():
    r = np.geomspace(1e-8, 1.0, 300)
    assert np.allclose(sum(delta_parts(r)), delta_latata(r), rtol=0, atol=1e-15)


def test_i0k0_product_against_quadrature_near_zero():
    # I0 K0 is smooth in x apart from the log; quad of the K0 integral is independent
    for x in (1e-8, 1e-4, 0.3):
        k0 = integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0, 60, epsabs=0, epsrel=1e-13, limit=400)[0]
        assert i0k0_product(x) == pytest.approx(special.i0(x) * k0, rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_k0(0.0)
    with pytest.raises(DomainError):
        bessel_i0(-1.0)
    with pytest.raises(DomainError):
        delta_latata(1.5)
    with pytest.raises(DomainError):
        bessel_k0(float("nan"))


def test_array_shape_preserved():
    x = np.linspace(0.1, 3.0, 12).reshape(3, 4)
    assert bessel_k0(x).shape == (3, 4)
    assert isinstance(bessel_k0(1.0), float)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=50.0))
def test_wronskian_property(x):
    w = x * (bessel_i0_prime(x) * bessel_k0(x) - bessel_i0(x) * bessel_k0_prime(x))
    assert abs(w - 1.0) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1.0))
def test_delta_identity_property(r):
    assert abs(delta_latata(r) - (i0k0_product(r) + math.log(r))) <= 1e-10
