from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from conftest import EXAMPLE_I
from magbottle import LinePotential, Profile, make_field, make_potential, zero_potential
from magbottle.bounds import (
    alpha_objective,
    asymptotic_bound,
    bound_counting,
    bound_negative_count,
    c_k,
    gamma_k,
    hlt_rhs,
    log_weighted_moment,
    optimal_alpha,
)
from magbottle.errors import DomainError


def quad_gamma(k):
    pts = [1.0 / k] if k > 1.0 else None
    val, _ = integrate.quad(lambda r: (1.0 + abs(math.log(k * r))) * r, 0.0, 1.0, points=pts, epsabs=0, epsrel=1e-12, limit=200)
    return val


def residual(alpha, lam, I):
    return alpha * alpha * (lam - 2.0 * I) + 6.0 * alpha * I - 4.0 * I


@pytest.mark.parametrize("k", [0.1, 0.5, 1.0, 2.0, 10.0])
def test_gamma_matches_quadrature(k):
    assert abs(gamma_k(k) - quad_gamma(k)) <= 1e-8


def test_gamma_spot_values():
    assert gamma_k(1.0) == 0.75
    assert gamma_k(0.5) == pytest.approx((3.0 + 2.0 * math.log(2.0)) / 4.0, rel=1e-15)
    assert gamma_k(2.0) == pytest.approx((1.0 + 2.0 * math.log(2.0)) / 4.0 + 0.125, rel=1e-15)


def test_c_k_spot_values():
    assert c_k(1.0) == 1.5
    assert c_k(4.0) == pytest.approx((1.0 + math.log(4.0)) / 2.0 + 0.25, rel=1e-15)
    assert c_k(0.25) == pytest.approx((3.0 + math.log(4.0)) / 2.0, rel=1e-15)
    assert c_k(4.0) == pytest.approx(2.0 * quad_gamma(2.0), rel=1e-10)
    assert c_k(0.25) == pytest.approx(2.0 * quad_gamma(0.5), rel=1e-10)


def test_c_k_is_twice_gamma_on_log_grid():
    K = np.geomspace(1e-4, 1e4, 50)
    assert max(abs(c_k(x) - 2.0 * gamma_k(math.sqrt(x))) for x in K) <= 1e-12


def test_c_k_continuous_at_one():
    assert abs(c_k(1.0 - 1e-12) - c_k(1.0 + 1e-12)) < 1e-10


def test_log_moment_against_quadrature():
    v = make_potential(Profile.polynomial([1.0, 2.0, 0.5]))
    for k in (0.3, 1.0, 1.7, 6.0):
        pts = [1.0 / k] if k > 1.0 else None
        ref, _ = integrate.quad(lambda r: (1 + abs(math.log(k * r))) * v(r) * r, 0, 1, points=pts, epsabs=0, epsrel=1e-12)
        assert log_weighted_moment(v, k) == pytest.approx(ref, rel=1e-11)


def test_negative_bound_zero_potential(example_field):
    for a in (0.1, 0.5, 0.9):
        expected = (1.0 / a - 1.0) * example_field.flux_norm / math.sqrt(1.0 - a)
        assert bound_negative_count(example_field, zero_potential(), a) == pytest.approx(expected, rel=1e-14)


def test_negative_bound_unit_potential(example_field):
    val = bound_negative_count(example_field, make_potential(1.0), 0.5)
    assert val == pytest.approx(math.sqrt(2.0) * (EXAMPLE_I + 0.5) + 1.5, rel=1e-12)
    assert val == pytest.approx(3.4857, abs=1e-4)


def test_counting_bound_example(example_field):
    rep = bound_counting(example_field, 100.0, 0.5)
    assert rep.term_ck == 150.0
    assert rep.term_kinetic == pytest.approx(100.0 / math.sqrt(2.0), rel=1e-15)
    assert rep.term_flux == pytest.approx(math.sqrt(0.5) / 0.5 * EXAMPLE_I, rel=1e-12)
    assert rep.total == pytest.approx(221.989288, abs=1e-6)
    assert rep.as_dict()["total"] == rep.total


@pytest.mark.parametrize("lam,alpha", [(0.5, 0.3), (20.0, 0.5), (100.0, 0.17), (1e4, 0.9)])
def test_specialisation_identity(lam, alpha, catalog_fields):
    for fld in catalog_fields.values():
        a = bound_negative_count(fld, make_potential(lam), alpha)
        b = bound_counting(fld, lam, alpha).total
        assert abs(a - b) <= 1e-12 * max(1.0, b)


def test_counting_bound_increasing_in_lambda(example_field):
    totals = [bound_counting(example_field, lam, 0.4).total for lam in np.linspace(0.1, 100, 50)]
    assert np.all(np.diff(totals) > 0)


def test_counting_bound_small_lambda_is_flux_term(example_field):
    rep = bound_counting(example_field, 1e-14, 0.5)
    assert rep.total == pytest.approx(rep.term_flux, rel=1e-12)


def test_optimal_alpha_spot_values():
    assert optimal_alpha(2.0, 1.0) == 2.0 / 3.0
    assert optimal_alpha(8.0, 1.0) == pytest.approx((-3.0 + math.sqrt(33.0)) / 6.0, rel=1e-14)
    assert abs(residual(optimal_alpha(8.0, 1.0), 8.0, 1.0)) <= 1e-12


@pytest.mark.parametrize("I", [0.1, 0.904, 10.0])
@pytest.mark.parametrize("lam_kind", ["2I", 8.0, 100.0, 1e4])
def test_optimal_alpha_residual_and_minimality(lam_kind, I):
    lam = 2.0 * I if lam_kind == "2I" else lam_kind
    a = optimal_alpha(lam, I)
    assert 0.0 < a < 1.0
    assert abs(residual(a, lam, I)) <= 1e-10
    g = alpha_objective(a, lam, I)
    assert g <= alpha_objective(a - 1e-3, lam, I)
    assert g <= alpha_objective(a + 1e-3, lam, I)


@pytest.mark.parametrize("I", [0.1, 0.904, 10.0])
def test_optimal_alpha_continuous_at_degenerate_point(I):
    mid = optimal_alpha(2.0 * I, I)
    for eps in (1e-8, -1e-8):
        assert abs(optimal_alpha(2.0 * I + eps, I) - mid) <= 1e-6


def test_asymptotic_bound_example():
    assert asymptotic_bound(100.0, EXAMPLE_I, 1.0) == pytest.approx(200.0 + math.sqrt(100.0 * EXAMPLE_I), rel=1e-15)
    assert asymptotic_bound(100.0, EXAMPLE_I, 1.0) == pytest.approx(209.508, abs=1e-3)


@pytest.mark.parametrize("lam", [1e2, 1e3, 1e4, 1e5, 1e6])
def test_asymptotic_agreement(example_field, lam):
    I = example_field.flux_norm
    total = bound_counting(example_field, lam, optimal_alpha(lam, I)).total
    assert abs(total - asymptotic_bound(lam, I, example_field.k_min)) <= 5.0


def test_hlt_rhs():
    assert hlt_rhs(LinePotential.zero()) == 0.0
    assert hlt_rhs(LinePotential.square(1.0, 1.0)) == 1.0
    assert hlt_rhs(LinePotential.sech2(2.0)) == 2.0


def test_domain_errors(example_field):
    with pytest.raises(DomainError):
        bound_counting(example_field, 10.0, 1.0)
    with pytest.raises(DomainError):
        bound_counting(example_field, -1.0, 0.5)
    with pytest.raises(DomainError):
        c_k(0.0)
    with pytest.raises(DomainError):
        optimal_alpha(1.0, 0.0)


@settings(max_examples=300, deadline=None)
@given(lam=st.floats(min_value=1e-3, max_value=1e7), I=st.floats(min_value=1e-3, max_value=1e3))
def test_optimal_alpha_is_global_minimum_property(lam, I):
    a = optimal_alpha(lam, I)
    assert abs(residual(a, lam, I)) <= 1e-10 * max(lam, I)
    grid = np.linspace(1e-4, 1 - 1e-4, 2001)
    best = min(alpha_objective(x, lam, I) for x in grid)
    assert alpha_objective(a, lam, I) <= best * (1 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(lam=st.floats(min_value=1e-3, max_value=1e6), alpha=st.floats(min_value=0.01, max_value=0.99), beta=st.floats(0.0, 1.45), b0=st.floats(0.1, 20.0))
def test_specialisation_identity_property(lam, alpha, beta, b0):
    fld = make_field(b0, b0, beta)
    a = bound_negative_count(fld, make_potential(lam), alpha)
    b = bound_counting(fld, lam, alpha).total
    assert abs(a - b) <= 1e-12 * max(1.0, b)
