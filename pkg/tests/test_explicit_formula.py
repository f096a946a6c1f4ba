import math
import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from picmonoid import (
    FixedPointSingularError,
    InsufficientZerosError,
    QuadratureFailureError,
    UsageError,
    ZeroScaleError,
    balance_curve,
    dist_trace,
    finite_shell_decomposition,
    geometric_side,
    load_zero_table,
    local_term_arch,
    local_term_arch_digamma,
    local_term_finite,
    mellin_hat,
    mellin_hat_with_error,
    parse_zero_table,
    product_formula_holds,
    semilocal_rhs,
    smoothed_triangle,
    spectral_side,
    spectral_tail_bound,
    verify_zero_ordinate,
    weil_balance,
    windowed_cosine,
    zero_sum_terms,
    zeta_euler_maclaurin,
)
from picmonoid.explicit_formula import mellin_hat_real

# aliased so pytest doesn't try to collect them as tests
from picmonoid import TestFunction as Profile
from picmonoid import test_function_from_spec as profile_from_spec

from conftest import nonzero_rationals

BUMP3 = windowed_cosine(3.0, 0.0, 5.0)


def pure_gaussian(omega: float, sigma: float = 1.0) -> Profile:
    """Unwindowed Gaussian profile; support 30 makes the cutoff error ~1e-196."""

    def fn(t):
        return np.cos(omega * t) * np.exp(-t * t / (2.0 * sigma * sigma))

    return Profile(fn, 30.0, "raw-gaussian", {"omega": omega, "sigma": sigma}, None)


def gaussian_hat_closed_form(omega: float, sigma: float, z: complex) -> complex:
    pref = sigma * math.sqrt(2.0 * math.pi) / 2.0
    return pref * (np.exp(sigma**2 * (z + 1j * omega) ** 2 / 2.0)
                   + np.exp(sigma**2 * (z - 1j * omega) ** 2 / 2.0))


# -- test profiles ------------------------------------------------------------------


def test_profiles_are_even_and_supported():
    t = np.linspace(-7, 7, 101)
    for g in (BUMP3, smoothed_triangle(4.0), windowed_cosine(2.0, 1.5, 3.0)):
        vals = g(t)
        assert np.allclose(vals, g(-t))
        assert np.all(vals[np.abs(t) > g.support] == 0.0)
        assert isinstance(g(0.3), float)


def test_spec_string_round_trip():
    for g in (BUMP3, smoothed_triangle(4.0), windowed_cosine(2.0, 1.5, 3.0)):
        again = profile_from_spec(g.spec_string())
        assert again.kind == g.kind and again.params == g.params
    with pytest.raises(UsageError):
        profile_from_spec("sinc:T=3")
    with pytest.raises(UsageError):
        profile_from_spec("cosbump:omega=abc")
    with pytest.raises(UsageError):
        windowed_cosine(1.0, 0.0, -2.0)


# -- the two-sided transform ---------------------------------------------------------


def test_hat_against_gaussian_closed_form():
    for omega in (0.0, 2.5):
        g = pure_gaussian(omega)
        for z in (0.0, 1.0, 0.5 + 3.0j, 0.5 + 14.134725j, 2.0j, -1.0 + 1.0j):
            want = gaussian_hat_closed_form(omega, 1.0, complex(z))
            got = mellin_hat(g, z)
            assert abs(got - want) < 1e-10, (omega, z)


def test_hat_imaginary_axis_is_real():
    for y in (0.5, 3.0, 17.0):
        val = mellin_hat(BUMP3, 1j * y)
        assert abs(val.imag) < 1e-12


def test_hat_domain_and_error_contract():
    with pytest.raises(UsageError):
        mellin_hat(BUMP3, 3.0)
    with pytest.raises(UsageError):
        mellin_hat_real(BUMP3, -2.5 + 1j)
    val, err = mellin_hat_with_error(BUMP3, 1.0)
    assert err < 1e-9 and abs(val.imag) == 0.0
    with pytest.raises(QuadratureFailureError):
        mellin_hat(BUMP3, 1.0, max_error=1e-30)


def test_zero_sum_fast_path_matches_adaptive():
    table = load_zero_table()
    ordinates = table.first(12)
    fast = zero_sum_terms(BUMP3, ordinates)
    slow = [2.0 * mellin_hat_real(BUMP3, 0.5 + 1j * gamma) for gamma in ordinates]
    for a, b in zip(fast, slow):
        assert abs(a - b) < 1e-9


# -- finite places -------------------------------------------------------------------


def test_finite_term_truncates_with_support():
    narrow = windowed_cosine(0.0, 0.0, 0.5)  # support below log 2
    assert local_term_finite(narrow, 2) == 0.0
    assert list(geometric_side(narrow)) == ["inf"]


def test_finite_term_shell_values():
    # support 0.97 admits only the m=1 shells at p=2:
    # W_2 = log 2 * (g(log 2) + g(-log 2)/2) = log 2 * (3/2) g(log 2)
    g = windowed_cosine(0.0, 0.0, 0.97)
    lp = math.log(2.0)
    assert math.isclose(local_term_finite(g, 2), lp * 1.5 * g(lp), rel_tol=1e-14)
    sides = geometric_side(g)
    assert set(sides) == {"inf", "2"}
    assert math.isclose(sides["2"], lp * 1.5 * g(lp), rel_tol=1e-14)


def test_shell_decomposition_agrees_with_place_term():
    for p in (2, 3, 5, 13):
        lhs = local_term_finite(BUMP3, p)
        rhs = math.log(p) * finite_shell_decomposition(BUMP3, p)
        assert abs(lhs - rhs) < 1e-12


def test_geometric_side_cutoff_guard():
    with pytest.raises(UsageError):
        geometric_side(windowed_cosine(0.0, 0.0, 17.0))


# -- archimedean place ----------------------------------------------------------------


def test_arch_routes_agree():
    for g in (BUMP3, windowed_cosine(0.0, 0.0, 5.0), smoothed_triangle(4.0)):
        a = local_term_arch(g, method="subtract")
        b = local_term_arch(g, method="symmetric")
        assert abs(a - b) < 1e-8


def test_arch_digamma_route():
    g = windowed_cosine(1.0, 0.0, 3.0)
    a = local_term_arch(g)
    c = local_term_arch_digamma(g)
    assert abs(a - c) < 1e-8


def test_arch_method_validation():
    with pytest.raises(UsageError):
        local_term_arch(BUMP3, method="laplace")


# -- zeros: table and certification ----------------------------------------------------


def test_bundled_zero_table():
    table = load_zero_table()
    assert len(table) == 100
    ordinates = table.first(100)
    assert all(b > a for a, b in zip(ordinates, ordinates[1:]))
    assert abs(ordinates[0] - 14.1347251417) < 1e-9
    assert "zetazero" in table.provenance or "mpmath" in table.provenance
    with pytest.raises(InsufficientZerosError):
        table.first(101)


def test_zero_table_env_override(tmp_path, monkeypatch):
    alt = tmp_path / "zeros.txt"
    alt.write_text("# three hand-picked ordinates\n14.134725\n21.022040\n25.010858\n")
    monkeypatch.setenv("PICMONOID_ZEROS", str(alt))
    table = load_zero_table()
    assert len(table) == 3 and "hand-picked" in table.provenance


def test_zero_table_rejects_bad_data():
    with pytest.raises(UsageError):
        parse_zero_table("14.134725\nnot-a-number\n")
    with pytest.raises(UsageError):
        parse_zero_table("14.134725\n14.0\n")  # not increasing
    with pytest.raises(UsageError):
        parse_zero_table("15.5\n21.0\n")  # wrong first ordinate
    with pytest.raises(UsageError):
        parse_zero_table("# only comments\n")


def test_zeta_reference_values():
    assert abs(zeta_euler_maclaurin(2.0) - math.pi**2 / 6.0) < 1e-12
    assert abs(zeta_euler_maclaurin(-1.0) - (-1.0 / 12.0)) < 1e-12
    with pytest.raises(ZeroScaleError):
        zeta_euler_maclaurin(1.0)


def test_zero_certification():
    ok, mag = verify_zero_ordinate(14.134725141734693)
    assert ok and mag < 1e-10
    bad_ok, bad_mag = verify_zero_ordinate(14.5)
    assert not bad_ok and bad_mag > 1e-3


# -- the balance ------------------------------------------------------------------------


def test_weil_balance_converges():
    table = load_zero_table()
    report = weil_balance(BUMP3, table, 100)
    assert report.residual < 1e-8
    assert report.zeros_used == 100
    assert set(report.per_place.keys()) >= {"inf", "2", "3", "5"}
    assert report.tail_bound is not None and report.residual <= report.tail_bound
    ten = weil_balance(BUMP3, table, 10)
    assert report.residual <= ten.residual


def test_balance_curve_matches_pointwise():
    table = load_zero_table()
    curve = dict(balance_curve(BUMP3, table, [10, 40, 100]))
    assert curve[100] < curve[10]
    assert math.isclose(curve[100], weil_balance(BUMP3, table, 100).residual,
                        rel_tol=0, abs_tol=1e-12)


def test_spectral_side_and_tail_bound():
    table = load_zero_table()
    value, bound = spectral_side(BUMP3, table, 50)
    assert bound is not None and bound > 0
    geo = math.fsum(geometric_side(BUMP3).values())
    assert abs(value - geo) <= bound
    # a merely C^1 profile cannot fund the integration-by-parts bound
    assert spectral_tail_bound(smoothed_triangle(4.0), 100.0) is None


def test_balance_report_json_shape():
    table = load_zero_table()
    data = weil_balance(windowed_cosine(0.0, 0.0, 2.0), table, 10).to_json()
    assert set(data) == {"spectral", "geometric", "residual", "hat0", "hat1",
                         "zerosUsed", "tailBound", "perPlace"}
    assert data["zerosUsed"] == 10


# -- distributional kernel ----------------------------------------------------------------


def test_dist_trace_values():
    assert dist_trace(2, "inf") == 1.0
    assert dist_trace(Fraction(1, 2), 2) == Fraction(1, 2)
    assert dist_trace(10, 3) == 9
    assert dist_trace(Fraction(3, 2), "arch") == 2.0
    with pytest.raises(FixedPointSingularError):
        dist_trace(1, 7)


def test_product_formula_examples():
    assert product_formula_holds(2)
    assert product_formula_holds(Fraction(-7, 15))
    assert product_formula_holds(0)
    with pytest.raises(FixedPointSingularError):
        product_formula_holds(1)


@given(nonzero_rationals)
def test_product_formula_random(u):
    if u == 1:
        return
    assert product_formula_holds(u)


# -- semilocal bookkeeping ------------------------------------------------------------------


def test_semilocal_report():
    report = semilocal_rhs(BUMP3, 1.0, ["inf"])
    assert report.divergent == 0.0  # log 1
    assert set(report.finite_terms) == {"inf"}
    assert math.isclose(report.finite_total, local_term_arch(BUMP3), rel_tol=1e-12)

    doubled = semilocal_rhs(BUMP3, 2.0, ["inf", 2, 3])
    assert math.isclose(doubled.divergent, 2.0 * BUMP3(0.0) * math.log(2.0), rel_tol=1e-14)
    assert set(doubled.finite_terms) == {"inf", "2", "3"}
    with pytest.raises(ZeroScaleError):
        semilocal_rhs(BUMP3, 0.0, ["inf"])


def test_semilocal_vanishing_profile():
    def fn(t):
        return t * t * np.exp(-t * t)

    flat = Profile(fn, 6.0, "ring", {}, None)
    assert flat(0.0) == 0.0
    report = semilocal_rhs(flat, 7.5, [2])
    assert report.divergent == 0.0
