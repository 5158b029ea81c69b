import json
from fractions import Fraction as F
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from involute.combinatorics import class_size
from involute.counting import (
    AnalysisReport,
    NonIntegralDOFWarning,
    Polynomial,
    build_report,
    dof,
    dof_closed_form,
    free_function_counts,
    gauge_corrected_characters,
    gauge_corrected_hilbert,
    gauge_polynomial,
    hilbert,
    patterns_check,
    strength_coefficients,
)
from involute.jets import Characters

from conftest import CORPUS_NAMES, MASSIVE, corpus_run

r = sp.Symbol("r")
t = sp.Symbol("t")


def poly(*coeffs):
    return Polynomial(tuple(F(c) for c in coeffs))


def sympy_coeffs(expr, n):
    p = sp.Poly(sp.expand(expr), r)
    return tuple(F(str(p.coeff_monomial(r**i))) for i in range(n))


def sympy_hilbert(alpha):
    return sum(sp.binomial(r + k - 1, r).expand(func=True) * a for k, a in enumerate(alpha, start=1))


def sympy_gauge(gammas, n, q):
    return sum(g * sp.expand_func(sp.binomial(q + r + ell + n - 1, q + r + ell)) for ell, g in enumerate(gammas))


def sympy_strength(alpha, gammas, n, q):
    """Z0 and Z1 from the large-r expansion of H_bar / C(n+q+r-1, q+r)."""
    h_bar = sympy_hilbert(alpha) - sympy_gauge(gammas, n, q)
    z = h_bar / sp.expand_func(sp.binomial(n + q + r - 1, q + r))
    # r = 1/t turns both limits into values of rational functions at t = 0
    zt = sp.cancel(z.subs(r, 1 / t))
    z0 = zt.subs(t, 0)
    z1 = sp.cancel((zt - z0) / t).subs(t, 0)
    return F(str(z0)), F(str(z1))


def test_polynomial_basics():
    p = poly(1, 2, 0, 0)
    assert p.coefficients == (1, 2) and p.degree == 1
    assert p(3) == 7
    assert (p * poly(0, 1)).coefficients == (0, 1, 2)
    assert (p - p).coefficients == ()
    assert str(poly(36, F(73, 3), F(9, 2), F(1, 6))) == "36 + 73/3 r + 9/2 r^2 + 1/6 r^3"
    assert str(poly(0, -1, 1)) == "-r + r^2"


@given(st.integers(-3, 6), st.integers(0, 5), st.integers(0, 8))
def test_binomial_polynomial_matches_sympy(shift, k, value):
    assert Polynomial.binomial(shift, k)(value) == F(str(sp.expand_func(sp.binomial(value + shift, k))))


@pytest.mark.parametrize(
    "alpha, expected",
    [
        ((4, 3, 2, 0), (9, 6, 1)),
        ((15, 11, 6, 0), (32, 20, 3)),
        ((16, 12, 7, 1), (36, F(73, 3), F(9, 2), F(1, 6))),
    ],
)
def test_hilbert_examples(alpha, expected):
    assert hilbert(Characters(2, (0,) * 4, alpha)) == poly(*expected)


def test_gauge_polynomial_examples():
    maxwell = gauge_polynomial((0, 1), 4, 2)
    assert maxwell == poly(20, F(37, 3), F(5, 2), F(1, 6))
    assert gauge_polynomial((), 4, 2) == Polynomial()
    assert gauge_polynomial((0, 4), 4, 2) == maxwell.scale(4)


@pytest.mark.parametrize(
    "alpha, gammas, H_bar",
    [((16, 12, 7, 1), (0, 1), (16, 12, 2)), ((40, 30, 16, 4), (0, 4), (10, 12, 2)), ((20, 15, 9, 1), (0, 1), (25, 18, 3))],
)
def test_gauge_corrected_hilbert_examples(alpha, gammas, H_bar):
    H = hilbert(Characters(2, (0,) * 4, alpha))
    assert gauge_corrected_hilbert(H, gauge_polynomial(gammas, 4, 2)) == poly(*H_bar)


def test_gauge_corrected_character_examples():
    assert gauge_corrected_characters(poly(16, 12, 2), 4, 2) == (6, 6, 4, 0)
    assert gauge_corrected_characters(poly(10, 12, 2), 4, 2) == (0, 6, 4, 0)


@given(st.integers(1, 5), st.integers(1, 3), st.integers(1, 3), st.data())
def test_character_round_trip(n, q, m, data):
    sizes = [class_size(k, n, q, m) for k in range(1, n + 1)]
    alpha = tuple(data.draw(st.integers(0, s)) for s in sizes)
    C = Characters(q, tuple(s - a for s, a in zip(sizes, alpha)), alpha)
    assert gauge_corrected_characters(hilbert(C), n, q) == alpha


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_hilbert_and_gauge_match_sympy(name):
    report = corpus_run(name).report
    assert report.H.padded(4) == sympy_coeffs(sympy_hilbert(report.alpha), 4)
    assert report.G.padded(4) == sympy_coeffs(sympy_gauge(report.gammas, 4, report.q), 4)
    assert report.H(0) == sum(report.alpha)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_strength_matches_large_r_expansion(name):
    report = corpus_run(name).report
    assert (report.Z0, report.Z1) == sympy_strength(report.alpha, report.gammas, report.n, report.q)


@given(st.integers(2, 5), st.integers(1, 3), st.integers(1, 3), st.lists(st.integers(0, 3), max_size=3), st.data())
def test_strength_formula_matches_expansion_for_random_characters(n, q, m, gammas, data):
    sizes = [class_size(k, n, q, m) for k in range(1, n + 1)]
    alpha = tuple(data.draw(st.integers(0, s)) for s in sizes)
    assert strength_coefficients(alpha, gammas, n, q) == sympy_strength(alpha, gammas, n, q)


def test_strength_examples():
    assert strength_coefficients((16, 12, 7, 1), (0, 1), 4, 2) == (0, 12)
    assert strength_coefficients((4, 3, 2, 0), (), 4, 2) == (0, 6)
    assert strength_coefficients((15, 11, 6, 0), (), 4, 2) == (0, 18)


@pytest.mark.parametrize(
    "beta, m, gammas, expected",
    [((0, 0, 1, 3), 4, (0, 1), 2), ((0, 1, 2, 3), 6, (1, 2), 1), ((0, 0, 4, 6), 10, (0, 4), 2), ((8, 7, 10, 10), 10, (), 5)],
)
def test_dof_examples(beta, m, gammas, expected):
    sizes = [class_size(k, 4, 2, m) for k in range(1, 5)]
    C = Characters(2, beta, tuple(s - b for s, b in zip(sizes, beta)))
    assert dof(C, gammas) == dof_closed_form(beta, m, gammas, 2) == expected


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_dof_closed_form_agrees(name):
    report = corpus_run(name).report
    assert dof_closed_form(report.beta, report.m, report.gammas, report.q) == report.dof
    if not report.has_gauge:
        assert report.dof == report.m - F(report.beta[2], report.q) >= 0


def test_free_function_counts():
    assert free_function_counts((16, 12, 7, 1), 4, 2) == (-1, -1, 5, 1)
    assert free_function_counts((6, 6, 4, 0), 4, 2) == (-2, -2, 4, 0)
    assert free_function_counts((4, 3, 2, 0), 4, 2)[2:] == (2, 0)
    assert free_function_counts((5, 3, 2, 1), 4, 1) == (2, 1, 1, 1)
    partial = free_function_counts((9, 7, 5, 3, 1), 5, 2)
    assert partial[:3] == (None, None, None) and partial[3:] == (1, 1)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_compatible_hilbert_degree(name):
    report = corpus_run(name).report
    assert report.compatible
    assert report.H_bar.coefficient(3) == 0
    assert report.H_bar.coefficient(2) == report.q * report.dof / factorial(2)


def test_non_integral_dof_warns_and_is_not_rounded():
    # scalar, n = 4, q = 2, alpha^(3) = 1: Z1 = 3, so the count is 3 / 6
    C = Characters(2, (0, 0, 1, 1), (4, 3, 1, 0))
    with pytest.warns(NonIntegralDOFWarning):
        report = build_report("half", 1, C, (), 0, 0)
    assert report.dof == F(1, 2)
    assert any("1/2" in w for w in report.warnings)


def test_incompatible_system_is_reported():
    C = Characters(2, (0, 0, 0, 0), (4, 3, 2, 1))
    report = build_report("free", 1, C, (), 0, 0)
    assert not report.compatible and report.Z0 == 1
    assert any("not compatible" in w for w in report.warnings)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_report_json_round_trip(name):
    report = corpus_run(name).report
    text = report.to_json()
    again = AnalysisReport.from_json(text)
    assert again == report
    assert again.to_json() == text
    data = json.loads(text)
    assert set(data["flags"]) == {"compatible", "parameter_special"}
    assert all(isinstance(x, str) for x in data["alpha_bar"] + data["H"] + [data["dof"], data["Z0"], data["Z1"]])


@pytest.mark.filterwarnings("ignore::involute.counting.NonIntegralDOFWarning")
def test_patterns_flag_ordering_violation():
    # characters of an order-2 scalar system in two coordinates with beta decreasing
    C = Characters(2, (1, 0), (1, 1))
    names = {f.name for f in patterns_check(build_report("bad", 1, C, (), 0, 0)) if not f.passed}
    assert "beta_nondecreasing" in names and "alpha_nonincreasing" not in names
    C = Characters(2, (2, 0), (0, 1))
    names = {f.name for f in patterns_check(build_report("bad", 1, C, (), 0, 0)) if not f.passed}
    assert {"alpha_nonincreasing"} <= names


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_beta_difference_pattern_fails_only_for_massive_theories(name):
    findings = {f.name: f for f in patterns_check(corpus_run(name).report)}
    assert findings["dof_from_beta_difference"].passed is (name not in MASSIVE)
    assert findings["dof_from_beta_difference"].informational


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_gauge_weight_bound_reported(name):
    finding = {f.name: f for f in patterns_check(corpus_run(name).report)}["gauge_weight_bound"]
    assert finding.informational and finding.passed
