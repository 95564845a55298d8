import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from flatext import _jetcore_py, jets
from flatext.errors import DomainError, ParseError
from flatext.expr import parse
from flatext.jets import Jet, jet_compose_curve, jet_lift

TRANSCENDENTAL = [
    "sin(t) * exp(u*t) + sqrt(1 + t^2) / (2 - t)",
    "exp(sin(t)) * sqrt(2 + cos(t)) / (3 + t^2)",
    "cos(t^3 - u) / (1.5 + sin(2*t))",
    "sqrt(exp(t) + t^4) * sin(t + u)^2",
]


def mp_eval(e, t, u):
    """Independent evaluator in mpmath arithmetic, straight from the source text."""
    names = {"sin": mpmath.sin, "cos": mpmath.cos, "exp": mpmath.exp, "sqrt": mpmath.sqrt,
             "t": t, "u": u}
    return eval(e.replace("^", "**"), {"__builtins__": {}}, names)


def mp_fd(e, t0, u0, k, h=mpmath.mpf("1e-5")):
    f = lambda t: mp_eval(e, t, u0)
    t0 = mpmath.mpf(t0)
    if k == 1:
        return (f(t0 + h) - f(t0 - h)) / (2 * h)
    if k == 2:
        return (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / h ** 2
    return (f(t0 + 2 * h) - 2 * f(t0 + h) + 2 * f(t0 - h) - f(t0 - 2 * h)) / (2 * h ** 3)


@pytest.mark.parametrize("expr", TRANSCENDENTAL)
def test_jet_derivatives_match_high_precision_differences(expr, backend):
    mpmath.mp.dps = 50
    t0, u0 = 0.37, 0.21
    j = jet_lift(expr, (t0, u0), "t", 5)
    for k in (1, 2, 3):
        fd = float(mp_fd(expr, t0, u0, k))
        assert abs(j.derivative(k) - fd) <= 1e-6 * abs(fd)


def test_u_direction_jets():
    mpmath.mp.dps = 50
    e = "sin(t) * exp(u*t) + u^3"
    j = jet_lift(e, (0.4, 0.3), "u", 3)
    f = lambda u: mp_eval(e, mpmath.mpf("0.4"), u)
    h = mpmath.mpf("1e-5")
    fd = (f(mpmath.mpf("0.3") + h) - f(mpmath.mpf("0.3") - h)) / (2 * h)
    assert abs(j.derivative(1) - float(fd)) <= 1e-9


@pytest.mark.parametrize("t0", [-1.3, 0.0, 0.5, 2.0])
def test_polynomial_jets_exact(t0, backend):
    p = np.poly1d([3.0, -1.0, 0.5, 2.0, -4.0, 1.0])  # degree 5
    j = jet_lift("3*t^5 - t^4 + 0.5*t^3 + 2*t^2 - 4*t + 1", (t0, 0.0), "t", 7)
    for k in range(8):
        exact = p.deriv(k)(t0) if k else p(t0)
        assert abs(j.derivative(k) - exact) <= 1e-12 * max(1.0, abs(exact))


def test_sympy_taylor_coefficients():
    t = sp.symbols("t")
    f = sp.exp(sp.sin(t)) / (1 + t ** 2)
    series = sp.series(f, t, 0, 7).removeO()
    j = jet_lift("exp(sin(t)) / (1 + t^2)", (0.0, 0.0), "t", 6)
    for k in range(7):
        assert abs(j.coeffs[k] - float(series.coeff(t, k))) <= 1e-14


coeff_arrays = st.integers(1, 6).flatmap(lambda K: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.floats(-3, 3), min_size=(K + 1) * n, max_size=(K + 1) * n).map(
        lambda xs: np.array(xs).reshape(K + 1, n))))


@pytest.mark.skipif("cython" not in jets.available_backends(), reason="compiled kernel not built")
@settings(max_examples=60, deadline=None)
@given(coeff_arrays, coeff_arrays)
def test_compiled_and_numpy_kernels_agree(a, b):
    from flatext import _jetcore
    m = min(a.shape[0], b.shape[0])
    n = min(a.shape[1], b.shape[1])
    a = np.ascontiguousarray(a[:m, :n])
    b = np.ascontiguousarray(b[:m, :n])
    pos = a.copy()
    pos[0] = np.abs(pos[0]) + 1.0
    cases = [("mul", (a, b)), ("div", (a, pos)), ("sqrt", (pos,)), ("exp", (a,))]
    for name, args in cases:
        x = getattr(_jetcore, name)(*args)
        y = getattr(_jetcore_py, name)(*args)
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)
    for x, y in zip(_jetcore.sincos(a), _jetcore_py.sincos(a)):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(0.3, 3))
def test_algebraic_identities(t0, c):
    x = Jet.variable(t0, 6)
    y = x * x + c
    np.testing.assert_allclose((y / y).coeffs, Jet.constant(1.0, 6).coeffs, atol=1e-12)
    np.testing.assert_allclose((y.sqrt() ** 2).coeffs, y.coeffs, atol=1e-10 * (1 + c))
    s, co = x.sin(), x.cos()
    np.testing.assert_allclose((s * s + co * co).coeffs, Jet.constant(1.0, 6).coeffs, atol=1e-12)
    np.testing.assert_allclose((x.exp() * (-x).exp()).coeffs, Jet.constant(1.0, 6).coeffs,
                               atol=1e-10)


def test_domain_errors():
    t = Jet.variable(0.0, 4)
    with pytest.raises(DomainError):
        1.0 / t
    with pytest.raises(DomainError):
        t.sqrt()
    with pytest.raises(DomainError):
        (t - 1.0).sqrt()
    with pytest.raises(DomainError):
        jet_lift("1/t", (0.0, 0.0))
    with pytest.raises(DomainError):
        jet_lift("sqrt(t^2)", (0.0, 0.0))


def test_domain_error_threshold_is_relative():
    # constant term 1e-14 against coefficients of order 1 counts as vanishing
    b = Jet(np.array([1e-14, 1.0, 0.0]))
    with pytest.raises(DomainError):
        Jet.constant(1.0, 2) / b
    b = Jet(np.array([1e-12, 1.0, 0.0]))
    assert np.isfinite((Jet.constant(1.0, 2) / b).coeffs).all()


def test_batched_jets_match_pointwise():
    ts = np.array([-0.5, 0.1, 0.7])
    e = "exp(t) * cos(t*u) / (2 + t)"
    batch = jet_lift(e, (ts, 0.3), "t", 5)
    for i, t0 in enumerate(ts):
        single = jet_lift(e, (t0, 0.3), "t", 5)
        np.testing.assert_allclose(batch.coeffs[:, i], single.coeffs, rtol=1e-14)


def test_compose_curve_chain_rule():
    s = Jet.variable(0.2, 5)
    inner = (2 * s + 1, s * s)
    composed = jet_compose_curve("sin(t) * u + t^2", inner)
    direct = (2 * s + 1).sin() * (s * s) + (2 * s + 1) ** 2
    np.testing.assert_allclose(composed.coeffs, direct.coeffs, rtol=1e-14)


def test_composition_with_constant_expression_keeps_batch_shape():
    j = jet_lift("2.5", (np.zeros(4), 0.0), "t", 3)
    assert j.shape == (4,)
    assert np.all(j.value == 2.5) and np.all(j.coeffs[1:] == 0)


def test_read_only_coefficients():
    j = Jet.variable(1.0, 3)
    with pytest.raises(ValueError):
        j.coeffs[0] = 5.0


# expression grammar

@pytest.mark.parametrize("text", ["t^2 + u*t", "sin(t)*cos(u)", "sqrt(1 + t^2)/exp(u)",
                                  "((t))", "  t ^ 3 ", "2*-t", "-t^2", "1.5e-3*t", ".5 + 3."])
def test_parses(text):
    parse(text)


@pytest.mark.parametrize("text", ["", "t +", "x + 1", "tan(t)", "t^-1", "t^1.5", "t^u", "(t",
                                  "t)", "t ** 2", "2t", "sin t", "t; u", "t = 1", "T"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_precedence():
    e = parse("-t^2 + 2*t/4 - 1")
    assert e(3.0) == -9 + 1.5 - 1
    assert parse("(1 + t)^2")(2.0) == 9.0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TRANSCENDENTAL + ["t^3*u - 2*u^2", "exp(-t)*sqrt(2 + u)"]),
       st.floats(-0.8, 0.8), st.floats(0.0, 0.8))
def test_symbolic_diff_matches_jets(text, t0, u0):
    e = parse(text)
    for var in ("t", "u"):
        d = e.diff(var)(t0, u0)
        j = jet_lift(e, (t0, u0), var, 2)
        assert abs(d - j.derivative(1)) <= 1e-10 * max(1.0, abs(d))


def test_diff_against_sympy():
    t, u = sp.symbols("t u")
    text = "sin(t)*exp(u*t) + sqrt(1 + t^2)/(2 - t)"
    ref = sp.diff(sp.sympify(text.replace("^", "**")), t, 2)
    e = parse(text).diff("t").diff("t")
    val = float(ref.subs({t: 0.3, u: 0.2}))
    assert abs(e(0.3, 0.2) - val) <= 1e-12 * abs(val)


@pytest.mark.parametrize("text", TRANSCENDENTAL + ["-t^2 + 1e-05*u", "t - (-2.5)"])
def test_string_round_trip(text):
    e = parse(text)
    assert parse(str(e)) == e


def test_substitution():
    e = parse("t^2 + sin(u)")
    s = e.subs("t", parse("2*t + 1"))
    assert math.isclose(s(0.5, 0.3), 4.0 + math.sin(0.3))


def test_pure_python_fallback_selected_by_environment():
    import os
    import subprocess
    import sys
    env = dict(os.environ, FLATEXT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import flatext; print(flatext.get_backend())"],
                         env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "python"
