import json
import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from meridian._fd import d1, d2
from meridian.errors import AxisPoint, DomainError, QuadrantViolation, ValidationError
from meridian.field_core import (
    MeridionalField,
    CallableProfile,
    bihyperbolic_residual,
    continuity_residual,
    epd_residual,
    field_eval,
    holo_field,
    stokes_residual,
    stream_orthogonality,
)
from meridian.radial_holo import Exp
from meridian.separable import (
    BiSeries,
    BiTerm,
    GaspSeries,
    GaspTerm,
    StokesStream,
    bi_eval,
    bi_from_json,
    bi_x0_factor,
    bi_x1_factor,
    bi_x2_factor,
    exponential_as_gasp,
    exponential_example,
    gasp_eval,
    gasp_field,
    gasp_from_json,
    gasp_grad,
    stokes_from_potential,
)

J1_1 = float(mp.besselj(1, 1))
J0_1 = float(mp.besselj(0, 1))
I1_1 = float(mp.besseli(1, 1))
K1_2 = float(mp.besselk(1, 2))


def _grid(x0=(-1.0, 1.0), rho=(0.2, 5.0), n=10):
    return [(a, b) for a in np.linspace(*x0, n) for b in np.linspace(*rho, n)]


# -- GASP -------------------------------------------------------------------------------------

def test_gasp_examples():
    assert gasp_eval(GaspSeries(1.0), (0.3, 1.0)) == 0.0
    assert gasp_grad(GaspSeries(1.0), (0.3, 1.0)) == (0.0, 0.0)
    s = GaspSeries(2.0, [GaspTerm(1.0, 1.0, 0.0, 1.0, 0.0)])
    assert gasp_eval(s, (0, 1)) == pytest.approx(J1_1, rel=1e-12)
    g0, gr = gasp_grad(s, (0, 1))
    assert g0 == 0.0 and gr == pytest.approx(J0_1, rel=1e-12)


def test_gasp_sine_encoding():
    # rho^(1/2) J_(1/2)(rho) = sqrt(2/pi) sin(rho), so a1 = -sqrt(pi/2)
    # with b1 = b2 = 1 gives g = -e^x0 sin(rho), which is -1 at (0, pi/2)
    s = GaspSeries(1.0, [GaspTerm(1.0, 1.0, 1.0, -math.sqrt(math.pi / 2), 0.0)])
    assert gasp_eval(s, (0, math.pi / 2)) == pytest.approx(-1.0, abs=1e-13)
    for x0, rho in _grid(n=5):
        assert gasp_eval(s, (x0, rho)) == pytest.approx(-math.exp(x0) * math.sin(rho), abs=1e-12 * math.exp(x0))


def test_gasp_cosine_encoding_gradient():
    s = exponential_as_gasp(1.0, 0.0, 1.0)  # g = e^x0 cos(rho)
    g0, gr = gasp_grad(s, (0, math.pi / 2))
    assert g0 == pytest.approx(0.0, abs=1e-13) and gr == pytest.approx(-1.0, abs=1e-13)


def test_gasp_axis_behaviour():
    s0 = GaspSeries(0.0, [GaspTerm(2.0, 0.5, 1.0, 3.0, 0.0)])
    assert gasp_eval(s0, (0.0, 0.0)) == pytest.approx(1.5)
    s2 = GaspSeries(2.0, [GaspTerm(2.0, 1.0, 0.0, 1.0, 0.0)])
    assert gasp_eval(s2, (0.4, 0.0)) == 0.0
    with pytest.raises(DomainError):
        gasp_eval(GaspSeries(2.0, [GaspTerm(1.0, 1.0, 0.0, 0.0, 1.0)]), (0.0, 0.0))
    with pytest.raises(AxisPoint):
        gasp_grad(s2, (0.0, 0.0))


@pytest.mark.parametrize("alpha", (0.0, 1.0, 2.0, 3.0, 4.5))
def test_gasp_grad_matches_fd(alpha):
    s = GaspSeries(alpha, [GaspTerm(1.2, 0.7, -0.3, 1.0, 0.4), GaspTerm(0.5, -1.0, 0.2, 0.3, -0.8)])
    for x0, rho in _grid(rho=(0.3, 4.0), n=6):
        g0, gr = gasp_grad(s, (x0, rho))
        f0 = d1(lambda t: gasp_eval(s, (t, rho)), x0)
        fr = d1(lambda t: gasp_eval(s, (x0, t)), rho)
        assert g0 == pytest.approx(f0, rel=1e-6, abs=1e-9)
        assert gr == pytest.approx(fr, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("alpha", (0.0, 1.0, 2.0, 3.0))
def test_gasp_satisfies_epd_on_grid(alpha):
    s = GaspSeries(alpha, [GaspTerm(1.0, 1.0, 0.5, 1.0, 0.3), GaspTerm(2.0, 0.2, -1.0, 0.5, 0.0)])
    for m in _grid():
        assert epd_residual(s.potential, alpha, m) <= 1e-5


_coef = st.floats(-2, 2, allow_nan=False)


@given(
    alpha=st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.0, 5.0]),
    beta=st.floats(0.2, 2.5),
    c=st.tuples(_coef, _coef, _coef, _coef),
    x0=st.floats(-1, 1),
    rho=st.floats(0.3, 3),
)
def test_gasp_term_solves_epd(alpha, beta, c, x0, rho):
    s = GaspSeries(alpha, [GaspTerm(beta, *c)])
    scale = 1.0 + sum(abs(v) for v in c) * math.cosh(beta * x0) * max(1.0, rho**alpha)
    assert epd_residual(s.potential, alpha, (x0, rho)) <= 1e-5 * scale


def test_gasp_validation():
    with pytest.raises(ValidationError):
        GaspTerm(0.0)
    with pytest.raises(ValidationError):
        GaspTerm(-1.0)
    with pytest.raises(ValidationError):
        GaspTerm(1.0, a1=float("nan"))
    with pytest.raises(ValidationError):
        GaspSeries(1.0, [1.0])


# -- exponential closed form --------------------------------------------------------------------

def test_exponential_examples():
    assert field_eval(exponential_example(1, 0, 1), (0, math.pi, 0)) == pytest.approx((-1, 0, 0), abs=1e-15)
    assert field_eval(exponential_example(1, 1, 0), (0, math.pi / 2, 0)) == pytest.approx((-1, 0, 0), abs=1e-15)
    with pytest.raises(ValidationError):
        exponential_example(0.0, 1, 0)


@pytest.mark.parametrize("beta, A1, A2", [(1.0, 1.0, 0.0), (0.5, -0.7, 1.3), (2.0, 0.3, -0.2)])
def test_exponential_gasp_map(beta, A1, A2):
    f = exponential_example(beta, A1, A2)
    s = exponential_as_gasp(beta, A1, A2)
    for x0, rho in _grid():
        closed = math.exp(beta * x0) * (-A1 * math.sin(beta * rho) + A2 * math.cos(beta * rho))
        assert f.profile.potential(x0, rho) == pytest.approx(closed, abs=1e-10)
        assert gasp_eval(s, (x0, rho)) == pytest.approx(closed, abs=1e-10)


def test_exponential_speed():
    beta, A1, A2 = 1.5, 0.6, -0.8
    f = exponential_example(beta, A1, A2)
    for x0, rho in _grid(n=4):
        v = field_eval(f, (x0, rho, 0.0))
        assert math.hypot(*v) == pytest.approx(beta * math.exp(beta * x0) * math.hypot(A1, A2), rel=1e-12)


# -- bihyperbolic -----------------------------------------------------------------------------

def test_bi_examples():
    assert bi_eval(BiSeries(1.0, 1.0), (0, 1, 1)) == 0.0
    t = BiTerm(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    s = BiSeries(1.0, 1.0, [t])
    assert bi_eval(s, (0, 1, 1)) == pytest.approx(J1_1 * I1_1, rel=1e-12)
    assert bi_eval(s, (0, 1, 1)) == pytest.approx(0.24869859, abs=1e-8)
    tk = BiTerm(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0)
    assert bi_eval(BiSeries(1.0, 1.0, [tk]), (0, 1, 2)) == pytest.approx(J1_1 * 2 * K1_2, rel=1e-12)
    with pytest.raises(QuadrantViolation):
        bi_eval(s, (0, -1, 1))
    with pytest.raises(QuadrantViolation):
        bi_eval(s, (0, 1, 0))


def test_bi_validation():
    with pytest.raises(ValidationError):
        BiTerm(0.0)
    with pytest.raises(ValidationError):
        BiSeries(0.0, 1.0)
    with pytest.warns(UserWarning):
        BiSeries(1.0, 1.0, [BiTerm(1.0, 0.5), BiTerm(1.0, 1.0)])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        BiSeries(1.0, 1.0, [BiTerm(1.0, 1.0), BiTerm(1.0, 2.0)])
    assert BiTerm(3.0, 4.0).nu == 5.0


_terms = [
    BiTerm(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0),
    BiTerm(0.7, 1.0, 0.4, 0.6, 0.3, -1.0, 0.5, 0.8),
    BiTerm(1.5, 2.0, -0.2, 1.0, 1.0, 0.5, 0.0, 1.0),
]


@pytest.mark.parametrize("a1, a2", [(1.0, 1.0), (0.5, 2.0), (3.0, 1.5)])
def test_bi_series_residual_on_grid(a1, a2):
    s = BiSeries(a1, a2, _terms)
    for x0 in np.linspace(-1, 1, 5):
        for x1 in np.linspace(0.3, 2.5, 5):
            for x2 in np.linspace(0.3, 2.0, 4):
                assert bihyperbolic_residual(s, a1, a2, (x0, x1, x2)) <= 1e-5 * max(1.0, abs(s(x0, x1, x2)))


@pytest.mark.parametrize("t", _terms)
@pytest.mark.parametrize("a1, a2", [(1.0, 1.0), (2.5, 0.5)])
def test_bi_factor_odes(t, a1, a2):
    for x in np.linspace(0.3, 3.0, 8):
        u = lambda y: bi_x1_factor(t, a1, y)  # noqa: E731
        r = d2(u, x) - a1 / x * d1(u, x) + t.lam**2 * u(x)
        assert abs(r) <= 1e-5 * max(1.0, abs(u(x)))
        w = lambda y: bi_x2_factor(t, a2, y)  # noqa: E731
        r = d2(w, x) - a2 / x * d1(w, x) - t.nu**2 * w(x)
        assert abs(r) <= 1e-5 * max(1.0, abs(w(x)))
        v = lambda y: bi_x0_factor(t, y)  # noqa: E731
        assert abs(d2(v, x) + t.mu**2 * v(x)) <= 1e-6


# -- Stokes streams ---------------------------------------------------------------------------

def test_stokes_examples():
    f = holo_field(Exp(1.0))
    ref = (0.0, math.pi / 2)
    assert stokes_from_potential(f, ref, ref) == 0.0
    assert stokes_from_potential(f, (0.0, math.pi), ref) == pytest.approx(-1.0, abs=1e-9)
    u = MeridionalField(0.0, CallableProfile(lambda x0, r: x0))
    for m in [(0.3, 2.0), (-1.0, 0.5), (0.0, 1.0)]:
        assert stokes_from_potential(u, m, (0.0, 1.0)) == pytest.approx((m[1] ** 2 - 1.0) / 2, abs=1e-9)
    with pytest.raises(AxisPoint):
        stokes_from_potential(f, (0.0, 0.0), ref)
    with pytest.raises(ValidationError):
        stokes_from_potential(f, (0.0, 1.0), ref, path="diagonal")


def test_stokes_matches_analytic_stream():
    f = holo_field(Exp(1.0))
    ref = (0.0, math.pi / 2)
    for x0, rho in _grid(rho=(0.3, 3.0), n=4):
        assert stokes_from_potential(f, (x0, rho), ref) == pytest.approx(
            math.exp(x0) * math.sin(rho) - 1.0, abs=1e-8 * math.exp(abs(x0)))


@pytest.mark.parametrize("alpha", (0.0, 1.0, 2.0, 3.0))
def test_stokes_stream_properties(alpha):
    f = gasp_field(GaspSeries(alpha, [GaspTerm(1.0, 1.0, 0.3, 1.0, 0.4)]))
    ref = (0.0, 1.0)
    st_v = StokesStream(f, ref)
    st_h = StokesStream(f, ref, "horizontal-first")
    for m in [(0.5, 1.5), (-0.6, 0.6), (0.9, 2.4)]:
        assert st_v(*m) == pytest.approx(st_h(*m), abs=1e-6)
        local = st_v.near(m)
        assert local(*m) == pytest.approx(st_v(*m), abs=1e-12)
        assert stokes_residual(local, alpha, m) <= 1e-4
        assert stream_orthogonality(f.profile, local, m) <= 1e-5


# -- JSON -----------------------------------------------------------------------------------

def test_series_json():
    obj = json.loads('{"alpha": 2, "terms": [{"beta": 1, "a1": 1}]}')
    assert gasp_from_json(obj) == GaspSeries(2.0, [GaspTerm(1.0)])
    obj = json.loads('{"alpha1": 1, "alpha2": 1, "terms": [{"lambda": 1, "mu": 0, "c1": 1}]}')
    assert bi_from_json(obj) == BiSeries(1.0, 1.0, [BiTerm(1.0, 0.0, 1.0)])
    bad = [
        {"alpha": 1, "terms": [{"beta": 1, "gamma": 2}]},
        {"alpha": 1, "terms": [{"a1": 1}]},
        {"alpha": 1},
        {"alpha": "1", "terms": []},
        {"alpha": 1, "terms": {}},
        {"alpha": 1, "terms": [{"beta": True}]},
    ]
    for b in bad:
        with pytest.raises(ValidationError):
            gasp_from_json(b)
    with pytest.raises(ValidationError):
        bi_from_json({"alpha1": 1, "alpha2": 1, "terms": [{"lam": 1}]})


def test_gasp_field_is_a_potential():
    s = GaspSeries(3.0, [GaspTerm(0.8, 1.0, 0.0, 1.0, 0.2)])
    f = gasp_field(s)
    for x0, rho in _grid(n=4):
        assert continuity_residual(f, (x0, rho * 0.6, rho * 0.8)) <= 1e-5
