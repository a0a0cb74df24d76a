"""Acceptance criteria 1-10, one recorded pass/fail line each.

The lines are printed in the "acceptance criteria" section of the pytest
terminal summary.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from conftest import builtin_fields, off_axis_points, record_criterion
from meridian import cli
from meridian._fd import d1, d2
from meridian.dynamics import (
    classify,
    curve_distance,
    find_equilibria,
    integrate_pathline,
    nullclines,
    trace_streamline,
)
from meridian.families import exponential, joukowski, linear, make_family, xsq_plus_c
from meridian.field_core import (
    degenerate_test,
    fd_jacobian,
    field_jacobian,
    holo_field,
    sample,
    spectrum,
    stokes_residual,
    stream_orthogonality,
)
from meridian.radial_holo import (
    Cos,
    Exp,
    Joukowski,
    Log,
    Power,
    Reverse,
    Scale,
    Sin,
    Sum,
    fd_radial_derivative,
    holo_derivative,
    holo_eval,
    holo_primitive,
    radial_cr_residual,
)
from meridian.rq_algebra import MeridianValue as M
from meridian.separable import BiSeries, BiTerm, GaspSeries, GaspTerm, StokesStream, gasp_field
from meridian.special_fn import bessel, bessel_derivative, bessel_half

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
MERIDIONAL = builtin_fields()  # Joukowski, exponential, x^2 + c, GASP alpha = 0..3


# -- 1 ---------------------------------------------------------------------------------

def test_criterion_01_pde_residual_suite():
    worst = {}
    for name, f in MERIDIONAL:
        for check, value, _ in cli.verify_field(f, cli.VERIFY_BOX):
            worst[(name, check)] = value
    bi = BiSeries(1.0, 1.0, [BiTerm(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0),
                             BiTerm(0.7, 1.0, 0.4, 0.6, 0.3, -1.0, 0.5, 0.8)])
    for check, value, _ in cli.verify_bi(bi):
        worst[("bihyperbolic", check)] = value
    top = max(worst.values())
    ok = top <= 1e-5
    record_criterion(1, ok, f"{len(worst)} residual maxima on 10x10 grids, largest {top:.2e} (tol 1e-5)")
    assert ok, {k: v for k, v in worst.items() if v > 1e-5}


# -- 2 ---------------------------------------------------------------------------------

def test_criterion_02_jacobian_spectrum_oracle():
    rng = np.random.default_rng(2)
    e_eig = e_rad = e_tr = e_fd = 0.0
    for _, f in MERIDIONAL:
        for p in off_axis_points(rng, 200, x0=(-2.0, 2.0), rho=(0.2, 3.0)):
            J = field_jacobian(f, p)
            sp = spectrum(f, p)
            e_eig = max(e_eig, float(np.max(np.abs(np.sort(sp.as_tuple()) - np.linalg.eigvalsh(J)))))
            e_rad = min(e_rad, sp.radicand)
            rho = math.hypot(p[1], p[2])
            e_tr = max(e_tr, abs(np.trace(J) - f.alpha * sample(f, p[0], rho).Vrho / rho))
            e_fd = max(e_fd, float(np.max(np.abs(J - fd_jacobian(f, p)))))
    ok = e_eig <= 1e-8 and e_rad >= -1e-12 and e_tr <= 1e-8 and e_fd <= 1e-5
    record_criterion(2, ok, f"eig {e_eig:.1e} (1e-8), min radicand {e_rad:.1e}, trace {e_tr:.1e} (1e-8), "
                            f"FD Jacobian {e_fd:.1e} (1e-5)")
    assert ok


# -- 3 ---------------------------------------------------------------------------------

def test_criterion_03_equilibrium_structure():
    f = xsq_plus_c(1.0)
    eqs = find_equilibria(f, (-2, 2, 0.1, 2), 20)
    ok = len(eqs) == 1 and math.hypot(eqs[0].s, eqs[0].t - 1.0) <= 1e-8
    if ok:
        r = classify(f, eqs[0])
        ok = (np.max(np.abs(np.array(r.eigenvalues.as_tuple()) - (0, 2, -2))) <= 1e-6
              and r.degenerate and not r.hyperbolic and r.index == 1 and r.degree_of_instability == 1)
    record_criterion(3, ok, f"F = x^2 + 1: equilibria {[(e.s, e.t) for e in eqs]}, index = degree = 1")
    assert ok


# -- 4 ---------------------------------------------------------------------------------

def test_criterion_04_exponential_has_no_zeros():
    rng = np.random.default_rng(4)
    found = 0
    runs = 0
    for beta in (0.5, 1.0, 2.0):
        for _ in range(10):
            A1, A2 = rng.uniform(-2, 2, 2)
            found += len(find_equilibria(exponential(beta, A1, A2), (-3, 3, 0.05, 6), 40))
            runs += 1
    ok = found == 0
    record_criterion(4, ok, f"{runs} searches over [-3,3]x[0.05,6], grid 40: {found} equilibria")
    assert ok


# -- 5 ---------------------------------------------------------------------------------

def _reference_joukowski(B, g, x0, rho):
    r2 = x0 * x0 + rho * rho
    V0 = B - B * g * g * (x0 * x0 - rho * rho) / r2**2
    Vr = -2 * B * g * g * x0 * rho / r2**2
    dVr_dx0 = 2 * B * g * g * rho * (x0 * x0 - rho * rho) / r2**3
    dVr_drho = -2 * B * g * g * x0 * (x0 * x0 - rho * rho) / r2**3
    return V0, Vr, dVr_dx0, dVr_drho


def _joukowski_checks():
    rng = np.random.default_rng(5)
    comp = np.zeros(4)
    for _ in range(100):
        B, g = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
        x0, rho = rng.uniform(-2, 2), rng.uniform(0.2, 2)
        s = sample(joukowski(B, g), x0, rho)
        got = (s.V0, s.Vrho, s.dVrho_dx0, s.dVrho_drho)
        want = _reference_joukowski(B, g, x0, rho)
        comp = np.maximum(comp, [abs(a - b) / max(1.0, abs(b)) for a, b in zip(got, want)])
    f = joukowski(1.0, 1.0)
    on_plane = degenerate_test(f, (0.0, 0.8, 0.6)).degenerate
    on_diag = [degenerate_test(f, (t, t, 0.0)).degenerate for t in (0.5, 1.0, 1.5)]
    v0_gap = max(abs(sample(joukowski(B, g), 0.0, g).V0 - 2 * B) for B, g in [(1, 1), (2, 0.5), (0.7, 1.3)])
    return comp, on_plane, on_diag, v0_gap


def test_criterion_05_joukowski_reproduction():
    comp, on_plane, on_diag, v0_gap = _joukowski_checks()
    attainable = comp[0] <= 1e-10 and comp[1] <= 1e-10 and on_plane and v0_gap <= 1e-12
    full = attainable and comp[2] <= 1e-10 and comp[3] <= 1e-10 and all(on_diag)
    record_criterion(5, full,
                     f"V0 {comp[0]:.1e}, Vrho {comp[1]:.1e}, V0(0,gamma) - 2B {v0_gap:.1e}, x0 = 0 degenerate "
                     f"{on_plane}; reference dVrho partials off by {comp[2]:.1e}/{comp[3]:.1e} and rho^2 = x0^2 "
                     f"degenerate {on_diag} (reference partials are not derivatives of reference Vrho)")
    assert attainable


def test_criterion_05_reference_partials_are_not_derivatives():
    # The reference partials of V_rho are not the derivatives of the reference
    # V_rho; the correct ones are rho (3 x0^2 - rho^2) and -x0 (x0^2 - 3 rho^2)
    # over r^6, and with them the second degeneracy condition is |F'|^2 = 0,
    # which never holds. Checked against finite differences of V_rho.
    B, g, x0, rho = 1.0, 1.0, 0.7, 1.1
    Vr = lambda a, b: _reference_joukowski(B, g, a, b)[1]  # noqa: E731
    fd0 = d1(lambda t: Vr(t, rho), x0)
    fdr = d1(lambda t: Vr(x0, t), rho)
    s = sample(joukowski(B, g), x0, rho)
    assert s.dVrho_dx0 == pytest.approx(fd0, rel=1e-8)
    assert s.dVrho_drho == pytest.approx(fdr, rel=1e-8)
    _, _, p0, pr = _reference_joukowski(B, g, x0, rho)
    assert abs(p0 - fd0) > 0.1 and abs(pr - fdr) > 0.1


@pytest.mark.xfail(strict=True, reason="reference Joukowski partials and the rho^2 = x0^2 degenerate set "
                                       "disagree with the reference V_rho")
def test_criterion_05_as_stated():
    comp, on_plane, on_diag, v0_gap = _joukowski_checks()
    assert np.all(comp <= 1e-10) and on_plane and all(on_diag) and v0_gap <= 1e-12


# -- 6 ---------------------------------------------------------------------------------

def test_criterion_06_bessel():
    xs = np.concatenate([np.linspace(0.1, 30, 120), [0.5, 1.0, 2.0, 10.0]])
    w_err = wm_err = h_err = ode_err = 0.0
    for nu in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5):
        for x in xs:
            J, Jp = bessel("J", nu, x), bessel_derivative("J", nu, x)
            Y, Yp = bessel("Y", nu, x), bessel_derivative("Y", nu, x)
            w_err = max(w_err, abs((J * Yp - Jp * Y) * math.pi * x / 2 - 1))
            I, Ip = bessel("I", nu, x), bessel_derivative("I", nu, x)
            K, Kp = bessel("K", nu, x), bessel_derivative("K", nu, x)
            wm_err = max(wm_err, abs((I * Kp - Ip * K) * x + 1))
            for kind, sgn in (("J", 1), ("Y", 1), ("I", -1), ("K", -1)):
                y = lambda t, k=kind: bessel(k, nu, t)  # noqa: E731
                r = x * x * d2(y, x) + x * d1(y, x) + (sgn * x * x - nu * nu) * y(x)
                size = x * x * abs(y(x)) + x * abs(d1(y, x)) + nu * nu * abs(y(x)) + 1e-300
                ode_err = max(ode_err, abs(r) / size)
    for x in xs:
        amp = math.sqrt(2 / (math.pi * x))
        for k in ("J", "Y"):
            h_err = max(h_err, abs(bessel(k, 0.5, x) - bessel_half(k, x)) / amp)
    ok = w_err <= 1e-8 and wm_err <= 1e-8 and h_err <= 1e-10 and ode_err <= 1e-5
    record_criterion(6, ok, f"Wronskian {w_err:.1e}, modified {wm_err:.1e} (1e-8), half-order {h_err:.1e} "
                            f"(1e-10), ODE {ode_err:.1e} (1e-5)")
    assert ok


# -- 7 ---------------------------------------------------------------------------------

def test_criterion_07_radial_calculus():
    rng = np.random.default_rng(7)
    elementary = [Power(0), Power(1), Power(2), Power(3), Power(-1), Power(-2), Exp(1.0), Exp(-0.6),
                  Cos(), Sin(), Log(), Joukowski(1.0, 1.0), Joukowski(0.5, 1.5)]
    combos = []
    for _ in range(3):
        pick = rng.choice(len(elementary), 3, replace=False)
        parts = [Scale(float(rng.uniform(-2, 2)), elementary[i]) for i in pick]
        combos.append(Sum((parts[0], Reverse(parts[1]), parts[2])))
    cr = dt = prim = 0.0
    for e in elementary + combos:
        de, pe = holo_derivative(e), holo_primitive(e)
        dpe = holo_derivative(pe)
        for _ in range(20):
            m = M(float(rng.uniform(-2, 2)), float(rng.uniform(0.2, 2.5)))
            size = max(1.0, abs(complex(holo_eval(e, m))), abs(complex(holo_eval(de, m))))
            cr = max(cr, radial_cr_residual(e, m, 1e-5) / size)
            dt = max(dt, abs(complex(holo_eval(de, m)) - complex(fd_radial_derivative(e, m, 1e-5))) / size)
            want = complex(holo_eval(e, m))
            prim = max(prim, abs(complex(holo_eval(dpe, m)) - want) / max(1.0, abs(want)))
    ok = cr <= 1e-6 and dt <= 1e-6 and prim <= 1e-9
    record_criterion(7, ok, f"{len(elementary)} elementary + {len(combos)} superpositions: CR {cr:.1e}, "
                            f"derivative table {dt:.1e} (1e-6), (G')' primitive {prim:.1e} (1e-9)")
    assert ok


# -- 8 ---------------------------------------------------------------------------------

def test_criterion_08_dynamics():
    lin = linear()
    end = integrate_pathline(lin, (1, 0.5, 0), math.log(2)).end
    e_end = max(abs(a - b) for a, b in zip(end, (2.0, 0.25, 0.0)))
    drop = 0.0
    # the cosh/sinh growth of the series fields makes some flows blow up in
    # finite time, so the horizon is kept short
    for _, f in MERIDIONAL + [("linear", lin)]:
        for start in [(0.2, 0.9, 0.5), (-0.5, 0.4, -1.2)]:
            h = integrate_pathline(f, start, 0.3, max_step=0.1).h_values
            drop = max([drop] + [a - b for a, b in zip(h, h[1:])])
    tol = 1e-7
    dist = curve_distance(lin, integrate_pathline(lin, (1, 0.5, 0), 1.0, tol=tol, max_step=0.05),
                          trace_streamline(lin, (1, 0.5, 0), 2.0, tol=tol, max_step=0.05))
    mismatch = 0
    box = (-2.0, 2.0, 0.1, 2.0)
    for name in ("joukowski", "exponential", "xsq_plus_c", "linear", "uniform"):
        f = make_family(name)
        a = [(m.s, m.t) for m in find_equilibria(f, box, 20, cross_check=False)]
        b = [(m.s, m.t) for m in nullclines(f, box, 20).intersections]
        if len(a) != len(b) or any(min(math.dist(p, q) for q in b) > 1e-6 for p in a):
            mismatch += 1
    ok = e_end <= 1e-6 and drop <= 1e-9 and dist <= 10 * tol and mismatch == 0
    record_criterion(8, ok, f"pathline end {e_end:.1e} (1e-6), largest h drop {drop:.1e} (1e-9), "
                            f"streamline/pathline {dist:.1e} (10 tol = {10 * tol:.0e}), "
                            f"nullcline/Newton mismatches {mismatch}")
    assert ok


# -- 9 ---------------------------------------------------------------------------------

def test_criterion_09_stream_orthogonality():
    rng = np.random.default_rng(9)
    orth = stokes = 0.0
    count = 0
    for alpha in (0.0, 1.0, 2.0):
        if alpha == 1.0:
            f = holo_field(Sum((Exp(1.0), Scale(0.3, Power(2)))))
            stream_at = lambda m, f=f: f.profile.stream  # noqa: E731
        else:
            f = gasp_field(GaspSeries(alpha, [GaspTerm(1.0, 1.0, 0.4, 1.0, 0.3), GaspTerm(1.7, 0.2, 1.0, 0.5, 0.0)]))
            ss = StokesStream(f, (0.0, 1.0))
            stream_at = ss.near
        n = 0
        while n < 50:
            m = (float(rng.uniform(-1, 1)), float(rng.uniform(0.3, 2.5)))
            s = sample(f, *m)
            if math.hypot(s.V0, s.Vrho) < 1e-3:
                continue
            gh = stream_at(m)
            orth = max(orth, stream_orthogonality(f.profile, gh, m))
            stokes = max(stokes, stokes_residual(gh, alpha, m))
            n += 1
        count += n
    ok = orth <= 1e-5 and stokes <= 1e-4
    record_criterion(9, ok, f"{count} points, alpha in (0, 1, 2): grad g . grad g^ {orth:.1e} (1e-5), "
                            f"Stokes residual {stokes:.1e} (1e-4)")
    assert ok


# -- 10 --------------------------------------------------------------------------------

def _cli(capsys, *argv):
    code = cli.run([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_criterion_10_cli(capsys):
    j, x = CONFIGS / "joukowski.json", CONFIGS / "xsq_plus_1.json"
    calls = [
        ("verify", "--config", j),
        ("equilibria", "--config", x, "--box", -2, 2, 0.1, 2, "--grid", 20),
        ("eval", "--config", j, "--point", 1, 1, 0),
    ]
    outs = [(_cli(capsys, *c), _cli(capsys, *c)) for c in calls]
    same = all(a == b for a, b in outs)
    (vcode, vout), (ecode, eout), (pcode, pout) = (o[0] for o in outs)
    import json

    verify_ok = vcode == 0 and all(r.endswith(",true") for r in vout.splitlines()[1:])
    eq = json.loads(eout)
    eq_ok = (ecode == 0 and len(eq) == 1 and abs(eq[0]["x0"]) <= 1e-8 and abs(eq[0]["rho"] - 1) <= 1e-8
             and max(abs(eq[0][k] - v) for k, v in (("lambda0", 0), ("lambda1", 2), ("lambda2", -2))) <= 1e-6)
    eval_ok = pcode == 0 and pout == "1,-0.5,0\n"
    ok = same and verify_ok and eq_ok and eval_ok
    record_criterion(10, ok, f"byte-identical reruns {same}; verify {verify_ok}, equilibria {eq_ok}, "
                             f"eval {pout.strip()!r}")
    assert ok
