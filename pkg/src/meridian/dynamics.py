"""Gradient flows dx/dt = V = grad h of potential meridional fields.

Pathlines and streamlines are integrated in R^3 with an embedded
Dormand-Prince 5(4) pair.  Equilibria are searched for in the meridian
half-plane, where the 2x2 system (V0, V_rho) is generically nonsingular even
though the 3x3 Jacobian is always singular at a zero of V (lambda0 = V_rho/rho
vanishes there).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AxisPoint,
    DomainError,
    MeridianError,
    NotAnEquilibrium,
    StagnationPoint,
    StepSizeUnderflow,
    ValidationError,
)
from .field_core import (
    MeridionalField,
    PointLike,
    Spectrum,
    as_point,
    degeneracy_of_sample,
    field_eval,
    meridian_velocity,
    sample,
    spectrum_from_sample,
)
from .rq_algebra import MeridianValue

AXIS_RHO = 1e-6
STAGNATION_SPEED = 1e-12
MIN_STEP = 1e-12


@dataclass(frozen=True)
class GradientSystem:
    """dx/dt = V(x); the field's parameters play the role of mu."""

    field: MeridionalField

    def rhs(self, p: PointLike) -> tuple[float, float, float]:
        return field_eval(self.field, p)


@dataclass(frozen=True)
class Trajectory:
    """Accepted integration nodes.

    ``times`` holds t for pathlines and arc length s for streamlines.
    ``status`` is ``completed``, ``axis_reached`` or ``stagnation``.
    """

    times: tuple
    points: tuple
    h_values: tuple
    status: str = "completed"
    kind: str = "pathline"

    @property
    def end(self) -> tuple[float, float, float]:
        return self.points[-1]


# -- Dormand-Prince 5(4) ----------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array((35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0))
_B4 = np.array((5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40))
_E = _B5 - _B4


def _dopri(rhs: Callable[[np.ndarray], np.ndarray], y0, t_end: float, tol: float,
           stop: Callable[[np.ndarray, np.ndarray], str | None], max_step: float = math.inf,
           max_steps: int = 200000) -> tuple[list, list, str]:
    """Adaptive DP45 with PI step control and FSAL.

    Returns node parameters, node states and a status string.  ``stop`` is
    consulted at every accepted node.
    """
    y = np.asarray(y0, dtype=float)
    t = 0.0
    ts, ys = [0.0], [y.copy()]
    k1 = rhs(y)
    status = stop(y, k1)
    if status is not None or t_end <= 0.0:
        return ts, ys, status or "completed"

    def norm_err(err, y, ynew):
        sc = tol + tol * np.maximum(np.abs(y), np.abs(ynew))
        return float(np.sqrt(np.mean((err / sc) ** 2)))

    h = min(max_step, t_end, 0.01 * max(1.0, float(np.max(np.abs(y)))) / max(1e-300, float(np.max(np.abs(k1)))))
    h = max(h, 10 * MIN_STEP)
    prev_err = 1e-4
    for _ in range(max_steps):
        if t + h > t_end:
            h = t_end - t
        try:
            k = [k1]
            for i in range(1, 7):
                yi = y + h * sum(a * kj for a, kj in zip(_A[i], k))
                k.append(rhs(yi))
        except (AxisPoint, DomainError):
            # a trial stage crossed the axis; shrink and retry
            h *= 0.25
            if h < MIN_STEP:
                raise StepSizeUnderflow("step size fell below the floor near the axis")
            continue
        ynew = y + h * sum(b * kj for b, kj in zip(_B5, k))
        err = norm_err(h * sum(e * kj for e, kj in zip(_E, k)), y, ynew)
        if err <= 1.0:
            t += h
            y = ynew
            k1 = k[6]
            ts.append(t)
            ys.append(y.copy())
            status = stop(y, k1)
            if status is not None:
                return ts, ys, status
            if t >= t_end:
                return ts, ys, "completed"
            fac = 0.9 * err ** -0.14 * prev_err ** 0.08 if err > 0 else 5.0
            h = min(max_step, h * min(5.0, max(0.2, fac)))
            prev_err = max(err, 1e-4)
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
        if h < MIN_STEP:
            raise StepSizeUnderflow(f"step size fell below {MIN_STEP} at t = {t}")
    raise StepSizeUnderflow("maximum number of steps exceeded")


def _stop_rule(y: np.ndarray, v: np.ndarray) -> str | None:
    if math.hypot(y[1], y[2]) < AXIS_RHO:
        return "axis_reached"
    if float(np.linalg.norm(v)) < STAGNATION_SPEED:
        return "stagnation"
    return None


def _as_field(sys_or_field) -> MeridionalField:
    return sys_or_field.field if isinstance(sys_or_field, GradientSystem) else sys_or_field


def _start(start: PointLike) -> np.ndarray:
    q = as_point(start)
    if q.rho == 0.0:
        raise AxisPoint("trajectories must start off the axis")
    return np.array(q.as_tuple())


def integrate_pathline(sys: GradientSystem | MeridionalField, start: PointLike, t_end: float,
                       tol: float = 1e-10, max_step: float = math.inf) -> Trajectory:
    """Integrate dx/dt = V from ``start`` over [0, t_end].

    Stops early with status ``axis_reached`` once rho < 1e-6 and with
    ``stagnation`` once |V| < 1e-12.
    """
    f = _as_field(sys)
    if not t_end >= 0.0:
        raise ValidationError("t_end must be nonnegative")
    y0 = _start(start)
    rhs = lambda y: np.array(field_eval(f, y))  # noqa: E731
    ts, ys, status = _dopri(rhs, y0, t_end, tol, _stop_rule, max_step)
    pts = tuple(tuple(float(c) for c in y) for y in ys)
    return Trajectory(tuple(ts), pts, tuple(f.potential(p) for p in pts), status, "pathline")


def trace_streamline(f: MeridionalField, start: PointLike, arclen: float, tol: float = 1e-10,
                     max_step: float = math.inf) -> Trajectory:
    """Integrate dx/ds = V/|V| over arc length [0, arclen]."""
    f = _as_field(f)
    if not arclen >= 0.0:
        raise ValidationError("arclen must be nonnegative")
    y0 = _start(start)
    if float(np.linalg.norm(field_eval(f, y0))) < STAGNATION_SPEED:
        raise StagnationPoint(f"V vanishes at {tuple(y0)}")

    def rhs(y):
        v = np.array(field_eval(f, y))
        n = float(np.linalg.norm(v))
        if n < STAGNATION_SPEED:
            return np.zeros(3)
        return v / n

    ts, ys, status = _dopri(rhs, y0, arclen, tol, _stop_rule, max_step)
    pts = tuple(tuple(float(c) for c in y) for y in ys)
    return Trajectory(tuple(ts), pts, tuple(f.potential(p) for p in pts), status, "streamline")


def _densify(f: MeridionalField, traj: Trajectory, sub: int = 16) -> np.ndarray:
    """Cubic Hermite resampling of a trajectory using the ODE right-hand side."""
    P = np.array(traj.points)
    if len(P) < 2:
        return P
    D = []
    for p in traj.points:
        v = np.array(field_eval(f, p))
        if traj.kind == "streamline":
            v = v / max(np.linalg.norm(v), STAGNATION_SPEED)
        D.append(v)
    D = np.array(D)
    dt = np.diff(np.array(traj.times))
    s = np.linspace(0.0, 1.0, sub + 1)[:-1]
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    out = []
    for i in range(len(P) - 1):
        seg = (np.outer(h00, P[i]) + np.outer(h10 * dt[i], D[i])
               + np.outer(h01, P[i + 1]) + np.outer(h11 * dt[i], D[i + 1]))
        out.append(seg)
    out.append(P[-1:])
    return np.vstack(out)


def _dist_to_polyline(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    a, b = poly[:-1], poly[1:]
    ab = b - a
    L2 = np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300)
    best = np.full(len(pts), np.inf)
    for k, p in enumerate(pts):
        t = np.clip(np.einsum("ij,ij->i", p - a, ab) / L2, 0.0, 1.0)
        d = np.linalg.norm(a + t[:, None] * ab - p, axis=1)
        best[k] = d.min()
    return best


def curve_distance(f: MeridionalField, a: Trajectory, b: Trajectory) -> float:
    """Hausdorff distance between two flow curves over their common range.

    h increases along every gradient-flow curve, so the common range is the
    set of nodes with h below both curves' final values.
    """
    hmax = min(a.h_values[-1], b.h_values[-1])
    da, db = _densify(f, a), _densify(f, b)
    pa = np.array([p for p, h in zip(a.points, a.h_values) if h <= hmax])
    pb = np.array([p for p, h in zip(b.points, b.h_values) if h <= hmax])
    d1 = _dist_to_polyline(pa, db).max() if len(pa) else 0.0
    d2 = _dist_to_polyline(pb, da).max() if len(pb) else 0.0
    return float(max(d1, d2))


# -- equilibria ------------------------------------------------------------------------

Box = tuple  # (x0min, x0max, rhomin, rhomax)


def _check_box(box: Sequence[float], grid: int) -> tuple[float, float, float, float]:
    if len(box) != 4:
        raise ValidationError("box must be (x0min, x0max, rhomin, rhomax)")
    x0a, x0b, ra, rb = (float(v) for v in box)
    if not (x0a < x0b and 0.0 < ra < rb):
        raise ValidationError(f"invalid box {tuple(box)}: need x0min < x0max and 0 < rhomin < rhomax")
    if int(grid) < 2:
        raise ValidationError("grid must be at least 2")
    return x0a, x0b, ra, rb


def _residual(f: MeridionalField, x0: float, rho: float) -> np.ndarray:
    return np.array(meridian_velocity(f, x0, rho))


def newton_polish(f: MeridionalField, seed: Sequence[float], box: Sequence[float] | None = None,
                  max_iter: int = 50, target: float = 1e-14) -> tuple[float, float] | None:
    """Damped Newton on (V0, V_rho) with Armijo backtracking on |V|^2.

    Returns None when the iteration leaves the (10%-enlarged) box, meets a
    singular 2x2 Jacobian, or fails to reduce the residual.
    """
    x = np.array(seed, dtype=float)
    if box is not None:
        x0a, x0b, ra, rb = box
        mx, mr = 0.1 * (x0b - x0a), 0.1 * (rb - ra)
        lo = np.array((x0a - mx, max(ra - mr, 0.0)))
        hi = np.array((x0b + mx, rb + mr))
    try:
        r = _residual(f, *x)
        phi = float(r @ r)
        for _ in range(max_iter):
            if math.sqrt(phi) <= target:
                break
            s = sample(f, x[0], x[1])
            J = np.array(((s.dV0_dx0, s.dV0_drho), (s.dVrho_dx0, s.dVrho_drho)))
            det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
            if not math.isfinite(det) or abs(det) <= 1e-300:
                return None
            d = -np.linalg.solve(J, r)
            t = 1.0
            while True:
                xn = x + t * d
                if xn[1] > 0.0:
                    rn = _residual(f, *xn)
                    phin = float(rn @ rn)
                    if phin <= (1.0 - 2e-4 * t) * phi:
                        break
                t *= 0.5
                if t < 1e-10:
                    return (float(x[0]), float(x[1])) if math.sqrt(phi) <= 1e3 * target else None
            x, r, phi = xn, rn, phin
            if box is not None and (np.any(x < lo) or np.any(x > hi)):
                return None
    except (DomainError, ZeroDivisionError, OverflowError, np.linalg.LinAlgError):
        return None
    if not np.all(np.isfinite(x)):
        return None
    return float(x[0]), float(x[1])


def _inside(p, box) -> bool:
    x0a, x0b, ra, rb = box
    return x0a <= p[0] <= x0b and ra <= p[1] <= rb


def _dedup(points: list, eps: float = 1e-6) -> list:
    out: list = []
    for p in sorted(points):
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > eps for q in out):
            out.append(p)
    return out


def _accept(f, p, box, tol) -> bool:
    if p is None or not _inside(p, box):
        return False
    v = _residual(f, *p)
    return bool(abs(v[0]) <= tol and abs(v[1]) <= tol)


def find_equilibria(f: MeridionalField, box: Sequence[float], grid: int = 20, tol: float = 1e-9,
                    cross_check: bool = True) -> list[MeridianValue]:
    """Zeros of (V0, V_rho) in the meridian box, by multistart Newton.

    Seeds sit on a grid x grid lattice.  With ``cross_check`` the polished
    nullcline intersections are merged in as well, so nothing found by the
    contour pass is missed.
    """
    f = _as_field(f)
    b = _check_box(box, grid)
    found = []
    for x0 in np.linspace(b[0], b[1], int(grid)):
        for rho in np.linspace(b[2], b[3], int(grid)):
            p = newton_polish(f, (x0, rho), b)
            if _accept(f, p, b, tol):
                found.append(p)
    if cross_check:
        found.extend((m.s, m.t) for m in nullclines(f, b, grid, tol).intersections)
    return [MeridianValue(x0, rho) for x0, rho in _dedup(found)]


def equilibrium_circle(m: MeridianValue, n: int = 8) -> list[tuple[float, float, float]]:
    """Points of the circle of equilibria through the meridian point m."""
    return [(m.s, m.t * math.cos(2 * math.pi * k / n), m.t * math.sin(2 * math.pi * k / n)) for k in range(n)]


@dataclass(frozen=True)
class EquilibriumReport:
    location: MeridianValue
    eigenvalues: Spectrum
    degenerate: bool
    hyperbolic: bool
    index: int
    degree_of_instability: int
    conditions: tuple = ()


def classify(f: MeridionalField, eq: MeridianValue | Sequence[float], tol: float = 1e-9,
             eig_tol: float | None = None) -> EquilibriumReport:
    """Spectrum, degeneracy, index and degree of instability at a zero of V.

    Eigenvalues within ``eig_tol`` (default 1e-7 * (1 + max |lambda|)) of
    zero count as zero.
    """
    f = _as_field(f)
    x0, rho = (eq.s, eq.t) if isinstance(eq, MeridianValue) else (float(eq[0]), float(eq[1]))
    if not rho > 0.0:
        raise AxisPoint("equilibria are classified off the axis")
    s = sample(f, x0, rho)
    if max(abs(s.V0), abs(s.Vrho)) > tol:
        raise NotAnEquilibrium(f"|V| = {math.hypot(s.V0, s.Vrho):.3g} exceeds tol = {tol:g} at ({x0}, {rho})")
    sp = spectrum_from_sample(f.alpha, s, rho)
    lams = sp.as_tuple()
    etol = eig_tol if eig_tol is not None else 1e-7 * (1.0 + max(abs(v) for v in lams))
    if abs(sp.lambda0) > etol or abs(sp.lambda1 + sp.lambda2) > etol:
        raise MeridianError(f"spectrum {lams} at an equilibrium is not of the form (0, l, -l)")
    deg = degeneracy_of_sample(f.alpha, s, rho)
    return EquilibriumReport(
        location=MeridianValue(x0, rho),
        eigenvalues=sp,
        degenerate=deg.degenerate,
        hyperbolic=all(abs(v) > etol for v in lams),
        index=sum(v < -etol for v in lams),
        degree_of_instability=sum(v > etol for v in lams),
        conditions=tuple(c.value for c in deg.conditions),
    )


# -- nullclines -------------------------------------------------------------------------

@dataclass(frozen=True)
class NullclineSet:
    v0_segments: tuple
    vrho_segments: tuple
    intersections: tuple
    v0_dense_zero: bool = False
    vrho_dense_zero: bool = False


def _lerp(pa, pb, va, vb):
    t = va / (va - vb)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def marching_squares(xs: np.ndarray, ys: np.ndarray, V: np.ndarray) -> list:
    """Zero-contour segments of V[i, j] = v(xs[i], ys[j]); 0 counts as positive."""
    segs = []
    pos = V >= 0.0
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
            signs = [pos[c] for c in corners]
            if all(signs) or not any(signs):
                continue
            pts = [(xs[c[0]], ys[c[1]]) for c in corners]
            vals = [V[c] for c in corners]
            cross = []
            for e in range(4):
                a, b = e, (e + 1) % 4
                if signs[a] != signs[b]:
                    cross.append((e, _lerp(pts[a], pts[b], vals[a], vals[b])))
            if len(cross) == 2:
                segs.append((cross[0][1], cross[1][1]))
            else:
                # saddle cell: pair edges according to the sign of the centre average
                centre_pos = sum(vals) / 4.0 >= 0.0
                e = {k: p for k, p in cross}
                if centre_pos == signs[0]:
                    segs.append((e[0], e[1]))
                    segs.append((e[2], e[3]))
                else:
                    segs.append((e[3], e[0]))
                    segs.append((e[1], e[2]))
    return segs


def _seg_intersections(A: list, B: list) -> list:
    if not A or not B:
        return []
    a0 = np.array([s[0] for s in A])
    a1 = np.array([s[1] for s in A])
    out = []
    for b0, b1 in B:
        b0, b1 = np.asarray(b0), np.asarray(b1)
        r = a1 - a0
        s = b1 - b0
        den = r[:, 0] * s[1] - r[:, 1] * s[0]
        qp = b0 - a0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (qp[:, 0] * s[1] - qp[:, 1] * s[0]) / den
            u = (qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]) / den
        ok = (np.abs(den) > 0) & (t >= -1e-9) & (t <= 1 + 1e-9) & (u >= -1e-9) & (u <= 1 + 1e-9)
        for k in np.nonzero(ok)[0]:
            out.append(tuple(a0[k] + t[k] * r[k]))
    return out


def nullclines(f: MeridionalField, box: Sequence[float], grid: int = 20, tol: float = 1e-9) -> NullclineSet:
    """Zero contours of V0 and V_rho over the box, and their polished intersections."""
    f = _as_field(f)
    b = _check_box(box, grid)
    xs = np.linspace(b[0], b[1], int(grid))
    ys = np.linspace(b[2], b[3], int(grid))
    V0 = np.empty((len(xs), len(ys)))
    Vr = np.empty_like(V0)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            V0[i, j], Vr[i, j] = meridian_velocity(f, float(x), float(y))
    dz0, dzr = bool(np.all(V0 == 0.0)), bool(np.all(Vr == 0.0))
    s0 = [] if dz0 else marching_squares(xs, ys, V0)
    sr = [] if dzr else marching_squares(xs, ys, Vr)
    if dz0 and dzr:
        cands = [(float(x), float(y)) for x in xs for y in ys]
    elif dz0 or dzr:
        cands = [((p[0] + q[0]) / 2, (p[1] + q[1]) / 2) for p, q in (sr if dz0 else s0)]
    else:
        cands = _seg_intersections(s0, sr)
    hits = []
    for c in cands:
        p = newton_polish(f, c, b)
        if _accept(f, p, b, tol):
            hits.append(p)
    return NullclineSet(
        tuple(s0), tuple(sr), tuple(MeridianValue(x, r) for x, r in _dedup(hits)), dz0, dzr,
    )


# -- parameter scans -------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    mu: tuple  # sorted (name, value) pairs
    report: EquilibriumReport | None = None
    error: str | None = None


def _samples(ranges: dict, steps: int) -> list[tuple]:
    names = sorted(ranges)
    axes = []
    for n in names:
        lo, hi = ranges[n]
        axes.append([float(v) for v in np.linspace(float(lo), float(hi), steps)] if steps > 1 else [float(lo)])
    return [tuple(zip(names, vals)) for vals in itertools.product(*axes)]


def parameter_scan(family: Callable[..., MeridionalField], ranges: dict, steps: int, box: Sequence[float],
                   grid: int = 20, tol: float = 1e-9, fixed: dict | None = None) -> list[ScanRow]:
    """find_equilibria + classify over a lattice of parameter values.

    ``ranges`` maps parameter names to (lo, hi); each gets ``steps`` evenly
    spaced samples (``steps = 1`` uses lo).  A sample that raises is recorded
    as an error row and the scan continues.
    """
    if int(steps) < 1:
        raise ValidationError("steps must be at least 1")
    _check_box(box, grid)
    rows: list[ScanRow] = []
    for mu in _samples(ranges, int(steps)):
        try:
            f = family(**dict(fixed or {}), **dict(mu))
            for eq in find_equilibria(f, box, grid, tol):
                rows.append(ScanRow(mu, classify(f, eq, tol)))
        except MeridianError as exc:
            rows.append(ScanRow(mu, error=f"{type(exc).__name__}: {exc}"))
    def key(r: ScanRow):
        loc = (r.report.location.s, r.report.location.t) if r.report else (math.inf, math.inf)
        return (tuple(v for _, v in r.mu), loc)

    return sorted(rows, key=key)
