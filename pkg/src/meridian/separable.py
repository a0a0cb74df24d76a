"""Separable solution families and numerical Stokes stream functions.

GASP series
    g(x0, rho) = sum_k Xi_k(x0) Ups_k(rho) with
    Xi = b1 cosh(beta x0) + b2 sinh(beta x0) and
    Ups = rho^(alpha/2) [a1 J_q(beta rho) + a2 Y_q(beta rho)], q = |alpha|/2.
    Each term solves rho (g_x0x0 + g_rhorho) - (alpha-1) g_rho = 0.

Bihyperbolic series
    h = x1^p1 [c1 J_p1(lam x1) + c2 Y_p1(lam x1)]
        * (b1 cos(mu x0) + b2 sin(mu x0))
        * x2^p2 [a1 I_p2(nu x2) + a2 K_p2(nu x2)],
    p_i = (alpha_i + 1)/2, nu = sqrt(lam^2 + mu^2).  The x2 factor uses the real
    modified basis I, K in place of J, Y of imaginary argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .errors import AxisPoint, DomainError, IntegrationFailure, QuadrantViolation, ValidationError
from .field_core import MeridionalField, Partials, PointLike, SourceKind, as_point, holo_field, meridian_velocity
from .radial_holo import Exp, Reverse, Scale, Sum
from .rq_algebra import MeridianValue
from .special_fn import MAX_ORDER, bessel_ik, bessel_jy


def _finite(name: str, v: float) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(f"{name} must be finite")
    return v


# -- GASP series -------------------------------------------------------------------

@dataclass(frozen=True)
class GaspTerm:
    beta: float
    b1: float = 1.0
    b2: float = 0.0
    a1: float = 1.0
    a2: float = 0.0

    def __post_init__(self):
        for k in ("beta", "b1", "b2", "a1", "a2"):
            _finite(k, getattr(self, k))
        if not self.beta > 0.0:
            raise ValidationError("beta must be positive")


@dataclass(frozen=True)
class GaspSeries:
    """Finite GASP series; also usable directly as a field profile."""

    alpha: float
    terms: tuple = ()

    def __init__(self, alpha: float, terms=()):
        object.__setattr__(self, "alpha", _finite("alpha", alpha))
        object.__setattr__(self, "terms", tuple(terms))
        if abs(self.alpha) / 2 > MAX_ORDER:
            raise ValidationError(f"|alpha|/2 must not exceed {MAX_ORDER}")
        for t in self.terms:
            if not isinstance(t, GaspTerm):
                raise ValidationError(f"not a GaspTerm: {t!r}")

    def potential(self, x0: float, rho: float) -> float:
        return gasp_eval(self, (x0, rho))

    def derivatives(self, x0: float, rho: float) -> Partials:
        return _gasp_partials(self, x0, rho)


def _xi(t: GaspTerm, x0: float) -> tuple[float, float]:
    ch, sh = math.cosh(t.beta * x0), math.sinh(t.beta * x0)
    return t.b1 * ch + t.b2 * sh, t.beta * (t.b1 * sh + t.b2 * ch)


def _ups(t: GaspTerm, alpha: float, rho: float) -> tuple[float, float]:
    p = 0.5 * alpha
    q = abs(p)
    J, Y, dJ, dY = bessel_jy(q, t.beta * rho)
    c = t.a1 * J + t.a2 * Y
    dc = t.beta * (t.a1 * dJ + t.a2 * dY)
    rp = rho**p
    return rp * c, p * rp / rho * c + rp * dc


def _ups_at_axis(t: GaspTerm, alpha: float) -> float:
    # rho^p J_p(beta rho) -> (beta/2)^p / Gamma(p+1) * rho^(2p) as rho -> 0
    if t.a2 != 0.0 or alpha < 0.0:
        raise DomainError("series term is singular on the axis")
    return t.a1 if alpha == 0.0 else 0.0


def _meridian_xy(m) -> tuple[float, float]:
    if isinstance(m, MeridianValue):
        return m.s, m.t
    x0, rho = m
    return float(x0), float(rho)


def gasp_eval(s: GaspSeries, m) -> float:
    """g(x0, rho) of the series; rho = 0 is allowed for Y-free terms with alpha >= 0."""
    x0, rho = _meridian_xy(m)
    if rho < 0.0:
        raise DomainError("rho must be nonnegative")
    total = 0.0
    for t in s.terms:
        xi, _ = _xi(t, x0)
        ups = _ups_at_axis(t, s.alpha) if rho == 0.0 else _ups(t, s.alpha, rho)[0]
        total += xi * ups
    return total


def _gasp_partials(s: GaspSeries, x0: float, rho: float) -> Partials:
    if not rho > 0.0:
        raise AxisPoint("series derivatives need rho > 0")
    g0 = gr = g00 = g0r = grr = 0.0
    for t in s.terms:
        xi, dxi = _xi(t, x0)
        u, du = _ups(t, s.alpha, rho)
        # Ups'' from the radial equation Ups'' - (alpha-1)/rho Ups' + beta^2 Ups = 0
        ddu = (s.alpha - 1.0) / rho * du - t.beta * t.beta * u
        g0 += dxi * u
        gr += xi * du
        g00 += t.beta * t.beta * xi * u
        g0r += dxi * du
        grr += xi * ddu
    return Partials(g0, gr, g00, g0r, grr)


def gasp_grad(s: GaspSeries, m) -> tuple[float, float]:
    """(dg/dx0, dg/drho), analytic."""
    x0, rho = _meridian_xy(m)
    d = _gasp_partials(s, x0, rho)
    return d.g0, d.gr


def gasp_field(s: GaspSeries) -> MeridionalField:
    return MeridionalField(s.alpha, s, SourceKind.GASP, "gasp", (("alpha", s.alpha), ("terms", len(s.terms))))


def exponential_holo(beta: float, A1: float, A2: float):
    """G = A2 e^(beta x) + A1 I e^(beta x)."""
    return Sum((Scale(A2, Exp(beta)), Reverse(Scale(A1, Exp(beta)))))


def exponential_example(beta: float, A1: float, A2: float) -> MeridionalField:
    """alpha = 1 field with g = e^(beta x0) (A2 cos(beta rho) - A1 sin(beta rho)).

    Its velocity never vanishes: |V| = beta e^(beta x0) sqrt(A1^2 + A2^2).
    """
    beta, A1, A2 = _finite("beta", beta), _finite("A1", A1), _finite("A2", A2)
    if not beta > 0.0:
        raise ValidationError("beta must be positive")
    f = holo_field(exponential_holo(beta, A1, A2), "exponential", (("A1", A1), ("A2", A2), ("beta", beta)))
    return MeridionalField(1.0, f.profile, SourceKind.REGISTERED, "exponential", f.params)


def exponential_as_gasp(beta: float, A1: float, A2: float) -> GaspSeries:
    """The same potential written as a one-term alpha = 1 GASP series.

    With b1 = b2 = 1 the x0 factor is e^(beta x0), and
    rho^(1/2) J_(1/2)(beta rho) = sqrt(2/(pi beta)) sin(beta rho) (Y: -cos),
    so a1 = -A1 sqrt(pi beta / 2) and a2 = -A2 sqrt(pi beta / 2).
    """
    k = math.sqrt(0.5 * math.pi * beta)
    return GaspSeries(1.0, [GaspTerm(beta, 1.0, 1.0, -A1 * k, -A2 * k)])


# -- bihyperbolic series -------------------------------------------------------------------

@dataclass(frozen=True)
class BiTerm:
    lam: float
    mu: float = 0.0
    c1: float = 1.0
    c2: float = 0.0
    b1: float = 1.0
    b2: float = 0.0
    a1: float = 1.0
    a2: float = 0.0

    def __post_init__(self):
        for k in ("lam", "mu", "c1", "c2", "b1", "b2", "a1", "a2"):
            _finite(k, getattr(self, k))
        if not self.lam > 0.0:
            raise ValidationError("lambda must be positive")

    @property
    def nu(self) -> float:
        return math.hypot(self.lam, self.mu)


@dataclass(frozen=True)
class BiSeries:
    alpha1: float
    alpha2: float
    terms: tuple = ()

    def __init__(self, alpha1: float, alpha2: float, terms=()):
        object.__setattr__(self, "alpha1", _finite("alpha1", alpha1))
        object.__setattr__(self, "alpha2", _finite("alpha2", alpha2))
        object.__setattr__(self, "terms", tuple(terms))
        if not (self.alpha1 > 0.0 and self.alpha2 > 0.0):
            raise ValidationError("alpha1 and alpha2 must be positive")
        for a in (self.alpha1, self.alpha2):
            if (a + 1.0) / 2 > MAX_ORDER:
                raise ValidationError(f"(alpha+1)/2 must not exceed {MAX_ORDER}")
        for t in self.terms:
            if not isinstance(t, BiTerm):
                raise ValidationError(f"not a BiTerm: {t!r}")
        if len(self.terms) > 1 and any(not float(t.mu).is_integer() for t in self.terms):
            warnings.warn("x0 factors with non-integer mu do not form a 2*pi-periodic Fourier series", stacklevel=2)

    def __call__(self, x0: float, x1: float, x2: float) -> float:
        return bi_eval(self, (x0, x1, x2))


def bi_x1_factor(t: BiTerm, alpha1: float, x1: float) -> float:
    p = 0.5 * (alpha1 + 1.0)
    J, Y, _, _ = bessel_jy(p, t.lam * x1)
    return x1**p * (t.c1 * J + t.c2 * Y)


def bi_x0_factor(t: BiTerm, x0: float) -> float:
    return t.b1 * math.cos(t.mu * x0) + t.b2 * math.sin(t.mu * x0)


def bi_x2_factor(t: BiTerm, alpha2: float, x2: float) -> float:
    p = 0.5 * (alpha2 + 1.0)
    I, K, _, _ = bessel_ik(p, t.nu * x2)
    return x2**p * (t.a1 * I + t.a2 * K)


def bi_eval(s: BiSeries, p: PointLike) -> float:
    q = as_point(p)
    if not (q.x1 > 0.0 and q.x2 > 0.0):
        raise QuadrantViolation(f"need x1 > 0 and x2 > 0, got {q.as_tuple()}")
    total = 0.0
    for t in s.terms:
        total += bi_x1_factor(t, s.alpha1, q.x1) * bi_x0_factor(t, q.x0) * bi_x2_factor(t, s.alpha2, q.x2)
    return total


# -- Stokes stream functions -----------------------------------------------------------------

_GL_NODES = (
    (-0.9602898564975363, 0.1012285362903763),
    (-0.7966664774136267, 0.2223810344533745),
    (-0.5255324099163290, 0.3137066458778873),
    (-0.1834346424956498, 0.3626837833783620),
    (0.1834346424956498, 0.3626837833783620),
    (0.5255324099163290, 0.3137066458778873),
    (0.7966664774136267, 0.2223810344533745),
    (0.9602898564975363, 0.1012285362903763),
)


def _gauss(f: Callable[[float], float], a: float, b: float) -> float:
    """8-point Gauss-Legendre on [a, b]; used only for very short segments."""
    if a == b:
        return 0.0
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    return h * sum(w * f(c + h * x) for x, w in _GL_NODES)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, rtol: float = 1e-9,
                     atol: float = 1e-13, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    scale = abs(whole)

    def rec(a, fa, m, fm, b, fb, whole, tol, depth):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise IntegrationFailure(f"adaptive Simpson did not converge on [{a}, {b}]")
        return (rec(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
                + rec(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1))

    # a crude first pass fixes the relative scale
    tol = max(atol, rtol * max(scale, 1e-300))
    est = rec(a, fa, 0.5 * (a + b), fm, b, fb, whole, tol, 0)
    tol2 = max(atol, rtol * abs(est))
    if tol2 < tol:
        est = rec(a, fa, 0.5 * (a + b), fm, b, fb, whole, tol2, 0)
    return est


def _stream_differentials(f: MeridionalField):
    """(d g^/dx0, d g^/drho) = rho^(1-alpha) (-V_rho, V0)."""
    a = f.alpha

    def d_x0(x0: float, rho: float) -> float:
        return -(rho ** (1.0 - a)) * meridian_velocity(f, x0, rho)[1]

    def d_rho(x0: float, rho: float) -> float:
        return rho ** (1.0 - a) * meridian_velocity(f, x0, rho)[0]

    return d_x0, d_rho


PATHS = ("vertical-first", "horizontal-first")


def stokes_from_potential(f: MeridionalField, m, ref, path: str = "vertical-first", rtol: float = 1e-9) -> float:
    """g^(m) normalised by g^(ref) = 0, integrated along an axis-parallel L-path.

    ``vertical-first`` moves in rho at x0 = ref.x0 and then in x0;
    ``horizontal-first`` does the opposite.  Both paths stay inside the
    rectangle spanned by the endpoints, hence in rho > 0.
    """
    x0, rho = _meridian_xy(m)
    r0, rr = _meridian_xy(ref)
    if not (rho > 0.0 and rr > 0.0):
        raise AxisPoint("stream integration needs rho > 0 at both ends")
    if path not in PATHS:
        raise ValidationError(f"path must be one of {PATHS}")
    d_x0, d_rho = _stream_differentials(f)
    if path == "vertical-first":
        v = adaptive_simpson(lambda t: d_rho(r0, t), rr, rho, rtol)
        h = adaptive_simpson(lambda s: d_x0(s, rho), r0, x0, rtol)
    else:
        h = adaptive_simpson(lambda s: d_x0(s, rr), r0, x0, rtol)
        v = adaptive_simpson(lambda t: d_rho(x0, t), rr, rho, rtol)
    return v + h


@dataclass(frozen=True)
class StokesStream:
    """Stream function of a field, zero at ``ref``.

    Calling it integrates from ``ref``.  :meth:`near` returns a local version
    anchored at one point that is smooth in its arguments, which is what
    finite-difference checks need.
    """

    field: MeridionalField
    ref: tuple
    path: str = "vertical-first"
    rtol: float = 1e-9

    def __call__(self, x0: float, rho: float) -> float:
        return stokes_from_potential(self.field, (x0, rho), self.ref, self.path, self.rtol)

    def near(self, m) -> Callable[[float, float], float]:
        x0m, rhom = _meridian_xy(m)
        base = self(x0m, rhom)
        d_x0, d_rho = _stream_differentials(self.field)

        def local(x0: float, rho: float) -> float:
            return base + _gauss(lambda s: d_x0(s, rhom), x0m, x0) + _gauss(lambda t: d_rho(x0, t), rhom, rho)

        return local


# -- JSON-shaped encoding ------------------------------------------------------------------------

_GASP_TERM_KEYS = ("beta", "b1", "b2", "a1", "a2")
_BI_TERM_KEYS = ("lambda", "mu", "c1", "c2", "b1", "b2", "a1", "a2")


def _keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ValidationError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ValidationError(f"{where}: missing key(s) {', '.join(missing)}")
    for k, v in obj.items():
        if k != "terms" and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise ValidationError(f"{where}.{k}: expected a number, got {v!r}")


def gasp_from_json(obj, where: str = "gasp") -> GaspSeries:
    _keys(obj, ("alpha", "terms"), ("alpha", "terms"), where)
    if not isinstance(obj["terms"], list):
        raise ValidationError(f"{where}.terms: expected a list")
    terms = []
    for i, t in enumerate(obj["terms"]):
        _keys(t, _GASP_TERM_KEYS, ("beta",), f"{where}.terms[{i}]")
        terms.append(GaspTerm(**{k: float(v) for k, v in t.items()}))
    return GaspSeries(float(obj["alpha"]), terms)


def bi_from_json(obj, where: str = "bihyperbolic") -> BiSeries:
    _keys(obj, ("alpha1", "alpha2", "terms"), ("alpha1", "alpha2", "terms"), where)
    if not isinstance(obj["terms"], list):
        raise ValidationError(f"{where}.terms: expected a list")
    terms = []
    for i, t in enumerate(obj["terms"]):
        _keys(t, _BI_TERM_KEYS, ("lambda",), f"{where}.terms[{i}]")
        kw = {("lam" if k == "lambda" else k): float(v) for k, v in t.items()}
        terms.append(BiTerm(**kw))
    return BiSeries(float(obj["alpha1"]), float(obj["alpha2"]), terms)
