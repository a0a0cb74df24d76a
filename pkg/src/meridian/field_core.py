"""Potential meridional fields V = grad h in media with density rho^(-alpha).

A field is an exponent ``alpha`` plus a meridian-plane profile g(x0, rho); the
3-D potential is h(x) = g(x0, rho(x)).  Everything analytic is computed in
the meridian plane from a :class:`FieldSample` and embedded exactly, so the
azimuth factors x1/rho, x2/rho are never differentiated numerically.

The residual checks at the bottom deliberately go back to finite differences
on h or g so that they do not share code paths with the quantities they
verify.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Protocol, Sequence, Union

import numpy as np

from . import _fd
from .errors import AxisPoint, QuadrantViolation, ValidationError
from .radial_holo import HoloExpr, holo_complex, holo_derivative
from .rq_algebra import MeridianValue, ReducedQuaternion


class Partials(NamedTuple):
    """g and its derivatives up to second order at a meridian point."""

    g0: float
    gr: float
    g00: float
    g0r: float
    grr: float


class Profile(Protocol):
    def potential(self, x0: float, rho: float) -> float: ...

    def derivatives(self, x0: float, rho: float) -> Partials: ...


@dataclass(frozen=True)
class HoloProfile:
    """g = Re G for a radially holomorphic primitive G (alpha = 1 only).

    With F = G' = u0 + I u_rho the field is V0 = u0, V_rho = -u_rho, and the
    second derivatives come from F' in the same way.
    """

    G: HoloExpr
    F: HoloExpr = field(init=False, repr=False, compare=False)
    dF: HoloExpr = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "F", holo_derivative(self.G))
        object.__setattr__(self, "dF", holo_derivative(self.F))

    def potential(self, x0: float, rho: float) -> float:
        return holo_complex(self.G, x0, rho).real

    def stream(self, x0: float, rho: float) -> float:
        """g_hat = Im G, the Stokes stream function for alpha = 1."""
        return holo_complex(self.G, x0, rho).imag

    def derivatives(self, x0: float, rho: float) -> Partials:
        f = holo_complex(self.F, x0, rho)
        df = holo_complex(self.dF, x0, rho)
        return Partials(f.real, -f.imag, df.real, -df.imag, -df.real)


@dataclass(frozen=True)
class CallableProfile:
    """Any g(x0, rho); derivatives by fourth-order central differences."""

    g: Callable[[float, float], float]
    step: float = 1e-3

    def potential(self, x0: float, rho: float) -> float:
        return float(self.g(x0, rho))

    def derivatives(self, x0: float, rho: float) -> Partials:
        pt = (x0, rho)
        return Partials(
            _fd.partial(self.g, pt, 0, self.step),
            _fd.partial(self.g, pt, 1, self.step),
            _fd.partial2(self.g, pt, 0, self.step),
            _fd.mixed(self.g, pt, 0, 1, self.step),
            _fd.partial2(self.g, pt, 1, self.step),
        )


class SourceKind(str, enum.Enum):
    HOLO = "holo"
    GASP = "gasp"
    REGISTERED = "registered"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MeridionalField:
    """alpha plus a meridian profile; ``params`` records the constructor inputs."""

    alpha: float
    profile: Profile
    source: SourceKind = SourceKind.CUSTOM
    name: str = ""
    params: tuple = ()

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValidationError("alpha must be finite")
        if self.source is SourceKind.HOLO and self.alpha != 1.0:
            raise ValidationError("radially holomorphic sources require alpha = 1")
        if not (hasattr(self.profile, "potential") and hasattr(self.profile, "derivatives")):
            raise ValidationError("profile must provide potential() and derivatives()")

    def potential(self, p: "PointLike") -> float:
        q = as_point(p)
        return self.profile.potential(q.x0, q.rho)


def holo_field(G: HoloExpr, name: str = "holo", params: tuple = ()) -> MeridionalField:
    """Field of the radially holomorphic potential G (alpha = 1)."""
    return MeridionalField(1.0, HoloProfile(G), SourceKind.HOLO, name, params)


PointLike = Union[ReducedQuaternion, Sequence[float]]


def as_point(p: PointLike) -> ReducedQuaternion:
    if isinstance(p, ReducedQuaternion):
        return p
    x0, x1, x2 = p
    return ReducedQuaternion(float(x0), float(x1), float(x2))


def _off_axis(p: PointLike) -> tuple[ReducedQuaternion, float]:
    q = as_point(p)
    rho = q.rho
    if rho == 0.0:
        raise AxisPoint(f"point {q.as_tuple()} lies on the x0 axis")
    return q, rho


# -- samples, Jacobian, spectrum -------------------------------------------------

@dataclass(frozen=True)
class FieldSample:
    V0: float
    Vrho: float
    dVrho_dx0: float
    dVrho_drho: float
    dV0_dx0: float
    dV0_drho: float

    @classmethod
    def from_partials(cls, d: Partials) -> "FieldSample":
        return cls(d.g0, d.gr, d.g0r, d.grr, d.g00, d.g0r)


def sample(f: MeridionalField, x0: float, rho: float) -> FieldSample:
    """FieldSample at the meridian point (x0, rho), rho > 0."""
    if not rho > 0.0:
        raise AxisPoint("meridian samples need rho > 0")
    return FieldSample.from_partials(f.profile.derivatives(x0, rho))


def meridian_velocity(f: MeridionalField, x0: float, rho: float) -> tuple[float, float]:
    """(V0, V_rho) at a meridian point."""
    d = f.profile.derivatives(x0, rho)
    return d.g0, d.gr


def field_eval(f: MeridionalField, p: PointLike) -> tuple[float, float, float]:
    """V = (V0, (x1/rho) V_rho, (x2/rho) V_rho)."""
    q, rho = _off_axis(p)
    V0, Vr = meridian_velocity(f, q.x0, rho)
    return (V0, q.x1 / rho * Vr, q.x2 / rho * Vr)


def jacobian_from_sample(alpha: float, s: FieldSample, x1: float, x2: float) -> np.ndarray:
    """The symmetric 3x3 Jacobian of a potential meridional field.

    The (0, 0) entry uses the continuity equation, -dV_rho/drho + (alpha-1) V_rho/rho,
    rather than dV0/dx0.
    """
    rho = math.hypot(x1, x2)
    c, s_ = x1 / rho, x2 / rho
    w = s.Vrho / rho
    d = s.dVrho_drho
    b = s.dVrho_dx0
    J = np.empty((3, 3))
    J[0, 0] = -d + (alpha - 1.0) * w
    J[0, 1] = J[1, 0] = b * c
    J[0, 2] = J[2, 0] = b * s_
    J[1, 1] = d * c * c + w * s_ * s_
    J[1, 2] = J[2, 1] = (d - w) * c * s_
    J[2, 2] = d * s_ * s_ + w * c * c
    return J


def field_jacobian(f: MeridionalField, p: PointLike) -> np.ndarray:
    q, rho = _off_axis(p)
    return jacobian_from_sample(f.alpha, sample(f, q.x0, rho), q.x1, q.x2)


@dataclass(frozen=True)
class Spectrum:
    lambda0: float
    lambda1: float
    lambda2: float
    radicand: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda0, self.lambda1, self.lambda2)


def spectrum_from_sample(alpha: float, s: FieldSample, rho: float) -> Spectrum:
    """Closed-form eigenvalues; lambda1 >= lambda2.

    The radicand is written as a sum of two squares so it cannot go negative.
    """
    w = s.Vrho / rho
    a = 0.5 * (alpha - 1.0) * w
    rad = s.dVrho_dx0 ** 2 + (a - s.dVrho_drho) ** 2
    r = math.sqrt(rad)
    return Spectrum(w, a + r, a - r, rad)


def spectrum(f: MeridionalField, p: PointLike) -> Spectrum:
    q, rho = _off_axis(p)
    return spectrum_from_sample(f.alpha, sample(f, q.x0, rho), rho)


@dataclass(frozen=True)
class PrincipalInvariants:
    inv1: float
    inv2: float
    inv3: float


def principal_invariants(J) -> PrincipalInvariants:
    """Trace, sum of principal 2x2 minors and determinant of a 3x3 matrix."""
    J = np.asarray(J, dtype=float)
    if J.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 matrix, got shape {J.shape}")
    tr = J[0, 0] + J[1, 1] + J[2, 2]
    minors = (
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    det = (
        J[0, 0] * (J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
        - J[0, 1] * (J[1, 0] * J[2, 2] - J[1, 2] * J[2, 0])
        + J[0, 2] * (J[1, 0] * J[2, 1] - J[1, 1] * J[2, 0])
    )
    return PrincipalInvariants(float(tr), float(minors), float(det))


def characteristic_residual(inv: PrincipalInvariants, lam: float) -> float:
    """|lam^3 - I lam^2 + II lam - III|."""
    return abs(((lam - inv.inv1) * lam + inv.inv2) * lam - inv.inv3)


class DegenerateCondition(str, enum.Enum):
    VRHO_ZERO = "VrhoZero"
    GRAD_CONDITION = "GradCondition"


@dataclass(frozen=True)
class DegeneracyReport:
    conditions: tuple

    @property
    def degenerate(self) -> bool:
        return bool(self.conditions)


DEGENERATE_TOL = 1e-9


def degeneracy_of_sample(alpha: float, s: FieldSample, rho: float, tol: float = DEGENERATE_TOL) -> DegeneracyReport:
    w = s.Vrho / rho
    b, d = s.dVrho_dx0, s.dVrho_drho
    norm = 1.0 + w * w + b * b + d * d
    grad = b * b + d * d - (alpha - 1.0) * w * d
    conds = []
    if abs(w) / norm <= tol:
        conds.append(DegenerateCondition.VRHO_ZERO)
    if abs(grad) / norm <= tol:
        conds.append(DegenerateCondition.GRAD_CONDITION)
    return DegeneracyReport(tuple(conds))


def degenerate_test(f: MeridionalField, p: PointLike, tol: float = DEGENERATE_TOL) -> DegeneracyReport:
    """Which of the two zero-determinant conditions hold at p.

    det J = -(V_rho/rho) * C with C = (dV_rho/dx0)^2 + (dV_rho/drho)^2
    - (alpha-1)(V_rho/rho)(dV_rho/drho); each factor is compared to ``tol``
    after division by 1 + (V_rho/rho)^2 + (dV_rho/dx0)^2 + (dV_rho/drho)^2.
    """
    q, rho = _off_axis(p)
    return degeneracy_of_sample(f.alpha, sample(f, q.x0, rho), rho, tol)


# -- residual checks ------------------------------------------------------------------

Scalar2 = Union[Profile, Callable[[float, float], float]]
Scalar3 = Callable[[float, float, float], float]


def _meridian_fn(g: Scalar2) -> Callable[[float, float], float]:
    if hasattr(g, "potential"):
        return g.potential
    return g


def _potential3(f: MeridionalField) -> Scalar3:
    pot = f.profile.potential
    return lambda x0, x1, x2: pot(x0, math.hypot(x1, x2))


def axial_hyperbolic_residual(h: Scalar3, alpha: float, p: PointLike) -> float:
    """|rho^2 Lap h - alpha (x1 h_x1 + x2 h_x2)| by finite differences."""
    q, rho = _off_axis(p)
    pt = q.as_tuple()
    lap = sum(_fd.partial2(h, pt, i) for i in range(3))
    radial = q.x1 * _fd.partial(h, pt, 1) + q.x2 * _fd.partial(h, pt, 2)
    return abs(rho * rho * lap - alpha * radial)


def continuity_residual(f: MeridionalField, p: PointLike) -> float:
    """Residual of the continuity equation for density rho^(-alpha) at p."""
    return axial_hyperbolic_residual(_potential3(f), f.alpha, p)


def _meridian_point(m) -> tuple[float, float]:
    if isinstance(m, MeridianValue):
        x0, rho = m.s, m.t
    else:
        x0, rho = m
    if not rho > 0.0:
        raise AxisPoint("meridian point needs rho > 0")
    return float(x0), float(rho)


def epd_residual(g: Scalar2, alpha: float, m) -> float:
    """|rho (g_x0x0 + g_rhorho) - (alpha-1) g_rho|."""
    x0, rho = _meridian_point(m)
    fn = _meridian_fn(g)
    pt = (x0, rho)
    lap = _fd.partial2(fn, pt, 0) + _fd.partial2(fn, pt, 1)
    return abs(rho * lap - (alpha - 1.0) * _fd.partial(fn, pt, 1))


def stokes_residual(gh: Scalar2, alpha: float, m) -> float:
    """|rho (g^_x0x0 + g^_rhorho) + (alpha-1) g^_rho|, the stream-function equation."""
    x0, rho = _meridian_point(m)
    fn = _meridian_fn(gh)
    pt = (x0, rho)
    lap = _fd.partial2(fn, pt, 0) + _fd.partial2(fn, pt, 1)
    return abs(rho * lap + (alpha - 1.0) * _fd.partial(fn, pt, 1))


def meridional_criterion_residual(h: Scalar3, p: PointLike) -> float:
    """|x2 h_x1 - x1 h_x2|; zero exactly when h does not depend on the azimuth."""
    q, _ = _off_axis(p)
    pt = q.as_tuple()
    return abs(q.x2 * _fd.partial(h, pt, 1) - q.x1 * _fd.partial(h, pt, 2))


def azimuthal_derivative(h: Scalar3, p: PointLike) -> float:
    """dh/dtheta in cylindrical coordinates, differentiated along the circle."""
    q, rho = _off_axis(p)
    theta = math.atan2(q.x2, q.x1)

    def on_circle(t: float) -> float:
        return h(q.x0, rho * math.cos(t), rho * math.sin(t))

    return _fd.d1(on_circle, theta, _fd.FIRST_STEP / max(1.0, abs(theta)))


def bihyperbolic_residual(h: Scalar3, alpha1: float, alpha2: float, p: PointLike) -> float:
    """|Lap h - (alpha1/x1) h_x1 - (alpha2/x2) h_x2| in the open quadrant."""
    q = as_point(p)
    if not (q.x1 > 0.0 and q.x2 > 0.0):
        raise QuadrantViolation(f"need x1 > 0 and x2 > 0, got {q.as_tuple()}")
    pt = q.as_tuple()
    lap = sum(_fd.partial2(h, pt, i) for i in range(3))
    return abs(lap - alpha1 / q.x1 * _fd.partial(h, pt, 1) - alpha2 / q.x2 * _fd.partial(h, pt, 2))


def stream_orthogonality(g: Scalar2, gh: Scalar2, m) -> float:
    """|grad g . grad g^| in the meridian plane.

    Only meaningful for a genuine potential/stream pair; passing two
    unrelated functions just returns their gradient overlap.
    """
    x0, rho = _meridian_point(m)
    pt = (x0, rho)
    dg = _fd.gradient(_meridian_fn(g), pt)
    dh = _fd.gradient(_meridian_fn(gh), pt)
    return abs(dg[0] * dh[0] + dg[1] * dh[1])


def fd_jacobian(f: MeridionalField, p: PointLike) -> np.ndarray:
    """Central differences of field_eval, column j = dV/dx_j."""
    q, _ = _off_axis(p)
    pt = q.as_tuple()
    J = np.empty((3, 3))
    for i in range(3):
        comp = lambda a, b, c, i=i: field_eval(f, (a, b, c))[i]  # noqa: E731
        for j in range(3):
            J[i, j] = _fd.partial(comp, pt, j)
    return J


def fd_hessian(f: MeridionalField, p: PointLike) -> np.ndarray:
    q, _ = _off_axis(p)
    return np.array(_fd.hessian(_potential3(f), q.as_tuple()))


def curl_residual(f: MeridionalField, p: PointLike) -> float:
    """max |curl V| component, V differentiated numerically."""
    J = fd_jacobian(f, p)
    return float(max(abs(J[2, 1] - J[1, 2]), abs(J[0, 2] - J[2, 0]), abs(J[1, 0] - J[0, 1])))


def layered_divergence_residual(f: MeridionalField, p: PointLike) -> float:
    """rho^alpha |div(rho^(-alpha) V)|, i.e. |div V - alpha V_rho / rho|."""
    q, rho = _off_axis(p)
    pt = q.as_tuple()
    total = 0.0
    for i in range(3):
        def weighted(a, b, c, i=i):
            return math.hypot(b, c) ** (-f.alpha) * field_eval(f, (a, b, c))[i]

        total += _fd.partial(weighted, pt, i)
    return abs(total) * rho ** f.alpha
