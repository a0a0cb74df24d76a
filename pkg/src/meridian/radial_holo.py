"""Radially holomorphic functions G = g + I g_hat of the reduced variable x.

In the meridian half-plane these are holomorphic functions of x0 + i rho, so
every expression is evaluated with complex arithmetic and mapped back to a
:class:`MeridianValue`.  Expressions form a small closed algebra; derivatives
and primitives are symbolic, and finite differences appear only in the
residual checks below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, Unsupported, ValidationError
from .rq_algebra import MeridianValue


class HoloExpr:
    """Base class of the expression tree."""

    def __add__(self, other: "HoloExpr") -> "Sum":
        return Sum((self, other))

    def __rmul__(self, c: float) -> "Scale":
        return Scale(float(c), self)


@dataclass(frozen=True)
class Power(HoloExpr):
    n: int


@dataclass(frozen=True)
class Exp(HoloExpr):
    """e^(beta x)."""

    beta: float = 1.0


@dataclass(frozen=True)
class Cos(HoloExpr):
    pass


@dataclass(frozen=True)
class Sin(HoloExpr):
    pass


@dataclass(frozen=True)
class Log(HoloExpr):
    pass


@dataclass(frozen=True)
class XLog(HoloExpr):
    """x ln x, present so that ln x has a primitive inside the algebra."""


@dataclass(frozen=True)
class Joukowski(HoloExpr):
    """B (x + gamma^2 x^-1)."""

    B: float
    gamma: float


@dataclass(frozen=True)
class Scale(HoloExpr):
    c: float
    inner: HoloExpr


@dataclass(frozen=True)
class Reverse(HoloExpr):
    """I * inner."""

    inner: HoloExpr


@dataclass(frozen=True)
class Sum(HoloExpr):
    terms: tuple

    def __init__(self, terms=()):
        object.__setattr__(self, "terms", tuple(terms))


ZERO = Sum(())


# -- evaluation ---------------------------------------------------------------

def _power(n: int, z: complex) -> complex:
    # Equal to r^n (cos n phi + I sin n phi), but binary powering keeps exact
    # inputs exact, e.g. I^2 = -1 with no 1e-16 residue in the scalar part.
    if n >= 0:
        return z**n
    if z == 0:
        raise DomainError(f"x^{n} is undefined at the origin")
    return 1.0 / z**(-n)


def _eval(e: HoloExpr, z: complex) -> complex:
    if isinstance(e, Power):
        return _power(e.n, z)
    if isinstance(e, Exp):
        return cmath.exp(e.beta * z)
    if isinstance(e, Cos):
        return cmath.cos(z)
    if isinstance(e, Sin):
        return cmath.sin(z)
    if isinstance(e, Log):
        if not z.imag > 0.0:
            raise DomainError("ln x needs rho > 0 (0 < phi < pi)")
        return complex(0.5 * math.log(z.real * z.real + z.imag * z.imag), math.atan2(z.imag, z.real))
    if isinstance(e, XLog):
        return z * _eval(Log(), z)
    if isinstance(e, Joukowski):
        return e.B * (z + e.gamma * e.gamma * _power(-1, z))
    if isinstance(e, Scale):
        return e.c * _eval(e.inner, z)
    if isinstance(e, Reverse):
        return 1j * _eval(e.inner, z)
    if isinstance(e, Sum):
        total = 0j
        for term in e.terms:
            total += _eval(term, z)
        return total
    raise TypeError(f"not a HoloExpr: {e!r}")


def holo_eval(e: HoloExpr, m: MeridianValue) -> MeridianValue:
    """(g, g_hat) of ``e`` at the meridian point m = (x0, rho)."""
    return MeridianValue.from_complex(_eval(e, complex(m.s, m.t)))


def holo_complex(e: HoloExpr, x0: float, rho: float) -> complex:
    """Same as :func:`holo_eval` but returns the complex number g + i g_hat."""
    return _eval(e, complex(x0, rho))


# -- calculus -------------------------------------------------------------------

def holo_derivative(e: HoloExpr) -> HoloExpr:
    """Radial derivative G' = 1/2 (d/dx0 - I d/drho) G, symbolically."""
    if isinstance(e, Power):
        if e.n == 0:
            return ZERO
        return Scale(float(e.n), Power(e.n - 1))
    if isinstance(e, Exp):
        return Scale(e.beta, Exp(e.beta))
    if isinstance(e, Cos):
        return Scale(-1.0, Sin())
    if isinstance(e, Sin):
        return Cos()
    if isinstance(e, Log):
        return Power(-1)
    if isinstance(e, XLog):
        return Sum((Log(), Power(0)))
    if isinstance(e, Joukowski):
        return Scale(e.B, Sum((Power(0), Scale(-e.gamma * e.gamma, Power(-2)))))
    if isinstance(e, Scale):
        return Scale(e.c, holo_derivative(e.inner))
    if isinstance(e, Reverse):
        return Reverse(holo_derivative(e.inner))
    if isinstance(e, Sum):
        return Sum(holo_derivative(t) for t in e.terms)
    raise TypeError(f"not a HoloExpr: {e!r}")


def holo_reverse(e: HoloExpr) -> HoloExpr:
    """The reversed function I G = -g_hat + I g."""
    return Reverse(e)


def _joukowski_of_derivative(e: HoloExpr) -> Joukowski | None:
    # recognise B * (x^0 - gamma^2 x^-2), the form holo_derivative emits
    if not (isinstance(e, Scale) and isinstance(e.inner, Sum) and len(e.inner.terms) == 2):
        return None
    one, tail = e.inner.terms
    if one != Power(0) or not (isinstance(tail, Scale) and tail.inner == Power(-2)):
        return None
    if tail.c > 0.0:
        return None
    return Joukowski(e.c, math.sqrt(-tail.c))


def holo_primitive(e: HoloExpr) -> HoloExpr:
    """A radially holomorphic G with G' = e (integration constant zero)."""
    jk = _joukowski_of_derivative(e)
    if jk is not None:
        return jk
    if isinstance(e, Power):
        if e.n == -1:
            return Log()
        return Scale(1.0 / (e.n + 1), Power(e.n + 1))
    if isinstance(e, Exp):
        if e.beta == 0.0:
            return Power(1)
        return Scale(1.0 / e.beta, Exp(e.beta))
    if isinstance(e, Cos):
        return Sin()
    if isinstance(e, Sin):
        return Scale(-1.0, Cos())
    if isinstance(e, Joukowski):
        # B (x^2 / 2 + gamma^2 ln x)
        return Sum((Scale(0.5 * e.B, Power(2)), Scale(e.B * e.gamma * e.gamma, Log())))
    if isinstance(e, Scale):
        return Scale(e.c, holo_primitive(e.inner))
    if isinstance(e, Reverse):
        return Reverse(holo_primitive(e.inner))
    if isinstance(e, Sum):
        return Sum(holo_primitive(t) for t in e.terms)
    if isinstance(e, Log):
        return Sum((XLog(), Scale(-1.0, Power(1))))
    if isinstance(e, XLog):
        raise Unsupported("x^2 ln x / 2 - x^2 / 4 is outside the expression algebra")
    raise TypeError(f"not a HoloExpr: {e!r}")


# -- residual checks ------------------------------------------------------------

MeridianFunction = Union[HoloExpr, Callable[[float, float], complex]]


def _as_complex_fn(e: MeridianFunction) -> Callable[[float, float], complex]:
    if isinstance(e, HoloExpr):
        return lambda x0, rho: _eval(e, complex(x0, rho))

    def fn(x0: float, rho: float) -> complex:
        v = e(x0, rho)
        return complex(v) if not isinstance(v, MeridianValue) else complex(v.s, v.t)

    return fn


def _partials(fn, x0: float, rho: float, step: float) -> tuple[complex, complex]:
    # fourth-order central differences
    h0 = step * max(1.0, abs(x0))
    h1 = step * max(1.0, abs(rho))
    d0 = (fn(x0 - 2 * h0, rho) - 8 * fn(x0 - h0, rho) + 8 * fn(x0 + h0, rho) - fn(x0 + 2 * h0, rho)) / (12 * h0)
    d1 = (fn(x0, rho - 2 * h1) - 8 * fn(x0, rho - h1) + 8 * fn(x0, rho + h1) - fn(x0, rho + 2 * h1)) / (12 * h1)
    return d0, d1


def radial_cr_residual(e: MeridianFunction, m: MeridianValue, step: float = 1e-5) -> float:
    """|1/2 (d/dx0 + I d/drho) G| at m by finite differences.

    ``e`` may be a :class:`HoloExpr` or any callable (x0, rho) -> g + i g_hat.
    """
    if step <= 0.0:
        raise ValidationError("step must be positive")
    d0, d1 = _partials(_as_complex_fn(e), m.s, m.t, step)
    return abs(0.5 * (d0 + 1j * d1))


def fd_radial_derivative(e: MeridianFunction, m: MeridianValue, step: float = 1e-5) -> MeridianValue:
    """1/2 (d/dx0 - I d/drho) G at m by finite differences."""
    d0, d1 = _partials(_as_complex_fn(e), m.s, m.t, step)
    return MeridianValue.from_complex(0.5 * (d0 - 1j * d1))


def anti_holo_components(e: HoloExpr, m: MeridianValue) -> tuple[float, float]:
    """(V0, V_rho) of the meridional field whose complex velocity is ``e``.

    With F = u0 + I u_rho the conjugate F-bar = V0 + I V_rho, so
    V0 = u0 and V_rho = -u_rho.
    """
    u = _eval(e, complex(m.s, m.t))
    return u.real, -u.imag


# -- JSON-shaped encoding ---------------------------------------------------------

_NULLARY = {"cos": Cos, "sin": Sin, "log": Log, "xlog": XLog}


def to_json(e: HoloExpr):
    """Encode as plain dicts/lists, e.g. {"scale": [2.0, {"exp": 1.0}]}."""
    if isinstance(e, Power):
        return {"power": e.n}
    if isinstance(e, Exp):
        return {"exp": e.beta}
    if isinstance(e, Cos):
        return {"cos": None}
    if isinstance(e, Sin):
        return {"sin": None}
    if isinstance(e, Log):
        return {"log": None}
    if isinstance(e, XLog):
        return {"xlog": None}
    if isinstance(e, Joukowski):
        return {"joukowski": [e.B, e.gamma]}
    if isinstance(e, Scale):
        return {"scale": [e.c, to_json(e.inner)]}
    if isinstance(e, Reverse):
        return {"reverse": to_json(e.inner)}
    if isinstance(e, Sum):
        return {"sum": [to_json(t) for t in e.terms]}
    raise TypeError(f"not a HoloExpr: {e!r}")


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {v!r}")
    return float(v)


def from_json(obj, where: str = "expr") -> HoloExpr:
    """Inverse of :func:`to_json`; rejects anything it does not recognise."""
    if isinstance(obj, str) and obj in _NULLARY:
        return _NULLARY[obj]()
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValidationError(f"{where}: expected a single-key object, got {obj!r}")
    (key, val), = obj.items()
    if key == "power":
        if isinstance(val, bool) or not isinstance(val, int):
            if isinstance(val, float) and val.is_integer():
                return Power(int(val))
            raise ValidationError(f"{where}.power: expected an integer, got {val!r}")
        return Power(val)
    if key == "exp":
        return Exp(_number(val, f"{where}.exp"))
    if key in _NULLARY:
        if val not in (None, {}, []):
            raise ValidationError(f"{where}.{key}: takes no argument")
        return _NULLARY[key]()
    if key == "joukowski":
        if not isinstance(val, list) or len(val) != 2:
            raise ValidationError(f"{where}.joukowski: expected [B, gamma]")
        return Joukowski(_number(val[0], f"{where}.joukowski[0]"), _number(val[1], f"{where}.joukowski[1]"))
    if key == "scale":
        if not isinstance(val, list) or len(val) != 2:
            raise ValidationError(f"{where}.scale: expected [c, expr]")
        return Scale(_number(val[0], f"{where}.scale[0]"), from_json(val[1], f"{where}.scale[1]"))
    if key == "reverse":
        return Reverse(from_json(val, f"{where}.reverse"))
    if key == "sum":
        if not isinstance(val, list):
            raise ValidationError(f"{where}.sum: expected a list")
        return Sum(from_json(t, f"{where}.sum[{i}]") for i, t in enumerate(val))
    raise ValidationError(f"{where}: unknown expression kind {key!r}")
