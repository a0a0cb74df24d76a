"""Reduced quaternions x0 + i x1 + j x2 and the meridian half-plane.

A point with rho = sqrt(x1^2 + x2^2) > 0 is written x0 + I rho with the unit
azimuth I = (i x1 + j x2) / rho, I^2 = -1.  Every radially holomorphic value at
that point is s + I t for the same I, so the arithmetic we actually need is the
commutative algebra of pairs (s, t), which is isomorphic to the complex field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import AxisPoint, DivisionByZero, NonUnitAzimuth

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ReducedQuaternion:
    x0: float
    x1: float
    x2: float

    @property
    def rho(self) -> float:
        return math.hypot(self.x1, self.x2)

    @property
    def norm2(self) -> float:
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x0, self.x1, self.x2)


@dataclass(frozen=True)
class MeridianValue:
    """s + I t; behaves like the complex number s + i t."""

    s: float
    t: float

    @classmethod
    def from_complex(cls, z: complex) -> "MeridianValue":
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.s, self.t)

    def __iter__(self):
        yield self.s
        yield self.t

    def __add__(self, other: "MeridianValue") -> "MeridianValue":
        return MeridianValue(self.s + other.s, self.t + other.t)

    def __sub__(self, other: "MeridianValue") -> "MeridianValue":
        return MeridianValue(self.s - other.s, self.t - other.t)

    def __neg__(self) -> "MeridianValue":
        return MeridianValue(-self.s, -self.t)

    def __mul__(self, other: "MeridianValue") -> "MeridianValue":
        return mul_meridian(self, other)

    def __abs__(self) -> float:
        return math.hypot(self.s, self.t)


@dataclass(frozen=True)
class Azimuth:
    a1: float
    a2: float

    def __post_init__(self):
        if abs(self.a1 * self.a1 + self.a2 * self.a2 - 1.0) > 1e-9:
            raise NonUnitAzimuth(f"azimuth ({self.a1}, {self.a2}) is not a unit vector")


class Cylindrical(NamedTuple):
    x0: float
    rho: float
    theta: float
    on_axis: bool


def to_cylindrical(p: ReducedQuaternion) -> Cylindrical:
    """Cylindrical coordinates with theta in [0, 2 pi).

    On the axis theta is reported as 0 and ``on_axis`` is set.
    """
    rho = p.rho
    if rho == 0.0:
        return Cylindrical(p.x0, 0.0, 0.0, True)
    theta = math.atan2(p.x2, p.x1)
    if theta < 0.0:
        theta += TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return Cylindrical(p.x0, rho, theta, False)


def meridian_of(p: ReducedQuaternion) -> tuple[MeridianValue, Azimuth]:
    rho = p.rho
    if rho == 0.0:
        raise AxisPoint(f"point {p.as_tuple()} lies on the x0 axis")
    return MeridianValue(p.x0, rho), Azimuth(p.x1 / rho, p.x2 / rho)


def embed(m: MeridianValue, az: Azimuth) -> ReducedQuaternion:
    # Azimuth validates unit length on construction.
    return ReducedQuaternion(m.s, m.t * az.a1, m.t * az.a2)


def mul_meridian(a: MeridianValue, b: MeridianValue) -> MeridianValue:
    return MeridianValue(a.s * b.s - a.t * b.t, a.s * b.t + a.t * b.s)


def inv_meridian(a: MeridianValue) -> MeridianValue:
    d = a.s * a.s + a.t * a.t
    if d == 0.0:
        raise DivisionByZero("inverse of the zero meridian value")
    return MeridianValue(a.s / d, -a.t / d)


def conj(q: ReducedQuaternion) -> ReducedQuaternion:
    return ReducedQuaternion(q.x0, -q.x1, -q.x2)
