"""Registry of closed-form field families addressable by name.

Each family maps a parameter dict to a :class:`MeridionalField`; the
parameters are the scan space of :func:`meridian.dynamics.parameter_scan`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ValidationError
from .field_core import MeridionalField, SourceKind, holo_field
from .radial_holo import HoloExpr, Joukowski, Power, Scale, Sum
from .separable import exponential_example


def _registered(name: str, G: HoloExpr, params: dict) -> MeridionalField:
    f = holo_field(G, name)
    return MeridionalField(1.0, f.profile, SourceKind.REGISTERED, name, tuple(sorted(params.items())))


def joukowski(B: float = 1.0, gamma: float = 1.0) -> MeridionalField:
    """G = B (x + gamma^2 / x)."""
    return _registered("joukowski", Joukowski(B, gamma), {"B": B, "gamma": gamma})


def xsq_plus_c(c: float = 1.0) -> MeridionalField:
    """F = x^2 + c, i.e. G = x^3 / 3 + c x."""
    return _registered("xsq_plus_c", Sum((Scale(1.0 / 3.0, Power(3)), Scale(c, Power(1)))), {"c": c})


def linear() -> MeridionalField:
    """F = x, h = (x0^2 - rho^2) / 2."""
    return _registered("linear", Scale(0.5, Power(2)), {})


def uniform() -> MeridionalField:
    """F = 1, V = (1, 0, 0)."""
    return _registered("uniform", Power(1), {})


def exponential(beta: float = 1.0, A1: float = 1.0, A2: float = 0.0) -> MeridionalField:
    return exponential_example(beta, A1, A2)


@dataclass(frozen=True)
class Family:
    build: Callable[..., MeridionalField]
    defaults: dict


FAMILIES: dict[str, Family] = {
    "joukowski": Family(joukowski, {"B": 1.0, "gamma": 1.0}),
    "exponential": Family(exponential, {"beta": 1.0, "A1": 1.0, "A2": 0.0}),
    "xsq_plus_c": Family(xsq_plus_c, {"c": 1.0}),
    "linear": Family(linear, {}),
    "uniform": Family(uniform, {}),
}


def make_family(name: str, params: dict | None = None) -> MeridionalField:
    """Build a registered family; unknown names or parameters are rejected."""
    if name not in FAMILIES:
        raise ValidationError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    fam = FAMILIES[name]
    params = dict(params or {})
    unknown = sorted(set(params) - set(fam.defaults))
    if unknown:
        raise ValidationError(f"family {name!r}: unknown parameter(s) {', '.join(unknown)}")
    kw = dict(fam.defaults)
    for k, v in params.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(f"family {name!r}: parameter {k} must be a finite number")
        kw[k] = float(v)
    return fam.build(**kw)
