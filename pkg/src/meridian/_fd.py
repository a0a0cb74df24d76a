"""Central finite-difference stencils shared by the residual checks.

All stencils are fourth order.  Steps scale with max(1, |coordinate|).
"""

from __future__ import annotations

from typing import Callable, Sequence

FIRST_STEP = 1e-3
SECOND_STEP = 1e-3


def scaled(step: float, c: float) -> float:
    return step * max(1.0, abs(c))


def d1(f: Callable[[float], float], x: float, step: float = FIRST_STEP) -> float:
    h = scaled(step, x)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def d2(f: Callable[[float], float], x: float, step: float = SECOND_STEP) -> float:
    h = scaled(step, x)
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h)


def partial(fn: Callable[..., float], point: Sequence[float], i: int, step: float = FIRST_STEP) -> float:
    """d fn / d point[i]."""
    p = list(point)

    def along(v: float) -> float:
        p[i] = v
        return fn(*p)

    return d1(along, point[i], step)


def partial2(fn: Callable[..., float], point: Sequence[float], i: int, step: float = SECOND_STEP) -> float:
    """d^2 fn / d point[i]^2."""
    p = list(point)

    def along(v: float) -> float:
        p[i] = v
        return fn(*p)

    return d2(along, point[i], step)


def mixed(fn: Callable[..., float], point: Sequence[float], i: int, j: int, step: float = SECOND_STEP) -> float:
    """d^2 fn / d point[i] d point[j], Richardson-extrapolated to fourth order."""
    if i == j:
        return partial2(fn, point, i, step)

    def m(hi: float, hj: float) -> float:
        vals = []
        for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            p = list(point)
            p[i] += si * hi
            p[j] += sj * hj
            vals.append(fn(*p))
        return (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * hi * hj)

    hi = scaled(step, point[i])
    hj = scaled(step, point[j])
    return (4 * m(hi, hj) - m(2 * hi, 2 * hj)) / 3


def gradient(fn: Callable[..., float], point: Sequence[float], step: float = FIRST_STEP) -> list[float]:
    return [partial(fn, point, i, step) for i in range(len(point))]


def hessian(fn: Callable[..., float], point: Sequence[float], step: float = SECOND_STEP) -> list[list[float]]:
    n = len(point)
    H = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            H[i][j] = H[j][i] = mixed(fn, point, i, j, step)
    return H
