r"""Bessel functions of real order nu >= 0 and real argument x > 0.

J and Y (with derivatives) come from Steed's method: the continued fraction
CF1 for J'/J, downward recurrence to an order mu with |mu| <= 1/2, then either
Temme's series (x < 2) or the complex continued fraction CF2 (x >= 2) to fix
the normalisation through the Wronskian.  I and K follow the same pattern with
the modified recurrences.  Temme's series need the even/odd parts of
1/Gamma(1 +- mu); those are built from the Taylor series of log Gamma(1 + mu)
so that nothing cancels as mu -> 0.

The half-integer closed forms are kept separately as an independent route.
"""

from __future__ import annotations

import enum
import math

from .errors import DomainError, UnsupportedOrder

MAX_ORDER = 50.0

_EPS = 1e-16
_FPMIN = 1e-30
_MAXIT = 100000
_XMIN = 2.0
_RESCALE = 1e200
_EULER_GAMMA = 0.57721566490153286061


class BesselKind(str, enum.Enum):
    J = "J"
    Y = "Y"
    I = "I"  # noqa: E741
    K = "K"


def _zeta(k: int) -> float:
    """Riemann zeta for integer k >= 2 (direct sum + Euler-Maclaurin tail)."""
    n = 16
    total = math.fsum(j ** -k for j in range(1, n))
    total += n ** (1 - k) / (k - 1) + 0.5 * n ** -k
    # B_2j / (2j)!
    bern = (1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160)
    rising = float(k)
    for j, b in enumerate(bern, start=1):
        total += b * rising * n ** (-k - 2 * j + 1)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
    return total


_ZETA = [0.0, 0.0] + [_zeta(k) for k in range(2, 64)]


def _gamma_aux(mu: float) -> tuple[float, float, float, float]:
    """(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)) for |mu| <= 1/2."""
    mu2 = mu * mu
    even = 0.0
    odd = _EULER_GAMMA  # B(mu) / mu
    p = mu2
    for k in range(2, 62, 2):
        even += _ZETA[k] * p / k
        odd += _ZETA[k + 1] * p / (k + 1)
        p *= mu2
        if p < 1e-18:
            break
    b = odd * mu
    sinhc = math.sinh(b) / b if b != 0.0 else 1.0
    ea = math.exp(-even)
    gam1 = -ea * sinhc * odd
    gam2 = ea * math.cosh(b)
    return gam1, gam2, math.exp(b - even), math.exp(-even - b)


def _check(nu: float, x: float) -> None:
    if not x > 0.0:
        raise DomainError(f"Bessel argument must be positive, got {x}")
    if nu < 0.0:
        raise DomainError(f"Bessel order must be nonnegative, got {nu}")
    if nu > MAX_ORDER:
        raise UnsupportedOrder(f"order {nu} exceeds the supported maximum {MAX_ORDER}")


def bessel_jy(nu: float, x: float) -> tuple[float, float, float, float]:
    """Return (J_nu(x), Y_nu(x), J_nu'(x), Y_nu'(x))."""
    _check(nu, x)
    nl = int(nu + 0.5) if x < _XMIN else max(0, int(nu - x + 1.5))
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / math.pi

    # CF1: J'_nu / J_nu by modified Lentz.
    isign = 1
    h = max(nu * xi, _FPMIN)
    b = xi2 * nu
    d = 0.0
    c = h
    for _ in range(_MAXIT):
        b += xi2
        d = b - d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b - 1.0 / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = c * d
        h *= delta
        if d < 0.0:
            isign = -isign
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise DomainError(f"CF1 did not converge for nu={nu}, x={x}")

    rjl = isign * 1e-30
    rjpl = h * rjl
    rjl1, rjp1 = rjl, rjpl
    fact = nu * xi
    for _ in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
        if abs(rjl) > _RESCALE:
            rjl /= _RESCALE
            rjpl /= _RESCALE
            rjl1 /= _RESCALE
            rjp1 /= _RESCALE
    if rjl == 0.0:
        rjl = _EPS
    f = rjpl / rjl

    if x < _XMIN:
        x2 = 0.5 * x
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _gamma_aux(xmu)
        ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        e = math.exp(e)
        p = e / (gampl * math.pi)
        q = 1.0 / (e * math.pi * gammi)
        pimu2 = 0.5 * pimu
        fact3 = 1.0 if abs(pimu2) < _EPS else math.sin(pimu2) / pimu2
        r = math.pi * pimu2 * fact3 * fact3
        c = 1.0
        d = -x2 * x2
        total = ff + r * q
        total1 = p
        for i in range(1, _MAXIT):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * (ff + r * q)
            total += delta
            total1 += c * p - i * delta
            if abs(delta) < (1.0 + abs(total)) * _EPS:
                break
        else:
            raise DomainError("Temme series for Y did not converge")
        rymu = -total
        ry1 = -total1 * xi2
        rymup = xmu * xi * rymu - ry1
        rjmu = w / (rymup - f * rymu)
    else:
        # CF2: p + i q = (J' + i Y') / (J + i Y) by Steed's algorithm.
        a = 0.25 - xmu2
        p = -0.5 * xi
        q = 1.0
        br = 2.0 * x
        bi = 2.0
        fact = a * xi / (p * p + q * q)
        cr = br + q * fact
        ci = bi + p * fact
        den = br * br + bi * bi
        dr = br / den
        di = -bi / den
        dlr = cr * dr - ci * di
        dli = cr * di + ci * dr
        temp = p * dlr - q * dli
        q = p * dli + q * dlr
        p = temp
        for i in range(2, _MAXIT):
            a += 2 * (i - 1)
            bi += 2.0
            dr = a * dr + br
            di = a * di + bi
            if abs(dr) + abs(di) < _FPMIN:
                dr = _FPMIN
            fact = a / (cr * cr + ci * ci)
            cr = br + cr * fact
            ci = bi - ci * fact
            if abs(cr) + abs(ci) < _FPMIN:
                cr = _FPMIN
            den = dr * dr + di * di
            dr /= den
            di /= -den
            dlr = cr * dr - ci * di
            dli = cr * di + ci * dr
            temp = p * dlr - q * dli
            q = p * dli + q * dlr
            p = temp
            if abs(dlr - 1.0) + abs(dli) < _EPS:
                break
        else:
            raise DomainError("CF2 did not converge")
        gam = (p - f) / q
        rjmu = math.copysign(math.sqrt(w / ((p - f) * gam + q)), rjl)
        rymu = rjmu * gam
        rymup = rymu * (p + q / gam)
        ry1 = xmu * xi * rymu - rymup

    scale = rjmu / rjl
    rj = rjl1 * scale
    rjp = rjp1 * scale
    for i in range(1, nl + 1):
        rytemp = (xmu + i) * xi2 * ry1 - rymu
        rymu = ry1
        ry1 = rytemp
    ry = rymu
    ryp = nu * xi * rymu - ry1
    return rj, ry, rjp, ryp


def bessel_ik(nu: float, x: float) -> tuple[float, float, float, float]:
    """Return (I_nu(x), K_nu(x), I_nu'(x), K_nu'(x))."""
    _check(nu, x)
    nl = int(nu + 0.5)
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi

    h = max(nu * xi, _FPMIN)
    b = xi2 * nu
    d = 0.0
    c = h
    for _ in range(_MAXIT):
        b += xi2
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise DomainError(f"CF1 did not converge for nu={nu}, x={x}")

    ril = 1e-30
    ripl = h * ril
    ril1, rip1 = ril, ripl
    fact = nu * xi
    for _ in range(nl):
        ritemp = fact * ril + ripl
        fact -= xi
        ripl = fact * ritemp + ril
        ril = ritemp
        if abs(ril) > _RESCALE:
            ril /= _RESCALE
            ripl /= _RESCALE
            ril1 /= _RESCALE
            rip1 /= _RESCALE
    f = ripl / ril

    if x < _XMIN:
        x2 = 0.5 * x
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _gamma_aux(xmu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, _MAXIT):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * ff
            total += delta
            total1 += c * (p - i * ff)
            if abs(delta) < abs(total) * _EPS:
                break
        else:
            raise DomainError("Temme series for K did not converge")
        rkmu = total
        rk1 = total1 * xi2
    else:
        # Steed's CF2 for K (Temme's normalisation).
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = delh = d
        q1 = 0.0
        q2 = 1.0
        a1 = 0.25 - xmu2
        q = c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, _MAXIT):
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1 = q2
            q2 = qnew
            q += c * qnew
            b += 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if abs(dels / s) < _EPS:
                break
        else:
            raise DomainError("CF2 for K did not converge")
        h = a1 * h
        rkmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi

    rkmup = xmu * xi * rkmu - rk1
    rimu = xi / (f * rkmu - rkmup)
    ri = rimu * ril1 / ril
    rip = rimu * rip1 / ril
    for i in range(1, nl + 1):
        rktemp = (xmu + i) * xi2 * rk1 + rkmu
        rkmu = rk1
        rk1 = rktemp
    rk = rkmu
    rkp = nu * xi * rkmu - rk1
    return ri, rk, rip, rkp


def _pair(kind: BesselKind | str, nu: float, x: float) -> tuple[float, float]:
    kind = BesselKind(kind)
    if kind in (BesselKind.J, BesselKind.Y):
        j, y, jp, yp = bessel_jy(nu, x)
        return (j, jp) if kind is BesselKind.J else (y, yp)
    i, k, ip, kp = bessel_ik(nu, x)
    return (i, ip) if kind is BesselKind.I else (k, kp)


def bessel(kind: BesselKind | str, nu: float, x: float) -> float:
    """Value of the Bessel function ``kind`` of order ``nu`` at ``x``."""
    return _pair(kind, nu, x)[0]


def bessel_derivative(kind: BesselKind | str, nu: float, x: float) -> float:
    """d/dx of :func:`bessel`."""
    return _pair(kind, nu, x)[1]


def bessel_half(kind: BesselKind | str, x: float) -> float:
    """J_{1/2} and Y_{1/2} in closed form."""
    kind = BesselKind(kind)
    if not x > 0.0:
        raise DomainError(f"Bessel argument must be positive, got {x}")
    amp = math.sqrt(2.0 / (math.pi * x))
    if kind is BesselKind.J:
        return amp * math.sin(x)
    if kind is BesselKind.Y:
        return -amp * math.cos(x)
    raise DomainError("closed half-order forms are provided for J and Y only")
