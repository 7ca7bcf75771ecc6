"""Jacobi elliptic functions and closed-form genus-1 recurrence coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, PoleProximity

_AGM_TOL = 1e-16


def _agm_sequence(k: float):
    a, b, c = 1.0, math.sqrt(1.0 - k * k), k
    seq = [(a, b, c)]
    while abs(c) > _AGM_TOL * a and len(seq) < 64:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        seq.append((a, b, c))
    return seq


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, ``K(k) = pi / (2 AGM(1, k'))``.

    Raises
    ------
    DomainError
        For ``k`` outside ``[0, 1)``.
    """
    if not (0.0 <= abs(k) < 1.0):
        raise DomainError(f"modulus {k!r} outside [0, 1)")
    return math.pi / (2.0 * _agm_sequence(abs(k))[-1][0])


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_F by duplication."""
    for _ in range(100):
        lam = math.sqrt(x * y) + math.sqrt(y * z) + math.sqrt(z * x)
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        dx, dy, dz = 1 - x / mu, 1 - y / mu, 1 - z / mu
        if max(abs(dx), abs(dy), abs(dz)) < 1e-4:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(mu)


def incomplete_F(phi: float, k: float) -> float:
    """``F(phi, k)`` for ``|phi| <= pi/2``."""
    s, c = math.sin(phi), math.cos(phi)
    return s * carlson_rf(c * c, 1.0 - (k * s) ** 2, 1.0)


def jacobi_sn_cn_dn(u: float, k: float):
    """``(sn, cn, dn)`` by the descending Landen (AGM phase) recurrence."""
    k = abs(k)
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0
    seq = _agm_sequence(k)
    m = len(seq) - 1
    phi = (2**m) * seq[-1][0] * u
    for j in range(m, 0, -1):
        a, _, c = seq[j]
        phi = 0.5 * (phi + math.asin(c / a * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    return sn, cn, math.sqrt(1.0 - (k * sn) ** 2)


@dataclass(frozen=True)
class EllipticContext:
    """Modulus and argument data for a genus-1 configuration.

    ``two_K_uplus`` stores the product ``2 K u+`` that every closed form uses.
    """

    alpha: float
    beta: float
    k: float
    Kk: float
    u_plus: float
    c: float

    @property
    def two_K_uplus(self) -> float:
        return 2.0 * self.Kk * self.u_plus

    @classmethod
    def of(cls, alpha: float, beta: float) -> "EllipticContext":
        if not (-1.0 < alpha < beta < 1.0):
            raise DomainError("need -1 < alpha < beta < 1")
        k2 = 2.0 * (beta - alpha) / ((1.0 - alpha) * (1.0 + beta))
        k = math.sqrt(k2)
        Kk = complete_K(k)
        arg = incomplete_F(math.asin(math.sqrt((beta + 1.0) / 2.0)), k)
        c = (2.0 - alpha + beta) ** 2 / 16.0
        return cls(alpha, beta, k, Kk, arg / (2.0 * Kk), c)


def genus1_closed_form(alpha: float, beta: float, n: int, ctx: EllipticContext | None = None):
    """``(a_n, b_n)`` for one gap ``(alpha, beta)``, valid for ``n >= 2``.

    With ``S = sn^2((2n-2) 2K u+)`` the diagonal coefficient is

        b_n = (beta - alpha) * (1/2 - (1 + alpha) S / ((1 + beta) - (beta - alpha) S))

    whose denominator is bounded below by ``1 + alpha``.  The formula also
    reproduces ``b_1 = (beta - alpha)/2`` at ``n = 1``.

    Raises
    ------
    PoleProximity
        If the denominator falls below 1e-14 in magnitude.
    """
    if n < 2:
        raise ValueError("closed forms start at n = 2")
    ctx = ctx or EllipticContext.of(alpha, beta)
    v = ctx.two_K_uplus
    sn_b = jacobi_sn_cn_dn((2 * n - 2) * v, ctx.k)[0]
    gap = beta - alpha
    s2 = sn_b * sn_b
    denom = (1.0 + beta) - gap * s2
    if abs(denom) < 1e-14:
        raise PoleProximity(f"b_{n} denominator vanishes")
    b_n = gap * (0.5 - (1.0 + alpha) * s2 / denom)
    sn_a = jacobi_sn_cn_dn((2 * n - 1) * v + ctx.Kk, ctx.k)[0]
    a_n = ctx.c * (1.0 - 8.0 * gap / (2.0 - alpha + beta) ** 2 * sn_a**2)
    return a_n, b_n
