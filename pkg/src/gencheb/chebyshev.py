"""Generalized Chebyshev polynomials ``P_n``, ``Q_n`` and derived quantities.

``P_n`` are the monic orthogonal polynomials for the weight on E and ``Q_n``
their second-kind partners (``Q_0 = 0``, ``Q_1 = 1``).  Besides plain
recurrence evaluation this module provides the factorised product form, the
one-step relations, the genus-1 differential data, discriminants, envelopes
and the reflected family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .auxpoly import AuxCache, AuxPair
from .errors import (
    BranchZero,
    DomainError,
    NonExactDivision,
    SingularDenominator,
    SingularDeterminant,
    UnsupportedGenus,
)
from .intervals import (
    BranchConfig,
    alpha_poly,
    band_of,
    beta_poly,
    curve_y,
    psi,
    psi_inverse_squared,
)
from .recurrence import RecurrenceTable, pq_coefficients

BRANCH_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class PolynomialPair:
    """Ascending coefficients of ``P_n`` (length ``n + 1``) and ``Q_n`` (length ``n``)."""

    n: int
    P_coeffs: np.ndarray
    Q_coeffs: np.ndarray

    def P(self, x):
        return npoly.polyval(x, self.P_coeffs)

    def Q(self, x):
        return npoly.polyval(x, self.Q_coeffs)


def pair_coefficients(table: RecurrenceTable, n: int) -> PolynomialPair:
    P, Q = pq_coefficients(table, n)
    q = Q[n] if n >= 1 else np.zeros(0)
    return PolynomialPair(n, P[n], q)


def evaluate_all(table: RecurrenceTable, n: int, x):
    """Stacked values ``P_0..P_n`` and ``Q_0..Q_n`` at ``x`` (real or complex)."""
    table.require(n)
    x = np.asarray(x)
    dtype = np.result_type(x, float)
    P = np.zeros((n + 1,) + x.shape, dtype=dtype)
    Q = np.zeros_like(P)
    P[0] = 1.0
    if n >= 1:
        P[1] = x - table.b[1]
        Q[1] = 1.0
    for m in range(1, n):
        P[m + 1] = (x - table.b[m + 1]) * P[m] - table.a[m] * P[m - 1]
        Q[m + 1] = (x - table.b[m + 1]) * Q[m] - table.a[m] * Q[m - 1]
    return P, Q


def evaluate_pair(table: RecurrenceTable, n: int, x):
    """``(P_n(x), Q_n(x))`` by forward recurrence.

    Raises
    ------
    HorizonExceeded
        If ``n`` exceeds the table horizon.
    """
    P, Q = evaluate_all(table, n, x)
    return P[n], Q[n]


def evaluate_derivatives(table: RecurrenceTable, n: int, x):
    """``(P_n'(x), Q_n'(x))`` by differentiating the recurrence."""
    P, Q = evaluate_all(table, n, x)
    dP = np.zeros_like(P)
    dQ = np.zeros_like(Q)
    if n >= 1:
        dP[1] = 1.0
    for m in range(1, n):
        c, a = table.b[m + 1], table.a[m]
        dP[m + 1] = P[m] + (x - c) * dP[m] - a * dP[m - 1]
        dQ[m + 1] = Q[m] + (x - c) * dQ[m] - a * dQ[m - 1]
    return dP[n], dQ[n]


@dataclass(frozen=True)
class FactorValues:
    """``f_+`` and ``f_-`` at one point, with the curve value ``y`` used.

    Off E all three are real; on E ``y`` is imaginary and ``f_+-`` are
    complex conjugates.
    """

    x: float
    fplus: complex
    fminus: complex
    y: complex


def _aux_provider(cfg, table, aux):
    return aux if aux is not None else AuxCache(cfg, table)


def factor_functions(cfg: BranchConfig, table: RecurrenceTable, aux, n: int, x: float) -> FactorValues:
    """``f_+-(x;n) = (G(x;n) +- h_{n-1} y(x)) / S(x;n-1)``.

    Raises
    ------
    SingularDenominator
        At a root of ``S(.;n-1)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    aux = _aux_provider(cfg, table, aux)
    y = complex(curve_y(cfg, float(x)))
    if y.imag == 0.0:
        y = y.real
    denom = aux(n - 1).S(x)
    if abs(denom) < 1e-300 or abs(denom) < 1e-13 * table.h[n - 1]:
        raise SingularDenominator(f"S(x;{n - 1}) vanishes at x={x}")
    G = aux(n).G(x)
    hy = table.h[n - 1] * y
    if isinstance(y, complex):
        return FactorValues(float(x), (G + hy) / denom, (G - hy) / denom, y)
    # G^2 - (h y)^2 = S(x;n) S(x;n-1): take the sum without cancellation and
    # recover the other factor from the product
    big = G + hy if G * hy >= 0 else G - hy
    other = aux(n).S(x) / big
    if big == G + hy:
        return FactorValues(float(x), big / denom, other, y)
    return FactorValues(float(x), other, big / denom, y)


def evaluate_product(cfg: BranchConfig, table: RecurrenceTable, aux, n: int, x: float):
    """``(P_n(x), Q_n(x))`` from products of the factor functions."""
    aux = _aux_provider(cfg, table, aux)
    if n == 0:
        return 1.0, 0.0
    prod_p = 1.0 + 0j
    prod_m = 1.0 + 0j
    for j in range(1, n + 1):
        fv = factor_functions(cfg, table, aux, j, x)
        prod_p *= fv.fplus
        prod_m *= fv.fminus
    ps = complex(psi(cfg, float(x)))
    P = 0.5 * (prod_p + prod_m)
    Q = 0.5 * ps * (prod_p - prod_m)
    return float(P.real), float(Q.real)


def step_relations_residual(cfg: BranchConfig, table: RecurrenceTable, aux, n: int, x: float):
    """Residuals of the one-step relations taking ``(P_{n-1}, Q_{n-1})`` to ``(P_n, Q_n)``."""
    aux = _aux_provider(cfg, table, aux)
    S = aux(n - 1).S(x)
    if abs(S) < 1e-13 * table.h[n - 1]:
        raise SingularDenominator(f"S(x;{n - 1}) vanishes at x={x}")
    G = aux(n).G(x)
    h = table.h[n - 1]
    P, Q = evaluate_all(table, n, x)
    ext = (x * x - 1.0) * beta_poly(cfg, x)
    res_P = P[n] - (G * P[n - 1] + h * ext * Q[n - 1]) / S
    res_Q = Q[n] - (G * Q[n - 1] + h * alpha_poly(cfg, x) * P[n - 1]) / S
    return float(res_P), float(res_Q)


def psi_log_derivative(cfg: BranchConfig, x):
    """``psi'/psi``, a rational function."""
    x = np.asarray(x, dtype=float)
    out = -x / (x * x - 1.0)
    for a in cfg.alphas:
        out = out + 0.5 / (x - a)
    for b in cfg.betas:
        out = out - 0.5 / (x - b)
    return out


def f1(cfg: BranchConfig, aux_n: AuxPair, x):
    """``f_1 = (S'/S - sum 1/(x - alpha)) / 2``, the log-derivative of the envelope."""
    out = aux_n.S_prime(x) / aux_n.S(x)
    for a in cfg.alphas:
        out = out - 1.0 / (x - a)
    return 0.5 * out


def f2_phase_sum(cfg: BranchConfig, table: RecurrenceTable, aux, n: int, x):
    """``f_2`` for any genus from the derivative of the accumulated phase.

    Valid off E, where ``y`` is real.
    """
    aux = _aux_provider(cfg, table, aux)
    x = float(x)
    y = float(curve_y(cfg, x).real)
    dy = 0.5 * y * (sum(1.0 / (x - c) for c in (-1.0, 1.0, *cfg.alphas, *cfg.betas)))
    total = 0.0
    for j in range(1, n + 1):
        G = aux(j).G(x)
        dG = npoly.polyval(x, npoly.polyder(aux(j).xi))
        total += table.h[j - 1] * (dy * G - y * dG) / (aux(j).S(x) * aux(j - 1).S(x))
    return total / float(psi(cfg, x).real)


@dataclass(frozen=True)
class DiffData:
    """Genus-1 differential data at index ``n``.

    ``f_2(x) = n (x - r+)(x - r-) / ((x - gamma)(x - alpha))``; ``rplus`` and
    ``rminus`` are complex when the quadratic has no real roots.
    """

    n: int
    c0: float
    gamma: float
    y1: float
    rplus: complex
    rminus: complex
    alpha: float
    beta: float

    def f2(self, x):
        return (self.n * x - self.c0 - 0.5 * self.y1 / (x - self.gamma)) / (x - self.alpha)

    def f1(self, x):
        return 0.5 * (1.0 / (x - self.gamma) - 1.0 / (x - self.alpha))

    def f3(self, cfg: BranchConfig, x):
        return self.f2(x) / psi_inverse_squared(cfg, x)

    def f4(self, cfg: BranchConfig, x):
        return psi_log_derivative(cfg, x) + self.f1(x)


def differential_data_g1(cfg: BranchConfig, table: RecurrenceTable, aux, n: int) -> DiffData:
    """Constants of the genus-1 differential relations at index ``n >= 1``.

    ``y1`` is the curve value at ``gamma`` on the branch selected by the
    residue of ``f_2``: ``y1 = (gamma - alpha) P_n(gamma) / Q_n(gamma)``.  It
    is computed as ``sign * sqrt|y(gamma)^2|`` and is 0 when ``gamma`` sits on
    a branch point.
    """
    if cfg.g != 1:
        raise UnsupportedGenus("differential data is implemented for genus 1")
    aux = _aux_provider(cfg, table, aux)
    (al,), (be,) = cfg.alphas, cfg.betas
    gam = float(aux(n).gammas[0])
    coeffs = pair_coefficients(table, n).P_coeffs
    p1 = coeffs[n - 1]
    c0 = p1 + n * (al + be) / 2 + (gam - al) / 2
    P, Q = evaluate_pair(table, n, gam)
    mag2 = abs((gam * gam - 1.0) * (gam - al) * (gam - be))
    scale = max(abs(P), abs(Q), 1e-300)
    if mag2 < 1e-24 or abs(Q) < 1e-12 * scale or abs(P) < 1e-12 * scale:
        y1 = 0.0
    else:
        y1 = math.copysign(math.sqrt(mag2), (gam - al) * P * Q)
    cn = c0 / n
    disc = complex((cn - gam) ** 2 + 2 * y1 / n)
    root = disc**0.5
    rplus = ((cn + gam) + root) / 2
    rminus = ((cn + gam) - root) / 2
    return DiffData(n, float(c0), gam, y1, rplus, rminus, al, be)


def _real_roots(table: RecurrenceTable, n: int) -> np.ndarray:
    from .zeros import roots_of_Pn

    return roots_of_Pn(table, n)


def discriminant_direct(roots) -> float:
    r = np.asarray(roots, dtype=float)
    diffs = r[:, None] - r[None, :]
    iu = np.triu_indices(len(r), 1)
    return float(np.prod(diffs[iu] ** 2))


def discriminant_squared_g1(cfg: BranchConfig, table: RecurrenceTable, aux, n: int) -> float:
    """Square of the discriminant of ``P_n`` from the genus-1 closed expression.

    When ``P_n`` vanishes at ``beta`` and ``gamma`` coincides with it (the
    branch-zero case of the symmetric two-interval family), the factors
    ``P(beta) P(gamma)`` and the ``r`` equal to ``gamma`` are dropped and the
    result is multiplied by 4.

    Raises
    ------
    BranchZero
        If ``P_n`` vanishes at a branch point in any other way.
    """
    dd = differential_data_g1(cfg, table, aux, n)
    al, be = dd.alpha, dd.beta
    hn = table.h[n]

    def Pn(x):
        return evaluate_pair(table, n, x)[0]

    vals = {c: Pn(c) for c in (al, be, 1.0, -1.0)}
    pg = Pn(dd.gamma)
    scale = float(np.max(np.abs(evaluate_all(table, n, np.array([-1.0, 1.0]))[0][n])))
    small = BRANCH_ZERO_TOL * max(scale, 1.0)
    num_r = [dd.rplus, dd.rminus]
    den = vals[al] ** 2 * vals[1.0] * vals[-1.0]
    factor = 1.0
    if abs(vals[be]) < small:
        if abs(dd.gamma - be) > 1e-8:
            raise BranchZero(f"P_{n} vanishes at beta")
        # drop the r coinciding with gamma and the P(beta) P(gamma) pair
        i = int(np.argmin([abs(r - dd.gamma) for r in num_r]))
        num_r.pop(i)
        factor = 4.0
    else:
        den *= vals[be] * pg
    for c in (al, 1.0, -1.0):
        if abs(vals[c]) < small:
            raise BranchZero(f"P_{n} vanishes at branch point {c}")
    num = 1.0 + 0j
    for r in num_r:
        num *= Pn(complex(r)) ** 2
    return float(factor * (2 * n * n * hn) ** n * (-1) ** n * num.real / den)


def discriminant(cfg: BranchConfig, table: RecurrenceTable, aux, n: int, method: str = "direct") -> float:
    """Discriminant of ``P_n``: product of squared root differences.

    ``method='formula_g1'`` returns the positive square root of
    :func:`discriminant_squared_g1`.
    """
    if method == "direct":
        return discriminant_direct(_real_roots(table, n))
    if method == "formula_g1":
        if cfg.g != 1:
            raise UnsupportedGenus("formula_g1 needs genus 1")
        d2 = discriminant_squared_g1(cfg, table, aux, n)
        return math.sqrt(d2) if d2 >= 0 else -math.sqrt(-d2)
    raise ValueError(f"unknown method {method!r}")


def discriminant_second_kind(cfg: BranchConfig, table: RecurrenceTable, aux, n: int) -> dict:
    """Discriminant of ``Q_n`` directly and from the genus-1 expression as printed.

    Returns a dict with ``direct``, ``direct_squared``, ``formula_squared``
    and ``applicable``.  When ``Q_n`` vanishes at a branch point or at
    ``gamma`` the expression is 0/0; ``applicable`` is then False and
    ``formula_squared`` is None.
    """
    from .zeros import roots_of_Qn

    direct = discriminant_direct(roots_of_Qn(table, n))
    dd = differential_data_g1(cfg, table, aux, n)

    def Qn(x):
        return evaluate_pair(table, n, x)[1]

    num = (Qn(complex(dd.rplus)) * Qn(complex(dd.rminus))) ** 2
    vals = [Qn(c) for c in (1.0, -1.0, dd.beta, dd.gamma, dd.alpha)]
    scale = float(np.max(np.abs(evaluate_all(table, n, np.array([-1.0, 1.0]))[1][n])))
    # a zero of Q_n at a branch point or at gamma makes the expression 0/0
    applicable = all(abs(v) > BRANCH_ZERO_TOL * max(scale, 1.0) for v in vals)
    q1, qm1, qb, qg, qa = vals
    den = q1**2 * qm1**2 * qb**2 * qg * qa
    formula = float((2 * n * n * table.h[n]) ** (n - 1) * num.real / den) if applicable else None
    return {
        "direct": direct,
        "direct_squared": direct * direct,
        "formula_squared": formula,
        "applicable": applicable,
    }


def monic_chebyshev_T(m: int, z):
    """Monic Chebyshev polynomial of the first kind, degree ``m``."""
    z = np.asarray(z, dtype=np.result_type(z, float))
    if m == 0:
        return np.ones_like(z)
    prev, cur = np.ones_like(z), z.copy()
    if m == 1:
        return cur
    prev, cur = cur, z * z - 0.5
    for _ in range(2, m):
        prev, cur = cur, z * cur - 0.25 * prev
    return cur


def monic_chebyshev_U(m: int, z):
    """Second-kind companion of degree ``m - 1`` (``U_0 = 0``, ``U_1 = 1``)."""
    z = np.asarray(z, dtype=np.result_type(z, float))
    if m == 0:
        return np.zeros_like(z)
    prev, cur = np.zeros_like(z), np.ones_like(z)
    if m == 1:
        return cur
    prev, cur = cur, z.copy()
    for _ in range(2, m):
        prev, cur = cur, z * cur - 0.25 * prev
    return cur


def k2_discriminant_closed_form(alpha: float, n: int) -> float:
    """Discriminant of ``P_n`` for the symmetric two-interval family, from its closed forms."""
    z = (alpha * alpha + 1) / (alpha * alpha - 1)
    om = 1 - alpha * alpha
    m, odd = divmod(n, 2)
    if not odd:
        return float(
            (-1) ** m * 2.0 ** (-(2 * m - 1) * (2 * m - 2) - m) * (2 * m) ** (2 * m)
            * om ** (m * (2 * m - 1)) * monic_chebyshev_T(m, z)
        )
    bracket = monic_chebyshev_T(m, z) - 2 / om * monic_chebyshev_U(m, z)
    return float(
        (-1) ** m * 2.0 ** (-4 * m * m + m - 1) * (2 * m + 1) ** (2 * m) * om ** (m * (2 * m + 1)) * bracket
    )


def normalization(table: RecurrenceTable, K: int, n: int, j: int) -> float:
    """Scale turning ``P_{nK+j}`` into the unit-envelope polynomial."""
    delta = math.sqrt(2 * table.h[K])
    if j == 0:
        return 2.0 ** (n - 1) / delta**n
    return 2.0**n / (delta**n * math.sqrt(2 * table.h[j]))


def envelope(cfg: BranchConfig, aux, table: RecurrenceTable, K: int, n: int, j: int, x):
    """``sqrt(prod(x - gamma_l(nK+j)) / prod(x - alpha_l))`` on the interior of E.

    Raises
    ------
    DomainError
        If any ``x`` lies off E.
    """
    aux = _aux_provider(cfg, table, aux)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    for t in x:
        if band_of(cfg, float(t)) is None:
            raise DomainError(f"x={t} is not in E")
    m = n * K + j
    gam = aux(m).gammas if m >= 1 else cfg.alphas
    num = np.ones_like(x)
    for gm in gam:
        num = num * (x - gm)
    return np.sqrt(num / alpha_poly(cfg, x))


def normalized_polynomial(table: RecurrenceTable, K: int, n: int, j: int, x):
    m = n * K + j
    return normalization(table, K, n, j) * evaluate_pair(table, m, x)[0]


def _flip(c: np.ndarray) -> np.ndarray:
    # coefficients of p(-x)
    return c * (-1.0) ** np.arange(len(c))


def reflected_polynomial(cfg: BranchConfig, table: RecurrenceTable, n: int) -> np.ndarray:
    """Ascending coefficients of the monic orthogonal polynomial of degree ``n``
    on the mirror image of E, built from a bordered determinant in the
    values ``P_k(beta_i)``, ``Q_k(alpha_i)`` and the polynomials ``P_k(-x)``.

    Raises
    ------
    SingularDeterminant
        If the cofactor multiplying ``P_{n+g}(-x)`` vanishes.
    NonExactDivision
        If dividing by ``prod(x + beta_j)`` leaves a remainder above 1e-8.
    """
    g = cfg.g
    table.require(n + g)
    P, Q = pq_coefficients(table, n + g)
    if g == 0:
        return _flip(P[n]) * (-1.0) ** n
    lo = max(n - g, 0)
    idx = list(range(lo, n + g + 1))
    pad = 2 * g + 1 - len(idx)  # number of alpha-power columns when n < g
    size = 2 * g + 1
    M = np.zeros((size - 1, size))
    for r, be in enumerate(cfg.betas):
        for c, k in enumerate(idx):
            M[r, pad + c] = npoly.polyval(be, P[k])
    for r, al in enumerate(cfg.alphas):
        for c in range(pad):
            M[g + r, c] = al**c
        for c, k in enumerate(idx):
            M[g + r, pad + c] = npoly.polyval(al, Q[k]) if len(Q[k]) else 0.0
    poly = np.zeros(n + g + 1)
    D_n = None
    for c, k in enumerate(idx):
        col = pad + c
        minor = np.delete(M, col, axis=1)
        cof = (-1.0) ** (size - 1 + col) * np.linalg.det(minor)
        flipped = _flip(P[k])
        poly[: len(flipped)] += cof * flipped
        if k == n + g:
            D_n = cof
    scale = np.max(np.abs(M)) ** (size - 1) if M.size else 1.0
    if D_n is None or abs(D_n) < 1e-14 * max(scale, 1e-300):
        raise SingularDeterminant(f"leading cofactor vanishes for n={n}")
    poly *= (-1.0) ** (n + g) / D_n
    divisor = npoly.polyfromroots([-b for b in cfg.betas])
    quot, rem = npoly.polydiv(poly, divisor)
    if rem.size and np.max(np.abs(rem)) > 1e-8 * max(1.0, np.max(np.abs(poly))):
        raise NonExactDivision(f"remainder {np.max(np.abs(rem)):.3e} for n={n}")
    out = np.zeros(n + 1)
    out[: min(len(quot), n + 1)] = quot[: n + 1]
    return out
