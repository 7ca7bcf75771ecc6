"""Auxiliary polynomials ``S_g(x;n)`` and ``G_{g+1}(x;n)``.

They are defined by

    S_g(x;n)     = prod(x - alpha) P_n^2       - (x^2 - 1) prod(x - beta) Q_n^2
    G_{g+1}(x;n) = prod(x - alpha) P_n P_{n-1} - (x^2 - 1) prod(x - beta) Q_n Q_{n-1}

and have degree ``g`` and ``g + 1``.  The coefficients follow from a pair of
triangular systems whose matrix holds the Taylor coefficients of
``[(1 - Z^2) prod (1 - alpha Z)(1 - beta Z)]^(-1/2)`` and whose right-hand
sides are moments ``int x^k P_n P_m w`` read off powers of the Jacobi
operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import RootEscape, UnsupportedGenus
from .intervals import BranchConfig
from .recurrence import RecurrenceTable, jacobi_power_entries, pq_coefficients

GAMMA_TOL = 1e-8


@dataclass(frozen=True)
class ResidueCoefficients:
    """Taylor coefficients ``f_0, f_1, ...`` of the inverse square root series.

    ``I[k]`` is the contour integral of ``z^(g+k) / y`` divided by ``-2 pi i``.
    """

    I: tuple


@dataclass(frozen=True)
class AuxPair:
    """Ascending coefficients of ``S_g(.;n)`` (``eta``) and ``G_{g+1}(.;n)`` (``xi``).

    ``xi`` is ``None`` for ``n = 0``.  ``gammas`` are the real roots of
    ``S_g``, ascending.
    """

    n: int
    eta: np.ndarray
    xi: np.ndarray | None
    gammas: tuple

    def S(self, x):
        return npoly.polyval(x, self.eta)

    def G(self, x):
        if self.xi is None:
            raise ValueError("G is not defined for n = 0")
        return npoly.polyval(x, self.xi)

    def S_prime(self, x):
        return npoly.polyval(x, npoly.polyder(self.eta))


def inverse_sqrt_series(cfg: BranchConfig, count: int) -> ResidueCoefficients:
    """First ``count`` Taylor coefficients of ``p(Z)^(-1/2)`` with
    ``p(Z) = (1 - Z^2) prod (1 - alpha Z)(1 - beta Z)``.

    Uses the power-of-a-series recursion, exact for ``p_0 = 1``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    p = np.array([1.0, 0.0, -1.0])
    for c in (*cfg.alphas, *cfg.betas):
        p = npoly.polymul(p, [1.0, -c])
    p = np.concatenate([p, np.zeros(max(0, count - len(p)))])
    c = -0.5
    f = np.zeros(count)
    f[0] = 1.0
    for k in range(1, count):
        j = np.arange(1, k + 1)
        f[k] = np.sum(((c + 1.0) * j - k) * p[j] * f[k - j]) / k
    return ResidueCoefficients(tuple(float(v) for v in f))


def _real_roots_sorted(coeffs: np.ndarray) -> tuple:
    deg = len(coeffs) - 1
    if deg == 0:
        return ()
    if deg == 1:
        return (-coeffs[0] / coeffs[1],)
    if deg == 2:
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c2 * c0
        r = math.sqrt(max(disc, 0.0))
        # stable quadratic formula
        q = -0.5 * (c1 + math.copysign(r, c1))
        roots = sorted([q / c2, c0 / q] if q != 0 else [0.0, 0.0])
        return tuple(roots)
    roots = npoly.polyroots(coeffs)
    return tuple(sorted(float(r.real) for r in roots))


def _check_gammas(cfg: BranchConfig, gammas: tuple, tol: float = GAMMA_TOL) -> None:
    for j, (gam, (lo, hi)) in enumerate(zip(gammas, cfg.gaps)):
        if not (lo - tol <= gam <= hi + tol):
            raise RootEscape(f"gamma_{j + 1} = {gam!r} outside [{lo}, {hi}]")


def definitional_aux(cfg: BranchConfig, table: RecurrenceTable, n: int) -> AuxPair:
    """Auxiliary polynomials by expanding their defining products.

    Exact polynomial arithmetic on the recurrence coefficients; used for the
    low indices where the moment systems do not apply, and as an oracle.
    """
    P, Q = pq_coefficients(table, n)
    A = npoly.polyfromroots(cfg.alphas) if cfg.g else np.array([1.0])
    B = npoly.polymul([-1.0, 0.0, 1.0], npoly.polyfromroots(cfg.betas) if cfg.g else [1.0])
    S = npoly.polysub(npoly.polymul(A, npoly.polymul(P[n], P[n])), npoly.polymul(B, npoly.polymul(Q[n], Q[n])))
    eta = _truncate(S, cfg.g)
    xi = None
    if n >= 1:
        G = npoly.polysub(
            npoly.polymul(A, npoly.polymul(P[n], P[n - 1])),
            npoly.polymul(B, npoly.polymul(Q[n], Q[n - 1])),
        )
        xi = _truncate(G, cfg.g + 1)
    return AuxPair(n, eta, xi, _real_roots_sorted(eta) if n >= 1 else tuple(cfg.alphas))


def _truncate(c: np.ndarray, deg: int) -> np.ndarray:
    out = np.zeros(deg + 1)
    m = min(len(c), deg + 1)
    out[:m] = c[:m]
    return out


def system_valid(g: int, n: int) -> tuple[bool, bool]:
    """Whether the moment systems determine ``S_g`` and ``G_{g+1}`` at index ``n``.

    The expansions behind them need the Laurent tails of ``psi P_m - Q_m``
    to vanish to high enough order, which holds for ``2n > g`` (``S``) and
    ``2n > g + 1`` (``G``).
    """
    return n >= 1 and 2 * n > g, n >= 1 and 2 * n > g + 1


def solve_aux(cfg: BranchConfig, table: RecurrenceTable, n: int, check: bool = True) -> AuxPair:
    """Auxiliary polynomials at index ``n`` from the triangular moment systems.

    Small indices outside :func:`system_valid` fall back to
    :func:`definitional_aux` for the affected polynomial.

    Raises
    ------
    HorizonExceeded
        If the table is too short for the Jacobi powers needed.
    RootEscape
        If a root of ``S_g`` leaves its gap.
    """
    g = cfg.g
    if n < 0:
        raise ValueError("n must be nonnegative")
    eta_ok, xi_ok = system_valid(g, n)
    fallback = None if (eta_ok and xi_ok) else definitional_aux(cfg, table, n)
    if eta_ok:
        table.require(n + g)
        f = np.array(inverse_sqrt_series(cfg, g + 2).I)
        hn = table.h[n]
        eta = np.zeros(g + 1)
        xi = np.zeros(g + 2)
        xi[g + 1] = table.h[n - 1]
        for k in range(g + 1):
            off, diag = jacobi_power_entries(table, k, n)
            # sum_{i=0}^{k} f_i eta_{g-k+i} = 2 h_n [L^k]_{nn}
            eta[g - k] = (2.0 * hn * diag - sum(f[i] * eta[g - k + i] for i in range(1, k + 1))) / f[0]
            # sum_{i=0}^{k+1} f_i xi_{g-k+i} = 2 h_n [L^k]_{n-1,n}
            xi[g - k] = (2.0 * hn * off - sum(f[i] * xi[g - k + i] for i in range(1, k + 2))) / f[0]
        if not xi_ok:
            xi = fallback.xi
        pair = AuxPair(n, eta, xi, _real_roots_sorted(eta))
    else:
        pair = fallback
    if check and n >= 1:
        _check_gammas(cfg, pair.gammas)
    return pair


def _a_shifted(table: RecurrenceTable, n: int) -> float:
    # the explicit displays extend to n = 1 once a_1 is halved, matching the
    # a_{K+1} = a_1 / 2 pattern of periodic tables
    return table.a[n] / 2 if n == 1 else table.a[n]


def closed_form_aux(cfg: BranchConfig, table: RecurrenceTable, n: int, genus: int | None = None) -> AuxPair:
    """Auxiliary polynomials from the explicit genus-1 and genus-2 formulas.

    Index 0 of ``S`` and index 1 of ``G`` use the special factorised forms.
    At ``n = 1`` the genus-2 ``S_2`` display is evaluated with ``a_1 / 2``.

    Raises
    ------
    UnsupportedGenus
        For any genus other than 1 or 2, or a mismatch with ``cfg``.
    """
    genus = cfg.g if genus is None else genus
    if genus != cfg.g or genus not in (1, 2):
        raise UnsupportedGenus(f"closed forms exist for genus 1 and 2, got {genus}")
    a, b, h = table.a, table.b, table.h
    if genus == 1:
        (al,), (be,) = cfg.alphas, cfg.betas
        s = al + be
        if n == 0:
            eta = np.array([-al, 1.0])
        else:
            table.require(n + 1)
            eta = 2 * h[n] * np.array([b[n + 1] - s / 2, 1.0])
        xi = None
        if n == 1:
            xi = npoly.polyfromroots([b[1], al])
        elif n >= 2:
            xi = h[n - 1] * np.array([2 * a[n] - (al - be) ** 2 / 8 - 0.5, -s / 2, 1.0])
    else:
        a1, a2 = cfg.alphas
        b1, b2 = cfg.betas
        pts = np.array([a1, a2, b1, b2])
        s1 = pts.sum()
        sq = float(np.sum(pts**2))
        cube = float(np.sum(pts**3))
        e2 = (s1 * s1 - sq) / 2
        if n == 0:
            eta = npoly.polyfromroots([a1, a2])
        else:
            table.require(n + 1)
            bb = b[n + 1]
            c0 = -0.25 * (4 + sq - 2 * e2 - 8 * (a[n + 1] + _a_shifted(table, n)) + 4 * bb * s1 - 8 * bb * bb)
            eta = h[n] * np.array([c0, -(s1 - 2 * bb), 2.0])
        xi = None
        if n == 1:
            xi = npoly.polyfromroots([b[1], a1, a2])
        elif n >= 2:
            table.require(n + 1)
            x1 = -(0.5 + sq / 8 - e2 / 4 - 2 * a[n])
            mixed = (
                b1 * b2 * (b1 + b2) + a2 * b1 * (a2 + b1) + a2 * b2 * (a2 + b2)
                + a1 * a2 * (a1 + a2) + a1 * b1 * (a1 + b1) + a1 * b2 * (a1 + b2)
            )
            triple = a2 * b1 * b2 + a1 * b1 * b2 + a1 * a2 * b1 + a1 * a2 * b2
            x0 = (-cube + 4 * s1 + mixed - 2 * triple - 16 * a[n] * (s1 - 2 * (b[n] + b[n + 1]))) / 16
            xi = h[n - 1] * np.array([x0, x1, -s1 / 2, 1.0])
    gammas = _real_roots_sorted(eta) if n >= 1 else tuple(cfg.alphas)
    return AuxPair(n, eta, xi, gammas)


def gamma_genus2(cfg: BranchConfig, table: RecurrenceTable, n: int) -> tuple:
    """Roots of the genus-2 ``S_2(.;n)`` in closed form, ``n >= 1``.

    ``gamma = ((sigma - 2 b_{n+1}) -+ sqrt(X)) / 4`` where ``sigma`` is the
    sum of the four branch points and ``X`` the discriminant of ``S_2 / h_n``
    scaled to match.
    """
    pts = np.array([*cfg.alphas, *cfg.betas])
    s1 = pts.sum()
    sq = float(np.sum(pts**2))
    e2 = (s1 * s1 - sq) / 2
    a, b = table.a, table.b
    bb = b[n + 1]
    X = 8 + 3 * sq - 2 * e2 - 16 * (_a_shifted(table, n) + a[n + 1]) + 4 * bb * s1 - 12 * bb * bb
    r = math.sqrt(max(X, 0.0))
    return ((s1 - 2 * bb - r) / 4, (s1 - 2 * bb + r) / 4)


def gamma_genus2_literal(cfg: BranchConfig, table: RecurrenceTable, n: int) -> tuple:
    """The same roots with ``sigma / 4 - 2 b_{n+1}`` as the centre, for comparison.

    This grouping disagrees with the roots of ``S_2`` unless
    ``b_{n+1} = 0``; :func:`gamma_genus2` is the consistent one.
    """
    pts = np.array([*cfg.alphas, *cfg.betas])
    s1 = pts.sum()
    centre_shift = (s1 / 4 - 2 * table.b[n + 1]) - (s1 - 2 * table.b[n + 1]) / 4
    g1, g2 = gamma_genus2(cfg, table, n)
    return (g1 + centre_shift, g2 + centre_shift)


def gamma_k3_general(alpha1: float, beta1: float, table: RecurrenceTable, n: int) -> tuple:
    """Roots of ``S_2`` on the period-3 family parametrised by the first gap, ``n >= 2``."""
    a, b = table.a, table.b
    bb = b[n + 1]
    rad = (
        1 - 2 * (alpha1 + beta1) + (alpha1 - beta1) ** 2 - 4 * (_a_shifted(table, n) + a[n + 1])
        + 2 * bb * (1 + alpha1 + beta1 - 1.5 * bb)
    )
    r = math.sqrt(max(rad, 0.0))
    centre = 1 + alpha1 + beta1 - bb
    return ((centre - r) / 2, (centre + r) / 2)


def gamma_k3_symmetric(alpha: float, table: RecurrenceTable, n: int) -> tuple:
    """Roots of ``S_2`` when the two gaps are centred at -1/2 and 1/2."""
    a, b = table.a, table.b
    bb = b[n + 1]
    c = _a_shifted(table, n) + a[n + 1] + bb * bb - 1 - alpha - alpha * alpha
    r = math.sqrt(max(bb * bb - 4 * c, 0.0))
    return ((-bb - r) / 2, (-bb + r) / 2)


class AuxCache:
    """Memoised :func:`solve_aux` over ``n`` for one configuration and table.

    Calling the cache with ``n`` returns the :class:`AuxPair` at that index.
    """

    def __init__(self, cfg: BranchConfig, table: RecurrenceTable, check: bool = True):
        self.cfg = cfg
        self.table = table
        self.check = check
        self._store: dict[int, AuxPair] = {}

    def __call__(self, n: int) -> AuxPair:
        if n not in self._store:
            self._store[n] = solve_aux(self.cfg, self.table, n, check=self.check)
        return self._store[n]
