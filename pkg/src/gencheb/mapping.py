"""Periodic recurrence coefficients and polynomial mappings.

A set E whose equilibrium charges are rational with common denominator K
carries a period-K recurrence table, and ``M_K = P_K / sqrt(2 h_K)`` maps
every band of E onto ``[-1, 1]``.  This module computes the charges, detects
the period, builds and validates ``M_K``, checks the Chebyshev composition
identities and provides explicit two- and three-band families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import roots_jacobi

from .chebyshev import evaluate_all, evaluate_pair, monic_chebyshev_T, monic_chebyshev_U
from .elliptic import EllipticContext, genus1_closed_form
from .errors import ConstraintViolation, RegionViolation, SingularSystem
from .intervals import BranchConfig, alpha_poly, beta_poly, validate_config
from .recurrence import RecurrenceTable, pq_coefficients

CHARGE_NODES = 80
FACTOR_TOL = 1e-8
CONSTRAINT_TOL = 1e-8


@dataclass(frozen=True)
class ChargeVector:
    """Normalised differential ``(t^g + sum k_i t^i) dt / y`` and band charges.

    ``Bhat[j]`` is minus the share of the unit charge carried by band ``j``
    (``j = 0..g-1``; the last band holds the remainder).
    """

    k_coeffs: tuple
    Bhat: tuple

    @property
    def band_charges(self) -> tuple:
        first = tuple(-b for b in self.Bhat)
        return first + (1.0 - sum(first),)


def _inv_y_nodes(cfg: BranchConfig, lo: float, hi: float, n: int = CHARGE_NODES):
    """Nodes and weights for ``int_lo^hi f(t) / |y(t)| dt`` where ``lo`` and
    ``hi`` are adjacent branch points."""
    t, wt = roots_jacobi(n, -0.5, -0.5)
    half = 0.5 * (hi - lo)
    x = lo + half * (1.0 + t)
    smooth = np.ones_like(x)
    for c in (-1.0, 1.0, *cfg.alphas, *cfg.betas):
        if c not in (lo, hi):
            smooth /= np.sqrt(np.abs(x - c))
    return x, wt * smooth  # half**(p+q+1) == 1 for p = q = -1/2


def equilibrium_charges(cfg: BranchConfig, nodes: int = CHARGE_NODES) -> ChargeVector:
    """Charges of the bands of E in the equilibrium distribution.

    The coefficients ``k_i`` make ``(t^g + sum k_i t^i) / y`` integrate to
    zero across every gap; the charge of band ``j`` is then
    ``|int_band (...) / |y|| / pi``.

    Raises
    ------
    SingularSystem
        If the gap conditions do not determine the ``k_i``.
    """
    g = cfg.g
    if g == 0:
        return ChargeVector((), ())
    A = np.zeros((g, g))
    rhs = np.zeros(g)
    for j, (lo, hi) in enumerate(cfg.gaps):
        x, w = _inv_y_nodes(cfg, lo, hi, nodes)
        for i in range(g):
            A[j, i] = np.dot(w, x**i)
        rhs[j] = -np.dot(w, x**g)
    if np.linalg.cond(A) > 1e12:
        raise SingularSystem("gap conditions are degenerate")
    k = np.linalg.solve(A, rhs)
    coeffs = np.concatenate([k, [1.0]])
    bhat = []
    for lo, hi in cfg.bands[:g]:
        x, w = _inv_y_nodes(cfg, lo, hi, nodes)
        bhat.append(-abs(float(np.dot(w, npoly.polyval(x, coeffs)))) / math.pi)
    return ChargeVector(tuple(float(v) for v in k), tuple(bhat))


def detect_period(charges, Kmax: int = 64, tol: float = 1e-6) -> int | None:
    """Smallest ``K <= Kmax`` with ``K * Bhat`` integral to within ``tol``.

    ``charges`` is a :class:`ChargeVector` or a plain sequence of ``Bhat``
    values.  An irrational entry admits no such ``K``; None is returned.
    """
    bhat = np.asarray(charges.Bhat if isinstance(charges, ChargeVector) else charges, dtype=float)
    if bhat.size == 0:
        return 1
    for K in range(1, Kmax + 1):
        v = K * bhat
        if np.all(np.abs(v - np.round(v)) < tol):
            return K
    return None


def rational_charges(charges, max_den: int = 64) -> tuple:
    """Best rational approximations of ``-Bhat`` (for display)."""
    bhat = charges.Bhat if isinstance(charges, ChargeVector) else charges
    return tuple(Fraction(-b).limit_denominator(max_den) for b in bhat)


@dataclass(frozen=True)
class MappingData:
    """``M_K = P_K / Delta_K`` together with the gap list it induces.

    ``touch_points`` are closed gaps: points inside a band where
    ``|M_K| = 1`` with ``M_K' = 0``.
    """

    K: int
    DeltaK: float
    M_coeffs: np.ndarray
    lK: float
    touch_points: tuple = ()
    constraints: list = field(default_factory=list)

    def M(self, x):
        return npoly.polyval(x, self.M_coeffs)

    def full_gaps(self, cfg: BranchConfig) -> list:
        """All ``K - 1`` gaps, closed ones as ``(t, t)``, in increasing order."""
        return sorted(list(cfg.gaps) + [(t, t) for t in self.touch_points])

    def band_multiplicity(self, cfg: BranchConfig) -> list:
        """Number of preimage intervals of ``[-1, 1]`` inside each band of E."""
        out = []
        for lo, hi in cfg.bands:
            out.append(1 + sum(lo < t < hi for t in self.touch_points))
        return out


def build_mapping(cfg: BranchConfig, table: RecurrenceTable, K: int) -> MappingData:
    """Build ``M_K`` from the table and check the mapping constraints.

    Checked: ``M(1) = 1``, ``M(-1) = (-1)^K``, ``M = (-1)^{K+j}`` at both
    ends of gap ``j`` (closed gaps included), and the factorisation
    ``M^2 - 1 = l^2 (x^2 - 1) prod (x - alpha)(x - beta) prod (x - t)^2``.

    Raises
    ------
    ConstraintViolation
        Naming the first condition that fails.
    """
    if K < 1:
        raise ValueError("K must be positive")
    table.require(K)
    delta = math.sqrt(2.0 * table.h[K])
    P, _ = pq_coefficients(table, K)
    M = P[K] / delta
    lK = 1.0 / delta
    constraints = []

    def record(name, value, target):
        err = abs(value - target)
        constraints.append({"name": name, "value": float(value), "target": float(target), "ok": err < CONSTRAINT_TOL})
        if err >= CONSTRAINT_TOL:
            raise ConstraintViolation(f"{name}: {value!r} != {target!r}")

    record("M(1)", npoly.polyval(1.0, M), 1.0)
    record("M(-1)", npoly.polyval(-1.0, M), (-1.0) ** K)

    # M^2 - 1 over the open branch points; the quotient must be l^2 times a square
    m2 = npoly.polysub(npoly.polymul(M, M), [1.0])
    open_pts = [-1.0, 1.0, *cfg.alphas, *cfg.betas]
    divisor = npoly.polyfromroots(open_pts)
    quot, rem = npoly.polydiv(m2, divisor)
    scale = max(1.0, float(np.max(np.abs(m2))))
    rem_norm = float(np.max(np.abs(rem))) if rem.size else 0.0
    constraints.append({"name": "factorization remainder", "value": rem_norm, "target": 0.0,
                        "ok": rem_norm < FACTOR_TOL * scale})
    if rem_norm >= FACTOR_TOL * scale:
        raise ConstraintViolation(f"M^2 - 1 not divisible by the branch polynomial (remainder {rem_norm:.3e})")
    quot = quot / (lK * lK)
    touch = ()
    if len(quot) > 1:
        # touch points are the critical points of M where |M| = 1
        crit = np.roots(npoly.polyder(M)[::-1])
        crit = np.sort(crit[np.abs(crit.imag) < 1e-7].real)
        touch = tuple(float(c) for c in crit if abs(abs(npoly.polyval(c, M)) - 1.0) < 1e-6)
        sq = npoly.polyfromroots([t for t in touch for _ in range(2)])
        if len(sq) != len(quot) or np.max(np.abs(sq - quot)) > 1e-6 * max(1.0, np.max(np.abs(quot))):
            raise ConstraintViolation("M^2 - 1 has roots outside the branch points")
    elif abs(quot[0] - 1.0) > 1e-8:
        raise ConstraintViolation(f"leading factor mismatch: {quot[0]!r}")

    data = MappingData(K, delta, M, lK, touch, constraints)
    for j, (a, b) in enumerate(data.full_gaps(cfg), start=1):
        target = (-1.0) ** (K + j)
        record(f"M(alpha_{j})", npoly.polyval(a, M), target)
        record(f"M(beta_{j})", npoly.polyval(b, M), target)
    if len(data.full_gaps(cfg)) != K - 1:
        raise ConstraintViolation(f"expected {K - 1} gaps, found {len(data.full_gaps(cfg))}")
    return data


def _psi_inv_sq(cfg: BranchConfig, x):
    return (x * x - 1.0) * beta_poly(cfg, x) / alpha_poly(cfg, x)


def compose_identities(cfg: BranchConfig, table: RecurrenceTable, mapping: MappingData, n: int, j: int, x):
    """``(P_{nK+j}(x), Q_{nK+j}(x))`` from ``P_j, Q_j, P_K, Q_K`` alone.

    ``j = 0`` uses the Chebyshev composition with ``T_n`` and ``U_n``;
    ``0 < j < K`` combines it with ``P_j`` and ``Q_j``.
    """
    K = mapping.K
    if not 0 <= j < K:
        raise IndexError("need 0 <= j < K")
    if n < 1:
        raise IndexError("need n >= 1")
    x = np.asarray(x, dtype=float)
    P, Q = evaluate_all(table, K, x)
    delta = mapping.DeltaK
    z = P[K] / delta
    pnk = delta**n * monic_chebyshev_T(n, z)
    qnk = delta ** (n - 1) * Q[K] * monic_chebyshev_U(n, z)
    if j == 0:
        return pnk, qnk
    pj, qj = P[j], Q[j]
    p = 0.5 * (pj * pnk + _psi_inv_sq(cfg, x) * qj * qnk)
    q = 0.5 * (pj * qnk + qj * pnk)
    return p, q


def product_rule_residual(table: RecurrenceTable, K: int, m: int, n: int, x):
    """Residual of the product rule for ``P_n P_{mK}`` at ``x``.

    ``P_n P_{mK} = P_{n+mK} + (h_{mK}/2) P_{n-mK}`` for ``n >= mK`` and
    ``P_{n+mK} + (h_n/2) P_{mK-n}`` otherwise.  At ``n = mK`` the constant
    term is ``h_{mK}``.
    """
    mk = m * K
    if n < 1 or m < 1:
        raise ValueError("need m, n >= 1")
    P, _ = evaluate_all(table, n + mk, np.asarray(x, dtype=float))
    if n == mk:
        # P_0 enters with the value 2 here, as T_0 does for the classical family
        rhs = P[n + mk] + table.h[mk]
    elif n > mk:
        rhs = P[n + mk] + 0.5 * table.h[mk] * P[n - mk]
    else:
        rhs = P[n + mk] + 0.5 * table.h[n] * P[mk - n]
    return P[n] * P[mk] - rhs


def periodic_extension(a_block, b_block, N: int, cfg: BranchConfig | None = None) -> RecurrenceTable:
    """Repeat one period of coefficients up to ``N``.

    ``a_{mK+1}`` is ``a_1 / 2`` for ``m >= 1``; everything else repeats.
    """
    a_block = list(a_block)
    b_block = list(b_block)
    K = len(a_block)
    a = np.empty(N)
    b = np.empty(N)
    for n in range(1, N + 1):
        r = (n - 1) % K
        b[n - 1] = b_block[r]
        a[n - 1] = a_block[r] if (r or n == 1) else 0.5 * a_block[0]
    return RecurrenceTable.from_coefficients(a, b, cfg)


@dataclass(frozen=True)
class PeriodicFamily:
    """A configuration with its closed-form first period of coefficients."""

    K: int
    variant: str
    cfg: BranchConfig
    a: tuple
    b: tuple
    touch_points: tuple = ()
    extras: dict = field(default_factory=dict)

    def table(self, N: int) -> RecurrenceTable:
        return periodic_extension(self.a, self.b, N, self.cfg)


def _k3_root(a1: float, b1: float) -> float:
    disc = (b1 - a1) ** 2 - 4.0 * (1.0 + a1 + b1)
    if disc < -1e-14:
        raise RegionViolation(f"(beta1 - alpha1)^2 - 4(1 + alpha1 + beta1) = {disc:.3e} < 0")
    return math.sqrt(max(disc, 0.0))


def _k3_beta_max(a1: float) -> float:
    return 2.0 + a1 - 4.0 * math.sqrt((a1 + 1.0) / 2.0)


def periodic_family(K: int, variant: str = "general", **params) -> PeriodicFamily:
    """Explicit period-2 and period-3 configurations.

    Parameters
    ----------
    K : {2, 3}
    variant : str
        For ``K = 2`` only ``"general"`` (parameter ``alpha`` in (-1, 0)).
        For ``K = 3``: ``"general"`` (``alpha1``, ``beta1``), ``"symmetric"``
        (``alpha``), ``"closed_gap"`` (``alpha``; right gap closed) and
        ``"closed_gap_left"`` (``alpha2``; left gap closed).

    Raises
    ------
    RegionViolation
        If the parameters leave the admissible region.
    """
    if K == 2:
        al = float(params["alpha"])
        if not -1.0 < al < 0.0:
            raise RegionViolation("need -1 < alpha < 0")
        cfg = validate_config(BranchConfig((al,), (-al,)))
        return PeriodicFamily(2, "general", cfg, ((1 - al * al) / 2, (1 - al * al) / 4), (-al, al))
    if K != 3:
        raise RegionViolation("explicit families exist for K = 2 and K = 3 only")

    if variant == "general":
        a1, b1 = float(params["alpha1"]), float(params["beta1"])
        if not -1.0 < a1 <= -0.5:
            raise RegionViolation("need -1 < alpha1 <= -1/2")
        bmax = _k3_beta_max(a1)
        if not a1 <= b1 <= bmax + 1e-14:
            raise RegionViolation(f"need alpha1 <= beta1 <= beta1_max = {bmax!r}")
        r = _k3_root(a1, b1)
        a2 = 1.0 + (a1 + b1) / 2.0 - r / 2.0
        b2 = 1.0 + (a1 + b1) / 2.0 + r / 2.0
        base = (1.0 + a1) * (2.0 - a1 + b1 + r)
        a = (base / 2.0, (a1 - b1 - 2.0 + r) ** 2 / 16.0, base / 4.0)
        b23 = (2.0 + 3.0 * a1 + b1 - r) / 4.0
        b = ((b1 - a1 + r) / 2.0, b23, b23)
        cfg = validate_config(BranchConfig((a1, a2), (b1, b2)))
        touch = tuple(t for t, s in ((a1, b1), (a2, b2)) if t == s)
        return PeriodicFamily(3, variant, cfg, a, b, touch, {"alpha2": a2, "beta2": b2})

    if variant == "symmetric":
        al = float(params["alpha"])
        if not -1.0 < al < -0.5:
            raise RegionViolation("need -1 < alpha < -1/2")
        cfg = validate_config(BranchConfig((al, 1.0 + al), (-1.0 - al, -al)))
        s = -al * (1.0 + al)
        return PeriodicFamily(3, variant, cfg, (2 * s, 0.25, s), (-(1 + 2 * al), 0.5 + al, 0.5 + al))

    if variant == "closed_gap":
        al = float(params["alpha"])
        if not -1.0 < al < -0.5:
            raise RegionViolation("need -1 < alpha < -1/2")
        s = math.sqrt((1.0 + al) / 2.0)
        be = al + 2.0 - 4.0 * s
        cfg = validate_config(BranchConfig((al,), (be,)))
        a = (2 * (al + 1) * (1 - s), (al + 3) / 2 - 2 * s, (al + 1) * (1 - s))
        b = (1 - 2 * s, al + 1 - s, al + 1 - s)
        touch = (1.0 + (al + be) / 2.0,)
        extras = {"beta": be, "c0": closed_gap_c0, "gamma": closed_gap_gamma}
        return PeriodicFamily(3, variant, cfg, a, b, touch, extras)

    if variant == "closed_gap_left":
        a2 = float(params["alpha2"])
        if not -1.0 < a2 < 0.5:
            raise RegionViolation("need -1 < alpha2 < 1/2")
        b2 = -2.0 + a2 + 4.0 * math.sqrt((1.0 - a2) / 2.0)
        cfg = validate_config(BranchConfig((a2,), (b2,)))
        # the weight is not mirror-symmetric, so take the genus-1 elliptic forms
        ctx = EllipticContext.of(a2, b2)
        rows = [genus1_closed_form(a2, b2, n, ctx) for n in (2, 3, 4)]
        a = (2.0 * rows[2][0], rows[0][0], rows[1][0])
        b = ((b2 - a2) / 2.0, rows[0][1], rows[1][1])
        # the closed gap sits where the right-closed family's gap closes, mirrored
        touch = (-(1.0 + (-b2 - a2) / 2.0),)
        return PeriodicFamily(3, variant, cfg, a, b, touch, {"beta2": b2})
    raise ValueError(f"unknown variant {variant!r}")


def closed_gap_c0(alpha: float, n: int) -> float:
    """``c_0(n)`` for the right-closed period-3 family."""
    s = math.sqrt((1.0 + alpha) / 2.0)
    m, r = divmod(n, 3)
    if r == 0:
        return m * (alpha - 2 * s)
    if r == 1:
        return 0.5 * ((1 + 2 * m) * alpha - (1 + 4 * m) * s)
    return 0.5 * ((1 + 2 * m) * alpha - (3 + 4 * m) * s)


def closed_gap_gamma(alpha: float, n: int) -> float:
    """``gamma(n)`` for the right-closed period-3 family."""
    return alpha if n % 3 == 0 else -math.sqrt((1.0 + alpha) / 2.0)


def stationary_labels(K: int) -> list[float]:
    """Critical points ``cos(j pi / K)`` of ``T_K``, ascending."""
    if K < 1:
        raise ValueError("K must be positive")
    return sorted(math.cos(j * math.pi / K) for j in range(1, K))


def surface_labels(K: int, g: int) -> list[tuple]:
    """Every choice of ``g`` open gaps among the ``K - 1`` stationary points."""
    if not 0 <= g <= K - 1:
        return []
    return list(itertools.combinations(stationary_labels(K), g))


def surface_count(K: int, g: int) -> int:
    return math.comb(K - 1, g) if 0 <= g <= K - 1 else 0


def contour_samples(K: int, count: int = 50) -> list[tuple]:
    """``(alpha, beta, K)`` points on the genus-1 curves of period ``K``.

    ``K = 2`` sweeps ``beta = -alpha``; ``K = 3`` sweeps both closed-gap
    branches.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    out = []
    if K == 2:
        for al in np.linspace(-0.99, -0.01, count):
            out.append((float(al), float(-al), 2))
    elif K == 3:
        for al in np.linspace(-0.99, -0.51, count):
            fam = periodic_family(3, "closed_gap", alpha=float(al))
            out.append((fam.cfg.alphas[0], fam.cfg.betas[0], 3))
        for a2 in np.linspace(-0.99, 0.49, count):
            fam = periodic_family(3, "closed_gap_left", alpha2=float(a2))
            out.append((fam.cfg.alphas[0], fam.cfg.betas[0], 3))
    else:
        raise RegionViolation("contours are tabulated for K = 2 and K = 3")
    return out
