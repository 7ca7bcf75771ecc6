"""Zeros of ``P_n`` and ``Q_n`` and the zero-location statements for periodic sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CensusViolation
from .intervals import BranchConfig, band_of
from .recurrence import RecurrenceTable

BAND_TOL = 1e-10
COINCIDE_TOL = 1e-8


def _eig(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    if len(diag) == 0:
        return np.zeros(0)
    if len(diag) == 1:
        return diag.copy()
    return np.sort(eigh_tridiagonal(diag, np.sqrt(off), eigvals_only=True))


def _newton(table: RecurrenceTable, n: int, roots: np.ndarray, second_kind: bool) -> np.ndarray:
    from .chebyshev import evaluate_all, evaluate_derivatives

    if len(roots) == 0:
        return roots
    P, Q = evaluate_all(table, n, roots)
    dP, dQ = evaluate_derivatives(table, n, roots)
    val, der = (Q[n], dQ) if second_kind else (P[n], dP)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(der != 0, val / der, 0.0)
    # only accept steps that stay well inside the gap to the neighbours
    spacing = np.min(np.abs(np.diff(roots))) if len(roots) > 1 else 1.0
    step = np.where(np.abs(step) < 0.1 * spacing, step, 0.0)
    return np.sort(roots - step)


def roots_of_Pn(table: RecurrenceTable, n: int) -> np.ndarray:
    """Zeros of ``P_n``: eigenvalues of the symmetrised ``n x n`` Jacobi truncation,
    refined by one Newton step."""
    table.require(n)
    diag = np.asarray(table.b[1 : n + 1], dtype=float)
    off = np.asarray(table.a[1:n], dtype=float)
    return _newton(table, n, _eig(diag, off), False)


def roots_of_Qn(table: RecurrenceTable, n: int) -> np.ndarray:
    """Zeros of ``Q_n`` (degree ``n - 1``) from the shifted truncation."""
    table.require(n)
    if n <= 1:
        return np.zeros(0)
    diag = np.asarray(table.b[2 : n + 1], dtype=float)
    off = np.asarray(table.a[2:n], dtype=float)
    return _newton(table, n, _eig(diag, off), True)


@dataclass
class ZeroCensus:
    """Sorted roots with per-band counts and the roots found in gaps."""

    roots: np.ndarray
    per_band_counts: list
    in_gap: list = field(default_factory=list)


def census(cfg: BranchConfig, roots, tol: float = BAND_TOL) -> ZeroCensus:
    counts = [0] * (cfg.g + 1)
    in_gap = []
    for r in roots:
        b = band_of(cfg, float(r), tol)
        if b is None:
            gap = next((j for j, (lo, hi) in enumerate(cfg.gaps) if lo < r < hi), None)
            in_gap.append((gap, float(r)))
        else:
            counts[b] += 1
    return ZeroCensus(np.asarray(roots), counts, in_gap)


def _band_multiplicity(cfg: BranchConfig, K: int) -> list[int]:
    """How many of the K mapped subintervals each band of E holds.

    Equal to 1 everywhere when ``g = K - 1``; a closed gap merges two
    subintervals into one band.
    """
    if cfg.g == K - 1:
        return [1] * (cfg.g + 1)
    raise ValueError("multiplicity needs the mapping; use band_zero_census with mapping")


def band_zero_census(
    cfg: BranchConfig,
    table: RecurrenceTable,
    K: int,
    n: int,
    multiplicity: list[int] | None = None,
) -> tuple[ZeroCensus, ZeroCensus]:
    """Check that ``P_{nK}`` has ``n`` zeros per mapped subinterval and
    ``Q_{nK}`` has ``n - 1`` per subinterval plus one at every ``alpha_j``.

    ``multiplicity[i]`` is the number of subintervals merged into band ``i``
    (all ones when every gap is open).

    Raises
    ------
    CensusViolation
        Naming the first band whose count is wrong.
    """
    mult = multiplicity or _band_multiplicity(cfg, K)
    m = n * K
    p = census(cfg, roots_of_Pn(table, m))
    for i, (c, k) in enumerate(zip(p.per_band_counts, mult)):
        if c != n * k:
            raise CensusViolation(f"band {i} holds {c} zeros of P_{m}, expected {n * k}")
    if p.in_gap:
        raise CensusViolation(f"P_{m} has zeros in gaps: {p.in_gap}")
    qroots = roots_of_Qn(table, m)
    q_off_alpha = [r for r in qroots if not any(abs(r - a) < COINCIDE_TOL for a in cfg.alphas)]
    for a in cfg.alphas:
        if not any(abs(r - a) < COINCIDE_TOL for r in qroots):
            raise CensusViolation(f"Q_{m} has no zero at alpha={a}")
    # n - 1 zeros per subinterval, plus one at each closed gap inside the band
    q = census(cfg, q_off_alpha)
    for i, (c, k) in enumerate(zip(q.per_band_counts, mult)):
        if c != n * k - 1:
            raise CensusViolation(f"band {i} holds {c} zeros of Q_{m}, expected {n * k - 1}")
    return p, census(cfg, qroots)


@dataclass
class InterlacingReport:
    """Outcome of each zero-location assertion with a witness per failure."""

    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, witness=None) -> None:
        self.checks.append((name, bool(ok), witness))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _has_root_in(roots: np.ndarray, lo: float, hi: float, tol: float) -> bool:
    return bool(np.any((roots >= lo - tol) & (roots <= hi + tol)))


def interlacing_check(
    cfg: BranchConfig, table: RecurrenceTable, K: int, n: int, j: int, tol: float = COINCIDE_TOL
) -> InterlacingReport:
    """Zero-location assertions for ``P_{nK+j}`` relative to ``P_j``, ``Q_j``,
    ``P_{nK}`` and ``Q_{nK}`` on a period-``K`` set.

    With ``A`` the zeros of ``P_{nK}`` and ``P_j``, and ``B`` the points
    ``+-1``, the ``beta_i`` and the zeros of ``Q_j`` and ``Q_{nK}`` with the
    ``alpha_i`` removed:

    1. between each zero of ``P_j`` and the next element of ``B`` there is a
       zero of ``P_{nK+j}``;
    2. between each zero of ``Q_j`` and the next element of ``A`` there is a
       zero of ``P_{nK+j}``;
    3. a zero of ``P_j`` at a point of ``B`` is also a zero of ``P_{nK+j}``;
    4. a zero of ``P_j`` inside a gap forces a zero of ``P_{nK+j}`` in that gap.

    The natural range is ``1 <= j < K``; larger ``j`` is accepted and the
    same statements are checked.
    """
    if j < 1 or K < 1:
        raise ValueError("need j >= 1 and K >= 1")
    m = n * K + j
    target = roots_of_Pn(table, m)
    xj, yj = roots_of_Pn(table, j), roots_of_Qn(table, j)
    xnk, ynk = roots_of_Pn(table, n * K), roots_of_Qn(table, n * K)
    A = np.sort(np.concatenate([xnk, xj]))
    B = np.concatenate([[-1.0, 1.0], cfg.betas, yj, ynk])
    B = np.sort([b for b in B if not any(abs(b - a) < tol for a in cfg.alphas)])
    report = InterlacingReport()

    def nxt(points, z):
        later = points[points > z + tol]
        return later[0] if len(later) else None

    for z in xj:
        e = nxt(B, z)
        ok = e is None or _has_root_in(target, z, e, tol)
        report.add(f"P_{j} zero {z:.6g} to next B", ok, None if ok else (z, e))
    for z in yj:
        e = nxt(A, z)
        ok = e is None or _has_root_in(target, z, e, tol)
        report.add(f"Q_{j} zero {z:.6g} to next A", ok, None if ok else (z, e))
    for z in xj:
        if np.any(np.abs(B - z) < tol):
            ok = bool(np.any(np.abs(target - z) < tol))
            report.add(f"shared zero at {z:.6g}", ok, None if ok else z)
    for z in xj:
        for lo, hi in cfg.gaps:
            if lo < z < hi:
                ok = _has_root_in(target, lo, hi, 0.0)
                report.add(f"gap ({lo:.6g}, {hi:.6g}) zero", ok, None if ok else z)
    return report
