"""Recurrence coefficients ``x u_n = u_{n+1} + b_{n+1} u_n + a_n u_{n-1}``.

Tables are 1-indexed to match the recurrence: ``table.a[n]`` is ``a_n`` and
``table.b[n]`` is ``b_n``; index 0 of ``a`` and ``b`` holds NaN.  ``table.h[n]``
is the squared norm ``h_n`` with ``h_0 = 1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import HorizonExceeded, LossOfOrthogonality, ConvergenceError, SingularStep
from .intervals import BranchConfig
from .quadrature import QuadratureSpec, discretize

ORTHO_TOL = 1e-7


@dataclass(frozen=True)
class RecurrenceTable:
    """Coefficients ``a_1..a_N``, ``b_1..b_N`` and norms ``h_0..h_N``."""

    a: np.ndarray
    b: np.ndarray
    h: np.ndarray
    cfg: BranchConfig | None = field(default=None, compare=False)

    @property
    def N(self) -> int:
        return len(self.a) - 1

    @classmethod
    def from_coefficients(cls, a, b, cfg: BranchConfig | None = None) -> "RecurrenceTable":
        """Build from ``a_1..a_N`` and ``b_1..b_N`` given as plain sequences."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if len(a) != len(b):
            raise ValueError("a and b must have the same length")
        h = np.concatenate([[1.0], np.cumprod(a)])
        nan = [np.nan]
        out = cls(np.concatenate([nan, a]), np.concatenate([nan, b]), h, cfg)
        for arr in (out.a, out.b, out.h):
            arr.setflags(write=False)
        return out

    def require(self, n: int) -> None:
        if n > self.N:
            raise HorizonExceeded(f"index {n} beyond table horizon {self.N}")

    def truncated(self, n: int) -> "RecurrenceTable":
        self.require(n)
        return RecurrenceTable.from_coefficients(self.a[1 : n + 1], self.b[1 : n + 1], self.cfg)

    def rows(self):
        """``(n, a_n, b_n, h_n)`` for ``n = 1..N``."""
        return [(n, self.a[n], self.b[n], self.h[n]) for n in range(1, self.N + 1)]


def _stieltjes_discrete(x: np.ndarray, w: np.ndarray, N: int):
    a = np.zeros(N)
    b = np.zeros(N)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    h_prev = 1.0
    h = float(w.sum())
    history = [p]
    for n in range(N):
        b[n] = float(np.dot(w * x, p * p)) / h
        if n > 0:
            a[n - 1] = h / h_prev
        p_next = (x - b[n]) * p - (a[n - 1] if n > 0 else 0.0) * p_prev
        p_prev, p = p, p_next
        h_prev, h = h, float(np.dot(w, p * p))
        history.append(p)
    a[N - 1] = h / h_prev
    return a, b, history


def stieltjes_table(cfg: BranchConfig, N: int, spec: QuadratureSpec | None = None) -> RecurrenceTable:
    """Recurrence table by the discretized Stieltjes procedure.

    The node count is raised to ``N + 8`` per band when the default is too
    small for the requested horizon.

    Raises
    ------
    ConvergenceError
        If the refined rule produces a different table.
    LossOfOrthogonality
        If ``|<P_N, P_{N-2}>| / h_{N-1}`` exceeds 1e-7.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    spec = spec or QuadratureSpec()
    results = []
    for n_pts in spec.levels():
        x, w = discretize(cfg, max(n_pts, N + 8))
        results.append((_stieltjes_discrete(x, w, N), x, w))
    (a, b, hist), x, w = results[0]
    for (a2, b2, _), _, _ in results[1:]:
        if not (np.allclose(a, a2, rtol=1e-9, atol=0) and np.allclose(b, b2, rtol=0, atol=1e-9)):
            raise ConvergenceError("Stieltjes tables disagree between quadrature levels")
    table = RecurrenceTable.from_coefficients(a, b, cfg)
    if N >= 2:
        cross = abs(float(np.dot(w, hist[N] * hist[N - 2])))
        if cross / table.h[N - 1] > ORTHO_TOL:
            raise LossOfOrthogonality(f"<P_N, P_N-2>/h_N-1 = {cross / table.h[N - 1]:.3e}")
    if np.any(np.abs(b) >= 1.0):
        warnings.warn("some b_n lie outside (-1, 1)", RuntimeWarning, stacklevel=2)
    return table


def difference_iterate_g1(alpha: float, beta: float, seed, N: int, head=None) -> RecurrenceTable:
    """Continue a genus-1 table with the two nonlinear difference equations.

    For ``n >= 3`` the ``a_n`` update is applied first, then the ``b_{n+1}``
    update.

    Parameters
    ----------
    alpha, beta : float
        Gap endpoints.
    seed : tuple
        ``(a_2, b_2, b_3)``.
    N : int
        Horizon, at least 3.
    head : tuple, optional
        ``(a_1, b_1)``.  Without it those entries, and every ``h_n``, are NaN.

    Raises
    ------
    SingularStep
        If a nonpositive ``a_n`` appears.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    a2, b2, b3 = seed
    s = alpha + beta
    const = 0.5 + (beta - alpha) ** 2 / 8.0
    a = np.full(N + 2, np.nan)
    b = np.full(N + 2, np.nan)
    a[2], b[2], b[3] = a2, b2, b3
    if head is not None:
        a[1], b[1] = head
    for n in range(3, N + 1):
        a[n] = const + s * b[n] / 2.0 - b[n] ** 2 - a[n - 1]
        if not a[n] > 0:
            raise SingularStep(f"a_{n} = {a[n]!r} is not positive")
        b[n + 1] = s / 2.0 - b[n] + (a[n - 1] / a[n]) * (b[n] + b[n - 1] - s / 2.0)
    return RecurrenceTable.from_coefficients(a[1 : N + 1], b[1 : N + 1])


def difference_residuals_g1(table: RecurrenceTable, alpha: float, beta: float, n_max: int | None = None):
    """Residuals of the two genus-1 difference equations for ``n = 3..n_max``.

    Returns a list of ``(n, r_a, r_b)`` where ``r_a`` checks the ``a_n``
    update and ``r_b`` the ``b_{n+1}`` update.
    """
    n_max = table.N - 1 if n_max is None else n_max
    table.require(n_max + 1)
    a, b = table.a, table.b
    s = alpha + beta
    out = []
    for n in range(3, n_max + 1):
        ra = a[n] + a[n - 1] - (0.5 + (beta - alpha) ** 2 / 8 + s * b[n] / 2 - b[n] ** 2)
        rb = a[n] * (b[n + 1] + b[n] - s / 2) - a[n - 1] * (b[n] + b[n - 1] - s / 2)
        out.append((n, ra, rb))
    return out


def difference_residuals(cfg: BranchConfig, table: RecurrenceTable, aux_provider, n_values=None):
    """Residuals of the evaluated auxiliary-polynomial relations at ``x = b_n``.

    ``aux_provider(n)`` must return an object with callables ``S(x)`` and
    ``G(x)`` for index ``n``.  Returns ``(n, r1, r2)`` with
    ``r1 = S(b_n;n) - a_{n-1}^2 S(b_n;n-2)`` and
    ``r2 = G(b_n;n) + a_{n-1} G(b_n;n-1)``.
    """
    if n_values is None:
        n_values = range(3, table.N - cfg.g)
    out = []
    for n in n_values:
        x = table.b[n]
        an1 = table.a[n - 1]
        pn, pn1, pn2 = aux_provider(n), aux_provider(n - 1), aux_provider(n - 2)
        r1 = pn.S(x) - an1**2 * pn2.S(x)
        r2 = pn.G(x) + an1 * pn1.G(x)
        out.append((n, float(r1), float(r2)))
    return out


def jacobi_power_entries(table: RecurrenceTable, k: int, n: int):
    """Entries ``([L^k]_{n-1,n}, [L^k]_{n,n})`` of the Jacobi operator power.

    Rows of ``L`` follow the recurrence: ``L[m, m-1] = a_m``,
    ``L[m, m] = b_{m+1}`` and ``L[m, m+1] = 1`` (0-based), so
    ``int x^k P_n P_m w = [L^k]_{n,m} h_m``.

    Raises
    ------
    HorizonExceeded
        If ``n + k`` runs past the table.
    """
    if k < 0 or n < 0:
        raise ValueError("k and n must be nonnegative")
    if k == 0:
        return 0.0, 1.0
    table.require(n + k)
    # row vector e_n L^k restricted to indices that matter: propagate x^k P_n
    lo = max(0, n - k)
    hi = n + k
    size = hi - lo + 1
    v = np.zeros(size)
    v[n - lo] = 1.0
    for _ in range(k):
        nv = np.zeros(size)
        for i, m in enumerate(range(lo, hi + 1)):
            if v[i] == 0.0:
                continue
            if i + 1 < size:
                nv[i + 1] += v[i]
            nv[i] += v[i] * table.b[m + 1]
            if m >= 1 and i >= 1:
                nv[i - 1] += v[i] * table.a[m]
        v = nv
    diag = v[n - lo]
    # [L^k]_{n-1,n} = [L^k]_{n,n-1} h_{n-1} / h_n by symmetry of the measure
    off = v[n - 1 - lo] * table.h[n - 1] / table.h[n] if n >= 1 else 0.0
    return float(off), float(diag)


def pq_coefficients(table: RecurrenceTable, n: int):
    """Ascending coefficients of ``P_0..P_n`` and ``Q_0..Q_n``.

    Returns two lists of arrays; ``P[m]`` has length ``m + 1`` and ``Q[m]``
    has length ``max(m, 1)`` (``Q_0 = 0``).
    """
    table.require(n)
    P = [np.array([1.0])]
    Q = [np.array([0.0])]
    if n >= 1:
        P.append(np.array([-table.b[1], 1.0]))
        Q.append(np.array([1.0]))
    for m in range(1, n):
        # u_{m+1} = (x - b_{m+1}) u_m - a_m u_{m-1}
        for seq in (P, Q):
            cur, prev = seq[m], seq[m - 1]
            nxt = np.zeros(len(cur) + 1)
            nxt[1:] += cur
            nxt[: len(cur)] -= table.b[m + 1] * cur
            nxt[: len(prev)] -= table.a[m] * prev
            seq.append(nxt)
    return P, Q
