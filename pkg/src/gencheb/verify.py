"""Self-consistency checks for one configuration, grouped into suites.

Each check returns a :class:`Check` holding the measured discrepancy, the
tolerance it is held to and the verdict.  A check whose computation raises
is reported as failed with the error message attached.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import chebyshev as C
from .auxpoly import AuxCache, closed_form_aux
from .elliptic import EllipticContext, genus1_closed_form
from .errors import GenChebError
from .intervals import BranchConfig, alpha_poly, beta_poly, reflect_config
from .mapping import build_mapping, compose_identities, detect_period, equilibrium_charges, product_rule_residual
from .quadrature import inner_product
from .recurrence import difference_residuals, difference_residuals_g1, pq_coefficients, stieltjes_table
from .zeros import band_zero_census, interlacing_check


@dataclass
class Check:
    name: str
    measured: float | None
    tolerance: float
    passed: bool
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _run(name: str, tol: float, fn) -> Check:
    try:
        val = float(fn())
    except (GenChebError, ArithmeticError, ValueError) as exc:
        return Check(name, None, tol, False, f"{type(exc).__name__}: {exc}")
    if not np.isfinite(val):
        return Check(name, None, tol, False, "non-finite measurement")
    return Check(name, val, tol, val <= tol)


def off_e_points(cfg: BranchConfig, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random points in the gaps and just outside ``[-1, 1]``."""
    pools = [(1.02, 2.0), (-2.0, -1.02)]
    for lo, hi in cfg.gaps:
        w = hi - lo
        pools.append((lo + 0.1 * w, hi - 0.1 * w))
    picks = rng.integers(0, len(pools), size=count)
    return np.array([rng.uniform(*pools[i]) for i in picks])


def _near_root(aux, m: int, x: float) -> bool:
    scale = max(abs(c) for c in aux(m).eta)
    return abs(aux(m).S(x)) < 1e-6 * scale


class Verifier:
    """Runs check suites on one configuration.

    Parameters
    ----------
    cfg : BranchConfig
    N : int
        Horizon of the Stieltjes table.
    seed : int
        Seed for the random sample points.
    tol : float, optional
        Overrides every per-check tolerance.
    """

    SUITES = ("orthogonality", "identities", "aux", "genus1", "reflection", "periodic")

    def __init__(self, cfg: BranchConfig, N: int = 24, seed: int = 0, tol: float | None = None):
        self.cfg = cfg
        self.N = N
        self.rng = np.random.default_rng(seed)
        self.tol = tol
        self.table = stieltjes_table(cfg, N)
        self.aux = AuxCache(cfg, self.table)
        self.nmax = min(12, N - cfg.g - 2)

    def _t(self, default: float) -> float:
        return default if self.tol is None else self.tol

    def run(self, suite: str = "all") -> list[Check]:
        names = self.SUITES if suite == "all" else (suite,)
        out = []
        for name in names:
            if name not in self.SUITES:
                raise ValueError(f"unknown suite {name!r}")
            out.extend(getattr(self, f"suite_{name}")())
        return out

    # ------------------------------------------------------------------
    def suite_orthogonality(self) -> list[Check]:
        cfg, t = self.cfg, self.table
        top = min(8, self.N)

        def p_err():
            worst = 0.0
            for n in range(top + 1):
                for m in range(n, top + 1):
                    ip = inner_product(cfg, lambda x: C.evaluate_pair(t, n, x)[0], lambda x: C.evaluate_pair(t, m, x)[0])
                    worst = max(worst, abs(ip - (n == m) * t.h[n]))
            return worst

        def q_err():
            worst = 0.0
            for n in range(1, top + 1):
                for m in range(n, top + 1):
                    ip = inner_product(
                        cfg, lambda x: C.evaluate_pair(t, n, x)[1], lambda x: C.evaluate_pair(t, m, x)[1], "reciprocal"
                    )
                    worst = max(worst, abs(ip - (n == m) * np.pi**2 * t.h[n]))
            return worst

        def wronskian():
            x = self.rng.uniform(-1.0, 1.0, 20)
            worst = 0.0
            for n in range(1, self.nmax + 1):
                P, Q = C.evaluate_all(t, n, x)
                terms = np.abs(P[n - 1] * Q[n]) + np.abs(P[n] * Q[n - 1])
                worst = max(worst, np.max(np.abs(P[n - 1] * Q[n] - P[n] * Q[n - 1] - t.h[n - 1]) / terms))
            return worst

        return [
            _run("orthogonality P", self._t(1e-9), p_err),
            _run("orthogonality Q under 1/w", self._t(1e-6), q_err),
            _run("wronskian (relative to its terms)", self._t(1e-12), wronskian),
        ]

    def suite_identities(self) -> list[Check]:
        cfg, t, aux = self.cfg, self.table, self.aux
        pts = off_e_points(cfg, 20, self.rng)

        def product():
            worst = 0.0
            for n in range(1, self.nmax + 1):
                for x in pts:
                    if any(_near_root(aux, m, x) for m in range(n)):
                        continue
                    P, Q = C.evaluate_pair(t, n, x)
                    Pp, Qp = C.evaluate_product(cfg, t, aux, n, x)
                    worst = max(worst, abs(P - Pp) / max(abs(P), 1e-300), abs(Q - Qp) / max(abs(Q), 1e-300))
            return worst

        def step():
            worst = 0.0
            for n in range(1, self.nmax + 1):
                for x in pts:
                    if _near_root(aux, n - 1, x):
                        continue
                    P, Q = C.evaluate_pair(t, n, x)
                    rp, rq = C.step_relations_residual(cfg, t, aux, n, x)
                    worst = max(worst, abs(rp) / max(abs(P), 1.0), abs(rq) / max(abs(Q), 1.0))
            return worst

        return [
            _run("product form vs recurrence (relative)", self._t(1e-9), product),
            _run("step relations (relative)", self._t(1e-9), step),
        ]

    def suite_aux(self) -> list[Check]:
        cfg, t, aux = self.cfg, self.table, self.aux
        if cfg.g == 0:
            return []

        def definitional_identities():
            # S = A P_n^2 - B Q_n^2 and G = A P_n P_{n-1} - B Q_n Q_{n-1}, pointwise
            x = off_e_points(cfg, 10, self.rng)
            A = alpha_poly(cfg, x)
            B = (x * x - 1.0) * beta_poly(cfg, x)
            worst = 0.0
            for n in range(1, self.nmax + 1):
                P, Q = C.evaluate_all(t, n, x)
                s_terms = np.abs(A * P[n] ** 2) + np.abs(B * Q[n] ** 2)
                g_terms = np.abs(A * P[n] * P[n - 1]) + np.abs(B * Q[n] * Q[n - 1])
                rs = aux(n).S(x) - (A * P[n] ** 2 - B * Q[n] ** 2)
                rg = aux(n).G(x) - (A * P[n] * P[n - 1] - B * Q[n] * Q[n - 1])
                worst = max(worst, np.max(np.abs(rs) / s_terms), np.max(np.abs(rg) / g_terms))
            return worst

        def closed_forms():
            if cfg.g > 2:
                return 0.0
            worst = 0.0
            for n in range(1, min(10, self.nmax) + 1):
                a, c = aux(n), closed_form_aux(cfg, t, n)
                worst = max(worst, np.max(np.abs(a.eta - c.eta)), np.max(np.abs(a.xi - c.xi)))
            return worst

        def evaluated_relations():
            rows = difference_residuals(cfg, t, aux, range(3, self.nmax + 1))
            return max(max(abs(r1) / t.h[n], abs(r2) / t.h[n]) for n, r1, r2 in rows)

        return [
            _run("auxiliary definitions pointwise (relative)", self._t(1e-8), definitional_identities),
            _run("auxiliary systems vs explicit forms", self._t(1e-9), closed_forms),
            _run("evaluated auxiliary relations (relative to h_n)", self._t(1e-8), evaluated_relations),
        ]

    def suite_genus1(self) -> list[Check]:
        cfg, t, aux = self.cfg, self.table, self.aux
        if cfg.g != 1:
            return []
        (al,), (be,) = cfg.alphas, cfg.betas

        def elliptic():
            ctx = EllipticContext.of(al, be)
            worst = 0.0
            for n in range(2, self.nmax + 1):
                a, b = genus1_closed_form(al, be, n, ctx)
                worst = max(worst, abs(a - t.a[n]), abs(b - t.b[n]))
            return worst

        def difference():
            rows = difference_residuals_g1(t, al, be, self.nmax)
            return max(max(abs(ra), abs(rb)) for _, ra, rb in rows)

        def differential():
            h = 1e-5
            pts = off_e_points(cfg, 10, self.rng)
            pts = pts[np.abs(pts) < 2.0]
            worst = 0.0
            for n in range(1, min(8, self.nmax) + 1):
                dd = C.differential_data_g1(cfg, t, aux, n)
                for x in pts:
                    P, Q = C.evaluate_pair(t, n, x)
                    Pp, Qp = C.evaluate_pair(t, n, x + h)
                    Pm, Qm = C.evaluate_pair(t, n, x - h)
                    dP, dQ = (Pp - Pm) / (2 * h), (Qp - Qm) / (2 * h)
                    r1 = dP - dd.f1(x) * P - dd.f2(x) * Q
                    r2 = dQ - dd.f3(cfg, x) * P - dd.f4(cfg, x) * Q
                    worst = max(worst, abs(r1) / max(1.0, abs(dP)), abs(r2) / max(1.0, abs(dQ)))
            return worst

        def discriminant():
            worst = 0.0
            for n in range(2, min(8, self.nmax) + 1):
                d = C.discriminant(cfg, t, aux, n)
                f = C.discriminant(cfg, t, aux, n, "formula_g1")
                worst = max(worst, abs(d - f) / abs(d))
            return worst

        return [
            _run("elliptic closed forms vs table", self._t(1e-8), elliptic),
            _run("genus-1 difference equations", self._t(1e-8), difference),
            _run("differential relations (finite differences)", self._t(1e-6), differential),
            _run("discriminant formula vs roots (relative)", self._t(1e-6), discriminant),
        ]

    def suite_reflection(self) -> list[Check]:
        cfg, t = self.cfg, self.table
        if cfg.g == 0:
            return []

        def reflection():
            other = stieltjes_table(reflect_config(cfg), 8 + cfg.g)
            P, _ = pq_coefficients(other, 6)
            return max(np.max(np.abs(C.reflected_polynomial(cfg, t, n) - P[n])) for n in range(7))

        return [_run("reflection determinant vs mirrored table", self._t(1e-6), reflection)]

    def suite_periodic(self) -> list[Check]:
        cfg, t, aux = self.cfg, self.table, self.aux
        K = detect_period(equilibrium_charges(cfg))
        if K is None or K < 2 or 2 * K + 1 > self.N:
            return []
        checks = []
        try:
            m = build_mapping(cfg, t, K)
        except GenChebError as exc:
            return [Check(f"mapping constraints K={K}", None, 1e-8, False, str(exc))]
        checks.append(Check(f"mapping constraints K={K}", 0.0, 1e-8, True))
        x = np.linspace(-1.2, 1.2, 25) + 0.0123
        nmax = max(1, (self.N - K) // K)

        def compose():
            worst = 0.0
            for n in range(1, min(4, nmax) + 1):
                for j in range(K):
                    if n * K + j > self.N:
                        continue
                    p, q = compose_identities(cfg, t, m, n, j, x)
                    P, Q = C.evaluate_pair(t, n * K + j, x)
                    worst = max(worst, np.max(np.abs(p - P) / np.maximum(1, np.abs(P))),
                                np.max(np.abs(q - Q) / np.maximum(1, np.abs(Q))))
            return worst

        def product_rule():
            worst = 0.0
            for n in range(1, self.N - K + 1):
                worst = max(worst, np.max(np.abs(product_rule_residual(t, K, 1, n, x))))
            return worst

        def census():
            mult = m.band_multiplicity(cfg)
            for n in range(1, self.N // K + 1):
                band_zero_census(cfg, t, K, n, mult)
            return 0.0

        def interlace():
            fails = 0
            for j in range(1, K):
                for n in (1, 2, 3):
                    if n * K + j <= self.N and not interlacing_check(cfg, t, K, n, j).passed:
                        fails += 1
            return fails

        def env():
            worst = -np.inf
            for j in (0, 1):
                for n in range(1, min(4, nmax) + 1):
                    if n * K + j + cfg.g > self.N:
                        continue
                    for lo, hi in cfg.bands:
                        xs = np.linspace(lo, hi, 402)[1:-1]
                        p = C.normalized_polynomial(t, K, n, j, xs)
                        r = C.envelope(cfg, aux, t, K, n, j, xs)
                        worst = max(worst, float(np.max(np.abs(p) - r)))
            return max(worst, 0.0)

        checks += [
            _run("composition identities (relative)", self._t(1e-9), compose),
            _run("product rule for P_n P_K", self._t(1e-9), product_rule),
            _run("zero census per band", 0.0, census),
            _run("zero location statements (failures)", 0.0, interlace),
            _run("envelope bound excess", self._t(1e-8), env),
        ]
        return checks

