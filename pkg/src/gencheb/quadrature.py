"""Gauss-Jacobi integration against w and 1/w on each band of E.

On a band ``[l, r]`` the weight behaves like ``(r - x)^p (x - l)^q s(x)``
with ``p, q`` in ``{-1/2, +1/2}`` and ``s`` smooth and positive.  The exponent
at an endpoint is +1/2 for an alpha point and -1/2 for a beta point or
``+-1``; the reciprocal weight flips both signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import ConvergenceError
from .intervals import BranchConfig

MODES = ("direct", "reciprocal")


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the band rules.

    Parameters
    ----------
    points_per_band : int
        Gauss-Jacobi nodes per band (at least 8).
    refinement_levels : int
        Number of extra, finer rules used to confirm convergence.  Zero
        disables the check.
    tol : float
        Allowed disagreement between levels, relative to the sum of
        absolute contributions.
    """

    points_per_band: int = 64
    refinement_levels: int = 1
    tol: float = 1e-11

    def __post_init__(self):
        if self.points_per_band < 8:
            raise ValueError("points_per_band must be at least 8")
        if self.refinement_levels < 0:
            raise ValueError("refinement_levels must be nonnegative")

    def levels(self) -> list[int]:
        n = self.points_per_band
        return [n] + [int(math.ceil(n * 1.5 ** (i + 1))) for i in range(self.refinement_levels)]


@lru_cache(maxsize=256)
def _jacobi_reference(n: int, p: float, q: float):
    # (1 - t)^p (1 + t)^q on [-1, 1]
    t, wt = roots_jacobi(n, p, q)
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def _endpoint_exponents(cfg: BranchConfig, band_index: int):
    """Exponents of w at the band's right and left endpoints, and the other points."""
    lo, hi = cfg.bands[band_index]
    q = -0.5  # left end is -1 or a beta point
    p = -0.5 if band_index == cfg.g else 0.5  # right end is 1 or an alpha point
    others = []
    for c in (-1.0, 1.0, *cfg.betas):
        if c not in (lo, hi):
            others.append((c, -0.5))
    for c in cfg.alphas:
        if c not in (lo, hi):
            others.append((c, 0.5))
    return lo, hi, p, q, others


def band_rule(cfg: BranchConfig, band_index: int, n: int, mode: str = "direct"):
    """Nodes and weights with ``sum(wts * f(nodes)) ~ int_band f w^{+-1} dx``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    lo, hi, p, q, others = _endpoint_exponents(cfg, band_index)
    sign = 1.0 if mode == "direct" else -1.0
    p, q = sign * p, sign * q
    t, wt = _jacobi_reference(n, p, q)
    half = 0.5 * (hi - lo)
    x = lo + half * (1.0 + t)
    smooth = np.full_like(x, 1.0 / math.pi if mode == "direct" else math.pi)
    for c, e in others:
        smooth *= np.abs(x - c) ** (sign * e)
    return x, wt * half ** (p + q + 1.0) * smooth


def discretize(cfg: BranchConfig, n: int, mode: str = "direct"):
    """Concatenated band rules, a discrete measure exact for low-degree polynomials."""
    parts = [band_rule(cfg, i, n, mode) for i in range(cfg.g + 1)]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _checked(values: list[tuple[float, float]], tol: float) -> float:
    ref, scale = values[0]
    for val, sc in values[1:]:
        if abs(val - ref) > tol * max(scale, sc, np.finfo(float).tiny):
            raise ConvergenceError(
                f"quadrature levels disagree: {ref!r} vs {val!r}"
            )
    return values[-1][0]


def band_integrate(
    cfg: BranchConfig,
    f: Callable,
    band_index: int,
    mode: str = "direct",
    spec: QuadratureSpec | None = None,
) -> float:
    """Integral of ``f * w`` (or ``f / w``) over one band.

    Raises
    ------
    ConvergenceError
        If successive node counts disagree beyond ``spec.tol``.
    """
    spec = spec or QuadratureSpec()
    vals = []
    for n in spec.levels():
        x, wt = band_rule(cfg, band_index, n, mode)
        terms = wt * np.asarray(f(x), dtype=float)
        vals.append((float(terms.sum()), float(np.abs(terms).sum())))
    return _checked(vals, spec.tol)


def integrate(cfg: BranchConfig, f: Callable, mode: str = "direct", spec: QuadratureSpec | None = None) -> float:
    return sum(band_integrate(cfg, f, i, mode, spec) for i in range(cfg.g + 1))


def inner_product(
    cfg: BranchConfig,
    f: Callable,
    g: Callable,
    mode: str = "direct",
    spec: QuadratureSpec | None = None,
) -> float:
    """``<f, g>`` with respect to w (or 1/w) on E."""
    return integrate(cfg, lambda x: np.asarray(f(x)) * np.asarray(g(x)), mode, spec)
