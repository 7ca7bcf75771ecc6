"""Branch-point configurations, the band set E and the orthogonality weight.

A configuration with ``g`` gaps is described by interior points

    -1 < alpha_1 < beta_1 < alpha_2 < ... < alpha_g < beta_g < 1

and the support is ``E = [-1, alpha_1] U [beta_1, alpha_2] U ... U [beta_g, 1]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, OrderingViolation, RangeViolation


@dataclass(frozen=True)
class BranchConfig:
    """Interior branch points of the hyperelliptic curve.

    Parameters
    ----------
    alphas, betas : tuple of float
        Left and right gap endpoints. ``g == 0`` is the classical interval.
    """

    alphas: tuple = ()
    betas: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    @property
    def g(self) -> int:
        return len(self.alphas)

    @property
    def bands(self) -> list[tuple[float, float]]:
        edges = [-1.0]
        for a, b in zip(self.alphas, self.betas):
            edges.extend([a, b])
        edges.append(1.0)
        return [(edges[2 * i], edges[2 * i + 1]) for i in range(self.g + 1)]

    @property
    def gaps(self) -> list[tuple[float, float]]:
        return list(zip(self.alphas, self.betas))

    def to_dict(self) -> dict:
        return {"alphas": list(self.alphas), "betas": list(self.betas)}

    @classmethod
    def from_dict(cls, data: dict) -> "BranchConfig":
        return validate_config(cls(data.get("alphas", ()), data.get("betas", ())))

    @classmethod
    def from_json(cls, path) -> "BranchConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class IntervalSet:
    bands: tuple

    @classmethod
    def of(cls, cfg: BranchConfig) -> "IntervalSet":
        return cls(tuple(cfg.bands))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.bands)


def validate_config(raw: BranchConfig) -> BranchConfig:
    """Check ordering and range, collapsing closed gaps (``alpha_j == beta_j``)."""
    if len(raw.alphas) != len(raw.betas):
        raise OrderingViolation("alphas and betas must have equal length")
    for p in raw.alphas + raw.betas:
        if not (-1.0 < p < 1.0) or not math.isfinite(p):
            raise RangeViolation(f"branch point {p!r} outside (-1, 1)")
    alphas, betas = [], []
    prev = -1.0
    for a, b in zip(raw.alphas, raw.betas):
        if a < prev or (alphas and a <= prev) or b < a:
            raise OrderingViolation(f"interleaving fails at gap ({a}, {b})")
        if a == b:
            continue
        alphas.append(a)
        betas.append(b)
        prev = b
    if alphas and not all(x < y for x, y in zip(betas, alphas[1:])):
        raise OrderingViolation("bands must have positive length")
    if len(alphas) == raw.g:
        return raw
    return BranchConfig(tuple(alphas), tuple(betas))


def reflect_config(cfg: BranchConfig) -> BranchConfig:
    """Mirror image of E about the origin (``alpha~_j = -beta_{g+1-j}``)."""
    return BranchConfig(
        tuple(-b for b in reversed(cfg.betas)),
        tuple(-a for a in reversed(cfg.alphas)),
    )


def band_of(cfg: BranchConfig, x: float, tol: float = 0.0) -> int | None:
    """Index of the band containing ``x`` (endpoints included up to ``tol``)."""
    for i, (lo, hi) in enumerate(cfg.bands):
        if lo - tol <= x <= hi + tol:
            return i
    return None


def alpha_poly(cfg: BranchConfig, x):
    """prod_j (x - alpha_j)."""
    x = np.asarray(x)
    out = np.ones_like(x, dtype=np.result_type(x, float))
    for a in cfg.alphas:
        out = out * (x - a)
    return out


def beta_poly(cfg: BranchConfig, x):
    """prod_j (x - beta_j)."""
    x = np.asarray(x)
    out = np.ones_like(x, dtype=np.result_type(x, float))
    for b in cfg.betas:
        out = out * (x - b)
    return out


def curve_poly_coeffs(cfg: BranchConfig) -> np.ndarray:
    """Ascending coefficients of y^2 = (x^2 - 1) prod (x - alpha_j)(x - beta_j)."""
    roots = [-1.0, 1.0, *cfg.alphas, *cfg.betas]
    return np.polynomial.polynomial.polyfromroots(roots)


def curve_y(cfg: BranchConfig, x):
    """Boundary value y(x + i0) of the branch with y ~ x^(g+1) at +infinity.

    Real for x off E (the sign alternates gap by gap), purely imaginary on
    the interior of E.
    """
    x = np.asarray(x, dtype=float)
    points = np.array([-1.0, 1.0, *cfg.alphas, *cfg.betas])
    diffs = x[..., None] - points
    mag = np.sqrt(np.prod(np.abs(diffs), axis=-1))
    above = np.sum(diffs < 0, axis=-1)
    phase = np.array([1, 1j, -1, -1j])[above % 4]
    return mag * phase


def psi(cfg: BranchConfig, x):
    """Stieltjes transform of w at x + i0; psi ~ 1/x at +infinity."""
    return alpha_poly(cfg, x) / curve_y(cfg, x)


def psi_inverse_squared(cfg: BranchConfig, x):
    """1/psi^2 = (x^2 - 1) prod(x - beta) / prod(x - alpha), a rational function."""
    x = np.asarray(x, dtype=np.result_type(x, float))
    return (x * x - 1.0) * beta_poly(cfg, x) / alpha_poly(cfg, x)


def _interior_band(cfg: BranchConfig, x: float) -> bool:
    return any(lo < x < hi for lo, hi in cfg.bands)


def weight_eval(cfg: BranchConfig, x: float, mode: str = "direct") -> float:
    """w(x) on the open bands of E, or 1/w(x) for ``mode='reciprocal'``."""
    if mode not in ("direct", "reciprocal"):
        raise ValueError(f"unknown mode {mode!r}")
    if not _interior_band(cfg, x):
        raise DomainError(f"x={x} is not interior to E")
    ratio = float(alpha_poly(cfg, x) / ((1.0 - x * x) * beta_poly(cfg, x)))
    w = math.sqrt(ratio) / math.pi
    return w if mode == "direct" else 1.0 / w


def weight_array(cfg: BranchConfig, x: Sequence[float], mode: str = "direct") -> np.ndarray:
    return np.array([weight_eval(cfg, float(t), mode) for t in np.ravel(x)])
