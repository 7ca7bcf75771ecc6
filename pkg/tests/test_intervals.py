import math

import numpy as np
import pytest

from gencheb.errors import DomainError, OrderingViolation, RangeViolation
from gencheb.intervals import (
    BranchConfig,
    IntervalSet,
    alpha_poly,
    band_of,
    beta_poly,
    psi,
    psi_inverse_squared,
    reflect_config,
    validate_config,
    weight_eval,
)


def test_validate_keeps_valid_configs():
    for cfg in (BranchConfig((-0.5,), (0.5,)), BranchConfig((-0.7, 0.3), (-0.3, 0.7))):
        assert validate_config(cfg) == cfg


def test_closed_gap_collapses_to_interval():
    cfg = validate_config(BranchConfig((0.3,), (0.3,)))
    assert cfg.g == 0
    assert cfg.bands == [(-1.0, 1.0)]


@pytest.mark.parametrize(
    "alphas, betas, exc",
    [
        ((0.5,), (0.1,), OrderingViolation),
        ((-0.5, -0.6), (-0.4, 0.2), OrderingViolation),
        ((-1.0,), (0.2,), RangeViolation),
        ((0.1,), (1.0,), RangeViolation),
        ((float("nan"),), (0.2,), RangeViolation),
        ((0.1,), (), OrderingViolation),
    ],
)
def test_validate_rejects(alphas, betas, exc):
    with pytest.raises(exc):
        validate_config(BranchConfig(alphas, betas))


def test_reflect_examples():
    sym = BranchConfig((-0.5,), (0.5,))
    assert reflect_config(sym) == sym
    r = reflect_config(BranchConfig((-0.8,), (-0.06491,)))
    assert r.alphas == (0.06491,) and r.betas == (0.8,)
    assert reflect_config(BranchConfig()) == BranchConfig()


def test_weight_values():
    assert math.isclose(weight_eval(BranchConfig(), 0.0), 1 / math.pi)
    assert math.isclose(weight_eval(BranchConfig(), 0.0, "reciprocal"), math.pi)
    w = weight_eval(BranchConfig((-0.5,), (0.5,)), 0.9)
    assert math.isclose(w, math.sqrt(1.4 / (0.19 * 0.4)) / math.pi)
    assert round(w, 3) == 1.366


def test_weight_off_e_raises():
    cfg = BranchConfig((-0.5,), (0.5,))
    with pytest.raises(DomainError):
        weight_eval(cfg, 0.0)
    with pytest.raises(DomainError):
        weight_eval(cfg, 1.2)
    with pytest.raises(ValueError):
        weight_eval(cfg, 0.7, "bogus")


def test_band_of_and_contains():
    cfg = BranchConfig((-0.3,), (0.1,))
    assert band_of(cfg, -0.5) == 0
    assert band_of(cfg, 0.5) == 1
    assert band_of(cfg, 0.0) is None
    assert band_of(cfg, 0.1 - 1e-12) is None
    assert band_of(cfg, 0.1 - 1e-12, 1e-10) == 1
    s = IntervalSet.of(cfg)
    assert s.contains(0.9) and not s.contains(0.0)


def test_branch_polynomials_and_psi():
    cfg = BranchConfig((-0.5, 0.2), (-0.1, 0.6))
    x = np.array([1.5, -2.0, 0.0])
    assert np.allclose(alpha_poly(cfg, x), (x + 0.5) * (x - 0.2))
    assert np.allclose(beta_poly(cfg, x), (x + 0.1) * (x - 0.6))
    # psi(x)^-2 is the rational function it names
    assert np.allclose(1.0 / psi(cfg, 1.5) ** 2, psi_inverse_squared(cfg, 1.5))


def test_config_json_roundtrip(tmp_path):
    cfg = BranchConfig((-0.6,), (0.6,))
    assert BranchConfig.from_dict(cfg.to_dict()) == cfg
    p = tmp_path / "c.json"
    p.write_text('{"alphas": [-0.6], "betas": [0.6]}')
    assert BranchConfig.from_json(p) == cfg
