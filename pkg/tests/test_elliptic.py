import math

import numpy as np
import pytest
from scipy import integrate, special

from gencheb.elliptic import EllipticContext, complete_K, genus1_closed_form, incomplete_F, jacobi_sn_cn_dn
from gencheb.errors import DomainError
from gencheb.mapping import periodic_family


def test_complete_K_values():
    assert math.isclose(complete_K(0.0), math.pi / 2)
    k = math.sqrt(8 / 9)
    ref, _ = integrate.quad(lambda t: 1 / math.sqrt((1 - t * t) * (1 - k * k * t * t)), 0, 1, limit=200)
    assert math.isclose(complete_K(k), ref, rel_tol=1e-10)
    assert math.isclose(complete_K(0.7), special.ellipk(0.49), rel_tol=1e-14)
    with pytest.raises(DomainError):
        complete_K(1.0)


def test_small_modulus_expansion():
    for k in (1e-2, 2e-2, 4e-2):
        err = complete_K(k) - math.pi / 2 * (1 + k * k / 4)
        assert abs(err) < k**4


def test_sn_cn_dn_against_scipy():
    rng = np.random.default_rng(1)
    for u, k in zip(rng.uniform(-5, 5, 20), rng.uniform(0.0, 0.99, 20)):
        sn, cn, dn, _ = special.ellipj(u, k * k)
        assert np.allclose(jacobi_sn_cn_dn(u, k), (sn, cn, dn), atol=1e-12)


def test_sn_special_values():
    assert jacobi_sn_cn_dn(0.4, 0.0) == (math.sin(0.4), math.cos(0.4), 1.0)
    k = 0.8
    Kk = complete_K(k)
    assert np.allclose(jacobi_sn_cn_dn(Kk, k), (1.0, 0.0, math.sqrt(1 - k * k)), atol=1e-12)
    assert abs(jacobi_sn_cn_dn(0.3 + 4 * Kk, k)[0] - jacobi_sn_cn_dn(0.3, k)[0]) < 1e-12


def test_sn_addition_formula():
    rng = np.random.default_rng(7)
    k = 0.6
    for u, v in rng.uniform(-3, 3, (10, 2)):
        su, cu, du = jacobi_sn_cn_dn(u, k)
        sv, cv, dv = jacobi_sn_cn_dn(v, k)
        rhs = (su * cv * dv + sv * cu * du) / (1 - k * k * su * su * sv * sv)
        assert abs(jacobi_sn_cn_dn(u + v, k)[0] - rhs) < 1e-11


def test_incomplete_F():
    assert math.isclose(incomplete_F(0.7, 0.5), special.ellipkinc(0.7, 0.25), rel_tol=1e-13)


def test_closed_forms_examples():
    assert np.allclose(genus1_closed_form(-0.6, 0.6, 2), (0.16, -0.6), atol=1e-12)
    assert np.allclose(genus1_closed_form(-0.6, 0.6, 3), (0.16, 0.6), atol=1e-12)
    fam = periodic_family(3, "closed_gap", alpha=-0.8)
    a2, _ = genus1_closed_form(-0.8, fam.cfg.betas[0], 2)
    assert abs(a2 - ((-0.8 + 3) / 2 - 2 * math.sqrt(0.1))) < 1e-12
    assert round(a2, 6) == 0.467544
    with pytest.raises(ValueError):
        genus1_closed_form(-0.6, 0.6, 1)


def test_context_constant():
    ctx = EllipticContext.of(-0.3, 0.1)
    assert ctx.c == (2 - (-0.3) + 0.1) ** 2 / 16
    with pytest.raises(DomainError):
        EllipticContext.of(0.2, 0.1)
