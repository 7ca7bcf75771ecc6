import numpy as np
import pytest

from gencheb.auxpoly import (
    AuxCache,
    closed_form_aux,
    definitional_aux,
    gamma_genus2,
    gamma_genus2_literal,
    gamma_k3_general,
    gamma_k3_symmetric,
    inverse_sqrt_series,
    solve_aux,
    system_valid,
)
from gencheb.intervals import BranchConfig
from gencheb.mapping import periodic_family
from gencheb.recurrence import stieltjes_table

G1 = BranchConfig((-0.3,), (0.1,))
K3 = BranchConfig((-0.7, 0.3), (-0.3, 0.7))


def test_series_coefficients():
    assert np.allclose(inverse_sqrt_series(BranchConfig(), 5).I, [1, 0, 0.5, 0, 0.375])
    for cfg in (G1, K3):
        I = inverse_sqrt_series(cfg, 3).I
        assert I[0] == 1.0
    assert abs(inverse_sqrt_series(G1, 2).I[1] - (-0.3 + 0.1) / 2) < 1e-15


def test_genus1_displays():
    t = stieltjes_table(G1, 14)
    al, be = -0.3, 0.1
    for n in range(1, 11):
        p = solve_aux(G1, t, n)
        assert np.allclose(p.eta, 2 * t.h[n] * np.array([t.b[n + 1] - (al + be) / 2, 1.0]), atol=1e-12)
        if n >= 2:
            xi = t.h[n - 1] * np.array([2 * t.a[n] - (al - be) ** 2 / 8 - 0.5, -(al + be) / 2, 1.0])
            assert np.allclose(p.xi, xi, atol=1e-12)


def test_initial_displays():
    t = stieltjes_table(G1, 6)
    c0 = closed_form_aux(G1, t, 0)
    assert np.allclose(c0.eta, [0.3, 1.0])
    c1 = closed_form_aux(G1, t, 1)
    assert np.allclose(c1.xi, np.polynomial.polynomial.polyfromroots([t.b[1], -0.3]))


def test_symmetric_period_three_display():
    t = stieltjes_table(K3, 10)
    al = -0.7
    p = solve_aux(K3, t, 2)
    expected = 2 * t.h[2] * np.array([t.a[2] + t.a[3] + t.b[3] ** 2 - 1 - al - al * al, t.b[3], 1.0])
    assert np.allclose(p.eta, expected, atol=1e-12)


@pytest.mark.parametrize("cfg", [G1, K3, BranchConfig((-0.5, 0.2), (-0.1, 0.6))])
def test_solve_matches_closed_forms_and_definitions(cfg):
    t = stieltjes_table(cfg, 16)
    for n in range(1, 11):
        s, c = solve_aux(cfg, t, n), closed_form_aux(cfg, t, n)
        assert np.allclose(s.eta, c.eta, atol=1e-9, rtol=0)
        assert np.allclose(s.xi, c.xi, atol=1e-9, rtol=0)
        assert s.eta[-1] == pytest.approx(2 * t.h[n], rel=1e-12)
        assert s.xi[-1] == pytest.approx(t.h[n - 1], rel=1e-12)
    d = definitional_aux(cfg, t, 3)
    assert np.allclose(d.eta, solve_aux(cfg, t, 3).eta, atol=1e-6)


@pytest.mark.parametrize("cfg", [G1, K3, BranchConfig((-0.9, 0.4), (-0.6, 0.8))])
def test_gammas_stay_in_gaps(cfg):
    t = stieltjes_table(cfg, 18)
    aux = AuxCache(cfg, t)
    for n in range(1, 14):
        for gam, (lo, hi) in zip(aux(n).gammas, cfg.gaps):
            assert lo - 1e-10 <= gam <= hi + 1e-10


def test_genus2_gamma_forms():
    t = stieltjes_table(K3, 14)
    for n in range(2, 9):
        ref = solve_aux(K3, t, n).gammas
        assert np.allclose(gamma_genus2(K3, t, n), ref, atol=1e-9)
        assert np.allclose(sorted(gamma_k3_symmetric(-0.7, t, n)), ref, atol=1e-9)
    lit = gamma_genus2_literal(K3, t, 4)
    assert len(lit) == 2


def test_k3_general_gammas():
    fam = periodic_family(3, "general", alpha1=-0.9, beta1=-0.6)
    t = fam.table(14)
    for n in range(2, 8):
        assert np.allclose(sorted(gamma_k3_general(-0.9, -0.6, t, n)), solve_aux(fam.cfg, t, n).gammas, atol=1e-9)


def test_system_validity():
    assert system_valid(1, 1) == (True, False)
    assert system_valid(1, 2) == (True, True)
    assert system_valid(2, 1) == (False, False)
    assert system_valid(2, 2) == (True, True)
    assert system_valid(3, 2) == (True, False)
