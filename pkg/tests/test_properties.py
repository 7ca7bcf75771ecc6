"""Property tests over random valid configurations."""

import math
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from gencheb import chebyshev as C
from gencheb.auxpoly import AuxCache
from gencheb.cli import to_csv
from gencheb.elliptic import genus1_closed_form
from gencheb.intervals import BranchConfig, alpha_poly, beta_poly, reflect_config, weight_eval
from gencheb.mapping import detect_period, equilibrium_charges
from gencheb.quadrature import inner_product, integrate
from gencheb.recurrence import pq_coefficients, stieltjes_table
from gencheb.verify import off_e_points
from gencheb.zeros import roots_of_Pn, roots_of_Qn

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
MIN_SEP = 0.05


@st.composite
def configs(draw, genus=st.integers(1, 2)):
    g = draw(genus)
    pts = sorted(draw(st.lists(st.floats(-0.95, 0.95), min_size=2 * g, max_size=2 * g, unique=True)))
    edges = [-1.0, *pts, 1.0]
    assume(all(b - a > MIN_SEP for a, b in zip(edges, edges[1:])))
    return BranchConfig(tuple(pts[0::2]), tuple(pts[1::2]))


@SETTINGS
@given(configs())
def test_total_mass_and_orthogonality(cfg):
    assert abs(integrate(cfg, lambda x: np.ones_like(x)) - 1.0) < 1e-10
    t = stieltjes_table(cfg, 10)
    assert np.allclose(t.h[1:], np.cumprod(t.a[1:]), rtol=1e-12)
    for n in range(1, 9):
        for m in range(n):
            ip = inner_product(cfg, lambda x: C.evaluate_pair(t, n, x)[0], lambda x: C.evaluate_pair(t, m, x)[0])
            assert abs(ip) / math.sqrt(t.h[n] * t.h[m]) < 1e-9


@SETTINGS
@given(configs(st.just(1)))
def test_elliptic_matches_table(cfg):
    t = stieltjes_table(cfg, 12)
    for n in range(2, 13):
        a, b = genus1_closed_form(cfg.alphas[0], cfg.betas[0], n)
        assert abs(a - t.a[n]) < 1e-8 and abs(b - t.b[n]) < 1e-8


@SETTINGS
@given(configs(), st.floats(0.01, 0.99))
def test_reflected_weight(cfg, frac):
    lo, hi = cfg.bands[-1]
    x = lo + frac * (hi - lo)
    lhs = weight_eval(cfg, x) * beta_poly(cfg, x) / alpha_poly(cfg, x)
    assert math.isclose(lhs, weight_eval(reflect_config(cfg), -x), rel_tol=1e-12)


@SETTINGS
@given(configs())
def test_auxiliary_invariants(cfg):
    t = stieltjes_table(cfg, 16)
    aux = AuxCache(cfg, t)
    for n in range(1, 11):
        p = aux(n)
        assert math.isclose(p.eta[-1], 2 * t.h[n], rel_tol=1e-12)
        assert math.isclose(p.xi[-1], t.h[n - 1], rel_tol=1e-12)
        for gam, (lo, hi) in zip(p.gammas, cfg.gaps):
            assert lo - 1e-8 <= gam <= hi + 1e-8


@SETTINGS
@given(configs(), st.integers(0, 2**32 - 1))
def test_product_form_and_wronskian(cfg, seed):
    t = stieltjes_table(cfg, 16)
    aux = AuxCache(cfg, t)
    rng = np.random.default_rng(seed)
    for x in off_e_points(cfg, 5, rng):
        for n in range(1, 11):
            P, Q = C.evaluate_pair(t, n, x)
            Pp, Qp = C.evaluate_product(cfg, t, aux, n, x)
            assert abs(P - Pp) <= 1e-9 * max(abs(P), 1e-3) and abs(Q - Qp) <= 1e-9 * max(abs(Q), 1e-3)
    x = rng.uniform(-1, 1, 20)
    for n in range(1, 13):
        P, Q = C.evaluate_all(t, n, x)
        err = np.abs(P[n - 1] * Q[n] - P[n] * Q[n - 1] - t.h[n - 1])
        terms = np.abs(P[n - 1] * Q[n]) + np.abs(P[n] * Q[n - 1])
        assert np.max(err / terms) < 1e-12
        if n <= 5:
            assert np.max(err) < 1e-10 * t.h[n - 1]


@SETTINGS
@given(configs(st.just(1)))
def test_reflection_matches_mirrored_table(cfg):
    assert reflect_config(reflect_config(cfg)) == cfg
    t = stieltjes_table(cfg, 10)
    P, _ = pq_coefficients(stieltjes_table(reflect_config(cfg), 10), 5)
    for n in range(6):
        assert np.allclose(C.reflected_polynomial(cfg, t, n), P[n], atol=1e-6)


@SETTINGS
@given(configs())
def test_charge_sanity(cfg):
    total = -sum(equilibrium_charges(cfg).Bhat)
    assert 0.0 < total < 1.0


@SETTINGS
@given(st.lists(st.fractions(min_value=Fraction(-1, 1), max_value=Fraction(0), max_denominator=8), min_size=1, max_size=3))
def test_period_is_lcm_of_denominators(bhat):
    lcm = math.lcm(*(f.denominator for f in bhat))
    assert detect_period([float(f) for f in bhat], Kmax=64) == (lcm if lcm <= 64 else None)


@SETTINGS
@given(configs(), st.integers(3, 14))
def test_pq_zero_interlacing(cfg, n):
    t = stieltjes_table(cfg, 16)
    xr, yr = roots_of_Pn(t, n), roots_of_Qn(t, n)
    for lo, hi in cfg.bands:
        xs = xr[(xr > lo) & (xr < hi)]
        for a, b in zip(xs[:-1], xs[1:]):
            assert np.sum((yr > a) & (yr < b)) == 1


@SETTINGS
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=10))
def test_csv_roundtrip_is_exact(values):
    text = to_csv(["v"], [(v,) for v in values])
    back = [float(line) for line in text.splitlines()[1:]]
    assert back == [float(v) for v in values]
