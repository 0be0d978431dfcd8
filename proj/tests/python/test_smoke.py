import math

import pytest

import besqmop as bm


def test_limit_coeffs_match_scaled_recurrence():
    sp = bm.ScaledParams(1.0, 0.3, 0.5)
    n = 4000
    k = 2000
    b, c, d = bm.recurrence_coeffs_scaled(sp, k, n)
    lb, lc, ld = bm.limit_coeffs(sp, k / n)
    assert b == pytest.approx(lb, rel=1e-3)
    assert c == pytest.approx(lc, rel=1e-3)
    assert d == pytest.approx(ld, rel=1e-3)


def test_hard_edge_below_s_star():
    sp = bm.ScaledParams(1.0, 0.2, 0.0)
    assert sp.s_star == pytest.approx(4.0)
    for s in (0.5, 2.0, 3.9):
        assert bm.edge_curves(sp, s).eta == 0.0
    e = bm.edge_curves(sp, 1.0)
    assert 0.0 < e.beta < e.gamma


def test_unit_masses():
    sp = bm.ScaledParams(1.0, 0.4, 1.0)
    assert bm.measure_mass("mu1", sp, 1.0) == pytest.approx(1.0, abs=1e-7)
    assert bm.measure_mass("nu1", sp, 1.0) == pytest.approx(1.0, abs=1e-6)
    assert bm.measure_mass("nu2", sp, 1.0) == pytest.approx(0.5, abs=1e-6)


def test_zeros_follow_nu1():
    sp = bm.ScaledParams(1.0, 0.2, 0.0)
    zs = bm.zeros(sp, 200, 200)
    assert len(zs) == 200
    assert all(x < y for x, y in zip(zs, zs[1:]))
    dist = max(abs(bm.nu1_cdf(sp, 1.0, x) - (i + 0.5) / len(zs)) for i, x in enumerate(zs))
    assert dist < 0.05


def test_field_closed_and_numeric():
    sp = bm.ScaledParams(1.0, 0.3, 0.7)
    for x in (0.3, 1.0, 2.5):
        assert bm.field(sp, x) == pytest.approx(bm.field_numeric(sp, x), rel=1e-8)


def test_variational_conditions():
    mu1, mu2 = bm.check_variational_mu(bm.ScaledParams(1.0, 0.3, 0.0), 1.0)
    assert mu1["passed"] and mu2["passed"]


def test_simulation_shapes_and_determinism():
    taus, pos = bm.simulate(5, alpha=1, steps=20, seed=3)
    assert len(taus) == 21 and len(pos) == 21
    assert taus[0] == 0.0 and taus[-1] == pytest.approx(1.0)
    assert all(len(p) == 5 for p in pos)
    assert bm.simulate(5, alpha=1, steps=20, seed=3)[1] == pos


def test_errors_map_to_python_exceptions():
    with pytest.raises(bm.ValidationError):
        bm.ScaledParams(1.0, 1.5, 0.0)
    with pytest.raises(bm.BesqError):
        bm.FiniteParams(a=-1.0)
    assert issubclass(bm.ValidationError, bm.BesqError)
    assert math.isinf(bm.measure_mass("sigma", bm.ScaledParams(1.0, 0.2, 1.0)))
