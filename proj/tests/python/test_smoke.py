import math

import pytest

import stiffkit as sk


def test_catalog_names():
    names = [m.name for m in sk.catalog()]
    assert names == ["SRKTASE2", "MSRKTASE2", "SRKTASE3", "MSRKTASE3a", "MSRKTASE3b"]


def test_order_conditions_and_limits():
    m = sk.catalog_method("MSRKTASE3a")
    w = sk.to_wmethod(m)
    residuals = sk.order_residuals_w(w, 3)
    assert max(abs(v) for v in residuals.values()) < 1e-11
    assert abs(sk.r_infinity(w)) < 1e-9
    assert abs(sk.error_norm_c(w, 3) - 0.1817) < 1e-3
    assert abs(sk.error_norm_d(w, 3) - 0.2288) < 1e-3


def test_stability_function_near_zero():
    w = sk.to_wmethod(sk.catalog_method("MSRKTASE2"))
    z = 1e-4
    assert abs(sk.stability_function(w, z) - math.exp(z)) < 1e-12


def test_step_equivalence():
    m = sk.catalog_method("MSRKTASE3b")
    w_tab = sk.to_wmethod(m)

    def rhs(t, y):
        return [math.sin(y[0]) + 0.1 * t, -y[1] + y[0] * y[0]]

    w = [[-1.0, 0.2], [0.3, -2.0]]
    y = [0.4, -0.3]
    a = sk.msrktase_step(m, rhs, w, 0.0, y, 0.05)
    b = sk.wmethod_step(w_tab, rhs, w, 0.0, y, 0.05)
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-12


def test_sdirk_step_decays():
    out = sk.sdirk3_step(lambda t, y: [-1e4 * y[0]], [[-1e4]], 0.0, [1.0], 0.1)
    assert abs(out[0]) < 1e-2


def test_integrate_diffusion():
    run = sk.integrate_problem("MSRKTASE3a", "diffusion", n=32, h=0.01, tf=0.2)
    assert run["steps"] == 20
    assert run["factorizations"] == 20
    assert run["error"] < 1e-3


def test_card_roundtrip():
    m = sk.catalog_method("MSRKTASE2")
    back = sk.method_from_card_json(m.card_json())
    assert back.name == m.name
    assert back.beta == m.beta


def test_bad_method_raises():
    with pytest.raises(Exception):
        sk.catalog_method("NOSUCH")
