import math

import pytest

import fractrunc as fr


def test_normalizing_constant():
    assert fr.normalizing_constant(0.5) == pytest.approx(1 / math.pi, rel=1e-14)
    with pytest.raises(fr.DomainError):
        fr.normalizing_constant(1.2)


def test_perpendicular_constant_closed_form():
    g, s = 0.7, 0.35
    expect = math.gamma(-s) * math.gamma(g / 2 + s) / math.gamma(g / 2)
    r = fr.c_perp(g, s)
    assert r["value"] == pytest.approx(expect, rel=1e-9)
    assert r["abs_error_estimate"] < 1e-8


def test_roots():
    assert fr.find_gamma_bar(1, 0.75) is None
    assert fr.find_gamma_bar(1, 0.25)["root"] == pytest.approx(0.5, abs=1e-8)
    assert fr.find_gamma_plus(3, 0.5)["root"] > fr.find_gamma_tilde(3, 0.5)["root"]


def test_field_round_trip_and_directional():
    w = fr.w_gamma(0.8)
    back = fr.field_from_json(w.to_json(2))
    assert back.kind == w.kind
    assert back.value([0.0, 2.0]) == w.value([0.0, 2.0])
    s = 0.4
    expect = fr.normalizing_constant(s) * fr.c_perp(0.8, s)["value"] * 2 ** (-0.8 - 2 * s)
    assert w.directional([0.0, 2.0], [1.0, 0.0], s)["value"] == pytest.approx(expect, rel=1e-8)


def test_search_frame_is_orthonormal():
    r = fr.w_gamma(1.0).extremal_search([0.0, 2.0], 0.5, 1, plus=True, restarts=2)
    frame = r["frame"]
    assert frame.shape == (2, 1)
    assert abs((frame.T @ frame)[0, 0] - 1) < 1e-12


def test_verify_reports():
    rep = fr.verify_singular_supersolution(0.5, -3.0, "ik_minus", 2, frames=10)
    assert rep["verdict"] == "pass"
    assert rep["schema"] == 1
    with pytest.raises(fr.ExponentOutOfRange):
        fr.singular_supersolution(0.5, -0.5, "ik_minus", 2)
