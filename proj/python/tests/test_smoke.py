import math

import numpy as np
import pytest

import henonlab


def test_semi_parabolic_fixed_point():
    f = henonlab.semi_parabolic_map(0.5)
    assert f.c == pytest.approx(0.0625)
    fps = f.fixed_points()
    parabolic = [p for p in fps if p["semi_parabolic"]]
    assert len(parabolic) == 1
    z, w = parabolic[0]["location"]
    assert z == pytest.approx(0.25) and w == pytest.approx(0.25)


def test_forward_inverse_round_trip():
    f = henonlab.HenonMap(0.3 + 0.1j, 0.5)
    z, w = f.inverse(*f.forward(0.2 - 0.4j, 0.7j))
    assert abs(z - (0.2 - 0.4j)) < 1e-14 and abs(w - 0.7j) < 1e-14


def test_green_functional_equation():
    f = henonlab.semi_parabolic_map(0.5)
    p = (1.5 + 0.5j, 0.3)
    assert henonlab.green(f, *f.forward(*p)) == pytest.approx(2 * henonlab.green(f, *p), rel=1e-9)
    assert henonlab.green(f, 0.25, 0.25) == 0.0


def test_green_slice_shape_and_workers():
    f = henonlab.semi_parabolic_map(0.5)
    a = henonlab.green_slice(f, [-2, 2, -2, 2], 12, 8, workers=1)
    b = henonlab.green_slice(f, [-2, 2, -2, 2], 12, 8, workers=2)
    assert a.shape == (8, 12)
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        henonlab.green_slice(f, [1, 0, 0, 1], 4, 4)


def test_horn_map_commutes_with_translation():
    h = henonlab.HornMap(henonlab.semi_parabolic_map(0.5))
    z = 0.3 + 3.0j
    hz, hz1 = h(z), h(z + 1)
    assert hz is not None and hz1 is not None
    assert abs(hz1 - hz - 1) < 1e-9


def test_alpha_epsilon_and_bowen():
    eps = henonlab.alpha_epsilon(0.25, 40)
    assert 40 - math.pi / eps == pytest.approx(0.25, abs=1e-12)
    assert henonlab.uniform_bowen(3, 1 / 9) == pytest.approx(0.5, abs=1e-10)


def test_box_dimension_of_square():
    rng = np.random.default_rng(1)
    r = henonlab.box_dimension(rng.random((200_000, 2)), 5)
    assert r["slope"] == pytest.approx(2.0, abs=0.1)


def test_shoot_quadratic():
    r = henonlab.shoot_quadratic(-2.1, 0.0, 1, 2.0)
    assert r["converged"]
    assert abs(r["parameter"] + 2) < 1e-8
