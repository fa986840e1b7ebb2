import math

import numpy as np
import pytest

from g2lab.quadrature import tanh_sinh, tanh_sinh_rule


def test_polynomial():
    val = tanh_sinh(lambda x, da, db: x**3 - x, 0.0, 2.0)
    assert val == pytest.approx(2.0, abs=1e-13)


def test_endpoint_singularities():
    # int_0^1 x^{-1/2} (1-x)^{-1/2} dx = pi
    val = tanh_sinh(lambda x, da, db: 1 / np.sqrt(da * db), 0.0, 1.0, level=7)
    assert val == pytest.approx(math.pi, rel=1e-12)
    val = tanh_sinh(lambda x, da, db: np.log(da), 0.0, 1.0)
    assert val == pytest.approx(-1.0, rel=1e-12)


def test_batched_limits_and_error():
    a = np.array([0.0, 1.0])
    b = np.array([1.0, 3.0])
    val, err = tanh_sinh(lambda x, da, db: np.ones_like(x), a, b, with_error=True)
    assert np.allclose(val, [1.0, 2.0], atol=1e-13)
    assert np.all(err < 1e-10)


def test_rule_distances_positive():
    op, om, w = tanh_sinh_rule(6)
    assert np.all(op > 0) and np.all(om > 0) and np.all(w > 0)
    assert np.allclose(op + om, 2.0)
    assert w.sum() == pytest.approx(2.0, abs=1e-12)
