import math

import pytest

from doubletwist.errors import QuadratureFailure
from doubletwist.quadrature import adaptive_gk, composite_simpson


def test_smooth_integral():
    r = adaptive_gk(math.sin, 0, math.pi, tol=1e-12)
    assert r.value == pytest.approx(2.0, abs=1e-13)
    assert r.error < 1e-12


def test_endpoint_singularity():
    r = adaptive_gk(math.sqrt, 0, 1, tol=1e-10)
    assert abs(r.value - 2 / 3) < 1e-10


def test_log_singularity():
    r = adaptive_gk(lambda t: math.log(t) if t > 0 else 0.0, 0, 1, tol=1e-9)
    assert abs(r.value + 1) < 1e-8


def test_empty_interval():
    assert adaptive_gk(math.exp, 1.0, 1.0).value == 0.0


def test_interval_budget():
    with pytest.raises(QuadratureFailure):
        adaptive_gk(lambda t: math.sin(1 / t) if t else 0.0, 0, 1, tol=1e-14, max_intervals=10)


def test_simpson_polynomial_exact():
    assert composite_simpson(lambda t: t**3 - t, 0, 2, n=4) == pytest.approx(2.0, abs=1e-14)
    # odd panel counts are rounded up
    assert composite_simpson(math.exp, 0, 1, n=201) == pytest.approx(math.e - 1, abs=1e-11)
