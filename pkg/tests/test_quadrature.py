"""Adaptive nested-Gauss quadrature."""

import math

import pytest

from fracvarlab.quadrature import QuadratureFailure, integrate


def test_polynomial_exact():
    val, err = integrate(lambda x: x * x, 0.0, 1.0)
    assert val == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert err <= 1e-9


def test_sine_lobe():
    val, _ = integrate(math.sin, 0.0, math.pi)
    assert val == pytest.approx(2.0, abs=1e-12)


def test_kink_resolved():
    val, _ = integrate(abs, -1.0, 2.0)
    assert val == pytest.approx(2.5, abs=1e-9)
    val, _ = integrate(abs, -1.0, 2.0, tol=1e-12)
    assert val == pytest.approx(2.5, abs=1e-12)


def test_cauchy_wide_interval():
    f = lambda x: 1.0 / (math.pi * (1.0 + x * x))
    val, err = integrate(f, -4e8, 4e8, tol=1e-9)
    assert err <= 1e-9
    # exact mass minus the analytic tails beyond the cut
    tails = 1.0 - 2.0 / math.pi * math.atan(4e8)
    assert val == pytest.approx(1.0 - tails, rel=1e-9)


def test_narrow_peak():
    s = 2.0 ** -20
    f = lambda x: (1.0 / s) / (math.pi * (1.0 + (x / s) ** 2))
    val, _ = integrate(f, -1.0, 1.0, tol=1e-9)
    assert val == pytest.approx(1.0 - (1.0 - 2.0 / math.pi * math.atan(1.0 / s)),
                                rel=1e-8)


def test_failures():
    with pytest.raises(QuadratureFailure):
        integrate(lambda x: float("nan"), 0.0, 1.0)
    with pytest.raises(QuadratureFailure):
        integrate(math.sin, 1.0, 1.0)
    with pytest.raises(QuadratureFailure):
        # pole inside goes non-finite once refinement reaches it
        from fracvarlab.expr import parse_function
        integrate(parse_function("powabs(x - 0.5, -1)"), 0.0, 1.0)
    with pytest.raises(QuadratureFailure):
        # steep near-singular integrand under a tiny interval budget
        integrate(lambda x: 1.0 / (abs(x - 1.0 / 3.0) + 1e-30), 0.0, 1.0,
                  max_intervals=50)
