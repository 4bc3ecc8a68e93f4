"""Comb scanning and the coupled delta-order scaling check."""

import math

import pytest

from fracvarlab.diffops import translate
from fracvarlab.expr import parse_function
from fracvarlab.exponents import NotSingular
from fracvarlab.singular import (BadPitch, comb_scan,
                                 singular_variation_order_check)

PITCH = math.pi / 64


def test_comb_tan(std_sched):
    rep = comb_scan(parse_function("tan(x)"), 0.0, 2 * math.pi, PITCH, 0.5,
                    std_sched)
    assert len(rep.points) == 2
    assert abs(rep.points[0] - math.pi / 2) < PITCH / 2
    assert abs(rep.points[1] - 3 * math.pi / 2) < PITCH / 2
    assert rep.background_zero_fraction >= 0.95
    assert all(t in ("DivergesPlus", "DivergesMinus") for t in rep.point_verdicts)


def test_comb_cot(std_sched):
    rep = comb_scan(parse_function("cot(x)"), 0.1, 2 * math.pi, PITCH, 0.5,
                    std_sched)
    assert len(rep.points) == 2
    assert abs(rep.points[0] - math.pi) < PITCH / 2
    assert abs(rep.points[1] - 2 * math.pi) < PITCH / 2
    assert rep.background_zero_fraction >= 0.95


def test_comb_smooth_functions(std_sched):
    for text in ("sin(x)", "exp(x)"):
        rep = comb_scan(parse_function(text), 0.0, 6.0, PITCH, 0.5, std_sched)
        assert rep.points == ()
        assert rep.background_zero_fraction == 1.0


def test_comb_translation_invariance(std_sched):
    base = comb_scan(parse_function("tan(x)"), 0.0, 2 * math.pi, PITCH, 0.5,
                     std_sched)
    shifted = comb_scan(parse_function("tan(x - 0.5)"), 0.5,
                        2 * math.pi + 0.5, PITCH, 0.5, std_sched)
    assert len(base.points) == len(shifted.points)
    for p, q in zip(base.points, shifted.points):
        assert abs((q - p) - 0.5) < PITCH / 2


def test_comb_beta_independent_detections(std_sched):
    pts = None
    for beta in (0.2, 0.5, 0.8):
        rep = comb_scan(parse_function("tan(x)"), 0.0, 2 * math.pi, PITCH,
                        beta, std_sched)
        got = tuple(round(p, 6) for p in rep.points)
        assert pts is None or got == pts
        pts = got


def test_comb_detections_separated(std_sched):
    rep = comb_scan(parse_function("tan(x)"), 0.0, 2 * math.pi, PITCH, 0.5,
                    std_sched)
    assert all(b - a > PITCH for a, b in zip(rep.points, rep.points[1:]))


def test_comb_rejects():
    f = parse_function("tan(x)")
    with pytest.raises(BadPitch):
        comb_scan(f, 0.0, 1.0, -0.5, 0.5)
    with pytest.raises(ValueError):
        comb_scan(f, 0.0, 1.0, 0.1, 1.0)  # beta must be < 1


def test_singular_order_slopes(std_sched):
    # oracle: v = (|2 eps|^-a - |eps|^-a) / eps^b on the coupled probe,
    # a pure power with exponent -(a + b)
    f1 = translate(parse_function("powabs(x, -0.5)"), -1.0)  # |x-1|^-0.5
    slope = singular_variation_order_check(f1, 1.0, 0.5, 0.7, std_sched)
    assert abs(slope + 1.2) <= 0.05
    f2 = parse_function("powabs(x, -1)")
    slope = singular_variation_order_check(f2, 0.0, 1.0, 0.5, std_sched)
    assert abs(slope + 1.5) <= 0.05


def test_singular_order_oracle_agreement(std_sched):
    from fracvarlab.limits import fit_loglog
    es = std_sched.values()
    oracle = [(math.pow(2 * e, -0.5) - math.pow(e, -0.5)) / math.pow(e, 0.7)
              for e in es]
    slope, _ = fit_loglog(es, oracle)
    f = translate(parse_function("powabs(x, -0.5)"), -1.0)
    got = singular_variation_order_check(f, 1.0, 0.5, 0.7, std_sched)
    assert got == pytest.approx(slope, abs=1e-9)


def test_singular_order_precondition():
    f = parse_function("powabs(x, -0.3)")
    with pytest.raises(NotSingular):
        singular_variation_order_check(f, 0.0, 0.3, 0.5)  # a+b <= 1
