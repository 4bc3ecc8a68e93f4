"""Acceptance suite: one test per criterion, one printed line per verdict.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines live;
without -s they still appear for any failing criterion.
"""

import functools
import math
import time

import numpy as np
import pytest

import fracvarlab as fl
from fracvarlab.deltalab import (DeltaSeqSpec, ScaleSubstitution,
                                 cauchy_prototype, delta_eval,
                                 delta_map_integral, delta_scaling_check,
                                 fracvar_delta_exact, s_eps_scan,
                                 scale_derivative)
from fracvarlab.expr import CallableFunction, parse_function
from fracvarlab.exponents import singular_variation_classify, verify_power_table
from fracvarlab.fracvar import (compound_residuals, compound_tolerance,
                                fracvar_minus, fracvar_plus,
                                linearity_residual, linearity_tolerance,
                                translation_commutator)
from fracvarlab.diffops import backward_diff, forward_diff, second_diff
from fracvarlab.limits import classify, duality_check, make_schedule, trace
from fracvarlab.singular import comb_scan

from conftest import bits_equal, dyadic

STD = make_schedule(2.0 ** -4, 0.5, 30)


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] {name}: FAIL")
                raise
            print(f"[acceptance] {name}: PASS")
        return wrapper
    return deco


@criterion("C1 table-1 reproduction")
def test_c1_table1():
    t0 = time.perf_counter()
    rep = verify_power_table("pow", [0.3, 0.5, 0.7, 1.0, 1.5],
                             [0.3, 0.5, 0.7, 1.0], [0.0, 0.5, -0.5], STD)
    elapsed = time.perf_counter() - t0
    assert rep.ok, rep.mismatches
    assert len(rep.rows) == 60
    assert elapsed < 5.0, f"table 1 took {elapsed:.2f}s"


@criterion("C2 table-2 reproduction")
def test_c2_table2():
    t0 = time.perf_counter()
    rep = verify_power_table("powneg", [0.3, 0.7], [0.5, 1.0],
                             [0.0, 0.5, -0.5], STD)
    elapsed = time.perf_counter() - t0
    assert rep.ok, rep.mismatches
    assert elapsed < 2.0, f"table 2 took {elapsed:.2f}s"


@criterion("C3 vanishing variation")
def test_c3_vanishing_variation():
    rng = np.random.default_rng(11)
    ranges = {"sin(x)": (0.2, 1.2), "exp(x)": (-1.0, 1.0), "x^3": (0.4, 1.5)}
    for text, (lo, hi) in ranges.items():
        f = parse_function(text)
        for beta in (0.3, 0.7):
            for _ in range(10):
                x = dyadic(rng, lo, hi)
                v = classify(trace(f, x, beta, "forward", STD))
                assert v.tag == "Zero", (text, beta, x, v)
                assert abs(v.slope - (1.0 - beta)) <= 0.05


@criterion("C4 operator identity suite (10^4 random cases)")
def test_c4_operator_identities():
    rng = np.random.default_rng(1234)
    zoo = [parse_function(s) for s in
           ("sin(x)", "cos(x)", "exp(x)", "x^2", "powabs(x, 0.5)",
            "1/(1+x^2)", "x^3 - x")]
    comp_fs = [parse_function(s) for s in
               ("x*x", "exp(x)", "sin(x)", "sqrt(x)", "x^3")]
    comp_ys = [(parse_function("2*x + 3"), 0.0, 1.0),
               (parse_function("x^3"), 0.5, 1.5),
               (parse_function("exp(x)"), 0.0, 1.0),
               (parse_function("x + sin(x)/2 + 2"), 0.0, 1.0)]
    dyadic_consts = [1.0, 2.0, 4.0, 8.0, 0.5, -1.0, -2.0, -4.0, -0.5]
    for case in range(10_000):
        f = zoo[int(rng.integers(len(zoo)))]
        x = dyadic(rng, -2.0, 2.0)
        e = 2.0 ** -int(rng.integers(4, 21))
        b = float(rng.uniform(0.05, 1.0))

        # second difference composes from the one-sided operators, bitwise
        snd = second_diff(f, x, e)
        assert bits_equal(snd, forward_diff(f, x, e) - backward_diff(f, x, e))
        assert bits_equal(snd, backward_diff(f, x + e, e) - backward_diff(f, x, e))

        # left/right mapping, bitwise
        assert bits_equal(fracvar_minus(f, x, e, b),
                          fracvar_plus(f, x - e, e, b))

        # translation commutator, exactly zero
        assert translation_commutator(f, x, e, b, "forward") == 0.0

        # linearity within 2 ulp of the largest term
        g = zoo[int(rng.integers(len(zoo)))]
        K = dyadic_consts[int(rng.integers(len(dyadic_consts)))]
        M = float(rng.uniform(-8.0, 8.0))
        r = linearity_residual(f, g, K, M, x, e, b)
        assert r <= linearity_tolerance(f, g, K, M, x, e, b), \
            (f.label, g.label, K, M, x, e, b, r)

        # compound variation: all three residuals within 8 ulp of the lhs
        cf = comp_fs[int(rng.integers(len(comp_fs)))]
        cy, lo, hi = comp_ys[int(rng.integers(len(comp_ys)))]
        cx = dyadic(rng, lo, hi)
        ce = 2.0 ** -int(rng.integers(10, 19))
        alpha = float(rng.uniform(0.25, 2.0))
        res = compound_residuals(cf, cy, cx, ce, alpha, b)
        tol = compound_tolerance(cf, cy, cx, ce, b)
        assert max(res) <= tol, (cf.label, cy.label, cx, ce, alpha, b, res, tol)


@criterion("C5 duality on random smooth cases")
def test_c5_duality():
    rng = np.random.default_rng(42)
    sched = make_schedule(2.0 ** -4, 0.5, 23)
    finite_cases = 0
    # 60 generic smooth cases at beta < 1 (verdicts Zero on both sides)
    for i in range(60):
        text = ["sin(x)", "exp(x)", "x^3 + x", "1/(1+x^2)"][i % 4]
        beta = [0.3, 0.5, 0.7][i % 3]
        x = dyadic(rng, 0.1, 0.9)
        fwd, bwd, snd = duality_check(parse_function(text), x, beta, sched)
        assert snd.tag == "Zero"
        assert fwd.tag == bwd.tag == "Zero"
    # 40 beta = 1 cases: the duality of one-sided derivatives; curvature
    # is kept small so the finite-step bias f''*eps sits below the 1e-8
    # agreement tolerance (duality_check enforces 10 * zero_tol)
    for _ in range(40):
        slope_c = float(rng.integers(1, 9)) / 4.0
        curv = round(float(rng.uniform(0.001, 0.005)), 6)
        x = dyadic(rng, -1.0, 1.0, bits=18)
        f = parse_function(f"{slope_c!r}*x + {curv!r}*sin(x)")
        fwd, bwd, snd = duality_check(f, x, 1.0, sched)
        assert snd.tag == "Zero"
        assert fwd.tag == bwd.tag == "Finite"
        assert abs(fwd.value - bwd.value) <= 1e-8
        finite_cases += 1
    assert finite_cases == 40


@criterion("C6 singular trichotomy")
def test_c6_trichotomy():
    deep = make_schedule(2.0 ** -4, 0.5, 140)
    for gamma in (0.2, 0.5, 0.8):
        f = parse_function(f"powabs(x, {gamma!r})")
        fp = parse_function(f"{gamma!r} * powabs(x, {gamma - 1.0!r})")
        alpha = 1.0 - gamma  # P[f'] at 0, so |1 - alpha| = gamma
        below = max(gamma - 0.15, 0.02)
        above = min(gamma + 0.4, 0.95)
        got = (singular_variation_classify(f, fp, 0.0, below, STD, alpha=alpha),
               singular_variation_classify(f, fp, 0.0, gamma, STD, alpha=alpha),
               singular_variation_classify(f, fp, 0.0, above, deep, alpha=alpha))
        assert got == ("Zero", "Finite", "Unbounded"), (gamma, got)


@criterion("C7 delta-sequence exactness and shell scaling")
def test_c7_delta_exactness():
    rng = np.random.default_rng(7)
    for kind in ("rectangular", "triangular"):
        for n in range(4, 17):
            spec = DeltaSeqSpec(kind, n)
            eps = spec.scale()
            beta = float(rng.choice([0.0, 0.3, 0.5, 0.8, 1.0]))
            p = math.pow(eps, beta)
            xs = np.concatenate([
                rng.uniform(-3 * eps, 3 * eps, 10_000 - 8),
                [-2 * eps, -eps, -eps / 2, 0.0, eps / 2, eps, 1.5 * eps, 2 * eps],
            ])
            for x in xs:
                x = float(x)
                brute = (delta_eval(spec, x + eps) - delta_eval(spec, x)) / p
                assert bits_equal(fracvar_delta_exact(spec, x, beta), brute), \
                    (kind, n, x / eps, beta)
    for beta in (0.0, 0.5, 1.0):
        for kind in ("rectangular", "triangular"):
            slope = delta_scaling_check(kind, beta, range(4, 21))
            assert abs(slope + (1.0 + beta)) <= 0.02


@criterion("C8 s/eps-limit scan")
def test_c8_s_eps():
    proto = cauchy_prototype()
    for beta in (0.3, 0.5, 0.8):
        slope, admissible = s_eps_scan(proto, ScaleSubstitution(1.0, 1.0, beta),
                                       STD)
        assert abs(slope + (1.0 + beta)) <= 0.05
        assert admissible
    for beta in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9):
        p_star = (1.0 - beta) / 2.0
        lo, _ = s_eps_scan(proto, ScaleSubstitution(p_star - 0.05, 1.0, beta), STD)
        hi, _ = s_eps_scan(proto, ScaleSubstitution(p_star + 0.05, 1.0, beta), STD)
        assert lo > 0.0 > hi, (beta, lo, hi)  # flip brackets the frontier


@criterion("C9 comb detection")
def test_c9_comb():
    pitch = math.pi / 64
    t0 = time.perf_counter()
    tan_rep = comb_scan(parse_function("tan(x)"), 0.0, 2 * math.pi, pitch,
                        0.5, STD)
    cot_rep = comb_scan(parse_function("cot(x)"), 0.1, 2 * math.pi, pitch,
                        0.5, STD)
    elapsed = time.perf_counter() - t0
    assert len(tan_rep.points) == 2
    assert abs(tan_rep.points[0] - math.pi / 2) < math.pi / 128
    assert abs(tan_rep.points[1] - 3 * math.pi / 2) < math.pi / 128
    assert len(cot_rep.points) == 2
    assert abs(cot_rep.points[0] - math.pi) < math.pi / 128
    assert abs(cot_rep.points[1] - 2 * math.pi) < math.pi / 128
    assert tan_rep.background_zero_fraction >= 0.95
    assert cot_rep.background_zero_fraction >= 0.95
    assert elapsed < 10.0, f"comb scans took {elapsed:.2f}s"


@criterion("C10 scaling and delta maps")
def test_c10_maps():
    proto = cauchy_prototype()
    assert delta_map_integral(proto, 2.0, 20, -1.0, 1.0) \
        == pytest.approx(1.0, abs=1e-3)
    assert delta_map_integral(proto, 2.0, 20, 0.5, 1.0) \
        == pytest.approx(0.0, abs=1e-3)
    hat = CallableFunction(lambda x: max(0.0, 1.0 - abs(x)), label="hat")
    for psi, d_plus, d_minus in ((hat, 1.0, -1.0), (proto.psi, 0.0, 0.0)):
        assert scale_derivative(psi, 0.3, STD).tag == "Zero"
        at0 = scale_derivative(psi, 0.0, STD, d_plus, d_minus)
        assert at0.tag == "Finite" and at0.value == 0.0
