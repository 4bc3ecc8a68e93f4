"""Scaling exponents: pointwise Hoelder estimation, one-sided critical
exponents of poles, the analytic power-law verdict tables, and the
singular-variation trichotomy.

The analytic tables cover g(x) = |s*x - x0|^(+alpha) and |s*x - x0|^(-alpha):
at the center the forward variation is a pure power eps**(alpha-beta)
(resp. exactly -inf), away from it the function is C^1 and the smooth
limit law applies.  predict_power_verdict follows those closed forms; the
empirical classifier must land on the same cell values.
"""

import math
from dataclasses import dataclass

from .diffops import forward_diff
from .fracvar import fracvar_minus, fracvar_plus
from .limits import (DEFAULT_SCHEDULE, CANCELLATION_ULPS, TooFewSamples,
                     VariationTrace, classify, fit_loglog, trace)
from .expr import parse_function


class LocallyConstant(ValueError):
    pass


class NotSingular(ValueError):
    pass


class TrichotomyMismatch(AssertionError):
    pass


class ShallowSchedule(ValueError):
    """Divergence seen but the 1e6 unboundedness bar was not reached."""


@dataclass(frozen=True)
class ExponentEstimate:
    alpha: float
    residual: float
    window: tuple            # (smallest, largest) step used in the fit
    side: str                # left | right | symmetric
    bounded: bool = False    # true when the probe saw no singularity


@dataclass(frozen=True)
class PowerLawSpec:
    """The family |s*x - x0| ** (sign * alpha), alpha > 0."""

    alpha: float
    sign: int = 1
    x0: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def function(self):
        expo = self.alpha if self.sign > 0 else -self.alpha
        if self.scale == 1.0 and self.x0 == 0.0:
            return parse_function(f"powabs(x, {expo!r})")
        return parse_function(f"powabs({self.scale!r} * x - {self.x0!r}, {expo!r})")

    def center(self):
        return self.x0 / self.scale


def holder_exponent(f, x, sched=DEFAULT_SCHEDULE):
    """Pointwise regularity: slope of log|forward difference| vs log(eps).

    Samples stop at the first undefined difference or at the cancellation
    floor; exact zeros are skipped in the fit.  All differences zero means
    the function is locally constant, which has no exponent.
    """
    fx = f(x)
    floor = CANCELLATION_ULPS * math.ulp(abs(fx)) if math.isfinite(fx) else 0.0
    es, ds = [], []
    for e in sched.values():
        d = forward_diff(f, x, e)
        if math.isnan(d):
            break
        if d != 0.0 and abs(d) < floor:
            break
        if d != 0.0 and math.isfinite(d):
            es.append(e)
            ds.append(d)
    if not es:
        raise LocallyConstant(f"all differences vanish at x={x}")
    if len(es) < 6:
        raise TooFewSamples(f"{len(es)} usable samples (need >= 6)")
    slope, rms = fit_loglog(es, ds)
    return ExponentEstimate(slope, rms, (es[-1], es[0]), "right")


def critical_exponent(g, x_s, side, sched=DEFAULT_SCHEDULE):
    """Pole strength at x_s: alpha with g(x_s -+ h) ~ C * h**-alpha.

    side="left" probes x_s - h (approach from below), side="right" probes
    x_s + h.  A bounded function yields a non-positive estimate, which is
    reported as alpha = 0 with the bounded flag set.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    sgn = -1.0 if side == "left" else 1.0
    hs, vs = [], []
    for h in sched.values():
        v = g(x_s + sgn * h)
        if math.isnan(v) or math.isinf(v) or v == 0.0:
            continue
        hs.append(h)
        vs.append(v)
    if len(hs) < 6:
        raise TooFewSamples(f"{len(hs)} usable samples (need >= 6)")
    slope, rms = fit_loglog(hs, vs)
    alpha = -slope
    window = (hs[-1], hs[0])
    if alpha < 0.01:
        return ExponentEstimate(0.0, rms, window, side, bounded=True)
    return ExponentEstimate(alpha, rms, window, side)


def _smooth_deriv(spec, x):
    """f'(x) of the power family away from the center (u != 0)."""
    u = spec.scale * x - spec.x0
    expo = spec.alpha if spec.sign > 0 else -spec.alpha
    return spec.scale * expo * math.copysign(1.0, u) * math.pow(abs(u), expo - 1.0)


def predict_power_verdict(spec, beta, x):
    """Analytic limit-table entry for the power family at probe point x.

    Returns (tag, value) with value set only for Finite cells.  At the
    center: eps**(alpha-beta) scaling for the +alpha family (value
    scale**alpha when alpha == beta) and an exact -inf trace for the
    -alpha family.  Away from the center the function is C^1, so beta < 1
    vanishes, beta == 1 gives f'(x), beta > 1 diverges with the sign of
    f'(x).
    """
    at_center = (x == spec.center())
    if spec.sign > 0:
        if at_center:
            if spec.alpha > beta:
                return "Zero", None
            if spec.alpha == beta:
                return "Finite", math.pow(spec.scale, spec.alpha)
            return "DivergesPlus", None
        if beta < 1.0:
            return "Zero", None
        d = _smooth_deriv(spec, x)
        if beta == 1.0:
            return "Finite", d
        return ("DivergesPlus" if d > 0 else "DivergesMinus"), None
    # negative-exponent family
    if at_center:
        return "DivergesMinus", None
    if beta < 1.0:
        return "Zero", None
    d = _smooth_deriv(spec, x)
    if beta == 1.0:
        return "Finite", d
    return ("DivergesPlus" if d > 0 else "DivergesMinus"), None


@dataclass(frozen=True)
class CellResult:
    alpha: float
    beta: float
    x: float
    predicted: str
    observed: str
    value: float | None
    slope: float | None
    match: bool


@dataclass(frozen=True)
class TableReport:
    rows: tuple

    @property
    def mismatches(self):
        return [r for r in self.rows if not r.match]

    @property
    def ok(self):
        return not self.mismatches


REL_VALUE_TOL = 1e-6


def verify_power_table(family, alphas, betas, xs, sched=DEFAULT_SCHEDULE,
                       slope_tol=0.05, zero_tol=1e-9):
    """Empirically reproduce the limit table on a grid of cells.

    family is "pow" (|x|^alpha) or "powneg" (|x|^-alpha).  Each cell runs
    a forward trace, classifies it, and compares tag (and Finite value to
    1e-6 relative) against the analytic prediction.
    """
    sign = 1 if family == "pow" else -1
    rows = []
    for alpha in alphas:
        spec = PowerLawSpec(alpha, sign)
        f = spec.function()
        for beta in betas:
            for x in xs:
                predicted, pvalue = predict_power_verdict(spec, beta, x)
                verdict = classify(trace(f, x, beta, "forward", sched),
                                   slope_tol, zero_tol)
                match = verdict.tag == predicted
                if match and predicted == "Finite":
                    match = abs(verdict.value - pvalue) <= REL_VALUE_TOL * abs(pvalue)
                rows.append(CellResult(alpha, beta, x, predicted, verdict.tag,
                                       verdict.value, verdict.slope, match))
    return TableReport(tuple(rows))


UNBOUNDED_MAGNITUDE = 1e6


def singular_variation_classify(f, fprime, x_s, beta, sched=DEFAULT_SCHEDULE,
                                alpha=None, side="left", slope_tol=0.05,
                                away_offset=0.5):
    """Trichotomy of the coupled one-sided variation approaching x_s.

    The probe point rides the step (x = x_s -+ eps_k), matching the
    coupled limit in the singular-variation statements.  alpha is the
    critical exponent of f' at x_s; pass the analytic value when testing
    the measure-zero equality cell beta == |1 - alpha|, otherwise it is
    estimated from fprime.  Returns "Zero", "Finite" or "Unbounded" and
    raises TrichotomyMismatch if the observed verdict contradicts the
    predicted regime.  Unless away_offset is None, the variation one
    offset away from x_s is also required to classify Zero.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must be in [0, 1), got {beta}")
    if alpha is None:
        est = critical_exponent(fprime, x_s, side, sched)
        if est.bounded:
            raise NotSingular(f"f' shows no singularity at {x_s}")
        alpha = est.alpha

    if away_offset is not None:
        sgn_away = -1.0 if side == "left" else 1.0
        away = classify(trace(f, x_s + sgn_away * away_offset, beta,
                              "forward", sched), slope_tol)
        if away.tag != "Zero":
            raise TrichotomyMismatch(
                f"expected Zero away from the singular point, got {away.tag}")

    sgn = -1.0 if side == "left" else 1.0
    es, vs = [], []
    for e in sched.values():
        probe = x_s + sgn * e
        v = (fracvar_plus(f, probe, e, beta) if side == "left"
             else fracvar_minus(f, probe, e, beta))
        if math.isnan(v):
            break
        es.append(e)
        vs.append(v)
    t = VariationTrace(tuple(es), tuple(vs), x_s, beta, side,
                       getattr(f, "label", ""))
    verdict = classify(t, slope_tol)
    if verdict.tag == "Zero":
        observed = "Zero"
    elif verdict.tag == "Finite":
        observed = "Finite"
    elif verdict.tag in ("DivergesPlus", "DivergesMinus"):
        tail = [abs(v) for v in vs[-8:] if not math.isnan(v)]
        if max(tail) <= UNBOUNDED_MAGNITUDE:
            raise ShallowSchedule(
                f"diverging trace peaked at {max(tail):.3e} < 1e6; "
                "use a deeper schedule to certify unboundedness")
        observed = "Unbounded"
    else:
        observed = verdict.tag

    threshold = abs(1.0 - alpha)
    gap = beta - threshold
    # the equality cell is analytic; a few ulp absorb the float round trip
    # beta == |1 - (1 - beta)| without letting estimated alphas (error
    # ~1e-3) ever land in the band
    if abs(gap) <= 4.0 * math.ulp(max(threshold, beta)):
        expected = "Finite"
    else:
        expected = "Zero" if gap < 0.0 else "Unbounded"
    if observed != expected:
        raise TrichotomyMismatch(
            f"beta={beta}, |1-alpha|={abs(1 - alpha)}: expected {expected}, "
            f"observed {observed}")
    return observed
