"""Drive the variation operators along a shrinking step schedule and
classify the limit.

Schedules are geometric with power-of-two start and ratio, so every step
is exactly representable and x + eps stays exact for dyadic probe points;
the only rounding left in a difference quotient is the cancellation of
nearby function values.  Traces truncate at a cancellation floor of
1000 ulp of |f(x)| -- below that the difference is rounding noise and
would poison the log-log fit.

The verdict alphabet {Zero, Finite, DivergesPlus, DivergesMinus,
Indeterminate} is exactly the value alphabet of the power-law limit
tables; classification fits log|v| against log(eps) over the last eight
usable samples.
"""

import math
import statistics
from dataclasses import dataclass

from .diffops import backward_diff, forward_diff, second_diff

TAGS = ("Zero", "Finite", "DivergesPlus", "DivergesMinus", "Indeterminate")

_DIFF = {"forward": forward_diff, "backward": backward_diff, "second": second_diff}

CANCELLATION_ULPS = 1e3


class BadSchedule(ValueError):
    pass


class TooFewSamples(ValueError):
    pass


class DualityError(AssertionError):
    pass


class DerivLimitError(AssertionError):
    pass


def _is_pow2(v):
    if not (math.isfinite(v) and v > 0):
        return False
    m, _ = math.frexp(v)
    return m == 0.5


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric step schedule eps_k = eps0 * ratio**k, k = 0..steps-1."""

    eps0: float
    ratio: float = 0.5
    steps: int = 30

    def values(self):
        out = []
        e = self.eps0
        for _ in range(self.steps):
            out.append(e)
            e = e * self.ratio  # exact: both factors are powers of two
        return out


def make_schedule(eps0, ratio=0.5, steps=30):
    """Validated schedule; eps0 and ratio must be powers of two.

    The default construction keeps every step at or above 2**-40; callers
    needing deeper probes (large-threshold divergence checks) may pass a
    larger step count explicitly.
    """
    if not _is_pow2(eps0) or eps0 > 1.0:
        raise BadSchedule(f"eps0 must be a power of two <= 1, got {eps0!r}")
    if not _is_pow2(ratio) or not 0.0 < ratio < 1.0:
        raise BadSchedule(f"ratio must be a power of two in (0,1), got {ratio!r}")
    if steps < 8:
        raise BadSchedule(f"need at least 8 steps, got {steps}")
    smallest = eps0 * ratio ** (steps - 1)
    if smallest < 2.0 ** -1020:
        raise BadSchedule("schedule underflows the normal float range")
    return EpsSchedule(eps0, ratio, steps)


DEFAULT_SCHEDULE = EpsSchedule(2.0 ** -4, 0.5, 30)


@dataclass(frozen=True)
class VariationTrace:
    """Sampled (eps_k, v_k) sequence with truncation diagnostics."""

    eps: tuple
    values: tuple
    x: float
    beta: float
    side: str
    label: str = ""
    truncated: str | None = None     # reason, or None if the schedule ran out
    floor: float = 0.0               # cancellation floor used


def trace(f, x, beta, side, sched=DEFAULT_SCHEDULE):
    """Sample v_k = one-sided variation of f at x along the schedule.

    side is "forward", "backward" or "second" (the latter drives the
    duality hypothesis Delta^2/eps**beta).  Samples stop at the first
    undefined value or when a nonzero difference falls under the
    cancellation floor; exact zeros pass through (a constant function is
    not cancellation).
    """
    diff = _DIFF[side]
    fx = f(x)
    floor = CANCELLATION_ULPS * math.ulp(abs(fx)) if math.isfinite(fx) else 0.0
    eps_out, vals = [], []
    truncated = None
    for e in sched.values():
        num = diff(f, x, e)
        if math.isnan(num):
            truncated = "undefined"
            break
        if num != 0.0 and abs(num) < floor:
            truncated = "cancellation-floor"
            break
        eps_out.append(e)
        vals.append(num / math.pow(e, beta))
    return VariationTrace(tuple(eps_out), tuple(vals), x, beta, side,
                          getattr(f, "label", ""), truncated, floor)


def fit_loglog(eps, vals):
    """Least-squares slope of log|v| vs log(eps); returns (slope, rms)."""
    xs = [math.log(e) for e in eps]
    ys = [math.log(abs(v)) for v in vals]
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(v * v for v in xs)
    sxy = sum(a * b for a, b in zip(xs, ys))
    denom = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / denom
    icept = (sy - slope * sx) / n
    rms = math.sqrt(sum((y - (icept + slope * v)) ** 2
                        for v, y in zip(xs, ys)) / n)
    return slope, rms


@dataclass(frozen=True)
class LimitVerdict:
    """Classified limit of a variation trace.

    slope is d log|v| / d log(eps) over the fit window; it is None when no
    fit was possible (all-zero or infinite tail) and +inf for an exactly
    zero tail, which decays faster than any power.
    """

    tag: str
    value: float | None = None
    slope: float | None = None
    residual: float | None = None
    window: tuple | None = None


TAIL_WINDOW = 8


def classify(t: VariationTrace, slope_tol=0.05, zero_tol=1e-9):
    """Classify the eps -> 0 limit of a trace.

    Positive fitted slope beyond slope_tol means the samples decay (Zero);
    negative means they blow up (Diverges, signed by the tail); a flat
    tail is Finite with the tail median as the value.  Sign flips among
    tail samples larger than zero_tol classify as Indeterminate.
    """
    n = len(t.values)
    if n < 6:
        raise TooFewSamples(f"{n} usable samples (need >= 6)")
    m = min(TAIL_WINDOW, n)
    tail_eps = t.eps[-m:]
    tail = t.values[-m:]

    infs = [v for v in tail if math.isinf(v)]
    if infs:
        if all(v > 0 for v in infs) and math.isinf(tail[-1]):
            return LimitVerdict("DivergesPlus", None, None, None,
                                (tail_eps[-1], tail_eps[0]))
        if all(v < 0 for v in infs) and math.isinf(tail[-1]):
            return LimitVerdict("DivergesMinus", None, None, None,
                                (tail_eps[-1], tail_eps[0]))
        return LimitVerdict("Indeterminate", None, None, None,
                            (tail_eps[-1], tail_eps[0]))

    nonzero = [(e, v) for e, v in zip(tail_eps, tail) if v != 0.0]
    window = (tail_eps[-1], tail_eps[0])
    if not nonzero:
        # identically zero tail: decays faster than any power
        return LimitVerdict("Zero", None, math.inf, None, window)

    significant = [v for _, v in nonzero if abs(v) > zero_tol]
    if significant and any(v > 0 for v in significant) \
            and any(v < 0 for v in significant):
        slope, rms = fit_loglog(*zip(*nonzero))
        return LimitVerdict("Indeterminate", None, slope, rms, window)

    if len(nonzero) < 3:
        return LimitVerdict("Indeterminate", None, None, None, window)

    slope, rms = fit_loglog(*zip(*nonzero))
    if slope > slope_tol:
        return LimitVerdict("Zero", None, slope, rms, window)
    if slope < -slope_tol:
        tag = "DivergesPlus" if nonzero[-1][1] > 0 else "DivergesMinus"
        return LimitVerdict(tag, None, slope, rms, window)
    return LimitVerdict("Finite", statistics.median(tail), slope, rms, window)


def duality_check(f, x, beta, sched=DEFAULT_SCHEDULE,
                  slope_tol=0.05, zero_tol=1e-9):
    """Classify forward, backward and second-difference traces at x.

    When the forward limit exists (Zero or Finite) and the second
    difference trace classifies Zero, the forward and backward verdicts
    must agree; Finite values must agree within 10 * zero_tol.  Violations
    raise DualityError.  If the hypothesis fails (e.g. a kink), the triple
    is returned without any assertion.
    """
    fwd = classify(trace(f, x, beta, "forward", sched), slope_tol, zero_tol)
    bwd = classify(trace(f, x, beta, "backward", sched), slope_tol, zero_tol)
    snd = classify(trace(f, x, beta, "second", sched), slope_tol, zero_tol)
    if fwd.tag in ("Zero", "Finite") and snd.tag == "Zero":
        if fwd.tag != bwd.tag:
            raise DualityError(f"forward {fwd.tag} vs backward {bwd.tag} at x={x}")
        if fwd.tag == "Finite":
            gap = abs(fwd.value - bwd.value)
            if gap > 10.0 * zero_tol:
                raise DualityError(f"finite values differ by {gap:.3e} at x={x}")
    return fwd, bwd, snd


def deriv_limit_check(f, fprime, x, beta, sched=DEFAULT_SCHEDULE):
    """Check the C^1 limit law against a supplied derivative.

    Compares v_k with (1/beta) * eps**(1-beta) * f'(x+eps) over the tail
    window and checks the gap shrinks along it; for beta = 1 additionally
    checks the Finite verdict value equals f'(x) to 1e-6 relative.
    Returns the maximum tail gap.
    """
    t = trace(f, x, beta, "forward", sched)
    n = len(t.values)
    if n < 6:
        raise TooFewSamples(f"{n} usable samples (need >= 6)")
    m = min(TAIL_WINDOW, n)
    gaps = []
    for e, v in zip(t.eps[-m:], t.values[-m:]):
        target = (1.0 / beta) * math.pow(e, 1.0 - beta) * fprime(x + e)
        gaps.append(abs(v - target))
    scale = max(abs(v) for v in t.values[-m:])
    if not (gaps[-1] < gaps[0] or gaps[-1] <= 1e-12 * max(scale, 1.0)):
        raise DerivLimitError(
            f"gap did not shrink along the tail: {gaps[0]:.3e} -> {gaps[-1]:.3e}")
    if beta == 1.0:
        verdict = classify(t)
        want = fprime(x)
        if verdict.tag != "Finite" or abs(verdict.value - want) > 1e-6 * abs(want):
            raise DerivLimitError(
                f"beta=1 verdict {verdict} does not match f'(x)={want}")
    return max(gaps)
