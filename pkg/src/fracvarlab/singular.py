"""Delta-comb detection: scan an interval for points where the fractal
variation diverges (poles of tan, cot, ...) against a Zero background.

Grid points falling within one pitch of a listed pole are probed with the
coupled offset x = pole - eps_k (the step doubles as the approach
distance); the pole itself evaluates to a huge finite value in float
arithmetic, so the coupled difference quotient diverges like eps**-beta.
Smooth grid points classify Zero by the vanishing-variation law.
"""

import math
from dataclasses import dataclass

from .exponents import NotSingular
from .fracvar import fracvar_plus
from .limits import (DEFAULT_SCHEDULE, TAIL_WINDOW, VariationTrace, classify,
                     fit_loglog, trace)


class BadPitch(ValueError):
    pass


class CombCheckError(AssertionError):
    pass


@dataclass(frozen=True)
class GridVerdict:
    x: float            # grid slot
    probe_x: float      # where the trace actually probed (pole when snapped)
    tag: str
    slope: float | None
    tail_mag: float     # max |v| over the tail window


@dataclass(frozen=True)
class CombReport:
    points: tuple               # detected singular points, sorted
    point_verdicts: tuple       # DivergesPlus / DivergesMinus per point
    background_zero_fraction: float
    grid: tuple                 # GridVerdict per slot


def _coupled_trace(f, pole, beta, sched):
    es, vs = [], []
    for e in sched.values():
        v = fracvar_plus(f, pole - e, e, beta)
        if math.isnan(v):
            break
        es.append(e)
        vs.append(v)
    return VariationTrace(tuple(es), tuple(vs), pole, beta, "forward",
                          getattr(f, "label", ""))


def _tail_mag(t):
    tail = t.values[-min(TAIL_WINDOW, len(t.values)):]
    finite = [abs(v) for v in tail if not math.isnan(v)]
    return max(finite) if finite else 0.0


def comb_scan(f, lo, hi, pitch, beta, sched=DEFAULT_SCHEDULE,
              slope_tol=0.05, zero_tol=1e-9):
    """Classify the forward variation across a grid and report divergences.

    Consecutive divergent grid slots merge into one detection located at
    the probe point with the largest tail magnitude (a pole contaminates
    a few neighbours at finite eps).
    """
    if not pitch > 0.0:
        raise BadPitch(f"pitch must be positive, got {pitch}")
    if not beta < 1.0:
        raise ValueError(f"comb scan needs beta < 1, got {beta}")
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")

    dom = getattr(f, "domain", None)
    poles = dom.poles_in(lo, hi) if dom is not None else []

    slots = []
    x = lo
    i = 0
    while x <= hi + 1e-12 * pitch:
        probe, snapped = x, False
        if poles:
            nearest = min(poles, key=lambda p: abs(p - x))
            if abs(nearest - x) < pitch:
                probe, snapped = nearest, True
        if snapped:
            t = _coupled_trace(f, probe, beta, sched)
        else:
            t = trace(f, x, beta, "forward", sched)
        verdict = classify(t, slope_tol, zero_tol)
        slots.append(GridVerdict(x, probe, verdict.tag, verdict.slope,
                                 _tail_mag(t)))
        i += 1
        x = lo + i * pitch

    detected, verdicts = [], []
    cluster = []
    for s in slots + [None]:
        if s is not None and s.tag in ("DivergesPlus", "DivergesMinus"):
            cluster.append(s)
            continue
        if cluster:
            best = max(cluster, key=lambda g: g.tail_mag)
            detected.append(best.probe_x)
            verdicts.append(best.tag)
            cluster = []
    zero_fraction = sum(1 for s in slots if s.tag == "Zero") / len(slots)
    return CombReport(tuple(detected), tuple(verdicts), zero_fraction,
                      tuple(slots))


def singular_variation_order_check(f, x_s, alpha, beta,
                                        sched=DEFAULT_SCHEDULE):
    """Delta-order scaling at a two-sided singularity of f itself.

    At the coupled probe x = x_s + eps the variation magnitude must grow
    one power faster than the pole: fitted slope of log|v| against
    log(eps) equal to -(alpha + beta) within 0.05.  Requires
    alpha + beta > 1 (otherwise the comb coefficient order is not
    positive).  Returns the fitted slope.
    """
    if not alpha + beta > 1.0:
        raise NotSingular(
            f"need alpha + beta > 1, got {alpha} + {beta} = {alpha + beta}")
    es, vs = [], []
    for e in sched.values():
        v = fracvar_plus(f, x_s + e, e, beta)
        if math.isnan(v) or math.isinf(v) or v == 0.0:
            continue
        es.append(e)
        vs.append(v)
    if len(es) < 6:
        raise NotSingular(f"only {len(es)} usable samples near {x_s}")
    slope, _ = fit_loglog(es, vs)
    if abs(slope + (alpha + beta)) > 0.05:
        raise CombCheckError(
            f"coupled slope {slope:.4f} is not -(alpha+beta) = "
            f"{-(alpha + beta)}")
    return slope
