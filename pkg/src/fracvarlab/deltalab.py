"""Delta sequences and their fractal variation.

Covers the rectangular and triangular unit-mass pulses with the exact
piecewise value of their forward variation at the sequence's own step,
smooth kernel prototypes (Cauchy by default), the coupled s/eps scan with
its admissible-exponent frontier, the unit pulse limit, the scaling and
delta maps, and the scale derivative.

The closed-form variation values come from a support case analysis of
delta_n(x) and delta_n(x + eps_n).  The nonzero shells sit on
(-2*eps, -eps] and [0, eps) and carry sign -sign(x) with magnitude scaling
eps**-(beta+1); each branch below states its algebraic value and computes
it with the same float operations the differenced evaluation performs, so
the two routes agree bitwise.
"""

import math
from dataclasses import dataclass

from .diffops import translate
from .expr import ALL_REALS, ExprFunction, RealFunction, ScaledFunction, parse_function
from .limits import (DEFAULT_SCHEDULE, LimitVerdict, TooFewSamples,
                     VariationTrace, classify, fit_loglog, trace)
from .quadrature import QuadratureFailure, integrate

KINDS = ("rectangular", "triangular", "smooth")


class BadOrder(ValueError):
    pass


class BadPrototype(ValueError):
    pass


class BadSpec(ValueError):
    pass


class DeltaCheckError(AssertionError):
    pass


# ------------------------------------------------------------- sequences

@dataclass(frozen=True)
class DeltaSeqSpec:
    """One member of a delta sequence: scale u0 * 2**-n, unit integral."""

    kind: str
    n: int
    u0: float = 1.0
    proto: "SmoothPrototype | None" = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadSpec(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 < self.u0 < 2.0:
            raise BadSpec(f"u0 must lie in (0, 2), got {self.u0}")
        if self.n < 1:
            raise BadSpec(f"n must be >= 1, got {self.n}")
        if self.kind == "smooth":
            if self.proto is None:
                raise BadSpec("smooth kind needs a prototype")
            if self.scale() > 1.0:
                raise BadSpec("smooth kind needs s_1 <= 1, lower u0")

    def scale(self):
        return self.u0 * 2.0 ** -self.n


def delta_eval(spec, x):
    """Value of the n-th sequence member at x.

    rectangular: 1/(2 eps) inside |x| < eps, else 0
    triangular:  1/eps - |x|/eps^2 inside, else 0 (two signed branches)
    smooth:      (1/s) psi(x/s)
    """
    eps = spec.scale()
    if spec.kind == "rectangular":
        return 0.0 if abs(x) >= eps else 1.0 / (2.0 * eps)
    if spec.kind == "triangular":
        if abs(x) >= eps:
            return 0.0
        if x >= 0.0:
            return 1.0 / eps - x / (eps * eps)
        return 1.0 / eps + x / (eps * eps)
    return (1.0 / eps) * spec.proto.psi(x / eps)


@dataclass(frozen=True, repr=False)
class DeltaSequence(RealFunction):
    """RealFunction view of a sequence member (for traces and scans)."""

    spec: DeltaSeqSpec
    domain = ALL_REALS

    def __call__(self, x):
        return delta_eval(self.spec, x)

    @property
    def label(self):
        return f"delta[{self.spec.kind}, n={self.spec.n}]"


def fracvar_delta_exact(spec, x, beta):
    """Closed-form forward variation of a pulse at its own step eps_n.

    Support case analysis (eps = eps_n, t = x + eps):
      x and t outside (-eps, eps)        -> 0
      t inside,  x outside: x in (-2*eps, -eps]   -> +delta(t)/eps**beta
      both inside: x in (-eps, 0)        -> rectangular 0 (constant level),
                                            triangular (delta(t)-delta(x))/eps**beta
      x inside,  t outside: x in [0, eps) -> -delta(x)/eps**beta
    i.e. the printed shells are (-2*eps, -eps] and [0, eps): magnitude
    1/(2 eps**(beta+1)) on the rectangular shells, sign always -sign(x).
    Branch expressions repeat the evaluator's float operations exactly.
    """
    if spec.kind == "smooth":
        raise BadSpec("closed form exists for the rectangular and "
                      "triangular kinds only")
    if beta > 1.0:
        raise BadOrder(f"closed form stated for beta <= 1, got {beta}")
    eps = spec.scale()
    p = math.pow(eps, beta)
    t = x + eps
    x_in = abs(x) < eps
    t_in = abs(t) < eps
    if spec.kind == "rectangular":
        c = 1.0 / (2.0 * eps)
        if t_in and not x_in:
            return c / p                # value +1/(2 eps**(beta+1))
        if x_in and not t_in:
            return (0.0 - c) / p        # value -1/(2 eps**(beta+1))
        return 0.0                      # both inside cancel, both outside 0
    # triangular: piecewise linear on the shells, same eps**-(beta+1) scale
    ee = eps * eps
    a = (1.0 / eps - t / ee) if t >= 0.0 else (1.0 / eps + t / ee)
    b = (1.0 / eps - x / ee) if x >= 0.0 else (1.0 / eps + x / ee)
    if t_in and not x_in:
        return a / p                    # ramp-up shell, algebra (t fixed sign)
    if x_in and not t_in:
        return (0.0 - b) / p            # ramp-down shell
    if x_in and t_in:
        return (a - b) / p              # interior: -(2x + eps)/eps^2 scaled
    return 0.0


def delta_scaling_check(kind, beta, n_range, u0=1.0):
    """Fit log|variation| against log(eps_n) at the tracked shell point.

    The shell point is x_n = eps_n / 2 (positive shell).  Returns the
    fitted slope; raises DeltaCheckError unless the slope is -(beta+1)
    within 0.02 and every shell value carries sign -sign(x_n) = -1.
    """
    ns = list(n_range)
    if len(ns) < 6:
        raise TooFewSamples(f"{len(ns)} sequence members (need >= 6)")
    es, vs = [], []
    for n in ns:
        spec = DeltaSeqSpec(kind, n, u0)
        eps = spec.scale()
        v = fracvar_delta_exact(spec, eps / 2.0, beta)
        if not v < 0.0:
            raise DeltaCheckError(
                f"shell value {v} at n={n} is not -sign(x) for x > 0")
        es.append(eps)
        vs.append(v)
    slope, _ = fit_loglog(es, vs)
    if abs(slope + (beta + 1.0)) > 0.02:
        raise DeltaCheckError(
            f"shell slope {slope:.4f} differs from -(1+beta) = {-(1 + beta)}")
    return slope


# ------------------------------------------------------------- prototypes

@dataclass(frozen=True, repr=False)
class CauchyKernel(RealFunction):
    """psi(x) = 1 / (pi (1 + x^2)): unit mass, even, 1/x^2 tails."""

    domain = ALL_REALS
    label = "cauchy"

    def __call__(self, x):
        return 1.0 / (math.pi * (1.0 + x * x))


@dataclass(frozen=True)
class SmoothPrototype:
    """Smooth kernel psi with its origin curvatures b = psi''(0), c = psi''''(0)."""

    psi: RealFunction
    b: float
    c: float
    label: str = "psi"


def cauchy_prototype():
    """Default prototype: the Cauchy kernel, b = -2/pi, c = 24/pi."""
    return SmoothPrototype(CauchyKernel(), -2.0 / math.pi, 24.0 / math.pi,
                           "cauchy")


def validate_prototype(proto, tail_cut=4e8, quad_tol=1e-9):
    """Check the prototype contract: unit mass (quadrature to 1e-8), even
    symmetry, positive at the origin, monotone decay with ~1/x^2 tails,
    b < 0 with b and c of opposite signs."""
    if not proto.b < 0.0:
        raise BadPrototype(f"psi''(0) must be negative, got {proto.b}")
    if not proto.c > 0.0:
        raise BadPrototype(f"psi''''(0) must be positive (opposite sign), "
                           f"got {proto.c}")
    psi = proto.psi
    if not psi(0.0) > 0.0:
        raise BadPrototype("psi must be positive at the origin")
    for x in (0.25, 0.5, 1.0, 2.0, 5.0, 17.0):
        if psi(x) != psi(-x):
            raise BadPrototype(f"psi is not even at x={x}")
    grid = [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 17.0, 100.0]
    for a, b in zip(grid, grid[1:]):
        if not psi(b) < psi(a):
            raise BadPrototype(f"psi does not decay between {a} and {b}")
    for big in (100.0, 1000.0):
        ratio = psi(2.0 * big) / psi(big)
        if not 0.15 < ratio < 0.4:
            raise BadPrototype(f"tail is not ~1/x^2 near {big} (ratio {ratio})")
    mass, _ = integrate(psi, -tail_cut, tail_cut, tol=quad_tol)
    if abs(mass - 1.0) > 1e-8:
        raise BadPrototype(f"psi mass {mass!r} differs from 1 beyond 1e-8")
    return True


def smooth_extremum(proto, s):
    """Location x_m and Taylor value of f'(x_m) for f = (1/s) psi(x/s).

    From the quartic origin expansion: x_m = sqrt(-2b/c) * s on the
    positive side and f'(x_m) = (2b / (3 s^2)) sqrt(-2b/c).
    """
    if not (proto.b < 0.0 and proto.c > 0.0):
        raise BadPrototype("need b < 0 and c > 0")
    root = math.sqrt(-2.0 * proto.b / proto.c)
    x_m = root * s
    fprime = (2.0 * proto.b / (3.0 * s * s)) * root
    return x_m, fprime


# ------------------------------------------------------------- s/eps scan

@dataclass(frozen=True)
class ScaleSubstitution:
    """Coupling s = k * eps**p; admissible iff p > (1 - beta) / 2."""

    p: float
    k: float
    beta: float

    def __post_init__(self):
        if not self.k > 0.0:
            raise BadSpec(f"prefactor k must be positive, got {self.k}")

    @property
    def admissible(self):
        return self.p > (1.0 - self.beta) / 2.0


def seps_expansion_terms(proto, sub):
    """Coefficients and exponents of the three-term expansion of the
    forward variation at the positive extremum under s = k eps**p:

        c1 eps**(1-2p-beta) + c2 eps**(3-4p-beta) + c3 eps**(4-5p-beta)

    with c1 = 2 b m / (3 k^2), c2 = c m / (6 k^4), c3 = c / (24 k^5) and
    m = sqrt(-2b/c).  (Differencing the quartic model removes the eps^2
    order exactly; for p = 1 all three exponents collapse to -(1+beta).)
    """
    b, c, k, p, beta = proto.b, proto.c, sub.k, sub.p, sub.beta
    m = math.sqrt(-2.0 * b / c)
    coeffs = (2.0 * b * m / (3.0 * k * k),
              c * m / (6.0 * k ** 4),
              c / (24.0 * k ** 5))
    expos = (1.0 - 2.0 * p - beta,
             3.0 - 4.0 * p - beta,
             4.0 - 5.0 * p - beta)
    return coeffs, expos


def seps_expansion_value(proto, sub, eps):
    coeffs, expos = seps_expansion_terms(proto, sub)
    return sum(ci * math.pow(eps, ei) for ci, ei in zip(coeffs, expos))


def seps_direct_value(proto, sub, eps):
    """Direct forward variation of f = (1/s) psi(x/s) at the positive
    extremum, with s = k eps**p (no Taylor truncation)."""
    s = sub.k * math.pow(eps, sub.p)
    x_m, _ = smooth_extremum(proto, s)
    fa = (1.0 / s) * proto.psi((x_m + eps) / s)
    fb = (1.0 / s) * proto.psi(x_m / s)
    return (fa - fb) / math.pow(eps, sub.beta)


def taylor_model(proto, s):
    """Quartic origin model of the scaled kernel (the expansion's f)."""

    def model(x):
        u2 = (x / s) * (x / s)
        return (1.0 / s) * (proto.psi(0.0) + 0.5 * proto.b * u2
                            + proto.c * u2 * u2 / 24.0)

    return model


def s_eps_scan(proto, sub, sched=DEFAULT_SCHEDULE):
    """Slope of the three-term expansion along the schedule + admissibility.

    For p = 1, k = 1 the three exponents coincide and the slope must be
    -(1 + beta) within 0.05 (raises DeltaCheckError otherwise).  Returns
    (slope, admissible).
    """
    if not (proto.b < 0.0 and proto.c > 0.0):
        raise BadPrototype("need b < 0 and c > 0")
    es = sched.values()
    vs = [seps_expansion_value(proto, sub, e) for e in es]
    pairs = [(e, v) for e, v in zip(es, vs) if v != 0.0 and math.isfinite(v)]
    if len(pairs) < 6:
        raise TooFewSamples(f"{len(pairs)} usable samples (need >= 6)")
    tail = pairs[-min(8, len(pairs)):]
    slope, _ = fit_loglog(*zip(*tail))
    if sub.p == 1.0 and sub.k == 1.0:
        if abs(slope + (1.0 + sub.beta)) > 0.05:
            raise DeltaCheckError(
                f"p=1 scan slope {slope:.4f} is not -(1+beta) = "
                f"{-(1.0 + sub.beta)}")
    return slope, sub.admissible


# ------------------------------------------------------------- unit pulse

def unit_pulse_check(alpha, x0, sched=DEFAULT_SCHEDULE, offsets=(-0.25, 0.25)):
    """The variation of |x - x0|^alpha at order alpha realizes the unit
    pulse: Finite(1) at x0, Zero elsewhere.  Returns the verdicts; raises
    DeltaCheckError on violation."""
    if not 0.0 < alpha < 1.0:
        raise BadSpec(f"alpha must lie in (0, 1), got {alpha}")
    f = translate(parse_function(f"powabs(x, {alpha!r})"), -x0)
    center = classify(trace(f, x0, alpha, "forward", sched))
    if center.tag != "Finite" or abs(center.value - 1.0) > 1e-9:
        raise DeltaCheckError(f"expected Finite(1) at the pulse, got {center}")
    away = {}
    for off in offsets:
        v = classify(trace(f, x0 + off, alpha, "forward", sched))
        if v.tag != "Zero":
            raise DeltaCheckError(f"expected Zero at offset {off}, got {v}")
        away[off] = v
    return {"center": center, "away": away}


# ------------------------------------------------------------- scale maps

def scaling_map_iterate(f, a, n, delta_map=False):
    """n-fold scaling map: x -> f(a**n x); with delta_map=True the delta
    map variant x -> a**n f(a**n x)."""
    if not a > 0.0:
        raise BadSpec(f"scale a must be positive, got {a}")
    if n < 0:
        raise BadSpec(f"iteration count must be >= 0, got {n}")
    factor = math.pow(a, n)
    out = factor if delta_map else 1.0
    if isinstance(f, ExprFunction):
        g = f.arg_scaled(factor)
        return g.out_scaled(factor) if delta_map else g
    return ScaledFunction(f, factor, out)


def delta_map_integral(proto, a, n, x, y, tol=1e-9):
    """integral over [x, y] of a**n psi(a**n t) dt by adaptive quadrature.

    Checks the delta-map limit where the scale separation allows it:
    toward 1 when 0 is inside [x, y], toward 0 when the rescaled distance
    a**n * min(|x|, |y|) exceeds 1e3 (tolerance 1e-3 each way).  Raises
    QuadratureFailure when the quadrature error bound exceeds 1e-6.
    """
    if not a > 1.0:
        raise BadSpec(f"need a > 1, got {a}")
    if not x < y:
        raise BadSpec(f"need x < y, got [{x}, {y}]")
    g = scaling_map_iterate(proto.psi, a, n, delta_map=True)
    value, err = integrate(g, x, y, tol=tol)
    if err > 1e-6:
        raise QuadratureFailure(f"error bound {err:.3e} exceeds 1e-6")
    if x <= 0.0 <= y:
        if abs(value - 1.0) > 1e-3:
            raise DeltaCheckError(
                f"mass over an origin interval is {value!r}, expected 1")
    elif math.pow(a, n) * min(abs(x), abs(y)) > 1e3:
        if abs(value) > 1e-3:
            raise DeltaCheckError(
                f"mass away from the origin is {value!r}, expected 0")
    return value


def scale_derivative(psi, z, a_sched=DEFAULT_SCHEDULE,
                     d_plus=None, d_minus=None):
    """Classify the central scale-difference [psi((z + a^2/2)/a) -
    psi((z - a^2/2)/a)] / a along a -> 0.

    Expected: Zero off the origin; at z = 0 the limit is the mean of the
    one-sided slopes.  A symmetric kernel makes the quotient identically
    zero at z = 0; that trace is reported as Finite(0) since the limit
    value is attained exactly at every sample.  When the caller supplies
    the analytic one-sided derivatives they are checked against the
    Finite value.
    """
    es, vs = [], []
    for a in a_sched.values():
        h = a * a / 2.0   # exact for power-of-two a
        hi_val = psi((z + h) / a)
        lo_val = psi((z - h) / a)
        num = hi_val - lo_val
        if math.isnan(num):
            break
        # cancellation floor: below ~1000 ulp the difference is rounding
        # noise of the two kernel values, not scale structure
        floor = 1e3 * math.ulp(max(abs(hi_val), abs(lo_val)))
        if num != 0.0 and abs(num) < floor:
            break
        es.append(a)
        vs.append(num / a)
    t = VariationTrace(tuple(es), tuple(vs), z, 1.0, "scale",
                       getattr(psi, "label", ""))
    if z == 0.0 and vs and all(v == 0.0 for v in vs):
        verdict = LimitVerdict("Finite", 0.0, None, None, None)
    else:
        verdict = classify(t)
    if z == 0.0 and d_plus is not None and d_minus is not None:
        want = 0.5 * (d_plus + d_minus)
        if verdict.tag != "Finite" or abs(verdict.value - want) > 1e-6:
            raise DeltaCheckError(
                f"scale derivative at 0 is {verdict}, expected Finite({want})")
    return verdict
