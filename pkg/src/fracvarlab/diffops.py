"""Forward/backward/second difference operators, translation, and sign.

All operators return extended reals in-band: NaN means undefined (outside
the declared domain, or indeterminate arithmetic such as inf - inf).  The
second difference is computed as forward(x) - backward(x), which makes the
composition identity with the one-sided operators hold bitwise whenever
x + eps and x - eps are exact.
"""

import math

from .expr import ExprFunction, RealFunction, TranslatedFunction

_NAN = float("nan")


class UndefinedSign(ValueError):
    pass


def _value(f, t):
    dom = getattr(f, "domain", None)
    if dom is not None and not dom.contains(t):
        return _NAN
    return f(t)


def forward_diff(f, x, eps):
    """f(x + eps) - f(x); NaN when either point is undefined."""
    return _value(f, x + eps) - _value(f, x)


def backward_diff(f, x, eps):
    """f(x) - f(x - eps)."""
    return _value(f, x) - _value(f, x - eps)


def second_diff(f, x, eps):
    """Second symmetric difference f(x+eps) - 2 f(x) + f(x-eps).

    Evaluated as forward - backward so that the composition identity is an
    identity of float operations, not only of real numbers.
    """
    return forward_diff(f, x, eps) - backward_diff(f, x, eps)


def translate(f, shift):
    """New function g with g(x) = f(x + shift), domain shifted to match.

    Expression-backed functions get the shift compiled into their program;
    anything else is wrapped.  Either way the argument is computed as
    (x + shift) so translated evaluations agree bitwise with direct calls.
    """
    if isinstance(f, ExprFunction):
        return f.translated(shift)
    if isinstance(f, RealFunction):
        return TranslatedFunction(f, shift)
    return TranslatedFunction(_as_function(f), shift)


def _as_function(f):
    from .expr import CallableFunction
    return f if isinstance(f, RealFunction) else CallableFunction(f)


def sign_of(v):
    """+1 for v >= 0 (including +inf and -0.0), -1 for v < 0.

    sign(0) = +1 by definition.  Undefined input raises UndefinedSign.
    """
    if math.isnan(v):
        raise UndefinedSign("sign of an undefined value")
    return 1 if v >= 0 else -1
