"""Fractal variation operators and their exact finite-step identities.

The one-sided variation of order beta is the one-sided difference divided
by eps**beta.  Everything here is exact algebra at finite eps, so the
residual helpers return float re-association errors that tests pin to a
few ulp.  eps**beta is computed by a single pow() call in every code path,
which is what makes the bitwise identities (left/right mapping,
translation commutation) hold exactly.
"""

import math

from .diffops import backward_diff, forward_diff, translate

_NAN = float("nan")


class NonFiniteInput(ValueError):
    pass


class DegenerateEta(ValueError):
    pass


class NegativeBase(ValueError):
    pass


def fracvar_plus(f, x, eps, beta):
    """Forward variation: (f(x+eps) - f(x)) / eps**beta."""
    return forward_diff(f, x, eps) / math.pow(eps, beta)


def fracvar_minus(f, x, eps, beta):
    """Backward variation: (f(x) - f(x-eps)) / eps**beta."""
    return backward_diff(f, x, eps) / math.pow(eps, beta)


def operator_form_residual(f, x, eps, beta):
    """Residuals of the operator forms against the defining quotients.

    The plus form regroups the same subtraction (translation minus
    identity); the minus form flips the subtraction and the sign.  Both
    residuals are exactly zero in IEEE arithmetic, which the tests assert
    bitwise.
    """
    fwd = fracvar_plus(f, x, eps, beta)
    bwd = fracvar_minus(f, x, eps, beta)
    p = math.pow(eps, beta)
    t_plus = (f(x + eps) - f(x)) / p
    t_minus = (f(x - eps) - f(x)) / p
    if not (math.isfinite(fwd) and math.isfinite(bwd)
            and math.isfinite(t_plus) and math.isfinite(t_minus)):
        raise NonFiniteInput("operator form needs finite samples")
    return abs(fwd - t_plus), abs(bwd + t_minus)


def linearity_residual(f, g, K, M, x, eps, beta):
    """|v[K f + M g] - (K v[f] + M v[g])| for the forward operator.

    The bound the tests use is 2 ulp of the largest pre-division summand
    K*f(.) or M*g(.), rescaled by eps**-beta: the residual comes from
    re-associating those products before the difference cancels them down.
    """
    p = math.pow(eps, beta)
    fa, fb = f(x + eps), f(x)
    ga, gb = g(x + eps), g(x)
    combined = ((K * fa + M * ga) - (K * fb + M * gb)) / p
    split = K * ((fa - fb) / p) + M * ((ga - gb) / p)
    if not (math.isfinite(combined) and math.isfinite(split)):
        raise NonFiniteInput("linearity residual needs finite samples")
    return abs(combined - split)


def linearity_tolerance(f, g, K, M, x, eps, beta):
    """2 ulp of the largest term entering the linear combination,
    rescaled by the operator's eps**-beta (the residual is pure float
    re-association of those terms before the difference cancels them)."""
    fa, fb = f(x + eps), f(x)
    ga, gb = g(x + eps), g(x)
    big = max(abs(K * fa), abs(K * fb), abs(M * ga), abs(M * gb),
              abs(K * fa + M * ga), abs(K * fb + M * gb), 1e-300)
    return 2.0 * math.ulp(big) / math.pow(eps, beta)


def translation_commutator(f, x, eps, beta, side="forward"):
    """|v[T_eps f](x) - T_eps[v f](x)|; exactly zero bitwise.

    Both routes evaluate f at the same shifted points in the same order,
    so commutation is inherited from the commutativity of float addition
    of identical operands.
    """
    shifted = translate(f, eps)
    if side == "forward":
        lhs = fracvar_plus(shifted, x, eps, beta)
        rhs = fracvar_plus(f, x + eps, eps, beta)
    else:
        lhs = fracvar_minus(shifted, x, eps, beta)
        rhs = fracvar_minus(f, x + eps, eps, beta)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise NonFiniteInput("commutator needs finite samples")
    return abs(lhs - rhs)


def compound_residuals(f, y, x, eps, alpha, beta):
    """Residuals of the three compound-variation identities.

    For a composition f(y(x)) with eta = y(x+eps) - y(x) != 0:

      general form:  v_beta[f o y](x) = v_alpha^{eta}[f](y) *
                                        (v_1[y](x))**alpha * eps**(alpha-beta)
      chain form:    ... = v_1^{eta}[f](y) * v_beta[y](x)
      matched form:  ... = v_beta^{eta}[f](y) * (v_1[y](x))**beta

    All three are algebraic identities at finite eps; the returned absolute
    residuals stay within a few ulp of the left side when y is strictly
    increasing on [x, x+eps] (fractional powers need eta > 0).
    """
    yb = y(x)
    ya = y(x + eps)
    eta = ya - yb
    if eta == 0.0:
        raise DegenerateEta("y(x+eps) == y(x)")
    if eta < 0.0:
        raise NegativeBase("fractional power of a negative increment")
    lhs = (f(ya) - f(yb)) / math.pow(eps, beta)
    fa = f(yb + eta)   # == f(ya) bitwise when eta is exact (Sterbenz range)
    fb = f(yb)
    slope1 = eta / eps                       # v_1[y](x)
    v_f_alpha = (fa - fb) / math.pow(eta, alpha)
    v_f_one = (fa - fb) / eta
    v_f_beta = (fa - fb) / math.pow(eta, beta)
    # eps**(alpha-beta) as a quotient of pows: rounding alpha-beta first
    # would be amplified by |log eps| (many ulp for deep steps)
    eps_pow = math.pow(eps, alpha) / math.pow(eps, beta)
    general = v_f_alpha * math.pow(slope1, alpha) * eps_pow
    chain = v_f_one * (eta / math.pow(eps, beta))
    matched = v_f_beta * math.pow(slope1, beta)
    for v in (lhs, general, chain, matched):
        if not math.isfinite(v):
            raise NonFiniteInput("compound residual needs finite samples")
    return abs(lhs - general), abs(lhs - chain), abs(lhs - matched)


def compound_tolerance(f, y, x, eps, beta, ulps=8):
    """ulps * ulp(|lhs|) for the compound identity checks."""
    yb = y(x)
    lhs = (f(y(x + eps)) - f(yb)) / math.pow(eps, beta)
    return ulps * math.ulp(max(abs(lhs), 1e-300))
