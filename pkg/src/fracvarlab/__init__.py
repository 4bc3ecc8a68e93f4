"""fracvarlab: a numerical laboratory for fractal variation operators.

Core surface: parse expressions into evaluatable functions, apply the
one-sided variation operators along shrinking step schedules, classify
the limits, estimate scaling exponents, and scan intervals for
delta-comb divergences.
"""

from .backend import HAVE_COMPILED, backend_name
from .diffops import (UndefinedSign, backward_diff, forward_diff, second_diff,
                      sign_of, translate)
from .expr import (ParseError, RealFunction, UnknownIdentifier, eval_expr,
                   parse, parse_function, to_text)
from .exponents import (ExponentEstimate, PowerLawSpec, critical_exponent,
                        holder_exponent, predict_power_verdict,
                        singular_variation_classify, verify_power_table)
from .fracvar import (compound_residuals, fracvar_minus, fracvar_plus,
                      linearity_residual, operator_form_residual,
                      translation_commutator)
from .limits import (DEFAULT_SCHEDULE, EpsSchedule, LimitVerdict,
                     VariationTrace, classify, deriv_limit_check,
                     duality_check, make_schedule, trace)
from .deltalab import (DeltaSeqSpec, ScaleSubstitution, SmoothPrototype,
                       cauchy_prototype, delta_eval, delta_map_integral,
                       delta_scaling_check, fracvar_delta_exact, s_eps_scan,
                       scale_derivative, scaling_map_iterate, smooth_extremum,
                       unit_pulse_check)
from .singular import CombReport, comb_scan, singular_variation_order_check

__version__ = "0.1.0"
