"""Pure-Python stack machine for compiled expression programs.

This is the fallback twin of the Cython kernel in ``_evalcore.pyx``.  Both
execute the same opcode stream with the same operation order, and both call
the platform libm (``math`` here, ``libc.math`` there), so results agree
bitwise between backends.  Python's ``math`` raises where C99 returns an
IEEE special value; the wrappers below restore the C semantics.
"""

import math

import numpy as np

# Opcode values shared with the C kernel; PUSH_CONST is followed by an
# index into the constant table.
OP_CONST = 0
OP_X = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_POW = 7
OP_POWABS = 8
OP_ABS = 9
OP_SIGN = 10
OP_SIN = 11
OP_COS = 12
OP_TAN = 13
OP_COT = 14
OP_EXP = 15
OP_LOG = 16
OP_SQRT = 17
OP_SETX = 18

_NAN = float("nan")
_INF = float("inf")


def _is_odd_int(y):
    return y == math.floor(y) and math.fmod(y, 2.0) != 0.0


def c_pow(b, e):
    """C99 pow(): never raises, returns IEEE specials in-band."""
    if b == 0.0 and e < 0.0:
        # pow(+-0, -odd) = +-inf, else +inf (divide-by-zero branch of C99)
        if math.isfinite(e) and _is_odd_int(e) and math.copysign(1.0, b) < 0:
            return -_INF
        return _INF
    try:
        return math.pow(b, e)
    except ValueError:
        # negative finite base with non-integer exponent
        return _NAN
    except OverflowError:
        if b < 0.0 and _is_odd_int(e):
            return -_INF
        return _INF


def c_log(v):
    if v > 0.0:
        return math.log(v)
    if v == 0.0:
        return -_INF
    return _NAN  # negative or nan


def c_exp(v):
    try:
        return math.exp(v)
    except OverflowError:
        return _INF


def c_sqrt(v):
    if v >= 0.0:  # includes -0.0 and +inf
        return math.sqrt(v)
    return _NAN  # negative or nan


def c_sign(v):
    """+1 for v >= 0 (including +inf), -1 for v < 0; nan propagates."""
    if math.isnan(v):
        return _NAN
    return 1.0 if v >= 0.0 else -1.0


def _native(seq):
    # np arrays -> native int/float lists; np scalars would warn on inf-inf
    return seq.tolist() if hasattr(seq, "tolist") else list(seq)


def eval_program(code, consts, x):
    """Run one program at a scalar point; returns a float (nan = undefined)."""
    return _run_program(_native(code), _native(consts), x)


def _run_program(code, consts, x):
    stack = [0.0] * 32
    sp = 0
    n = len(code)
    i = 0
    while i < n:
        op = code[i]
        if op == OP_CONST:
            i += 1
            stack[sp] = consts[code[i]]
            sp += 1
        elif op == OP_X:
            stack[sp] = x
            sp += 1
        elif op == OP_ADD:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif op == OP_SUB:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif op == OP_MUL:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif op == OP_DIV:
            sp -= 1
            b = stack[sp]
            a = stack[sp - 1]
            if b == 0.0:
                if a == 0.0 or math.isnan(a) or math.isnan(b):
                    stack[sp - 1] = _NAN
                else:
                    stack[sp - 1] = math.copysign(_INF, a) * math.copysign(1.0, b)
            else:
                stack[sp - 1] = a / b
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_POW:
            sp -= 1
            stack[sp - 1] = c_pow(stack[sp - 1], stack[sp])
        elif op == OP_POWABS:
            sp -= 1
            stack[sp - 1] = c_pow(abs(stack[sp - 1]), stack[sp])
        elif op == OP_ABS:
            stack[sp - 1] = abs(stack[sp - 1])
        elif op == OP_SIGN:
            stack[sp - 1] = c_sign(stack[sp - 1])
        elif op == OP_SIN:
            stack[sp - 1] = math.sin(stack[sp - 1]) if math.isfinite(stack[sp - 1]) else _NAN
        elif op == OP_COS:
            stack[sp - 1] = math.cos(stack[sp - 1]) if math.isfinite(stack[sp - 1]) else _NAN
        elif op == OP_TAN:
            stack[sp - 1] = math.tan(stack[sp - 1]) if math.isfinite(stack[sp - 1]) else _NAN
        elif op == OP_COT:
            v = stack[sp - 1]
            if math.isfinite(v):
                t = math.tan(v)
                if t == 0.0:
                    stack[sp - 1] = math.copysign(_INF, t)
                else:
                    stack[sp - 1] = 1.0 / t
            else:
                stack[sp - 1] = _NAN
        elif op == OP_EXP:
            stack[sp - 1] = c_exp(stack[sp - 1])
        elif op == OP_LOG:
            stack[sp - 1] = c_log(stack[sp - 1])
        elif op == OP_SQRT:
            stack[sp - 1] = c_sqrt(stack[sp - 1])
        elif op == OP_SETX:
            sp -= 1
            x = stack[sp]
        else:
            raise ValueError(f"bad opcode {op}")
        i += 1
    return stack[0]


def eval_program_many(code, consts, xs):
    """Run one program over an array of points."""
    code = _native(code)
    consts = _native(consts)
    out = np.empty(len(xs), dtype=np.float64)
    for j, x in enumerate(xs):
        out[j] = _run_program(code, consts, float(x))
    return out
