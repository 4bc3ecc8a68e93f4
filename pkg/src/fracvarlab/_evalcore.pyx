# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stack machine for expression programs.

Opcode stream and operation order are identical to ``_evalcore_py``; both
kernels call the platform libm, so they produce bitwise-equal results.
cdivision=True gives C float division (x/0 -> inf, IEEE semantics).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport (cos, exp, fabs, isfinite, isnan, log, pow, sin, sqrt,
                        tan)

cnp.import_array()

cdef enum:
    STACK_MAX = 32

cdef enum:
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

cdef double NAN_VAL = float("nan")


cdef inline double _run(const int* code, Py_ssize_t n, const double* consts,
                        double x) noexcept nogil:
    cdef double stack[STACK_MAX]
    cdef Py_ssize_t sp = 0, i = 0
    cdef int op
    cdef double v, t
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
            stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_POW:
            sp -= 1
            stack[sp - 1] = pow(stack[sp - 1], stack[sp])
        elif op == OP_POWABS:
            sp -= 1
            stack[sp - 1] = pow(fabs(stack[sp - 1]), stack[sp])
        elif op == OP_ABS:
            stack[sp - 1] = fabs(stack[sp - 1])
        elif op == OP_SIGN:
            v = stack[sp - 1]
            if isnan(v):
                stack[sp - 1] = NAN_VAL
            elif v >= 0.0:
                stack[sp - 1] = 1.0
            else:
                stack[sp - 1] = -1.0
        elif op == OP_SIN:
            stack[sp - 1] = sin(stack[sp - 1])
        elif op == OP_COS:
            stack[sp - 1] = cos(stack[sp - 1])
        elif op == OP_TAN:
            stack[sp - 1] = tan(stack[sp - 1])
        elif op == OP_COT:
            v = stack[sp - 1]
            if isfinite(v):
                t = tan(v)
                stack[sp - 1] = 1.0 / t
            else:
                stack[sp - 1] = NAN_VAL
        elif op == OP_EXP:
            stack[sp - 1] = exp(stack[sp - 1])
        elif op == OP_LOG:
            stack[sp - 1] = log(stack[sp - 1])
        elif op == OP_SQRT:
            stack[sp - 1] = sqrt(stack[sp - 1])
        elif op == OP_SETX:
            sp -= 1
            x = stack[sp]
        i += 1
    return stack[0]


def eval_program(code, consts, double x):
    """Run one program at a scalar point; returns a float (nan = undefined)."""
    cdef int[::1] c = np.ascontiguousarray(code, dtype=np.intc)
    cdef double[::1] k = np.ascontiguousarray(consts, dtype=np.float64)
    cdef const double* kp = &k[0] if k.shape[0] > 0 else NULL
    return _run(&c[0], c.shape[0], kp, x)


def eval_program_many(code, consts, xs):
    """Run one program over an array of points."""
    cdef int[::1] c = np.ascontiguousarray(code, dtype=np.intc)
    cdef double[::1] k = np.ascontiguousarray(consts, dtype=np.float64)
    cdef double[::1] pts = np.ascontiguousarray(xs, dtype=np.float64)
    out_arr = np.empty(pts.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j
    cdef const double* kp = &k[0] if k.shape[0] > 0 else NULL
    cdef const int* cp = &c[0]
    cdef Py_ssize_t n = c.shape[0]
    with nogil:
        for j in range(pts.shape[0]):
            out[j] = _run(cp, n, kp, pts[j])
    return out_arr
