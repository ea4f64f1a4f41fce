# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tape evaluator.  Contract identical to ``_tape_py.eval_tape``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, exp, log, pow, floor, fabs, isfinite

cnp.import_array()

DEF OP_CONST = 0
DEF OP_VAR = 1
DEF OP_ADD = 2
DEF OP_MUL = 3
DEF OP_POW = 4
DEF OP_SIN = 5
DEF OP_COS = 6
DEF OP_EXP = 7
DEF OP_LN = 8


def eval_tape(const int[::1] ops, const int[::1] args, const double[::1] consts,
              const double[:, ::1] points, int stack_size):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t m = ops.shape[0]
    values_arr = np.zeros(n, dtype=np.float64)
    mags_arr = np.zeros(n, dtype=np.float64)
    ok_arr = np.ones(n, dtype=np.uint8)
    stack_arr = np.zeros(max(stack_size, 1), dtype=np.float64)
    cdef double[::1] values = values_arr
    cdef double[::1] mags = mags_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef double[::1] stack = stack_arr
    cdef Py_ssize_t p, k, j, sp
    cdef int op, a
    cdef double v, b, x, mag
    cdef bint good

    for p in range(n):
        sp = 0
        mag = 0.0
        good = True
        for k in range(m):
            op = ops[k]
            a = args[k]
            if op == OP_CONST:
                v = consts[a]
            elif op == OP_VAR:
                v = points[p, a]
            elif op == OP_ADD:
                v = 0.0
                for j in range(sp - a, sp):
                    v += stack[j]
                sp -= a
            elif op == OP_MUL:
                v = 1.0
                for j in range(sp - a, sp):
                    v *= stack[j]
                sp -= a
            else:
                sp -= 1
                b = stack[sp]
                if op == OP_POW:
                    x = consts[a]
                    if b == 0.0 and x < 0.0:
                        good = False
                        break
                    if b < 0.0 and x != floor(x):
                        good = False
                        break
                    v = pow(b, x)
                elif op == OP_SIN:
                    v = sin(b)
                elif op == OP_COS:
                    v = cos(b)
                elif op == OP_EXP:
                    v = exp(b)
                else:
                    if b <= 0.0:
                        good = False
                        break
                    v = log(b)
            if not isfinite(v):
                good = False
                break
            if fabs(v) > mag:
                mag = fabs(v)
            stack[sp] = v
            sp += 1
        if good:
            values[p] = stack[sp - 1]
            mags[p] = mag
        else:
            ok[p] = 0
            values[p] = np.nan
    return values_arr, mags_arr, ok_arr
