"""Pure-Python tape evaluator; same contract as the compiled ``_tape`` module."""

import math

import numpy as np

OP_CONST, OP_VAR, OP_ADD, OP_MUL, OP_POW, OP_SIN, OP_COS, OP_EXP, OP_LN = range(9)


def eval_tape(ops, args, consts, points, stack_size):
    ops = ops.tolist()
    args = args.tolist()
    consts = consts.tolist()
    rows = points.tolist()
    n = len(rows)
    values = np.zeros(n, dtype=np.float64)
    mags = np.zeros(n, dtype=np.float64)
    ok = np.ones(n, dtype=np.uint8)
    isfinite = math.isfinite
    program = list(zip(ops, args))

    for p in range(n):
        row = rows[p]
        stack = []
        mag = 0.0
        good = True
        for op, a in program:
            if op == OP_CONST:
                v = consts[a]
            elif op == OP_VAR:
                v = row[a]
            elif op == OP_ADD:
                v = 0.0
                for x in stack[-a:]:
                    v += x
                del stack[-a:]
            elif op == OP_MUL:
                v = 1.0
                for x in stack[-a:]:
                    v *= x
                del stack[-a:]
            else:
                b = stack.pop()
                if op == OP_POW:
                    x = consts[a]
                    if b == 0.0 and x < 0.0:
                        good = False
                        break
                    if b < 0.0 and x != math.floor(x):
                        good = False
                        break
                    try:
                        v = b ** x
                    except OverflowError:
                        good = False
                        break
                elif op == OP_SIN:
                    v = math.sin(b)
                elif op == OP_COS:
                    v = math.cos(b)
                elif op == OP_EXP:
                    try:
                        v = math.exp(b)
                    except OverflowError:
                        good = False
                        break
                else:
                    if b <= 0.0:
                        good = False
                        break
                    v = math.log(b)
            if not isfinite(v):
                good = False
                break
            av = abs(v)
            if av > mag:
                mag = av
            stack.append(v)
        if good:
            values[p] = stack[-1]
            mags[p] = mag
        else:
            ok[p] = 0
            values[p] = math.nan
    return values, mags, ok
