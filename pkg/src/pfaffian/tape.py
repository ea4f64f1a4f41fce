"""Flatten expressions into postfix tapes for batched numeric evaluation.

A tape is three parallel arrays (opcode, integer argument, float constant
pool) plus the ordered variable names.  The evaluation kernel lives in
:mod:`pfaffian.kernels` and is either compiled or pure Python.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from pfaffian.expr import NAMED_CONSTANTS, Add, Const, Expr, Func, Mul, Pow, Sym, free_symbols

OP_CONST, OP_VAR, OP_ADD, OP_MUL, OP_POW, OP_SIN, OP_COS, OP_EXP, OP_LN = range(9)
_FUNC_OPS = {"sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP, "ln": OP_LN}


@dataclass(frozen=True)
class Tape:
    ops: np.ndarray          # int32 opcodes
    args: np.ndarray         # int32: const index, var index, arity or exponent index
    consts: np.ndarray       # float64 constant pool (exponents included)
    variables: tuple[str, ...]
    stack_size: int

    def __len__(self) -> int:
        return len(self.ops)


@lru_cache(maxsize=4096)
def compile_tape(e: Expr, variables: tuple[str, ...] | None = None) -> Tape:
    """Compile ``e``; ``variables`` fixes the column order of sample points."""
    if variables is None:
        variables = tuple(sorted(free_symbols(e)))
    var_index = {v: i for i, v in enumerate(variables)}
    ops: list[int] = []
    args: list[int] = []
    consts: list[float] = []
    const_index: dict[float, int] = {}

    def pool(x: float) -> int:
        if x not in const_index:
            const_index[x] = len(consts)
            consts.append(x)
        return const_index[x]

    depth = 0
    max_depth = 0

    def push(op: int, arg: int, delta: int) -> None:
        nonlocal depth, max_depth
        ops.append(op)
        args.append(arg)
        depth += delta
        max_depth = max(max_depth, depth)

    def emit(node: Expr) -> None:
        if isinstance(node, Const):
            push(OP_CONST, pool(float(node.value)), 1)
        elif isinstance(node, Sym):
            if node.name in var_index:
                push(OP_VAR, var_index[node.name], 1)
            elif node.name in NAMED_CONSTANTS:
                push(OP_CONST, pool(NAMED_CONSTANTS[node.name]), 1)
            else:
                raise KeyError(f"variable {node.name!r} not in tape columns")
        elif isinstance(node, (Add, Mul)):
            children = node.terms if isinstance(node, Add) else node.factors
            for c in children:
                emit(c)
            push(OP_ADD if isinstance(node, Add) else OP_MUL, len(children),
                 1 - len(children))
        elif isinstance(node, Pow):
            emit(node.base)
            push(OP_POW, pool(float(node.exp)), 0)
        elif isinstance(node, Func):
            emit(node.arg)
            push(_FUNC_OPS[node.name], 0, 0)
        else:
            raise TypeError(f"unknown node {node!r}")

    emit(e)
    return Tape(
        ops=np.asarray(ops, dtype=np.int32),
        args=np.asarray(args, dtype=np.int32),
        consts=np.asarray(consts if consts else [0.0], dtype=np.float64),
        variables=tuple(variables),
        stack_size=max(max_depth, 1),
    )


def run_tape(tape: Tape, points: np.ndarray, backend=None):
    """Evaluate ``tape`` at each row of ``points``.

    Returns ``(values, magnitudes, ok)`` where ``magnitudes`` is the largest
    absolute intermediate value seen at each point and ``ok`` is 0 where the
    expression is undefined (log of non-positive, bad power, overflow).
    """
    from pfaffian import kernels

    fn = kernels.eval_tape if backend is None else kernels.get_backend(backend)
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != len(tape.variables):
        raise ValueError("points must be (n_points, n_variables)")
    return fn(tape.ops, tape.args, tape.consts, pts, tape.stack_size)
