"""Backend selection for the tape evaluator.

The compiled extension is used when it has been built; otherwise the
pure-Python implementation is imported.  Both share one signature::

    eval_tape(ops, args, consts, points, stack_size) -> (values, mags, ok)
"""

from pfaffian import _tape_py

try:
    from pfaffian import _tape as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
eval_tape = _compiled.eval_tape if _compiled is not None else _tape_py.eval_tape


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def get_backend(name: str):
    if name == "python":
        return _tape_py.eval_tape
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled tape kernel is not built")
        return _compiled.eval_tape
    raise ValueError(f"unknown backend {name!r}")
