"""Kernel selection: compiled extension if importable, pure Python otherwise.

Set FRACVARLAB_BACKEND=py to force the fallback (used by the benchmark and
by the backend-parity tests).  Both kernels execute identical opcode
streams against the platform libm, so the choice never changes results,
only throughput.
"""

import os

from . import _evalcore_py

if os.environ.get("FRACVARLAB_BACKEND", "auto") == "py":
    _impl = _evalcore_py
    HAVE_COMPILED = False
else:
    try:
        from . import _evalcore as _impl
        HAVE_COMPILED = True
    except ImportError:
        _impl = _evalcore_py
        HAVE_COMPILED = False


def backend_name():
    return "c" if HAVE_COMPILED else "py"


def eval_program(code, consts, x):
    return _impl.eval_program(code, consts, x)


def eval_program_many(code, consts, xs):
    return _impl.eval_program_many(code, consts, xs)
