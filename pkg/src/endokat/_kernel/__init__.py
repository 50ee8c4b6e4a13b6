"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python module
is the fallback and the reference.  ENDOKAT_PURE=1 forces the fallback.
Both expose the same functions with identical semantics; the test suite
cross-checks them on random inputs.  Inputs outside the compiled kernel's
word-size safety margins transparently fall back to arbitrary precision.
"""

import os

from . import _pure

_compiled = None
if not os.environ.get("ENDOKAT_PURE"):
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None

if _compiled is None:
    hnf_kernel = _pure.hnf_kernel
    box_reduce = _pure.box_reduce
    mat_mul = _pure.mat_mul
    mat_vec = _pure.mat_vec
    rref = _pure.rref
    spin = _pure.spin
    _BACKEND = "pure"
else:
    _fallback = (_compiled.NeedsBigInts, OverflowError)

    def hnf_kernel(mods, cols, nbottom, bottom_mod):
        try:
            return _compiled.hnf_kernel(mods, cols, nbottom, bottom_mod)
        except _fallback:
            return _pure.hnf_kernel(mods, cols, nbottom, bottom_mod)

    def box_reduce(mods, hrows, vec):
        try:
            return _compiled.box_reduce(mods, hrows, vec)
        except _fallback:
            return _pure.box_reduce(mods, hrows, vec)

    mat_mul = _compiled.mat_mul
    mat_vec = _compiled.mat_vec
    rref = _compiled.rref
    spin = _compiled.spin
    _BACKEND = "compiled"


def backend_name():
    return _BACKEND
