"""Pick the compiled kernel core when it is built, else the Python one.

Set FSWCALC_PURE_PYTHON=1 to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("FSWCALC_PURE_PYTHON", "") not in ("", "0"):
    impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        impl = _kernels_py
        BACKEND = "python"

binom_mod2 = impl.binom_mod2
vzero_sweep = impl.vzero_sweep
recur5_sweep = impl.recur5_sweep
recur3_sweep = impl.recur3_sweep
recur3_lower = _kernels_py.recur3_lower
