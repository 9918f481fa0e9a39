"""Backend selection for the modular linear-algebra kernels.

The compiled extension is used when it was built; setting the
environment variable ``WGCALC_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

BACKEND = "python"
if os.environ.get("WGCALC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import inverse_mod_p, pivot_columns_mod_p  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._kernels_py import inverse_mod_p, pivot_columns_mod_p  # noqa: F401

__all__ = ["BACKEND", "inverse_mod_p", "pivot_columns_mod_p"]
