"""Select the compiled kernel backend when available.

Set ``IWAVE_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

BACKEND = "python"

if os.environ.get("IWAVE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from iwave._ckernels import (  # noqa: F401
            branch_l2sq_array,
            coth_sum,
            dispersion_D,
            inv_tanh,
            mode_residual,
            mode_residual_array,
        )

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from iwave._pykernels import (  # noqa: F401
        branch_l2sq_array,
        coth_sum,
        dispersion_D,
        inv_tanh,
        mode_residual,
        mode_residual_array,
    )

__all__ = [
    "BACKEND",
    "branch_l2sq_array",
    "coth_sum",
    "dispersion_D",
    "inv_tanh",
    "mode_residual",
    "mode_residual_array",
]
