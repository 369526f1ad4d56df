"""JIT switch for the hot numeric kernels.

Set the environment variable ``GGFMDP_DISABLE_NUMBA=1`` before import to run
every kernel as plain Python/NumPy. Both paths execute the exact same
function bodies (the decorator becomes a no-op), so results are bitwise
identical; only speed differs. ``benchmarks/bench_kernels.py`` compares the
two paths.
"""

import os

JIT_ENABLED = os.environ.get("GGFMDP_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if JIT_ENABLED:
    from numba import njit
else:
    import numpy as np

    # The RNG kernels rely on wrapping uint64 arithmetic; numba wraps
    # silently, plain numpy emits overflow warnings for the same (correct)
    # results. Silence them on the debug path only.
    np.seterr(over="ignore")

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
