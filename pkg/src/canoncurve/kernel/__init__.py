"""Row-reduction kernel with backend selection.

The compiled Cython kernel is used when its extension module built;
otherwise, or when CANONCURVE_PURE is set in the environment, the
pure-Python twin takes over.  Both implement the same algorithm and
produce bit-identical output, so the choice only affects speed (see
benchmarks/bench_kernel.py).
"""

import os

if os.environ.get("CANONCURVE_PURE"):
    from ._pure import BACKEND, rref_int
else:
    try:
        from ._rowreduce import BACKEND, rref_int
    except ImportError:
        from ._pure import BACKEND, rref_int

__all__ = ["BACKEND", "rref_int"]
