"""Kernel backend selection.

The compiled extension `crease._kernel` is preferred when built; otherwise
the numpy fallback `crease._kernel_py` is used.  Set CREASE_BACKEND=python
to force the fallback (e.g. for benchmarking) or CREASE_BACKEND=compiled to
fail loudly when the extension is missing.

Results are deterministic given (inputs, seed, backend).  The two backends
agree to near machine precision on single evaluations but consume random
draws differently, so they are not interchangeable mid-analysis.
"""

from __future__ import annotations

import os

_requested = os.environ.get("CREASE_BACKEND", "auto").strip().lower()

if _requested in ("python", "py", "pure"):
    from . import _kernel_py as _impl

    BACKEND = "python"
elif _requested in ("auto", "", "compiled", "c"):
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested in ("compiled", "c"):
            raise ImportError(
                "CREASE_BACKEND=compiled but crease._kernel is not built; "
                "run `pip install -e .` or `python setup.py build_ext --inplace`"
            ) from None
        from . import _kernel_py as _impl

        BACKEND = "python"
else:
    raise ValueError(f"unrecognised CREASE_BACKEND value: {_requested!r}")

loglike_varying = _impl.loglike_varying
mh_chain_varying = _impl.mh_chain_varying
anneal_varying = _impl.anneal_varying
