"""Backend selection for the numerical kernels.

The compiled extension is preferred when present; the pure-Python module is
a drop-in fallback.  Set ``BCNFCHAOS_BACKEND=pure`` or ``=compiled`` to force
one (the latter raises if the extension was not built).
"""

from __future__ import annotations

import os

_requested = os.environ.get("BCNFCHAOS_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _kernels_cy as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "pure"
elif _requested in ("compiled", "cy", "c"):
    from . import _kernels_cy as _impl

    BACKEND = "compiled"
elif _requested in ("pure", "py", "python"):
    from . import _kernels_py as _impl

    BACKEND = "pure"
else:
    raise RuntimeError(
        f"BCNFCHAOS_BACKEND={_requested!r} not understood; use 'auto', 'compiled', or 'pure'"
    )

scan_beta = _impl.scan_beta
escape_steps = _impl.escape_steps
tangent_stretch = _impl.tangent_stretch
tangent_word_stats = _impl.tangent_word_stats
simulate_into = _impl.simulate_into
