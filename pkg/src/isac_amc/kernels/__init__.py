"""Hot kernels for Stage-I radar simulation.

The compiled extension is used when it imports; otherwise the numpy
fallback is selected. Set ``ISAC_AMC_BACKEND=python`` to force the fallback.
"""

import os

from isac_amc.kernels import _fallback

fallback = _fallback

if os.environ.get("ISAC_AMC_BACKEND", "").lower() == "python":
    compiled = None
else:
    try:
        from isac_amc.kernels import _core as compiled
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

impl = compiled if compiled is not None else fallback
BACKEND = "compiled" if compiled is not None else "python"

complex_normal_fill = impl.complex_normal_fill
add_echo = impl.add_echo
golay_correlate = impl.golay_correlate

__all__ = [
    "BACKEND",
    "add_echo",
    "compiled",
    "complex_normal_fill",
    "fallback",
    "golay_correlate",
]
