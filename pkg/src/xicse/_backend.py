"""Import-time selection of the Monte Carlo accumulation kernel.

Prefers the compiled extension; falls back to the numpy implementation when
the extension was not built.  Both expose the same ``accumulate`` contract
and agree statistically; bit-exact reproducibility of estimates is
guaranteed per build (fixed backend), not across backends.
"""

from __future__ import annotations

try:  # pragma: no cover - depends on the build
    from . import _mc_core as _impl
except ImportError:  # pragma: no cover
    from . import _mc_python as _impl

MC_BACKEND: str = _impl.NAME
accumulate = _impl.accumulate
