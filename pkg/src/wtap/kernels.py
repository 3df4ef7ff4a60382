"""Dispatch to the compiled kernels when available, else to the Python ones.

Set ``WTAP_PURE_PYTHON=1`` to force the fallback.  ``backend`` names the
implementation actually in use.
"""
from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if os.environ.get("WTAP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels_c as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

backend = _compiled.IMPLEMENTATION if _compiled is not None else _kernels_py.IMPLEMENTATION

_LIMIT = 2**62


def _fits(values) -> bool:
    return all(-_LIMIT < v < _LIMIT for v in values)


def min_cover(masks, costs, full, impl=None):
    """Cheapest index subset whose masks cover ``full``; see ``_kernels_py.min_cover``."""
    mod = impl or _compiled
    if mod is None or full >> 64 or not _fits([sum(costs)]):
        mod = _kernels_py
    return mod.min_cover(list(masks), list(costs), full)


def odd_cut_scan(n, edge_ends, link_masks, weights, denom, impl=None):
    """Most violated odd set by exhaustive scan; see ``_kernels_py.odd_cut_scan``."""
    mod = impl or _compiled
    bound = (sum(abs(w) for w in weights) + denom) * (len(edge_ends) + 2) * 2
    if mod is None or n > 63 or len(edge_ends) > 64 or not _fits([bound]):
        mod = _kernels_py
    return mod.odd_cut_scan(n, list(edge_ends), list(link_masks), list(weights), denom)


def available():
    """Implementations that can be benchmarked against each other."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out[_compiled.IMPLEMENTATION] = _compiled
    return out
