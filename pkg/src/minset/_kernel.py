"""Selects the scan kernel: compiled extension if built, else pure Python.

Set MINSET_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

from __future__ import annotations

import os

from . import _scan_py

if os.environ.get("MINSET_PURE_PYTHON"):
    _impl = _scan_py
    KERNEL = "python"
else:
    try:
        from . import _scan as _impl  # type: ignore[no-redef]
        KERNEL = "compiled"
    except ImportError:
        _impl = _scan_py
        KERNEL = "python"

scan_segment = _impl.scan_segment
scan_segment_py = _scan_py.scan_segment
render_digits = _scan_py.render_digits
