"""Kernel selection: compiled extension when available, pure Python otherwise.

Set INDEXDENSITY_KERNEL=pure (or =fast) to force a choice; forcing `fast`
raises if the extension is missing.
"""
from __future__ import annotations

import os

from . import pure

_forced = os.environ.get("INDEXDENSITY_KERNEL", "").lower()

_fast = None
if _forced != "pure":
    try:
        import importlib

        _fast = importlib.import_module("._fast", __name__)
    except ImportError:
        _fast = None
        if _forced == "fast":
            raise ImportError(
                "INDEXDENSITY_KERNEL=fast but the compiled kernel is not built"
            )

_active = _fast if _fast is not None else pure


def active():
    """The kernel module in use (attributes: NAME, scan_index_segments, split_counts)."""
    return _active


def available() -> dict:
    out = {"pure": pure}
    if _fast is not None:
        out["fast"] = _fast
    return out


NAME = _active.NAME
scan_index_segments = _active.scan_index_segments
split_counts = _active.split_counts
