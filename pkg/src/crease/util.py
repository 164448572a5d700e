"""Shared small helpers."""

from __future__ import annotations

import hashlib


def short_digest(**fields) -> str:
    """Stable 12-hex-char digest of keyword fields, for output provenance."""
    canon = ";".join(f"{k}={fields[k]!r}" for k in sorted(fields))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]
