"""Canonical JSON: one stable byte encoding per document.

Serialize -> deserialize -> serialize is byte-identical because floats are
emitted with repr (shortest round-trip form), keys are sorted and spacing is
fixed. Ids are content hashes of those bytes, so equal artifacts share ids.
"""

from __future__ import annotations

import hashlib
import json


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")


def content_id(obj) -> str:
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()[:16]
