"""Run manifests: provenance sidecars for every artifact the CLI writes.

A manifest records the exact invocation, parameter values after config
merging, input digests, and timing, so an artifact can be reproduced or
audited later. Written as <artifact>.manifest.json.
"""

from __future__ import annotations

import hashlib
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__


def file_digest(path) -> dict:
    """Path, byte count and streaming sha256 of a file."""
    p = Path(path)
    h = hashlib.sha256()
    size = 0
    with open(p, "rb") as fh:
        while True:
            block = fh.read(1 << 20)
            if not block:
                break
            size += len(block)
            h.update(block)
    return {"path": str(p), "bytes": size, "sha256": h.hexdigest()}


def _json_safe(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return str(value)


def build_manifest(
    command: str,
    parameters: dict,
    inputs=(),
    *,
    seed=None,
    backend: str | None = None,
    threads: int | None = None,
    timings_ms: dict | None = None,
    extra: dict | None = None,
) -> dict:
    """Assemble the provenance record for one CLI run."""
    manifest = {
        "tool": "musical",
        "version": __version__,
        "command": command,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "argv": list(sys.argv),
        "parameters": _json_safe(parameters),
        "inputs": [file_digest(p) for p in inputs],
        "seed": _json_safe(seed),
        "backend": backend,
        "threads": threads,
        "timings_ms": _json_safe(timings_ms or {}),
        "host": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "platform": platform.platform(),
        },
    }
    if extra:
        manifest["info"] = _json_safe(extra)
    return manifest


def write_manifest(artifact_path, manifest: dict) -> Path:
    """Write the sidecar next to the artifact it describes."""
    out = Path(str(artifact_path) + ".manifest.json")
    with open(out, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=False)
        fh.write("\n")
    return out
