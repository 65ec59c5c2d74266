"""Versioned analysis reports and deterministic seed derivation."""

import dataclasses
import hashlib
import json
import time
from datetime import datetime, timezone

import numpy as np

SCHEMA_VERSION = "1"


def derive_seed(master: int, component: str) -> int:
    """Per-component seed: first 8 bytes of sha256("<master>:<component>").

    Parallel trials and unrelated subsystems never share a stream even
    when the user supplies one master seed.
    """
    digest = hashlib.sha256(f"{master}:{component}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def to_jsonable(obj):
    """Recursively convert dataclasses / numpy values for json emission.

    Large arrays stay as nested lists; callers decide what belongs in a
    report. Floats keep full precision (shortest round-trip repr).
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


class ReportTimer:
    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0
        return False


def make_report(command: str, parameters: dict, results,
                elapsed: float | None = None, timestamp: bool = True) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": to_jsonable(parameters),
        "results": to_jsonable(results),
    }
    if timestamp:
        report["timing"] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "elapsed_s": elapsed,
        }
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_report(report: dict, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_report(report))
