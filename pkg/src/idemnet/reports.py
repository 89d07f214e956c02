"""Report assembly and deterministic serialization.

Reports are plain dicts written as canonical JSON (sorted keys, fixed
indentation, trailing newline) so that re-running a seeded experiment
reproduces its output byte for byte. Wall-clock timings therefore go to
stderr logging, never into report files. Distance histograms are also
written as ``distance,fraction`` CSV for direct plotting.
"""

from __future__ import annotations

import json
import sys
import time
from contextlib import contextmanager
from importlib import metadata, resources

ARTIFACT_NAME = "idemnet"

try:
    ARTIFACT_VERSION = metadata.version("idemnet")
except metadata.PackageNotFoundError:  # running from a checkout
    ARTIFACT_VERSION = "0.0.0+local"

SCHEMA_RESOURCE = "report.schema.json"


def make_report(command, config, results):
    """Standard report envelope: artifact stamp, config echo, results."""
    return {
        "artifact": {"name": ARTIFACT_NAME, "version": ARTIFACT_VERSION},
        "command": command,
        "config": config,
        "results": results,
    }


def canonical_json(report):
    """Deterministic JSON text for a report dict."""
    return json.dumps(report, sort_keys=True, indent=2,
                      ensure_ascii=True, allow_nan=False) + "\n"


def write_json(path, report):
    with open(path, "w") as fh:
        fh.write(canonical_json(report))


def histogram_rows(counts):
    """(distance, fraction) rows over finite distances, fractions summing
    to 1 up to float rounding."""
    total = sum(counts.values())
    return [(d, counts[d] / total) for d in sorted(counts)]


def write_histogram_csv(path, counts):
    with open(path, "w") as fh:
        fh.write("distance,fraction\n")
        for d, frac in histogram_rows(counts):
            fh.write(f"{d},{frac!r}\n")


def load_schema():
    """The published report schema shipped with the package."""
    text = resources.files("idemnet").joinpath("schemas", SCHEMA_RESOURCE).read_text()
    return json.loads(text)


def validate_report(report, schema=None):
    """Check a report against the published schema (minimal validator).

    Supports the subset of JSON Schema the shipped schema uses: type,
    required, properties, additionalProperties as a schema. Raises
    ValueError on the first violation.
    """
    schema = schema if schema is not None else load_schema()
    _validate(report, schema, "$")
    return True


_TYPES = {
    "object": dict, "array": list, "string": str,
    "integer": int, "boolean": bool,
}


def _validate(value, schema, path):
    typ = schema.get("type")
    if typ == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{path}: expected number, got {type(value).__name__}")
    elif typ is not None:
        py = _TYPES[typ]
        if not isinstance(value, py) or (py is int and isinstance(value, bool)):
            raise ValueError(f"{path}: expected {typ}, got {type(value).__name__}")
    for key in schema.get("required", ()):
        if key not in value:
            raise ValueError(f"{path}: missing required key {key!r}")
    for key, sub in schema.get("properties", {}).items():
        if key in value:
            _validate(value[key], sub, f"{path}.{key}")
    extra = schema.get("additionalProperties")
    if isinstance(extra, dict) and isinstance(value, dict):
        for key, item in value.items():
            if key not in schema.get("properties", {}):
                _validate(item, extra, f"{path}.{key}")
    items = schema.get("items")
    if items is not None and isinstance(value, list):
        for i, item in enumerate(value):
            _validate(item, items, f"{path}[{i}]")


@contextmanager
def timed(label, stream=None):
    """Log wall-clock time for a block to stderr (kept out of reports)."""
    stream = stream if stream is not None else sys.stderr
    start = time.perf_counter()
    yield
    stream.write(f"[timing] {label}: {time.perf_counter() - start:.2f}s\n")
