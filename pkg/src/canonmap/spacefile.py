"""Reading and writing spaces as flat files.

json: {"labels": [...], "weights": [...], "distances": [[...]]} with a full
symmetric matrix; floats survive a parse -> serialize -> parse round trip
bit-exactly. csv: two comment headers (labels, weights) followed by matrix
rows, either full or lower-triangular including the diagonal.
"""

import json
import os
import warnings

import numpy as np

from .errors import MetricAxiomError, SpaceFileError, StructuralError
from .spaces import (MetricMeasureSpace, exhaustive_cap, validate_metric)


def _space_from_parts(labels, weights, distances, source: str) -> MetricMeasureSpace:
    D = np.asarray(distances, dtype=float)
    n = D.shape[0] if D.ndim == 2 else -1
    if n > exhaustive_cap():
        warnings.warn(
            f"{source}: {n} points exceeds the exhaustive validation cap "
            f"({exhaustive_cap()}); validating on sampled triples")
        report = validate_metric(D, mode="sampled", samples=10 * n, seed=0)
        return MetricMeasureSpace(labels, D, weights, validation=report)
    return MetricMeasureSpace(labels, D, weights)


def parse_space(path: str, format: str | None = None) -> MetricMeasureSpace:
    """Load and validate a space file; format inferred from the extension
    unless given."""
    if format is None:
        format = "csv" if os.path.splitext(path)[1].lower() == ".csv" else "json"
    if format == "json":
        return _parse_json(path)
    if format == "csv":
        return _parse_csv(path)
    raise ValueError(f"unknown space format {format!r}")


def _parse_json(path: str) -> MetricMeasureSpace:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpaceFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    for key in ("labels", "weights", "distances"):
        if key not in data:
            raise SpaceFileError(f"{path}: missing required field {key!r}")
    try:
        return _space_from_parts(tuple(data["labels"]), data["weights"],
                                 data["distances"], path)
    except (StructuralError, MetricAxiomError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _parse_csv(path: str) -> MetricMeasureSpace:
    labels = None
    weights = None
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("labels:"):
                    labels = tuple(s.strip() for s in body[len("labels:"):].split(","))
                elif body.startswith("weights:"):
                    try:
                        weights = [float(s) for s in body[len("weights:"):].split(",")]
                    except ValueError as exc:
                        raise SpaceFileError(f"{path}:{lineno}: bad weight: {exc}") from exc
                continue
            try:
                rows.append([float(s) for s in line.split(",")])
            except ValueError as exc:
                raise SpaceFileError(f"{path}:{lineno}: bad matrix entry: {exc}") from exc
    if labels is None or weights is None:
        raise SpaceFileError(f"{path}: missing '# labels:' or '# weights:' header")
    n = len(labels)
    if len(rows) != n:
        raise SpaceFileError(f"{path}: expected {n} matrix rows, found {len(rows)}")
    lengths = [len(r) for r in rows]
    if lengths == list(range(1, n + 1)):          # lower triangle with diagonal
        D = np.zeros((n, n))
        for i, r in enumerate(rows):
            D[i, :i + 1] = r
            D[:i + 1, i] = r
    elif all(l == n for l in lengths):
        D = np.asarray(rows)
    else:
        raise SpaceFileError(
            f"{path}: rows must form a full matrix or a lower triangle "
            f"(row lengths {lengths})")
    for i, wv in enumerate(weights):
        if wv <= 0:
            raise StructuralError(f"{path}: weight row: nonpositive weight {wv!r} at column {i}")
    try:
        return _space_from_parts(labels, weights, D, path)
    except (StructuralError, MetricAxiomError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _safe_label(label: str) -> str:
    return label.replace(",", "_").replace("\n", " ")


def write_space(space: MetricMeasureSpace, path: str, format: str | None = None) -> None:
    if format is None:
        format = "csv" if os.path.splitext(path)[1].lower() == ".csv" else "json"
    if format == "json":
        payload = {"labels": list(space.labels),
                   "weights": [float(w) for w in space.weights],
                   "distances": [[float(v) for v in row] for row in space.D]}
        with open(path, "w") as fh:
            json.dump(payload, fh)
            fh.write("\n")
    elif format == "csv":
        with open(path, "w") as fh:
            fh.write("# labels: " + ",".join(_safe_label(l) for l in space.labels) + "\n")
            fh.write("# weights: " + ",".join(repr(float(w)) for w in space.weights) + "\n")
            for row in space.D:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        raise ValueError(f"unknown space format {format!r}")
