"""JSON file formats for graphs, partitions, functionals and reports."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from graph_cubature.functionals import FunctionalError, FunctionalFamily, load_custom, make_average, make_dirac
from graph_cubature.graph import Graph
from graph_cubature.partition import Partition, validate_partition


class InputError(ValueError):
    """Unreadable or malformed input file."""


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dumps(data) -> str:
    """Serialize with NaN/Inf rejected, so every file is strict JSON."""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False)


def write_json(path, data):
    Path(path).write_text(dumps(data) + "\n")


def load_graph(path) -> Graph:
    return Graph.from_json(read_json(path))


def partition_from_json(g: Graph, data) -> Partition:
    try:
        clusters = data["clusters"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed partition JSON: {exc}") from exc
    return validate_partition(g, clusters)


def load_partition(g: Graph, path) -> Partition:
    return partition_from_json(g, read_json(path))


def functional_from_json(p: Partition, n: int, data) -> FunctionalFamily:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("functional JSON needs a 'kind' field")
    kind = data["kind"]
    if kind == "average":
        return make_average(p, n)
    if kind == "dirac":
        if "anchors" not in data:
            raise InputError("dirac functional needs 'anchors'")
        return make_dirac(p, data["anchors"], n)
    if kind == "custom":
        if "psi" not in data:
            raise InputError("custom functional needs 'psi'")
        try:
            return load_custom(p, data["psi"], n)
        except (KeyError, TypeError) as exc:
            raise FunctionalError(f"malformed psi entries: {exc}") from exc
    raise InputError(f"unknown functional kind {kind!r}")


def functional_to_json(ff: FunctionalFamily) -> dict:
    if ff.kind == "average":
        return {"kind": "average"}
    if ff.kind == "dirac":
        return {"kind": "dirac", "anchors": [int(row.argmax()) for row in ff.psi]}
    psi = []
    for j, cluster in enumerate(ff.partition.clusters):
        psi.append([{"vertex": v, "value": float(ff.psi[j, v])} for v in cluster if ff.psi[j, v] != 0])
    return {"kind": "custom", "psi": psi}


def load_functional(p: Partition, n: int, path) -> FunctionalFamily:
    return functional_from_json(p, n, read_json(path))
