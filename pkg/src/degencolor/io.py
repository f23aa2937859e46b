"""Edge-list, coloring and report files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StreamFormatError
from .graph import Coloring, Graph

REPORT_SCHEMA = "degencolor.report/1"


@dataclass
class EdgeList:
    graph: Graph
    labels: list  # labels[dense id] = label as written in the file
    self_loops: int = 0
    duplicates: int = 0

    def label_map(self) -> dict:
        return {str(lab): i for i, lab in enumerate(self.labels)}


def _sort_labels(labels: set) -> list:
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)


def read_edge_list(path) -> EdgeList:
    """Parse whitespace-separated ``u v`` lines into a graph with dense ids.

    Lines starting with ``#`` or ``%`` are comments and extra columns such
    as weights are ignored.  Labels are remapped to ``0..n-1`` in numeric
    order when they are all integers and lexicographic order otherwise, so
    1-indexed files map label ``1`` to id ``0``.  Self-loops are dropped
    and repeated edges merged; both are counted.
    """
    pairs = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) < 2:
                raise StreamFormatError("expected 'u v'", lineno)
            pairs.append((parts[0], parts[1]))
    labels = _sort_labels({x for pr in pairs for x in pr})
    index = {lab: i for i, lab in enumerate(labels)}
    loops = sum(1 for a, b in pairs if a == b)
    arr = np.array([(index[a], index[b]) for a, b in pairs if a != b], dtype=np.int64).reshape(-1, 2)
    g = Graph(len(labels), arr)
    return EdgeList(g, labels, loops, arr.shape[0] - g.m)


def write_edge_list(path, g: Graph, labels=None, header: str | None = None) -> None:
    with open(path, "w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for a, b in g.edges.tolist():
            if labels is None:
                fh.write(f"{a} {b}\n")
            else:
                fh.write(f"{labels[a]} {labels[b]}\n")


def write_label_map(path, labels) -> None:
    with open(path, "w") as fh:
        for i, lab in enumerate(labels):
            fh.write(f"{lab} {i}\n")


def write_coloring(path, coloring: Coloring, labels=None) -> None:
    """One ``vertex color`` line per vertex, colors densely renumbered."""
    dense = coloring.labels()
    with open(path, "w") as fh:
        for v, c in enumerate(dense.tolist()):
            fh.write(f"{v if labels is None else labels[v]} {c}\n")


def read_coloring(path, n: int, labels=None) -> Coloring:
    index = None if labels is None else {str(lab): i for i, lab in enumerate(labels)}
    colors = np.full(n, -1, dtype=np.int64)
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise StreamFormatError("expected 'vertex color'", lineno)
            v = int(parts[0]) if index is None else index[parts[0]]
            colors[v] = int(parts[1])
    if np.any(colors < 0):
        raise StreamFormatError("coloring file misses vertices")
    return Coloring(colors)


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return None if not math.isfinite(float(x)) else float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Metric:
    value: object
    source: str  # the counter or function that produced the value
    instruments: str  # which guarantee the number speaks to

    def as_dict(self) -> dict:
        return {"value": _clean(self.value), "source": self.source,
                "instruments": self.instruments}


@dataclass
class RunReport:
    command: str
    parameters: dict
    seed: int | None
    palette_size: int | None = None
    kappa: int | None = None
    metrics: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def add(self, name: str, value, source: str, instruments: str) -> None:
        self.metrics[name] = Metric(value, source, instruments)

    def as_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "command": self.command,
                "parameters": _clean(self.parameters), "seed": self.seed,
                "palette_size": self.palette_size, "kappa": self.kappa,
                "metrics": {k: m.as_dict() for k, m in self.metrics.items()},
                "verdicts": _clean(self.verdicts), "wall_time": self.wall_time}

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
