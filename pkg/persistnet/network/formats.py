"""
Text formats for graphs, temporal edge lists and degree distributions.

Edge list:           ``# nodes=N`` then one ``u<TAB>v`` line per edge, u < v.
Temporal edge list:  ``# nodes=N steps=T`` then ``t<TAB>u<TAB>v`` lines in ascending t.
Degree distribution: CSV with header ``degree,mass``.
"""

import io
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import DataError
from .configuration import degree_distribution
from .graph import DegreeDistribution, Graph

PathLike = Union[str, Path]

_HEADER = re.compile(r"#\s*(.*)")


def _header_fields(line: str) -> Dict[str, str]:
    match = _HEADER.match(line.strip())
    if not match:
        return {}
    fields = {}
    for token in match.group(1).split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key] = value
    return fields


def _open_text(path: PathLike, mode: str) -> TextIO:
    return open(path, mode, encoding="utf-8", newline="\n")


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    stream.write(f"# nodes={graph.node_count}\n")
    for u, v in graph.sorted_edges():
        stream.write(f"{u}\t{v}\n")


def save_edge_list(graph: Graph, path: PathLike) -> None:
    with _open_text(path, "w") as f:
        write_edge_list(graph, f)


def read_edge_list(stream: TextIO, source: str = "<stream>") -> Graph:
    lines = stream.read().splitlines()
    if not lines or "nodes" not in _header_fields(lines[0]):
        raise DataError(f"{source}: missing '# nodes=N' header")
    try:
        node_count = int(_header_fields(lines[0])["nodes"])
        edges = []
        for line in lines[1:]:
            if not line.strip() or line.startswith("#"):
                continue
            u, v = line.split("\t")
            edges.append((int(u), int(v)))
        return Graph(node_count, frozenset(edges))
    except (ValueError, KeyError) as e:
        raise DataError(f"{source}: malformed edge list ({e})") from e


def load_edge_list(path: PathLike) -> Graph:
    if not Path(path).exists():
        raise DataError(f"Edge list not found: {path}")
    with _open_text(path, "r") as f:
        return read_edge_list(f, str(path))


def write_temporal_edge_list(
    snapshots: Sequence[Graph],
    stream: TextIO,
    node_ids: Optional[Sequence[object]] = None,
    labels: Optional[Sequence[int]] = None,
) -> None:
    """Write snapshots G_0..G_T; optional node ids and period labels go in extra header lines."""
    if not snapshots:
        raise DataError("Cannot write an empty snapshot sequence")
    stream.write(f"# nodes={snapshots[0].node_count} steps={len(snapshots) - 1}\n")
    if node_ids is not None:
        stream.write("# node_ids=" + ",".join(str(i) for i in node_ids) + "\n")
    if labels is not None:
        stream.write("# labels=" + ",".join(str(label) for label in labels) + "\n")
    for t, graph in enumerate(snapshots):
        for u, v in graph.sorted_edges():
            stream.write(f"{t}\t{u}\t{v}\n")


def save_temporal_edge_list(
    snapshots: Sequence[Graph],
    path: PathLike,
    node_ids: Optional[Sequence[object]] = None,
    labels: Optional[Sequence[int]] = None,
) -> None:
    with _open_text(path, "w") as f:
        write_temporal_edge_list(snapshots, f, node_ids, labels)


def read_temporal_edge_list(
    stream: TextIO, source: str = "<stream>"
) -> Tuple[List[Graph], Optional[List[str]], Optional[List[int]]]:
    """Read snapshots plus the optional node ids and period labels."""
    header: Dict[str, str] = {}
    rows: List[Tuple[int, int, int]] = []
    try:
        for line in stream.read().splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                header.update(_header_fields(line))
                continue
            t, u, v = line.split("\t")
            rows.append((int(t), int(u), int(v)))
        node_count = int(header["nodes"])
        steps = int(header["steps"])
    except (ValueError, KeyError) as e:
        raise DataError(f"{source}: malformed temporal edge list ({e})") from e

    buckets: List[List[Tuple[int, int]]] = [[] for _ in range(steps + 1)]
    last = -1
    for t, u, v in rows:
        if t < last or not 0 <= t <= steps:
            raise DataError(f"{source}: snapshot index {t} out of order or range")
        last = t
        buckets[t].append((u, v))
    snapshots = [Graph(node_count, frozenset(edges)) for edges in buckets]

    node_ids = header["node_ids"].split(",") if header.get("node_ids") else None
    labels = [int(label) for label in header["labels"].split(",")] if header.get("labels") else None
    return snapshots, node_ids, labels


def load_temporal_edge_list(
    path: PathLike,
) -> Tuple[List[Graph], Optional[List[str]], Optional[List[int]]]:
    if not Path(path).exists():
        raise DataError(f"Temporal edge list not found: {path}")
    with _open_text(path, "r") as f:
        return read_temporal_edge_list(f, str(path))


def write_degree_distribution(dist: DegreeDistribution, stream: TextIO) -> None:
    frame = pd.DataFrame({"degree": np.arange(dist.masses.size), "mass": dist.masses})
    frame.to_csv(stream, index=False, lineterminator="\n")


def read_degree_distribution(stream: TextIO, source: str = "<stream>") -> DegreeDistribution:
    try:
        frame = pd.read_csv(stream, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{source}: expected header 'degree,mass'") from e
    except pd.errors.ParserError as e:
        raise DataError(f"{source}: malformed degree distribution ({e})") from e
    if list(frame.columns) != ["degree", "mass"]:
        raise DataError(f"{source}: expected header 'degree,mass'")
    if frame.empty:
        raise DataError(f"{source}: no degree masses")

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    degree = numeric["degree"]
    malformed = numeric.isna().any(axis=1) | (degree.round() != degree) | (degree < 0)
    if malformed.any():
        first = int(np.flatnonzero(malformed.to_numpy())[0])
        raise DataError(
            f"{source}: malformed degree distribution row {first + 1}: "
            f"{','.join(frame.iloc[first].fillna('').tolist())}"
        )
    return DegreeDistribution.from_mapping(
        dict(zip(numeric["degree"].astype(np.int64).tolist(), numeric["mass"].tolist()))
    )


def load_degree_distribution(path: PathLike) -> DegreeDistribution:
    """Read a ``degree,mass`` CSV, or derive the distribution from an edge-list file."""
    if not Path(path).exists():
        raise DataError(f"Degree distribution not found: {path}")
    with _open_text(path, "r") as f:
        text = f.read()
    if text.startswith("#"):
        return degree_distribution(read_edge_list(io.StringIO(text), str(path)))
    return read_degree_distribution(io.StringIO(text), str(path))
